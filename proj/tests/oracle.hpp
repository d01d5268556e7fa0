// Independent reference computations used only by the tests: direct
// double-sum DFTs, exact rational binomial tails, brute-force counting.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <random>
#include <span>
#include <algorithm>
#include <vector>

#include "gabor/signal.hpp"

namespace oracle {

using gabor::Complex;
using gabor::GridDims;
using gabor::Signal2D;

inline Complex twiddle(long long k, std::size_t n, double sign) {
  return std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(k % static_cast<long long>(n)) /
                             static_cast<double>(n));
}

inline std::vector<Complex> twiddles(std::size_t n, double sign) {
  std::vector<Complex> w(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = twiddle(static_cast<long long>(k), n, sign);
  return w;
}

// Direct double sum over both axes; scale (NT)^{-1/2}.
inline Signal2D dft2(const Signal2D& f, double sign = -1.0) {
  const std::size_t n = f.n(), t = f.t();
  const auto wn = twiddles(n, sign), wt = twiddles(t, sign);
  std::vector<Complex> out(n * t);
  for (std::size_t a = 0; a < t; ++a)
    for (std::size_t m = 0; m < n; ++m) {
      Complex acc = 0.0;
      for (std::size_t b = 0; b < t; ++b) {
        const Complex wb = wt[(a * b) % t];
        for (std::size_t x = 0; x < n; ++x) acc += f.at(x, b) * wn[(m * x) % n] * wb;
      }
      out[a * n + m] = acc / std::sqrt(static_cast<double>(n * t));
    }
  return Signal2D(f.dims(), std::move(out));
}

inline Signal2D row_dft(const Signal2D& f, double sign = -1.0) {
  const std::size_t n = f.n(), t = f.t();
  std::vector<Complex> out(n * t);
  for (std::size_t a = 0; a < t; ++a)
    for (std::size_t m = 0; m < n; ++m) {
      Complex acc = 0.0;
      for (std::size_t x = 0; x < n; ++x) acc += f.at(x, a) * twiddle(static_cast<long long>(m * x), n, sign);
      out[a * n + m] = acc / std::sqrt(static_cast<double>(n));
    }
  return Signal2D(f.dims(), std::move(out));
}

inline Signal2D col_dft(const Signal2D& f, double sign = -1.0) {
  const std::size_t n = f.n(), t = f.t();
  std::vector<Complex> out(n * t);
  for (std::size_t k = 0; k < t; ++k)
    for (std::size_t x = 0; x < n; ++x) {
      Complex acc = 0.0;
      for (std::size_t a = 0; a < t; ++a) acc += f.at(x, a) * twiddle(static_cast<long long>(k * a), t, sign);
      out[k * n + x] = acc / std::sqrt(static_cast<double>(t));
    }
  return Signal2D(f.dims(), std::move(out));
}

inline std::vector<Complex> dft1(const std::vector<Complex>& v, double sign = -1.0) {
  const std::size_t n = v.size();
  std::vector<Complex> out(n);
  for (std::size_t m = 0; m < n; ++m) {
    Complex acc = 0.0;
    for (std::size_t x = 0; x < n; ++x) acc += v[x] * twiddle(static_cast<long long>(m * x), n, sign);
    out[m] = acc / std::sqrt(static_cast<double>(n));
  }
  return out;
}

inline double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline Signal2D random_signal(GridDims dims, std::mt19937_64& gen) {
  std::normal_distribution<double> g;
  std::vector<Complex> v(dims.size());
  for (auto& z : v) z = {g(gen), g(gen)};
  return Signal2D(dims, std::move(v));
}

using Rational = boost::multiprecision::cpp_rational;

// P(X >= first) for X ~ B(n, p) with p = num/den, exactly.
inline Rational exact_binom_upper(unsigned n, unsigned num, unsigned den, unsigned first) {
  const Rational p(num, den), q = 1 - p;
  Rational sum = 0;
  boost::multiprecision::cpp_int c = 1;  // C(n, y)
  for (unsigned y = 0; y <= n; ++y) {
    if (y > 0) c = c * (n - y + 1) / y;
    if (y >= first) {
      Rational term = Rational(c);
      for (unsigned i = 0; i < y; ++i) term *= p;
      for (unsigned i = y; i < n; ++i) term *= q;
      sum += term;
    }
  }
  return sum;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace oracle
