// Unitary discrete Fourier transforms on Z_N x Z_T.
//
//   dft2:      f^(m, n)  = (NT)^{-1/2} sum_x sum_y f(x, y) e^{-2 pi i (xm/N + yn/T)}
//   gabor_row: Gf(m, a)  = N^{-1/2} sum_t f(t, a) e^{-2 pi i m t / N}     (each row)
//   gabor_col: G~f(t, n) = T^{-1/2} sum_a f(t, a) e^{-2 pi i n a / T}     (each column)
//
// Forward transforms use e^{-2 pi i .}, inverses e^{+2 pi i .}. Every
// transform keeps the (x, a) storage layout of Signal2D: gabor_row's output
// holds frequency m in the x slot of row a; gabor_col's output holds
// frequency n in the row slot of column t.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gabor/signal.hpp"

namespace gabor {

enum class TransformKind { Fourier2D, GaborRow, GaborColumn };

inline std::string_view to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::Fourier2D: return "fourier";
    case TransformKind::GaborRow: return "gabor-row";
    case TransformKind::GaborColumn: return "gabor-col";
  }
  return "?";
}

inline TransformKind parse_transform_kind(std::string_view s) {
  if (s == "fourier") return TransformKind::Fourier2D;
  if (s == "gabor-row") return TransformKind::GaborRow;
  if (s == "gabor-col") return TransformKind::GaborColumn;
  throw std::invalid_argument("unknown transform kind '" + std::string(s) + "'");
}

enum class DftAlgorithm {
  Auto,   // radix-2 FFT for power-of-two lengths, direct summation otherwise
  Naive,  // always direct O(n^2) summation
};

/// Unitary 1D DFT of a fixed length.
class Dft {
 public:
  explicit Dft(std::size_t n, DftAlgorithm algorithm = DftAlgorithm::Auto)
      : n_(n), scale_(n ? 1.0 / std::sqrt(static_cast<double>(n)) : 0.0), twiddle_(n) {
    if (n == 0) throw std::invalid_argument("Dft: length must be positive");
    for (std::size_t k = 0; k < n; ++k) {
      twiddle_[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    }
    use_fft_ = algorithm == DftAlgorithm::Auto && std::has_single_bit(n) && n >= 8;
    if (use_fft_) {
      const int bits = std::countr_zero(n);
      bitrev_.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (int b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
        bitrev_[i] = r;
      }
    }
  }

  std::size_t size() const { return n_; }
  bool uses_fft() const { return use_fft_; }

  void forward(std::span<const Complex> in, std::span<Complex> out) const { apply(in, out, false); }
  void inverse(std::span<const Complex> in, std::span<Complex> out) const { apply(in, out, true); }

  std::vector<Complex> forward(std::span<const Complex> in) const {
    std::vector<Complex> out(n_);
    forward(in, out);
    return out;
  }
  std::vector<Complex> inverse(std::span<const Complex> in) const {
    std::vector<Complex> out(n_);
    inverse(in, out);
    return out;
  }

 private:
  Complex w(std::size_t k, bool inv) const { return inv ? std::conj(twiddle_[k]) : twiddle_[k]; }

  void apply(std::span<const Complex> in, std::span<Complex> out, bool inv) const {
    if (in.size() != n_ || out.size() != n_) throw std::invalid_argument("Dft: length mismatch");
    if (use_fft_) {
      fft(in, out, inv);
    } else {
      naive(in, out, inv);
    }
  }

  void naive(std::span<const Complex> in, std::span<Complex> out, bool inv) const {
    // `in` and `out` may alias.
    std::vector<Complex> tmp(n_);
    for (std::size_t m = 0; m < n_; ++m) {
      Complex acc = 0.0;
      std::size_t k = 0;
      for (std::size_t x = 0; x < n_; ++x) {
        acc += in[x] * w(k, inv);
        k += m;
        if (k >= n_) k -= n_;
      }
      tmp[m] = acc * scale_;
    }
    std::copy(tmp.begin(), tmp.end(), out.begin());
  }

  void fft(std::span<const Complex> in, std::span<Complex> out, bool inv) const {
    std::vector<Complex> buf(n_);
    for (std::size_t i = 0; i < n_; ++i) buf[bitrev_[i]] = in[i];
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t half = len >> 1;
      const std::size_t stride = n_ / len;
      for (std::size_t start = 0; start < n_; start += len) {
        for (std::size_t j = 0; j < half; ++j) {
          const Complex u = buf[start + j];
          const Complex v = buf[start + j + half] * w(j * stride, inv);
          buf[start + j] = u + v;
          buf[start + j + half] = u - v;
        }
      }
    }
    for (std::size_t i = 0; i < n_; ++i) out[i] = buf[i] * scale_;
  }

  std::size_t n_;
  double scale_;
  std::vector<Complex> twiddle_;
  std::vector<std::size_t> bitrev_;
  bool use_fft_ = false;
};

namespace detail {

inline std::vector<Complex> rows_transform(const Signal2D& s, bool inv, DftAlgorithm alg) {
  const Dft dft(s.n(), alg);
  std::vector<Complex> out(s.values().begin(), s.values().end());
  for (std::size_t a = 0; a < s.t(); ++a) {
    std::span<Complex> row(out.data() + a * s.n(), s.n());
    inv ? dft.inverse(row, row) : dft.forward(row, row);
  }
  return out;
}

inline std::vector<Complex> cols_transform(GridDims dims, std::vector<Complex> values, bool inv, DftAlgorithm alg) {
  const Dft dft(dims.t, alg);
  std::vector<Complex> col(dims.t);
  for (std::size_t x = 0; x < dims.n; ++x) {
    for (std::size_t a = 0; a < dims.t; ++a) col[a] = values[dims.index(x, a)];
    inv ? dft.inverse(col, col) : dft.forward(col, col);
    for (std::size_t a = 0; a < dims.t; ++a) values[dims.index(x, a)] = col[a];
  }
  return values;
}

}  // namespace detail

inline Signal2D gabor_row(const Signal2D& f, DftAlgorithm alg = DftAlgorithm::Auto) {
  return Signal2D(f.dims(), detail::rows_transform(f, false, alg));
}

inline Signal2D gabor_row_inverse(const Signal2D& g, DftAlgorithm alg = DftAlgorithm::Auto) {
  return Signal2D(g.dims(), detail::rows_transform(g, true, alg));
}

/// Column-wise transform with unitary T^{-1/2} normalization.
inline Signal2D gabor_col(const Signal2D& f, DftAlgorithm alg = DftAlgorithm::Auto) {
  return Signal2D(f.dims(), detail::cols_transform(f.dims(), {f.values().begin(), f.values().end()}, false, alg));
}

inline Signal2D gabor_col_inverse(const Signal2D& g, DftAlgorithm alg = DftAlgorithm::Auto) {
  return Signal2D(g.dims(), detail::cols_transform(g.dims(), {g.values().begin(), g.values().end()}, true, alg));
}

/// 2D DFT; output position (m, n) is stored where (x, y) = (m, n).
inline Signal2D dft2(const Signal2D& f, DftAlgorithm alg = DftAlgorithm::Auto) {
  return Signal2D(f.dims(), detail::cols_transform(f.dims(), detail::rows_transform(f, false, alg), false, alg));
}

inline Signal2D idft2(const Signal2D& g, DftAlgorithm alg = DftAlgorithm::Auto) {
  return Signal2D(g.dims(), detail::cols_transform(g.dims(), detail::rows_transform(g, true, alg), true, alg));
}

inline Signal2D forward_transform(TransformKind kind, const Signal2D& f) {
  switch (kind) {
    case TransformKind::Fourier2D: return dft2(f);
    case TransformKind::GaborRow: return gabor_row(f);
    case TransformKind::GaborColumn: return gabor_col(f);
  }
  throw std::logic_error("unreachable");
}

inline Signal2D inverse_transform(TransformKind kind, const Signal2D& g) {
  switch (kind) {
    case TransformKind::Fourier2D: return idft2(g);
    case TransformKind::GaborRow: return gabor_row_inverse(g);
    case TransformKind::GaborColumn: return gabor_col_inverse(g);
  }
  throw std::logic_error("unreachable");
}

}  // namespace gabor
