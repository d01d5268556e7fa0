// Grid-indexed complex signals on Z_N x Z_T and their support statistics.
//
// Storage is row-major by the row index a (the Z_T coordinate): the entry at
// column x in row a lives at values()[a * n + x]. A row is therefore a
// contiguous span of length n.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gabor {

using Complex = std::complex<double>;

/// Relative threshold used when no explicit support tolerance is supplied.
inline constexpr double kDefaultRelativeSupportTolerance = 1e-9;

struct GridDims {
  std::size_t n = 1;  // row length (Z_N)
  std::size_t t = 1;  // number of rows (Z_T)

  GridDims() = default;
  GridDims(std::size_t row_length, std::size_t rows) : n(row_length), t(rows) {
    if (n == 0 || t == 0) {
      throw std::invalid_argument("GridDims: n and t must be positive (got " + std::to_string(n) +
                                  "x" + std::to_string(t) + ")");
    }
  }

  std::size_t size() const { return n * t; }
  std::size_t index(std::size_t x, std::size_t a) const { return a * n + x; }

  friend bool operator==(const GridDims&, const GridDims&) = default;
};

/// A grid position (x, y): x in Z_N selects the column, y in Z_T the row.
struct Position {
  std::size_t x = 0;
  std::size_t y = 0;

  friend bool operator==(const Position&, const Position&) = default;
  friend auto operator<=>(const Position&, const Position&) = default;
};

/// Immutable complex-valued function on Z_N x Z_T.
class Signal2D {
 public:
  Signal2D(GridDims dims, std::vector<Complex> values) : dims_(dims), values_(std::move(values)) {
    if (values_.size() != dims_.size()) {
      throw std::invalid_argument("Signal2D: expected " + std::to_string(dims_.size()) +
                                  " values, got " + std::to_string(values_.size()));
    }
    for (const Complex& v : values_) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw std::invalid_argument("Signal2D: non-finite entry");
      }
    }
  }

  static Signal2D zeros(GridDims dims) { return Signal2D(dims, std::vector<Complex>(dims.size())); }

  const GridDims& dims() const { return dims_; }
  std::size_t n() const { return dims_.n; }
  std::size_t t() const { return dims_.t; }

  const Complex& at(std::size_t x, std::size_t a) const { return values_.at(dims_.index(x, a)); }
  std::span<const Complex> values() const { return values_; }
  std::span<const Complex> row(std::size_t a) const {
    return std::span<const Complex>(values_).subspan(a * dims_.n, dims_.n);
  }
  std::vector<Complex> column(std::size_t x) const {
    std::vector<Complex> out(dims_.t);
    for (std::size_t a = 0; a < dims_.t; ++a) out[a] = values_[dims_.index(x, a)];
    return out;
  }

  double max_modulus() const {
    double m = 0.0;
    for (const Complex& v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  double norm2() const {
    double s = 0.0;
    for (const Complex& v : values_) s += std::norm(v);
    return std::sqrt(s);
  }

 private:
  GridDims dims_;
  std::vector<Complex> values_;
};

/// Row-wise support sizes |supp_t f(t, a)| together with E_max and |E|.
struct SupportProfile {
  std::vector<std::size_t> row_supports;
  std::size_t e_max = 0;
  std::size_t total_support = 0;
};

inline void require_tolerance(double tol) {
  if (!(tol >= 0.0)) throw std::invalid_argument("support tolerance must be non-negative");
}

/// 1e-9 times the largest entry modulus of `signal`.
inline double default_support_tolerance(const Signal2D& signal) {
  return kDefaultRelativeSupportTolerance * signal.max_modulus();
}

/// Positions with |f(x, y)| > tol, in row-major order.
inline std::vector<Position> support(const Signal2D& signal, double tol) {
  require_tolerance(tol);
  std::vector<Position> out;
  for (std::size_t a = 0; a < signal.t(); ++a) {
    const auto row = signal.row(a);
    for (std::size_t x = 0; x < signal.n(); ++x) {
      if (std::abs(row[x]) > tol) out.push_back({x, a});
    }
  }
  return out;
}

inline std::size_t count_support(std::span<const Complex> values, double tol) {
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [tol](const Complex& v) { return std::abs(v) > tol; }));
}

inline SupportProfile support_profile(const Signal2D& signal, double tol) {
  require_tolerance(tol);
  SupportProfile p;
  p.row_supports.resize(signal.t());
  for (std::size_t a = 0; a < signal.t(); ++a) {
    p.row_supports[a] = count_support(signal.row(a), tol);
    p.e_max = std::max(p.e_max, p.row_supports[a]);
    p.total_support += p.row_supports[a];
  }
  return p;
}

/// S_max: the largest column support of a column-wise Gabor transform.
inline std::size_t column_support_max(const Signal2D& transform_values, double tol) {
  require_tolerance(tol);
  std::size_t best = 0;
  for (std::size_t x = 0; x < transform_values.n(); ++x) {
    const auto col = transform_values.column(x);
    best = std::max(best, count_support(col, tol));
  }
  return best;
}

/// Relative l2 distance ||a - b|| / ||b|| (absolute when b is zero).
inline double relative_error(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw std::invalid_argument("relative_error: size mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace gabor
