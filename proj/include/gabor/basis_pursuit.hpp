// Complex basis pursuit with a unitary measurement operator.
//
// Solves   minimize ||x||_1   subject to   (U x)_i = b_i  for every observed i,
//
// where U is unitary (a DFT, an inverse DFT, a 2D DFT, ...) and only some
// coordinates of U x are known. Because the rows of U are orthonormal the
// affine constraint set has a closed-form projection: transform, overwrite
// the observed coordinates, transform back.
//
// The iteration is Douglas-Rachford splitting between complex
// soft-thresholding and that projection. Every few iterations the current
// iterate is "polished": a candidate support is read off, the constraint is
// solved exactly on it by least squares, and a dual certificate is tried. A
// strict certificate (|v_j| < 1 off the support, v in the row space of the
// constraint) proves the polished point is the unique minimizer, and the
// solve stops there.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "gabor/signal.hpp"
#include "gabor/transforms.hpp"

namespace gabor {

template <class Op>
concept UnitaryOperator = requires(const Op& op, std::span<const Complex> in, std::span<Complex> out) {
  { op.size() } -> std::convertible_to<std::size_t>;
  op.forward(in, out);
  op.inverse(in, out);
};

/// Swaps the roles of forward and inverse.
template <UnitaryOperator Op>
class AdjointOperator {
 public:
  explicit AdjointOperator(const Op& op) : op_(op) {}
  std::size_t size() const { return op_.size(); }
  void forward(std::span<const Complex> in, std::span<Complex> out) const { op_.inverse(in, out); }
  void inverse(std::span<const Complex> in, std::span<Complex> out) const { op_.forward(in, out); }

 private:
  const Op& op_;
};

/// The 2D DFT acting on row-major vectors of length n * t.
class Dft2Operator {
 public:
  explicit Dft2Operator(GridDims dims) : dims_(dims), rows_(dims.n), cols_(dims.t) {}
  std::size_t size() const { return dims_.size(); }
  void forward(std::span<const Complex> in, std::span<Complex> out) const { apply(in, out, false); }
  void inverse(std::span<const Complex> in, std::span<Complex> out) const { apply(in, out, true); }

 private:
  void apply(std::span<const Complex> in, std::span<Complex> out, bool inv) const {
    std::copy(in.begin(), in.end(), out.begin());
    for (std::size_t a = 0; a < dims_.t; ++a) {
      auto row = out.subspan(a * dims_.n, dims_.n);
      inv ? rows_.inverse(row, row) : rows_.forward(row, row);
    }
    std::vector<Complex> col(dims_.t);
    for (std::size_t x = 0; x < dims_.n; ++x) {
      for (std::size_t a = 0; a < dims_.t; ++a) col[a] = out[dims_.index(x, a)];
      inv ? cols_.inverse(col, col) : cols_.forward(col, col);
      for (std::size_t a = 0; a < dims_.t; ++a) out[dims_.index(x, a)] = col[a];
    }
  }

  GridDims dims_;
  Dft rows_;
  Dft cols_;
};

struct BasisPursuitOptions {
  std::size_t max_iterations = 100000;
  /// Convergence when the max change of the splitting variable between
  /// successive iterations falls below step_tolerance * max(1, |z|_inf).
  double step_tolerance = 1e-12;
  /// Also converged when ||x||_1 exceeds a dual lower bound by at most
  /// gap_tolerance * max(1, ||x||_1). Covers non-unique minimizers, where
  /// the iterates can drift slowly along a face of the l1 ball.
  double gap_tolerance = 1e-10;
  /// Allowed max-modulus mismatch on observed values, relative to max(1, |b|_inf).
  double feasibility_tolerance = 1e-9;
};

enum class SolveStatus { Converged, IterationLimit };

struct BasisPursuitResult {
  std::vector<Complex> x;
  SolveStatus status = SolveStatus::Converged;
  /// A strict dual certificate was found: x is the unique minimizer.
  bool certified_unique = false;
  std::size_t iterations = 0;
  double residual = 0.0;

  bool converged() const { return status == SolveStatus::Converged; }
};

/// Complex soft-thresholding: v * max(0, 1 - gamma / |v|).
inline Complex soft_threshold(Complex v, double gamma) {
  const double mag = std::abs(v);
  return mag <= gamma ? Complex(0.0) : v * (1.0 - gamma / mag);
}

inline double l1_norm(std::span<const Complex> v) {
  double s = 0.0;
  for (const Complex& c : v) s += std::abs(c);
  return s;
}

namespace detail {

template <UnitaryOperator Op>
class BasisPursuitSolver {
 public:
  BasisPursuitSolver(const Op& op, std::span<const std::optional<Complex>> measurements,
                     const BasisPursuitOptions& options)
      : op_(op), n_(op.size()), options_(options), columns_(op.size()) {
    if (measurements.size() != n_) throw std::invalid_argument("basis_pursuit: measurement length mismatch");
    for (std::size_t i = 0; i < n_; ++i) {
      if (measurements[i]) {
        observed_.push_back(i);
        b_.push_back(*measurements[i]);
      }
    }
    double bmax = 0.0;
    for (const Complex& v : b_) bmax = std::max(bmax, std::abs(v));
    b_scale_ = bmax;
    feasibility_abs_ = options_.feasibility_tolerance * std::max(1.0, bmax);
  }

  BasisPursuitResult solve() {
    BasisPursuitResult out;
    if (observed_.empty() || b_scale_ <= feasibility_abs_) {
      // Zero is feasible (or unconstrained) and is the unique point of zero norm.
      out.x.assign(n_, Complex(0.0));
      out.certified_unique = true;
      out.residual = b_scale_;
      return out;
    }
    if (observed_.size() == n_) {
      std::vector<Complex> full(b_);
      out.x.resize(n_);
      op_.inverse(full, out.x);
      out.certified_unique = true;
      out.residual = residual(out.x);
      return out;
    }

    std::vector<Complex> z(n_, Complex(0.0)), x(n_), w(n_), reflect(n_);
    project(z, z);  // least-norm feasible point
    double zmax = 0.0;
    for (const Complex& v : z) zmax = std::max(zmax, std::abs(v));
    const double gamma = 0.1 * zmax;

    std::size_t next_polish = 0;
    std::size_t polish_gap = 8;
    for (std::size_t it = 0; it < options_.max_iterations; ++it) {
      for (std::size_t i = 0; i < n_; ++i) {
        x[i] = soft_threshold(z[i], gamma);
        reflect[i] = 2.0 * x[i] - z[i];
      }
      project(reflect, w);
      double change = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < n_; ++i) {
        const Complex dz = w[i] - x[i];
        z[i] += dz;
        change = std::max(change, std::abs(dz));
        scale = std::max(scale, std::abs(z[i]));
      }
      out.iterations = it + 1;

      if (it == next_polish) {
        if (auto p = polish(x, z); p && p->certified) {
          out.x = std::move(p->x);
          out.certified_unique = true;
          out.residual = p->residual;
          return out;
        }
        polish_gap = std::min<std::size_t>(polish_gap * 2, 512);
        next_polish = it + polish_gap;
      }

      if (change <= options_.step_tolerance * std::max(1.0, scale) ||
          (it % kGapInterval == kGapInterval - 1 && duality_gap_closed(x, z, w, gamma))) {
        return finish(std::move(out), x, z, w);
      }
    }
    out.status = SolveStatus::IterationLimit;
    out.x = w;
    out.residual = residual(out.x);
    return out;
  }

 private:
  struct Polished {
    std::vector<Complex> x;
    double residual = 0.0;
    bool certified = false;
  };

  BasisPursuitResult finish(BasisPursuitResult out, const std::vector<Complex>& x, const std::vector<Complex>& z,
                            const std::vector<Complex>& w) {
    const double l1_w = l1_norm(w);
    if (auto p = polish(x, z)) {
      if (p->certified || l1_norm(p->x) <= l1_w + 1e-9 * std::max(1.0, l1_w)) {
        out.certified_unique = p->certified;
        out.residual = p->residual;
        out.x = std::move(p->x);
        return out;
      }
    }
    out.x = w;
    out.residual = residual(out.x);
    return out;
  }

  static constexpr std::size_t kGapInterval = 16;

  /// (z - x) / gamma is a subgradient of ||.||_1 at x. Projected onto the
  /// row space of the constraints and scaled into the unit ball it is dual
  /// feasible, so Re<v, w> bounds the optimum from below for feasible w.
  bool duality_gap_closed(const std::vector<Complex>& x, const std::vector<Complex>& z,
                          const std::vector<Complex>& w, double gamma) const {
    std::vector<Complex> u(n_), tmp(n_), v(n_);
    for (std::size_t i = 0; i < n_; ++i) u[i] = (z[i] - x[i]) / gamma;
    op_.forward(u, tmp);
    std::vector<Complex> masked(n_, Complex(0.0));
    for (std::size_t k : observed_) masked[k] = tmp[k];
    op_.inverse(masked, v);
    double vmax = 0.0;
    for (const Complex& c : v) vmax = std::max(vmax, std::abs(c));
    const double scale = std::max(1.0, vmax);
    double dual = 0.0;
    for (std::size_t i = 0; i < n_; ++i) dual += (std::conj(v[i]) * w[i]).real();
    dual /= scale;
    const double primal = l1_norm(w);
    return primal - dual <= options_.gap_tolerance * std::max(1.0, primal);
  }

  void project(std::span<const Complex> v, std::span<Complex> out) const {
    std::vector<Complex> tmp(n_);
    op_.forward(v, tmp);
    for (std::size_t k = 0; k < observed_.size(); ++k) tmp[observed_[k]] = b_[k];
    op_.inverse(tmp, out);
  }

  double residual(std::span<const Complex> x) const {
    std::vector<Complex> tmp(n_);
    op_.forward(x, tmp);
    double r = 0.0;
    for (std::size_t k = 0; k < observed_.size(); ++k) r = std::max(r, std::abs(tmp[observed_[k]] - b_[k]));
    return r;
  }

  /// Observed rows of column j of U, computed on first use.
  const std::vector<Complex>& column(std::size_t j) {
    auto& col = columns_[j];
    if (col.empty()) {
      std::vector<Complex> e(n_, Complex(0.0)), ue(n_);
      e[j] = 1.0;
      op_.forward(e, ue);
      col.resize(observed_.size());
      for (std::size_t k = 0; k < observed_.size(); ++k) col[k] = ue[observed_[k]];
    }
    return col;
  }

  /// Candidate supports: the nonzeros of the thresholded iterate, and the
  /// entries of the splitting variable above its largest magnitude gap.
  std::vector<std::vector<std::size_t>> candidate_supports(const std::vector<Complex>& x,
                                                           const std::vector<Complex>& z) const {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> nz;
    for (std::size_t i = 0; i < n_; ++i) {
      if (x[i] != Complex(0.0)) nz.push_back(i);
    }
    if (!nz.empty() && nz.size() <= observed_.size()) out.push_back(nz);

    std::vector<std::size_t> order(n_);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double ma = std::abs(z[a]), mb = std::abs(z[b]);
      return ma != mb ? ma > mb : a < b;
    });
    const std::size_t kmax = std::min(observed_.size(), n_ - 1);
    std::size_t best_k = 0;
    double best_ratio = 0.0;
    for (std::size_t k = 1; k <= kmax; ++k) {
      const double hi = std::abs(z[order[k - 1]]), lo = std::abs(z[order[k]]);
      const double ratio = lo > 0.0 ? hi / lo : (hi > 0.0 ? INFINITY : 0.0);
      if (ratio > best_ratio) {
        best_ratio = ratio;
        best_k = k;
      }
    }
    if (best_k > 0) {
      std::vector<std::size_t> gap(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best_k));
      std::sort(gap.begin(), gap.end());
      if (out.empty() || out.front() != gap) out.push_back(std::move(gap));
    }
    return out;
  }

  std::optional<Polished> polish(const std::vector<Complex>& x, const std::vector<Complex>& z) {
    std::optional<Polished> best;
    for (const auto& supp : candidate_supports(x, z)) {
      auto p = solve_on_support(supp);
      if (!p) continue;
      if (p->certified) return p;
      if (!best || l1_norm(p->x) < l1_norm(best->x)) best = std::move(p);
    }
    return best;
  }

  std::optional<Polished> solve_on_support(const std::vector<std::size_t>& supp) {
    const auto m = static_cast<Eigen::Index>(observed_.size());
    const auto k = static_cast<Eigen::Index>(supp.size());
    Eigen::MatrixXcd a(m, k);
    for (Eigen::Index c = 0; c < k; ++c) {
      const auto& col = column(supp[static_cast<std::size_t>(c)]);
      for (Eigen::Index r = 0; r < m; ++r) a(r, c) = col[static_cast<std::size_t>(r)];
    }
    const Eigen::VectorXcd b = Eigen::Map<const Eigen::VectorXcd>(b_.data(), m);
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
    if (qr.rank() < k) return std::nullopt;
    const Eigen::VectorXcd coef = qr.solve(b);

    const double res = (a * coef - b).cwiseAbs().maxCoeff();
    if (!(res <= feasibility_abs_)) return std::nullopt;

    const double cmax = coef.cwiseAbs().maxCoeff();
    Polished p;
    p.x.assign(n_, Complex(0.0));
    for (Eigen::Index c = 0; c < k; ++c) p.x[supp[static_cast<std::size_t>(c)]] = coef(c);
    p.residual = res;
    if (coef.cwiseAbs().minCoeff() <= 1e-12 * cmax) return p;

    // Minimum-norm dual certificate v = U^* P^T A_S (A_S^* A_S)^{-1} sign(coef).
    const Eigen::VectorXcd sign = coef.array() / coef.array().abs().cast<Complex>();
    const Eigen::MatrixXcd gram = a.adjoint() * a;
    const Eigen::VectorXcd y = gram.ldlt().solve(sign);
    const Eigen::VectorXcd lambda = a * y;
    std::vector<Complex> embedded(n_, Complex(0.0)), v(n_);
    for (Eigen::Index r = 0; r < m; ++r) embedded[observed_[static_cast<std::size_t>(r)]] = lambda(r);
    op_.inverse(embedded, v);

    std::vector<char> on_support(n_, 0);
    for (std::size_t j : supp) on_support[j] = 1;
    constexpr double kMargin = 1e-9;
    bool ok = true;
    for (std::size_t j = 0; j < n_ && ok; ++j) {
      if (on_support[j]) {
        ok = std::abs(v[j] - p.x[j] / std::abs(p.x[j])) < 1e-6;
      } else {
        ok = std::abs(v[j]) < 1.0 - kMargin;
      }
    }
    p.certified = ok;
    return p;
  }

  const Op& op_;
  std::size_t n_;
  BasisPursuitOptions options_;
  std::vector<std::size_t> observed_;
  std::vector<Complex> b_;
  double b_scale_ = 0.0;
  double feasibility_abs_ = 0.0;
  std::vector<std::vector<Complex>> columns_;
};

}  // namespace detail

/// Minimizes ||x||_1 subject to (op.forward(x))_i = measurements[i] wherever
/// measurements[i] is present. Deterministic for identical inputs.
template <UnitaryOperator Op>
BasisPursuitResult basis_pursuit(const Op& op, std::span<const std::optional<Complex>> measurements,
                                 const BasisPursuitOptions& options = {}) {
  return detail::BasisPursuitSolver<Op>(op, measurements, options).solve();
}

}  // namespace gabor
