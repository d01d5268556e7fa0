// Exact recovery by L1 minimization (Logan's method), the Donoho-Stark
// sufficient condition, a rank-based uniqueness oracle, and the row-then-
// column recovery pipeline for row-wise Gabor data.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "gabor/basis_pursuit.hpp"
#include "gabor/channel.hpp"
#include "gabor/signal.hpp"
#include "gabor/transforms.hpp"

namespace gabor {

/// True iff support_size * missing_size < n * t / 2 (evaluated exactly in integers).
constexpr bool ds_condition(std::size_t support_size, std::size_t missing_size, std::size_t n, std::size_t t) {
  return 2 * support_size * missing_size < n * t;
}

enum class L1Domain {
  MinimizeSignalL1,  // observe frequencies, minimize ||g||_1
  MinimizeFreqL1,    // observe signal values, minimize ||g^||_1
};

struct L1Recovery {
  std::vector<Complex> signal;  // always in the signal domain
  SolveStatus status = SolveStatus::Converged;
  bool certified_unique = false;
  std::size_t iterations = 0;
  double residual = 0.0;

  bool ok() const { return status == SolveStatus::Converged; }
};

/// Recovers a length-n signal from the entries of `observed` that are present.
/// For MinimizeSignalL1 these are unitary DFT coefficients; for MinimizeFreqL1
/// they are signal samples.
inline L1Recovery l1_recover_1d(std::span<const std::optional<Complex>> observed, L1Domain domain,
                                const BasisPursuitOptions& options = {}) {
  if (observed.empty()) throw std::invalid_argument("l1_recover_1d: empty problem");
  const Dft dft(observed.size());
  L1Recovery out;
  BasisPursuitResult r;
  if (domain == L1Domain::MinimizeSignalL1) {
    r = basis_pursuit(dft, observed, options);
    out.signal = std::move(r.x);
  } else {
    r = basis_pursuit(AdjointOperator<Dft>(dft), observed, options);
    out.signal = dft.inverse(r.x);
  }
  out.status = r.status;
  out.certified_unique = r.certified_unique;
  out.iterations = r.iterations;
  out.residual = r.residual;
  return out;
}

/// True iff the unitary n-point DFT restricted to the observed frequencies
/// (rows) and `support` (columns) has full column rank, i.e. every signal on
/// `support` is determined by its observed frequencies.
inline bool uniqueness_oracle_1d(std::size_t n, std::span<const std::size_t> support,
                                 std::span<const std::size_t> missing) {
  std::vector<char> is_missing(n, 0);
  for (std::size_t m : missing) {
    if (m >= n) throw std::invalid_argument("uniqueness_oracle_1d: frequency out of range");
    is_missing[m] = 1;
  }
  for (std::size_t x : support) {
    if (x >= n) throw std::invalid_argument("uniqueness_oracle_1d: position out of range");
  }
  if (support.empty()) return true;
  std::vector<std::size_t> rows;
  for (std::size_t m = 0; m < n; ++m) {
    if (!is_missing[m]) rows.push_back(m);
  }
  if (rows.size() < support.size()) return false;

  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  Eigen::MatrixXcd a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(support.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < support.size(); ++c) {
      const std::size_t k = (rows[r] * support[c]) % n;
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          std::polar(scale, -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    }
  }
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  // Singular values of a submatrix of a unitary matrix lie in [0, 1].
  return svd.singularValues().minCoeff() > 1e-9;
}

enum class RowStatus { Recovered, Failed, NotAttempted };
enum class RecoveryStage { RowOnly, RowThenColumn, Global };

inline std::string_view to_string(RowStatus s) {
  switch (s) {
    case RowStatus::Recovered: return "Recovered";
    case RowStatus::Failed: return "Failed";
    case RowStatus::NotAttempted: return "NotAttempted";
  }
  return "?";
}

inline std::string_view to_string(RecoveryStage s) {
  switch (s) {
    case RecoveryStage::RowOnly: return "RowOnly";
    case RecoveryStage::RowThenColumn: return "RowThenColumn";
    case RecoveryStage::Global: return "Global";
  }
  return "?";
}

struct RecoveryReport {
  /// Absent when nothing was recovered. Rows not marked Recovered hold zeros.
  std::optional<Signal2D> recovered;
  std::vector<RowStatus> row_status;
  /// Per-column outcome of the column stage; empty for RowOnly and Global.
  std::vector<RowStatus> column_status;
  /// Whether each stage's sufficient condition held for everything it was
  /// asked to recover (one entry per stage that ran).
  std::vector<bool> stage_guarantees;
  /// Every row is Recovered and certified unique by a sufficient condition.
  bool guarantee_held = false;
  /// Max modulus mismatch between the recovered rows and the observed data.
  double residual = 0.0;
  RecoveryStage stage = RecoveryStage::RowOnly;
  /// Per-row: recovered under a condition that certifies uniqueness.
  std::vector<bool> row_certified;

  std::size_t rows_recovered() const {
    return static_cast<std::size_t>(std::count(row_status.begin(), row_status.end(), RowStatus::Recovered));
  }
  bool complete() const { return rows_recovered() == row_status.size(); }
};

namespace detail {

inline void require_kind(const RecoveryProblem& p, TransformKind kind, const char* what) {
  if (p.kind != kind) {
    throw std::invalid_argument(std::string(what) + ": problem carries " + std::string(to_string(p.kind)) +
                                " data, expected " + std::string(to_string(kind)));
  }
}

inline double row_residual(const Dft& dft, std::span<const Complex> row, std::span<const std::optional<Complex>> obs) {
  const auto g = dft.forward(row);
  double r = 0.0;
  for (std::size_t m = 0; m < obs.size(); ++m) {
    if (obs[m]) r = std::max(r, std::abs(g[m] - *obs[m]));
  }
  return r;
}

inline double observed_scale(std::span<const std::optional<Complex>> obs) {
  double s = 0.0;
  for (const auto& v : obs) {
    if (v) s = std::max(s, std::abs(*v));
  }
  return s;
}

/// Assembles `recovered`, `residual` and `guarantee_held` from row values and statuses.
inline void finalize(RecoveryReport& report, const RecoveryProblem& problem, std::vector<Complex> values) {
  const GridDims dims = problem.dims;
  const Dft dft(dims.n);
  report.residual = 0.0;
  bool all_certified = true;
  for (std::size_t a = 0; a < dims.t; ++a) {
    std::span<Complex> row(values.data() + a * dims.n, dims.n);
    if (report.row_status[a] != RowStatus::Recovered) {
      std::fill(row.begin(), row.end(), Complex(0.0));
      report.row_certified[a] = false;
      all_certified = false;
      continue;
    }
    all_certified = all_certified && report.row_certified[a];
    report.residual = std::max(report.residual, row_residual(dft, row, problem.row(a)));
  }
  report.guarantee_held = all_certified;
  if (report.rows_recovered() > 0) {
    report.recovered.emplace(dims, std::move(values));
  } else {
    report.recovered.reset();
  }
}

}  // namespace detail

/// Relabels the rows of an uncertified row-stage report: a row stays
/// Recovered only when |supp f(., a)| * |M_a| < N / 2.
inline RecoveryReport certify_rows(const RecoveryReport& report, const RecoveryProblem& problem,
                                   const SupportProfile& profile) {
  if (profile.row_supports.size() != problem.dims.t) {
    throw std::invalid_argument("certify_rows: profile has wrong number of rows");
  }
  RecoveryReport out = report;
  std::vector<Complex> values(problem.dims.size());
  if (report.recovered) {
    const auto v = report.recovered->values();
    std::copy(v.begin(), v.end(), values.begin());
  }
  bool all = true;
  for (std::size_t a = 0; a < problem.dims.t; ++a) {
    const bool cert = ds_condition(profile.row_supports[a], problem.pattern.per_row_counts()[a], problem.dims.n, 1);
    if (out.row_status[a] == RowStatus::Recovered) {
      if (!cert) out.row_status[a] = RowStatus::Failed;
      out.row_certified[a] = cert;
    }
    all = all && cert && out.row_status[a] == RowStatus::Recovered;
  }
  out.stage_guarantees = {all};
  detail::finalize(out, problem, std::move(values));
  return out;
}

/// Stage one: independent 1D L1 recovery of every row from its observed
/// row-Gabor coefficients. With a support profile a row counts as Recovered
/// only when the per-row Donoho-Stark condition certifies it; without one,
/// every row whose solve converged (and that has at least one observation) is
/// accepted.
inline RecoveryReport recover_rows(const RecoveryProblem& problem, const std::optional<SupportProfile>& profile = {},
                                   const BasisPursuitOptions& options = {}) {
  detail::require_kind(problem, TransformKind::GaborRow, "recover_rows");
  const GridDims dims = problem.dims;
  const Dft dft(dims.n);

  RecoveryReport report;
  report.stage = RecoveryStage::RowOnly;
  report.row_status.assign(dims.t, RowStatus::Failed);
  report.row_certified.assign(dims.t, false);
  std::vector<Complex> values(dims.size(), Complex(0.0));

  for (std::size_t a = 0; a < dims.t; ++a) {
    const auto obs = problem.row(a);
    if (problem.pattern.per_row_counts()[a] == dims.n) continue;
    const BasisPursuitResult r = basis_pursuit(dft, obs, options);
    if (!r.converged()) continue;
    std::copy(r.x.begin(), r.x.end(), values.begin() + static_cast<std::ptrdiff_t>(a * dims.n));
    report.row_status[a] = RowStatus::Recovered;
  }

  report.stage_guarantees = {false};
  detail::finalize(report, problem, std::move(values));
  if (profile) return certify_rows(report, problem, *profile);
  return report;
}

/// Stage two: for every column, treats entries of rows not yet recovered as
/// missing signal values and minimizes the L1 norm of the column's Z_T
/// Fourier transform. With `s_max` (a bound on the column-transform support)
/// a column is attempted only when (#missing) * s_max < T / 2; without it
/// every column is attempted. A row completed this way is accepted only if
/// it reproduces its own observed row-Gabor values.
inline RecoveryReport recover_columns(const RecoveryProblem& problem, const RecoveryReport& stage1,
                                      std::optional<std::size_t> s_max, const BasisPursuitOptions& options = {}) {
  detail::require_kind(problem, TransformKind::GaborRow, "recover_columns");
  const GridDims dims = problem.dims;
  if (stage1.row_status.size() != dims.t) throw std::invalid_argument("recover_columns: stage-one report mismatch");

  RecoveryReport report = stage1;
  report.stage = RecoveryStage::RowThenColumn;
  report.column_status.assign(dims.n, RowStatus::Recovered);

  std::vector<Complex> values(dims.size(), Complex(0.0));
  if (stage1.recovered) {
    const auto v = stage1.recovered->values();
    std::copy(v.begin(), v.end(), values.begin());
  }
  const std::vector<RowStatus> known = stage1.row_status;
  const std::vector<bool> known_certified = stage1.row_certified;

  // filled[a * n + x]: entry recovered by its column; cert likewise certified.
  std::vector<char> filled(dims.size(), 0), cert(dims.size(), 0);
  bool stage_ok = s_max.has_value();
  bool any_missing = false;
  const Dft col_dft(dims.t);

  for (std::size_t x = 0; x < dims.n; ++x) {
    std::vector<std::optional<Complex>> obs(dims.t);
    std::size_t missing = 0;
    bool inputs_certified = true;
    for (std::size_t a = 0; a < dims.t; ++a) {
      if (known[a] == RowStatus::Recovered) {
        obs[a] = values[dims.index(x, a)];
        inputs_certified = inputs_certified && known_certified[a];
      } else {
        ++missing;
      }
    }
    if (missing == 0) continue;
    any_missing = true;
    const bool certifiable = s_max && ds_condition(*s_max, missing, dims.t, 1);
    if (s_max && !certifiable) {
      report.column_status[x] = RowStatus::NotAttempted;
      stage_ok = false;
      continue;
    }
    if (missing == dims.t) {
      report.column_status[x] = RowStatus::Failed;
      stage_ok = false;
      continue;
    }
    const L1Recovery r = l1_recover_1d(obs, L1Domain::MinimizeFreqL1, options);
    if (!r.ok()) {
      report.column_status[x] = RowStatus::Failed;
      stage_ok = false;
      continue;
    }
    for (std::size_t a = 0; a < dims.t; ++a) {
      if (known[a] == RowStatus::Recovered) continue;
      values[dims.index(x, a)] = r.signal[a];
      filled[dims.index(x, a)] = 1;
      cert[dims.index(x, a)] = certifiable && inputs_certified;
    }
  }

  const Dft row_dft(dims.n);
  for (std::size_t a = 0; a < dims.t; ++a) {
    if (known[a] == RowStatus::Recovered) continue;
    bool complete = true, certified = true;
    for (std::size_t x = 0; x < dims.n; ++x) {
      complete = complete && filled[dims.index(x, a)];
      certified = certified && cert[dims.index(x, a)];
    }
    if (!complete) continue;
    const auto obs = problem.row(a);
    std::span<const Complex> row(values.data() + a * dims.n, dims.n);
    const double tol = options.feasibility_tolerance * std::max(1.0, detail::observed_scale(obs));
    if (detail::row_residual(row_dft, row, obs) <= tol) {
      report.row_status[a] = RowStatus::Recovered;
      report.row_certified[a] = certified;
    }
  }

  report.stage_guarantees.push_back(stage_ok || !any_missing);
  detail::finalize(report, problem, std::move(values));
  return report;
}

inline RecoveryReport recover_two_stage(const RecoveryProblem& problem, std::optional<std::size_t> s_max,
                                        const BasisPursuitOptions& options = {},
                                        const std::optional<SupportProfile>& profile = {}) {
  return recover_columns(problem, recover_rows(problem, profile, options), s_max, options);
}

/// Recovery from 2D Fourier data by L1 minimization over the whole grid.
/// `support_size`, when known, certifies the result via |E||M| < NT/2.
inline RecoveryReport recover_global(const RecoveryProblem& problem, std::optional<std::size_t> support_size = {},
                                     const BasisPursuitOptions& options = {}) {
  detail::require_kind(problem, TransformKind::Fourier2D, "recover_global");
  const GridDims dims = problem.dims;
  const Dft2Operator op(dims);
  const BasisPursuitResult r = basis_pursuit(op, problem.observed, options);

  RecoveryReport report;
  report.stage = RecoveryStage::Global;
  report.row_status.assign(dims.t, r.converged() ? RowStatus::Recovered : RowStatus::Failed);
  report.residual = r.residual;
  const bool cert = r.converged() && support_size && ds_condition(*support_size, problem.pattern.size(), dims.n, dims.t);
  report.row_certified.assign(dims.t, cert);
  report.stage_guarantees = {cert};
  report.guarantee_held = cert;
  if (r.converged()) report.recovered.emplace(dims, r.x);
  return report;
}

}  // namespace gabor
