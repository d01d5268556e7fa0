// Monte Carlo experiment driver: test-signal generation, seeded trials run
// across a worker pool, Wilson intervals, and deterministic CSV/JSON output.

#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "gabor/channel.hpp"
#include "gabor/json_io.hpp"
#include "gabor/probbounds.hpp"
#include "gabor/recovery.hpp"
#include "gabor/rng.hpp"
#include "gabor/signal.hpp"
#include "gabor/transforms.hpp"

namespace gabor {

/// Invalid or infeasible experiment parameters.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Test signals

enum class ProfileShape {
  UniformRows,   // every row has exactly e_max_target nonzeros
  SkewedRows,    // a fraction of rows has one nonzero, the rest e_max_target
  ColumnSparse,  // T = 8, E_max = 3, seven rows of support 2, S_max = 2
};

inline std::string_view to_string(ProfileShape s) {
  switch (s) {
    case ProfileShape::UniformRows: return "uniform";
    case ProfileShape::SkewedRows: return "skewed";
    case ProfileShape::ColumnSparse: return "column-sparse";
  }
  return "?";
}

inline ProfileShape parse_profile_shape(std::string_view s) {
  if (s == "uniform") return ProfileShape::UniformRows;
  if (s == "skewed") return ProfileShape::SkewedRows;
  if (s == "column-sparse") return ProfileShape::ColumnSparse;
  throw ConfigError("unknown profile shape '" + std::string(s) + "'");
}

namespace detail {

/// First k entries of a uniformly random permutation of 0..n-1.
inline std::vector<std::size_t> random_subset(Rng& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);
  idx.resize(k);
  return idx;
}

/// alpha * e^{2 pi i f a / 8} * (1 - e^{2 pi i d (a - z) / 8}): two Z_8
/// frequencies, vanishing exactly where d (a - z) = 0 mod 8.
inline Complex column_pattern(std::size_t a, Complex alpha, std::size_t freq, std::size_t d, std::size_t z) {
  const std::size_t e = (d * ((a + 8 - z) % 8)) % 8;
  if (e == 0) return 0.0;
  const double tau = 2.0 * std::numbers::pi / 8.0;
  return alpha * std::polar(1.0, tau * static_cast<double>((freq * a) % 8)) *
         (1.0 - std::polar(1.0, tau * static_cast<double>(e)));
}

}  // namespace detail

/// Random test signal with a prescribed row-support profile. Nonzero entries
/// have unit modulus and uniformly random phase (ColumnSparse: products of
/// two such factors). Deterministic in `seed`.
inline Signal2D generate_test_signal(GridDims dims, std::size_t e_max_target, std::uint64_t seed,
                                     ProfileShape shape = ProfileShape::UniformRows, double skew_fraction = 0.875) {
  if (e_max_target == 0 || e_max_target > dims.n) {
    throw ConfigError("generate_test_signal: need 1 <= e_max <= n (e_max=" + std::to_string(e_max_target) +
                      ", n=" + std::to_string(dims.n) + ")");
  }
  Rng rng(seed);
  std::vector<Complex> values(dims.size(), Complex(0.0));
  auto fill_row = [&](std::size_t a, std::size_t count) {
    for (std::size_t x : detail::random_subset(rng, dims.n, count)) values[dims.index(x, a)] = rng.unit_phase();
  };

  switch (shape) {
    case ProfileShape::UniformRows:
      for (std::size_t a = 0; a < dims.t; ++a) fill_row(a, e_max_target);
      break;
    case ProfileShape::SkewedRows: {
      if (!(skew_fraction >= 0.0 && skew_fraction <= 1.0)) throw ConfigError("skew fraction must lie in [0, 1]");
      const auto small = static_cast<std::size_t>(std::llround(skew_fraction * static_cast<double>(dims.t)));
      if (small == dims.t && e_max_target > 1) {
        throw ConfigError("generate_test_signal: skew fraction leaves no row with support e_max");
      }
      std::vector<char> is_small(dims.t, 0);
      for (std::size_t a : detail::random_subset(rng, dims.t, small)) is_small[a] = 1;
      for (std::size_t a = 0; a < dims.t; ++a) fill_row(a, is_small[a] ? 1 : e_max_target);
      break;
    }
    case ProfileShape::ColumnSparse: {
      if (dims.t != 8 || dims.n < 3 || e_max_target != 3) {
        throw ConfigError("column-sparse signals require t = 8, n >= 3 and e_max = 3");
      }
      // Three columns: nonzero on the even rows, on all rows but {2, 6}, and
      // on all rows but {4}. Row 0 meets all three; every other row meets
      // exactly two. Each column has exactly two Z_8 frequencies.
      constexpr std::size_t kDiff[3] = {4, 2, 1};
      constexpr std::size_t kZero[3] = {1, 2, 4};
      const auto cols = detail::random_subset(rng, dims.n, 3);
      const std::size_t shift = rng.below(8);
      for (std::size_t j = 0; j < 3; ++j) {
        const std::size_t freq = rng.below(8);
        const Complex alpha = rng.unit_phase();
        for (std::size_t a = 0; a < 8; ++a) {
          const std::size_t local = (a + 8 - shift) % 8;
          values[dims.index(cols[j], a)] = detail::column_pattern(local, alpha, freq, kDiff[j], kZero[j]);
        }
      }
      break;
    }
  }
  return Signal2D(dims, std::move(values));
}

// ---------------------------------------------------------------------------
// Configuration

enum class ExperimentMode { MmaxSweep, MminSweep, RowRecovery, TwoStage, TailBounds };

inline std::string_view to_string(ExperimentMode m) {
  switch (m) {
    case ExperimentMode::MmaxSweep: return "mmax-sweep";
    case ExperimentMode::MminSweep: return "mmin-sweep";
    case ExperimentMode::RowRecovery: return "row-recovery";
    case ExperimentMode::TwoStage: return "two-stage";
    case ExperimentMode::TailBounds: return "tail-bounds";
  }
  return "?";
}

inline ExperimentMode parse_mode(std::string_view s) {
  for (auto m : {ExperimentMode::MmaxSweep, ExperimentMode::MminSweep, ExperimentMode::RowRecovery,
                 ExperimentMode::TwoStage, ExperimentMode::TailBounds}) {
    if (to_string(m) == s) return m;
  }
  throw ConfigError("unknown experiment mode '" + std::string(s) + "'");
}

struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::MmaxSweep;
  std::size_t n = 64;
  std::size_t t = 4;
  double theta = 0.05;
  /// Two-stage only: when set, theta = 1 / (2 e_max) + delta.
  std::optional<double> delta;
  std::size_t e_max_target = 2;
  std::size_t trials = 100;
  std::uint64_t base_seed = 1;
  std::vector<std::size_t> sweep;  // n values; empty means {n}
  double tol = 1e-9;
  std::string output_path;
  std::optional<ProfileShape> profile_shape;  // default depends on mode
  double skew_fraction = 0.875;
  /// Two-stage only: give the column stage the true S_max.
  bool side_info = true;

  GridDims dims() const { return GridDims(n, t); }
  std::vector<std::size_t> n_values() const { return sweep.empty() ? std::vector<std::size_t>{n} : sweep; }
  ProfileShape shape() const {
    if (profile_shape) return *profile_shape;
    return mode == ExperimentMode::TwoStage ? ProfileShape::ColumnSparse : ProfileShape::UniformRows;
  }
  double effective_theta() const {
    if (mode == ExperimentMode::TwoStage && delta) return 1.0 / (2.0 * static_cast<double>(e_max_target)) + *delta;
    return theta;
  }
};

inline void validate(const ExperimentConfig& c) {
  if (c.n == 0 || c.t == 0) throw ConfigError("n and t must be positive");
  if (c.trials == 0) throw ConfigError("trials must be at least 1");
  if (c.e_max_target == 0) throw ConfigError("e_max must be at least 1");
  const double th = c.effective_theta();
  if (!(th >= 0.0 && th <= 1.0)) throw ConfigError("theta must lie in [0, 1] (got " + std::to_string(th) + ")");
  if (c.delta && !(*c.delta >= 0.0)) throw ConfigError("delta must be non-negative");
  if (!(c.tol > 0.0)) throw ConfigError("tol must be positive");
  for (std::size_t i = 0; i < c.sweep.size(); ++i) {
    if (c.sweep[i] == 0) throw ConfigError("sweep values must be positive");
    if (i > 0 && c.sweep[i] <= c.sweep[i - 1]) throw ConfigError("sweep values must be strictly increasing");
  }
  for (std::size_t n : c.n_values()) {
    if (c.e_max_target > n) {
      throw ConfigError("e_max (" + std::to_string(c.e_max_target) + ") exceeds n (" + std::to_string(n) + ")");
    }
  }
  if (c.mode == ExperimentMode::RowRecovery || c.mode == ExperimentMode::TwoStage) {
    if (c.shape() == ProfileShape::ColumnSparse && (c.t != 8 || c.e_max_target != 3)) {
      throw ConfigError("column-sparse signals require t = 8 and e_max = 3");
    }
    if (!(c.skew_fraction >= 0.0 && c.skew_fraction <= 1.0)) throw ConfigError("skew_fraction must lie in [0, 1]");
  }
}

/// Reads the keys of `j` into `base`. Unknown keys are rejected.
inline ExperimentConfig config_from_json(const Json& j, ExperimentConfig base = {}) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "mode") base.mode = parse_mode(v.get<std::string>());
      else if (key == "n") base.n = v.get<std::size_t>();
      else if (key == "t") base.t = v.get<std::size_t>();
      else if (key == "theta") base.theta = v.get<double>();
      else if (key == "delta") base.delta = v.get<double>();
      else if (key == "e_max") base.e_max_target = v.get<std::size_t>();
      else if (key == "trials") base.trials = v.get<std::size_t>();
      else if (key == "seed") base.base_seed = v.get<std::uint64_t>();
      else if (key == "sweep") base.sweep = v.get<std::vector<std::size_t>>();
      else if (key == "tol") base.tol = v.get<double>();
      else if (key == "out") base.output_path = v.get<std::string>();
      else if (key == "profile_shape") base.profile_shape = parse_profile_shape(v.get<std::string>());
      else if (key == "skew_fraction") base.skew_fraction = v.get<double>();
      else if (key == "side_info") base.side_info = v.get<bool>();
      else throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return base;
}

/// Echo of every field that influences results (the output path does not).
inline Json to_json(const ExperimentConfig& c) {
  Json j{{"mode", std::string(to_string(c.mode))},
         {"n", c.n},
         {"t", c.t},
         {"theta", c.effective_theta()},
         {"e_max", c.e_max_target},
         {"trials", c.trials},
         {"seed", c.base_seed},
         {"sweep", c.sweep},
         {"tol", c.tol},
         {"profile_shape", std::string(to_string(c.shape()))},
         {"skew_fraction", c.skew_fraction},
         {"side_info", c.side_info}};
  if (c.delta) j["delta"] = *c.delta;
  return j;
}

inline ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config '" + path.string() + "': " + e.what());
  }
  return config_from_json(j, std::move(base));
}

// ---------------------------------------------------------------------------
// Statistics

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool contains(double p) const { return p >= lo && p <= hi; }
};

inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ99 = 2.5758293035489004;

/// Wilson score interval for `successes` out of `trials`.
inline Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {successes == 0 ? 0.0 : std::max(0.0, center - half),
          successes == trials ? 1.0 : std::min(1.0, center + half)};
}

// ---------------------------------------------------------------------------
// Parallel execution

/// Worker count: GABOR_RECOVER_THREADS if set and positive, else the
/// hardware concurrency.
inline std::size_t worker_count() {
  if (const char* env = std::getenv("GABOR_RECOVER_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls fn(i) for every i in [0, count) on up to worker_count() threads.
/// The first exception thrown by any call is rethrown after all workers join.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers = std::min(count, worker_count());
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------
// Trials

struct TrialRecord {
  std::uint64_t seed = 0;
  std::size_t m_max = 0;
  std::size_t m_min = 0;
  std::size_t rows_recovered = 0;  // rows matching the ground truth
  bool exact_recovery = false;
  double residual = 0.0;
  // Not part of the CSV:
  bool event = false;      // the mode's headline event
  bool certified = false;  // recovery certified by the sufficient conditions
};

/// Relative l2 error below which a recovered row or signal counts as exact.
inline constexpr double kExactRelativeError = 1e-6;

inline std::uint64_t signal_seed(std::uint64_t trial_seed) { return mix_seed(trial_seed, 1); }
inline std::uint64_t erasure_seed(std::uint64_t trial_seed) { return mix_seed(trial_seed, 2); }

struct TailBoundRow {
  std::size_t n = 0, t = 0, e_max = 0;
  double theta = 0.0, c = 0.0;
  double p_mmax_below = 0.0, p_mmin_below = 0.0;
  double exact_tail = 0.0;
  double lemma_bound = 0.0;
  bool valid = false;
};

struct PointResult {
  std::size_t n = 0;
  Json summary;
  std::vector<TrialRecord> records;
  std::optional<TailBoundRow> tail;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<PointResult> points;
  double elapsed_seconds = 0.0;  // wall clock; never written to result files
};

namespace detail {

inline std::size_t exact_rows(const RecoveryReport& r, const Signal2D& truth) {
  if (!r.recovered) return 0;
  std::size_t count = 0;
  for (std::size_t a = 0; a < truth.t(); ++a) {
    if (r.row_status[a] == RowStatus::Recovered &&
        relative_error(r.recovered->row(a), truth.row(a)) < kExactRelativeError) {
      ++count;
    }
  }
  return count;
}

inline bool exact_signal(const RecoveryReport& r, const Signal2D& truth) {
  return r.complete() && r.recovered && relative_error(r.recovered->values(), truth.values()) < kExactRelativeError;
}

inline TrialRecord run_trial(const ExperimentConfig& cfg, GridDims dims, double theta, std::uint64_t seed) {
  TrialRecord rec;
  rec.seed = seed;
  const ErasurePattern pattern = sample_erasure(dims, theta, erasure_seed(seed));
  const ErasureStats stats = erasure_stats(pattern);
  rec.m_max = stats.m_max;
  rec.m_min = stats.m_min;
  const double c = static_cast<double>(dims.n) / (2.0 * static_cast<double>(cfg.e_max_target));

  switch (cfg.mode) {
    case ExperimentMode::MmaxSweep: rec.event = static_cast<double>(rec.m_max) < c; return rec;
    case ExperimentMode::MminSweep: rec.event = static_cast<double>(rec.m_min) < c; return rec;
    case ExperimentMode::TailBounds: return rec;
    case ExperimentMode::RowRecovery:
    case ExperimentMode::TwoStage: break;
  }

  BasisPursuitOptions opts;
  opts.feasibility_tolerance = cfg.tol;
  const Signal2D f = generate_test_signal(dims, cfg.e_max_target, signal_seed(seed), cfg.shape(), cfg.skew_fraction);
  const SupportProfile profile = support_profile(f, default_support_tolerance(f));
  const RecoveryProblem problem = apply_erasure(gabor_row(f), pattern);
  const RecoveryReport rows = recover_rows(problem, std::nullopt, opts);

  if (cfg.mode == ExperimentMode::RowRecovery) {
    rec.rows_recovered = exact_rows(rows, f);
    rec.exact_recovery = rec.rows_recovered == dims.t;
    rec.residual = rows.residual;
    rec.certified = certify_rows(rows, problem, profile).guarantee_held;
    rec.event = rec.certified;
    return rec;
  }

  std::optional<std::size_t> s_max;
  if (cfg.side_info) {
    const Signal2D col = gabor_col(f);
    s_max = column_support_max(col, default_support_tolerance(col));
  }
  const RecoveryReport full = recover_columns(problem, rows, s_max, opts);
  rec.rows_recovered = exact_rows(full, f);
  rec.exact_recovery = exact_signal(full, f);
  rec.residual = full.residual;
  rec.event = rec.exact_recovery;
  const RecoveryReport certified = recover_columns(problem, certify_rows(rows, problem, profile), s_max, opts);
  rec.certified = certified.guarantee_held;
  return rec;
}

inline Json interval_json(const Interval& i) { return Json::array({i.lo, i.hi}); }

inline Json rate_json(std::size_t k, std::size_t trials) {
  return Json{{"count", k},
              {"rate", static_cast<double>(k) / static_cast<double>(trials)},
              {"wilson95", interval_json(wilson_interval(k, trials, kZ95))},
              {"wilson99", interval_json(wilson_interval(k, trials, kZ99))}};
}

/// Closed-form lower bound on recovering every row whose support is below
/// E_max / (1 + 2 delta E_max), from the two-stage argument. Null when the
/// regime does not apply.
inline Json two_stage_closed_form(std::size_t n, std::size_t t, double theta, std::size_t e_max) {
  const double e = static_cast<double>(e_max);
  const double delta = theta - 1.0 / (2.0 * e);
  if (delta < -1e-12) return nullptr;
  const double small = snapped_ceil(e / (1.0 + 2.0 * std::max(0.0, delta) * e)) - 1.0;
  if (small < 1.0) return nullptr;
  return prob_mmax_below(n, t, theta, static_cast<double>(n) / (2.0 * small));
}

inline PointResult run_point(const ExperimentConfig& cfg, std::size_t n) {
  PointResult out;
  out.n = n;
  const GridDims dims(n, cfg.t);
  const double theta = cfg.effective_theta();
  const double c = static_cast<double>(n) / (2.0 * static_cast<double>(cfg.e_max_target));
  Json s{{"n", n}, {"t", cfg.t}, {"theta", theta}, {"e_max", cfg.e_max_target}, {"c", c}};

  if (cfg.mode == ExperimentMode::TailBounds) {
    TailBoundRow row;
    row.n = n;
    row.t = cfg.t;
    row.e_max = cfg.e_max_target;
    row.theta = theta;
    row.c = c;
    row.p_mmax_below = prob_mmax_below(n, cfg.t, theta, c);
    row.p_mmin_below = prob_mmin_below(n, cfg.t, theta, c);
    row.exact_tail = binom_tail_upper(n, theta, c);
    const double k = 1.0 / (2.0 * static_cast<double>(cfg.e_max_target));
    if (theta > 0.0 && theta < k && k < 1.0) {
      const TailBoundResult b = lemma_tail_bound(n, theta, k);
      row.valid = b.valid;
      row.lemma_bound = b.lemma_bound;
    } else {
      row.lemma_bound = std::numeric_limits<double>::quiet_NaN();
    }
    s["p_mmax_below"] = row.p_mmax_below;
    s["p_mmin_below"] = row.p_mmin_below;
    s["exact_tail"] = row.exact_tail;
    s["lemma_bound"] = row.valid ? Json(row.lemma_bound) : Json(nullptr);
    s["valid"] = row.valid;
    out.tail = row;
    out.summary = std::move(s);
    return out;
  }

  out.records.resize(cfg.trials);
  parallel_for(cfg.trials, [&](std::size_t i) {
    out.records[i] = run_trial(cfg, dims, theta, cfg.base_seed + i);
  });

  std::size_t events = 0, exact = 0, certified = 0, violations = 0;
  for (const TrialRecord& r : out.records) {
    events += r.event;
    exact += r.exact_recovery;
    certified += r.certified;
    violations += r.certified && !r.exact_recovery;
  }
  s["trials"] = cfg.trials;
  switch (cfg.mode) {
    case ExperimentMode::MmaxSweep:
      s["event"] = "m_max < c";
      s["empirical"] = rate_json(events, cfg.trials);
      s["closed_form"] = prob_mmax_below(n, cfg.t, theta, c);
      break;
    case ExperimentMode::MminSweep:
      s["event"] = "m_min < c";
      s["empirical"] = rate_json(events, cfg.trials);
      s["closed_form"] = prob_mmin_below(n, cfg.t, theta, c);
      break;
    case ExperimentMode::RowRecovery:
      s["event"] = "all rows certified";
      s["empirical"] = rate_json(events, cfg.trials);
      s["closed_form"] = prob_mmax_below(n, cfg.t, theta, c);
      s["exact_recovery"] = rate_json(exact, cfg.trials);
      s["certified_without_exact"] = violations;
      break;
    case ExperimentMode::TwoStage:
      s["event"] = "full recovery";
      s["empirical"] = rate_json(events, cfg.trials);
      s["closed_form"] = two_stage_closed_form(n, cfg.t, theta, cfg.e_max_target);
      s["certified"] = rate_json(certified, cfg.trials);
      s["certified_without_exact"] = violations;
      break;
    case ExperimentMode::TailBounds: break;
  }
  out.summary = std::move(s);
  return out;
}

}  // namespace detail

inline ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult result;
  result.config = config;
  for (std::size_t n : config.n_values()) result.points.push_back(detail::run_point(config, n));
  result.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

// ---------------------------------------------------------------------------
// Output

/// Shortest round-trip decimal form of `v`.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << "seed,m_max,m_min,rows_recovered,exact_recovery,residual\n";
  for (const TrialRecord& r : records) {
    out << r.seed << ',' << r.m_max << ',' << r.m_min << ',' << r.rows_recovered << ','
        << (r.exact_recovery ? "true" : "false") << ',' << format_double(r.residual) << '\n';
  }
}

inline void write_tail_csv(std::ostream& out, const std::vector<TailBoundRow>& rows) {
  out << "n,t,theta,e_max,c,p_mmax_below,p_mmin_below,exact_tail,lemma_bound,valid\n";
  for (const TailBoundRow& r : rows) {
    out << r.n << ',' << r.t << ',' << format_double(r.theta) << ',' << r.e_max << ',' << format_double(r.c) << ','
        << format_double(r.p_mmax_below) << ',' << format_double(r.p_mmin_below) << ','
        << format_double(r.exact_tail) << ',' << format_double(r.lemma_bound) << ','
        << (r.valid ? "true" : "false") << '\n';
  }
}

inline Json summary_json(const ExperimentResult& result) {
  Json points = Json::array();
  for (const PointResult& p : result.points) points.push_back(p.summary);
  return Json{{"config", to_json(result.config)}, {"points", std::move(points)}};
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace detail

/// Writes summary.json plus trials.csv (trials_n<N>.csv per point for
/// sweeps), or tail_bounds.csv for the tail-bound mode. Returns the files
/// written, in order.
inline std::vector<std::filesystem::path> emit_results(const ExperimentResult& result,
                                                       const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());

  std::vector<std::filesystem::path> written;
  const auto put = [&](const std::string& name, const std::string& content) {
    detail::write_file(dir / name, content);
    written.push_back(dir / name);
  };
  put("summary.json", summary_json(result).dump(2) + "\n");

  if (result.config.mode == ExperimentMode::TailBounds) {
    std::vector<TailBoundRow> rows;
    for (const PointResult& p : result.points) rows.push_back(*p.tail);
    std::ostringstream csv;
    write_tail_csv(csv, rows);
    put("tail_bounds.csv", csv.str());
    return written;
  }
  const bool single = result.config.sweep.empty();
  for (const PointResult& p : result.points) {
    std::ostringstream csv;
    write_trials_csv(csv, p.records);
    put(single ? std::string("trials.csv") : "trials_n" + std::to_string(p.n) + ".csv", csv.str());
  }
  return written;
}

}  // namespace gabor
