// Binomial erasure channel: every transmitted transform value is lost
// independently with probability theta.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gabor/rng.hpp"
#include "gabor/signal.hpp"
#include "gabor/transforms.hpp"

namespace gabor {

/// The set M of missing positions with per-row and per-column counts.
class ErasurePattern {
 public:
  /// `missing` may be given in any order; duplicates and out-of-range
  /// positions are rejected.
  ErasurePattern(GridDims dims, std::vector<Position> missing)
      : dims_(dims), missing_(std::move(missing)), mask_(dims.size(), 0), per_row_(dims.t, 0), per_col_(dims.n, 0) {
    std::sort(missing_.begin(), missing_.end());
    for (const Position& p : missing_) {
      if (p.x >= dims_.n || p.y >= dims_.t) {
        throw std::invalid_argument("ErasurePattern: position (" + std::to_string(p.x) + "," +
                                    std::to_string(p.y) + ") outside grid");
      }
      char& slot = mask_[dims_.index(p.x, p.y)];
      if (slot) throw std::invalid_argument("ErasurePattern: duplicate position");
      slot = 1;
      ++per_row_[p.y];
      ++per_col_[p.x];
    }
  }

  static ErasurePattern none(GridDims dims) { return ErasurePattern(dims, {}); }

  const GridDims& dims() const { return dims_; }
  /// Sorted lexicographically by (x, y).
  const std::vector<Position>& missing() const { return missing_; }
  bool is_missing(std::size_t x, std::size_t a) const { return mask_[dims_.index(x, a)] != 0; }
  const std::vector<std::size_t>& per_row_counts() const { return per_row_; }
  const std::vector<std::size_t>& per_col_counts() const { return per_col_; }
  std::size_t size() const { return missing_.size(); }

 private:
  GridDims dims_;
  std::vector<Position> missing_;
  std::vector<char> mask_;
  std::vector<std::size_t> per_row_;
  std::vector<std::size_t> per_col_;
};

struct ErasureStats {
  std::size_t m_max = 0;
  std::size_t m_min = 0;
};

inline void require_probability(double theta, const char* what) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw std::invalid_argument(std::string(what) + ": theta must lie in [0, 1]");
  }
}

/// Positions are visited row-major (a outer, x inner) and each consumes
/// exactly one uniform draw from Rng(seed).
inline ErasurePattern sample_erasure(GridDims dims, double theta, std::uint64_t seed) {
  require_probability(theta, "sample_erasure");
  Rng rng(seed);
  std::vector<Position> missing;
  for (std::size_t a = 0; a < dims.t; ++a) {
    for (std::size_t x = 0; x < dims.n; ++x) {
      if (rng.bernoulli(theta)) missing.push_back({x, a});
    }
  }
  return ErasurePattern(dims, std::move(missing));
}

inline ErasureStats erasure_stats(const ErasurePattern& pattern) {
  const auto& rows = pattern.per_row_counts();
  const auto [lo, hi] = std::minmax_element(rows.begin(), rows.end());
  return {*hi, *lo};
}

/// The receiver's view: transform values off M, with M left unknown.
struct RecoveryProblem {
  GridDims dims;
  TransformKind kind = TransformKind::GaborRow;
  std::vector<std::optional<Complex>> observed;  // row-major, nullopt on M
  ErasurePattern pattern;

  std::span<const std::optional<Complex>> row(std::size_t a) const {
    return std::span<const std::optional<Complex>>(observed).subspan(a * dims.n, dims.n);
  }
  std::size_t observed_count() const { return dims.size() - pattern.size(); }
};

inline RecoveryProblem apply_erasure(const Signal2D& transform, const ErasurePattern& pattern,
                                     TransformKind kind = TransformKind::GaborRow) {
  if (!(transform.dims() == pattern.dims())) {
    throw std::invalid_argument("apply_erasure: transform is " + std::to_string(transform.n()) + "x" +
                                std::to_string(transform.t()) + " but pattern is " +
                                std::to_string(pattern.dims().n) + "x" + std::to_string(pattern.dims().t));
  }
  const GridDims dims = transform.dims();
  std::vector<std::optional<Complex>> observed(dims.size());
  for (std::size_t a = 0; a < dims.t; ++a) {
    for (std::size_t x = 0; x < dims.n; ++x) {
      if (!pattern.is_missing(x, a)) observed[dims.index(x, a)] = transform.at(x, a);
    }
  }
  return RecoveryProblem{dims, kind, std::move(observed), pattern};
}

}  // namespace gabor
