#include <gtest/gtest.h>

#include <boost/math/distributions/binomial.hpp>

#include "gabor/channel.hpp"
#include "gabor/probbounds.hpp"
#include "oracle.hpp"

using namespace gabor;

TEST(SnappedCeil, AbsorbsRoundingNoise) {
  EXPECT_EQ(snapped_ceil(100 * 0.3), 30.0);
  EXPECT_EQ(snapped_ceil(30.2), 31.0);
  EXPECT_EQ(snapped_floor(3 * 0.1 * 10), 3.0);
  EXPECT_EQ(snapped_floor(2.7), 2.0);
}

TEST(BinomTailUpper, Examples) {
  for (std::size_t n : {1, 10, 100})
    for (double th : {0.0, 0.3, 1.0}) EXPECT_EQ(binom_tail_upper(n, th, 0.0), 1.0);
  EXPECT_EQ(binom_tail_upper(10, 0.5, 11), 0.0);
  const double exact = oracle::to_double(oracle::exact_binom_upper(10, 3, 10, 5));
  EXPECT_NEAR(binom_tail_upper(10, 0.3, 5), exact, 1e-15);
  EXPECT_THROW(binom_tail_upper(10, 1.5, 5), std::invalid_argument);
}

TEST(BinomTails, AgreeWithExactRationals) {
  for (unsigned n = 1; n <= 30; ++n)
    for (unsigned num : {1u, 3u, 5u, 9u})
      for (unsigned c = 0; c <= n + 1; ++c) {
        const double theta = num / 10.0;
        const double exact = oracle::to_double(oracle::exact_binom_upper(n, num, 10, c));
        EXPECT_NEAR(binom_tail_upper(n, theta, c), exact, 1e-12) << n << ' ' << theta << ' ' << c;
        EXPECT_NEAR(binom_tail_lower(n, theta, double(c) - 1.0), 1.0 - exact, 1e-12);
      }
}

TEST(BinomTailLower, ExamplesAndReflection) {
  EXPECT_EQ(binom_tail_lower(10, 0.4, 10), 1.0);
  EXPECT_EQ(binom_tail_lower(10, 0.4, -1), 0.0);
  EXPECT_NEAR(binom_tail_lower(10, 0.7, 3), binom_tail_upper(10, 0.3, 7), 1e-15);
  for (std::size_t n : {5, 17, 60, 250})
    for (double th : {0.05, 0.2, 0.5, 0.85})
      for (double c = -1.0; c <= double(n) + 1.0; c += 1.0)
        EXPECT_NEAR(binom_tail_lower(n, th, c), binom_tail_upper(n, 1.0 - th, double(n) - c), 1e-12);
}

TEST(BinomTails, LargeNAgainstBoost) {
  for (std::size_t n : {500, 2000, 4096})
    for (double th : {0.1, 0.4})
      for (double frac : {0.05, 0.25, 0.5}) {
        const double c = std::ceil(frac * double(n));
        const boost::math::binomial_distribution<double> d(double(n), th);
        const double ref = boost::math::cdf(boost::math::complement(d, c - 1.0));
        const double got = binom_tail_upper(n, th, c);
        if (ref > 1e-290) EXPECT_NEAR(got / ref, 1.0, 1e-9) << n << ' ' << th << ' ' << c;
        else EXPECT_LT(got, 1e-280);
      }
}

TEST(LemmaTailBound, Examples) {
  const auto r = lemma_tail_bound(100, 0.1, 0.3);
  EXPECT_TRUE(r.valid);
  EXPECT_LE(r.exact_tail, r.lemma_bound);
  EXPECT_EQ(r.first_count, 30u);
  EXPECT_NEAR(r.lemma_bound, r.geometric_prefactor * r.leading_term, 1e-15 * r.lemma_bound);
  EXPECT_THROW(lemma_tail_bound(100, 0.3, 0.3), std::invalid_argument);
  EXPECT_THROW(lemma_tail_bound(100, 0.3, 0.2), std::invalid_argument);
}

TEST(LemmaTailBound, DecaysFasterThanN) {
  double prev = 1.0, prev_n = 1e300;
  for (std::size_t n : {100, 200, 400, 800}) {
    const auto r = lemma_tail_bound(n, 0.1, 0.3);
    EXPECT_LT(r.lemma_bound, prev);
    EXPECT_LT(r.lemma_bound * double(n), prev_n);
    prev = r.lemma_bound;
    prev_n = r.lemma_bound * double(n);
  }
  EXPECT_LT(prev_n, 1e-10);
}

TEST(LemmaTailBound, ValidOverSweep) {
  for (std::size_t n = 1; n <= 500; n += (n < 50 ? 1 : 7))
    for (double th : {0.05, 0.1, 0.2})
      for (double k = th + 0.05; k < 0.9 + 1e-9; k += 0.05) {
        const auto r = lemma_tail_bound(n, th, k);
        EXPECT_GE(r.exact_tail, 0.0);
        EXPECT_LE(r.exact_tail, 1.0);
        if (r.valid) EXPECT_LE(r.exact_tail, r.lemma_bound * (1 + 1e-12)) << n << ' ' << th << ' ' << k;
      }
}

TEST(ProbMmaxBelow, Examples) {
  for (double c : {3.0, 8.5, 16.0})
    EXPECT_NEAR(prob_mmax_below(64, 1, 0.2, c), binom_tail_lower(64, 0.2, snapped_ceil(c) - 1), 1e-12);
  EXPECT_EQ(prob_mmax_below(10, 5, 0.9, 11.0), 1.0);
  EXPECT_EQ(prob_mmax_below(10, 5, 1.0, 10.0), 0.0);
}

TEST(ProbMminBelow, Examples) {
  for (double c : {3.0, 8.5, 16.0})
    EXPECT_NEAR(prob_mmin_below(64, 1, 0.2, c), prob_mmax_below(64, 1, 0.2, c), 1e-12);
  EXPECT_EQ(prob_mmin_below(10, 4, 1.0, 10.0), 0.0);
  EXPECT_EQ(prob_mmin_below(10, 4, 1.0, 3.0), 0.0);
}

TEST(ProbMmaxBelow, MonteCarloAgreement) {
  // n=64, t=8, theta=0.05, c=16 against 10^5 seeded patterns.
  const std::size_t trials = 100000;
  std::size_t hits = 0;
  for (std::size_t s = 0; s < trials; ++s) hits += erasure_stats(sample_erasure({64, 8}, 0.05, s)).m_max < 16;
  const double p = prob_mmax_below(64, 8, 0.05, 16.0);
  const double se = std::sqrt(std::max(p * (1 - p), 1.0 / trials) / trials);
  EXPECT_NEAR(double(hits) / trials, p, 3.0 * se);
}

TEST(ProbMminBelow, MonteCarloAgreement) {
  const std::size_t trials = 20000;
  std::size_t hits = 0;
  for (std::size_t s = 0; s < trials; ++s) hits += erasure_stats(sample_erasure({64, 8}, 0.4, s)).m_min < 16;
  const double p = prob_mmin_below(64, 8, 0.4, 16.0);
  const double se = std::sqrt(p * (1 - p) / trials);
  EXPECT_NEAR(double(hits) / trials, p, 3.0 * se);
  EXPECT_LT(p, 0.1);
}

TEST(Convergence, MmaxSweepIncreasesTowardOne) {
  std::vector<double> v;
  for (std::size_t e = 4; e <= 12; ++e) {
    const std::size_t n = std::size_t{1} << e;
    v.push_back(prob_mmax_below(n, 16, 0.1, double(n) / 4.0));
  }
  // Monotone over the whole sweep, which implies monotone after any local maximum.
  for (std::size_t i = 1; i < v.size(); ++i) EXPECT_GE(v[i], v[i - 1]);
  EXPECT_GT(v.back(), 0.999);
}

TEST(Convergence, MminSweepDecaysToZero) {
  double last = 1.0;
  for (std::size_t e = 4; e <= 12; ++e) {
    const std::size_t n = std::size_t{1} << e;
    const double p = prob_mmin_below(n, 16, 0.4, double(n) / 4.0);
    EXPECT_LE(p, last);
    last = p;
  }
  EXPECT_LT(last, 1e-3);
}

TEST(SupportBudget, Examples) {
  auto b = support_budget(0.05, 10);
  EXPECT_EQ(b.per_row, 9u);
  EXPECT_EQ(b.total, 90u);
  b = support_budget(0.5, 7);
  EXPECT_EQ(b.per_row, 0u);
  EXPECT_EQ(b.total, 0u);
  b = support_budget(0.25, 4);
  EXPECT_EQ(b.per_row, 1u);
  EXPECT_EQ(b.total, 4u);
  EXPECT_THROW(support_budget(0.0, 4), std::invalid_argument);
}
