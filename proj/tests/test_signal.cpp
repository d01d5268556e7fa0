#include <gtest/gtest.h>

#include <random>

#include "gabor/signal.hpp"
#include "oracle.hpp"

using namespace gabor;

namespace {

Signal2D delta(GridDims d, std::size_t x, std::size_t a, Complex v = 1.0) {
  std::vector<Complex> vals(d.size(), 0.0);
  vals[d.index(x, a)] = v;
  return Signal2D(d, std::move(vals));
}

Signal2D random_sparse(GridDims d, std::mt19937_64& gen, double density) {
  std::bernoulli_distribution keep(density);
  std::uniform_int_distribution<int> val(-3, 3);
  std::vector<Complex> v(d.size(), 0.0);
  for (auto& z : v)
    if (keep(gen)) z = {double(val(gen)), double(val(gen))};
  return Signal2D(d, std::move(v));
}

}  // namespace

TEST(GridDims, RejectsEmptyAxes) {
  EXPECT_THROW(GridDims(0, 3), std::invalid_argument);
  EXPECT_THROW(GridDims(4, 0), std::invalid_argument);
  EXPECT_EQ(GridDims(4, 3).size(), 12u);
  EXPECT_EQ(GridDims(4, 3).index(1, 2), 9u);
}

TEST(Signal2D, ValidatesLengthAndFiniteness) {
  EXPECT_THROW(Signal2D(GridDims(2, 2), std::vector<Complex>(3)), std::invalid_argument);
  EXPECT_THROW(Signal2D(GridDims(1, 1), {Complex(std::nan(""), 0)}), std::invalid_argument);
  EXPECT_THROW(Signal2D(GridDims(1, 1), {Complex(0, INFINITY)}), std::invalid_argument);
  const Signal2D s(GridDims(2, 2), {1.0, 2.0, 3.0, 4.0});
  EXPECT_EQ(s.at(1, 0), Complex(2.0));
  EXPECT_EQ(s.row(1)[0], Complex(3.0));
  EXPECT_EQ(s.column(1), (std::vector<Complex>{2.0, 4.0}));
}

TEST(Support, ZeroSignalIsEmpty) {
  EXPECT_TRUE(support(Signal2D::zeros({4, 3}), 0.0).empty());
}

TEST(Support, SingleDelta) {
  const auto s = support(delta({4, 3}, 0, 0), 0.0);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0], (Position{0, 0}));
}

TEST(Support, ThresholdDropsTinyEntries) {
  std::vector<Complex> v(12, 0.0);
  const GridDims d(4, 3);
  v[d.index(1, 1)] = 1e-12;
  v[d.index(2, 2)] = 1.0;
  const auto s = support(Signal2D(d, v), 1e-9);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0], (Position{2, 2}));
}

TEST(Support, RejectsNegativeTolerance) {
  EXPECT_THROW(support(Signal2D::zeros({2, 2}), -1.0), std::invalid_argument);
}

TEST(Support, MonotoneInTolerance) {
  std::mt19937_64 gen(3);
  for (int i = 0; i < 50; ++i) {
    const Signal2D f = oracle::random_signal({7, 5}, gen);
    auto loose = support(f, 0.5), tight = support(f, 1.5);
    std::sort(loose.begin(), loose.end());
    std::sort(tight.begin(), tight.end());
    EXPECT_TRUE(std::includes(loose.begin(), loose.end(), tight.begin(), tight.end()));
  }
}

TEST(SupportProfile, DeltaAndOnes) {
  const auto p = support_profile(delta({4, 3}, 0, 0), 0.0);
  EXPECT_EQ(p.row_supports, (std::vector<std::size_t>{1, 0, 0}));
  EXPECT_EQ(p.e_max, 1u);
  EXPECT_EQ(p.total_support, 1u);

  const auto q = support_profile(Signal2D({4, 3}, std::vector<Complex>(12, 1.0)), 0.0);
  EXPECT_EQ(q.row_supports, (std::vector<std::size_t>{4, 4, 4}));
  EXPECT_EQ(q.e_max, 4u);
  EXPECT_EQ(q.total_support, 12u);
}

TEST(SupportProfile, MatchesBruteForceAndBounds) {
  std::mt19937_64 gen(11);
  for (int i = 0; i < 100; ++i) {
    const GridDims d(1 + gen() % 9, 1 + gen() % 9);
    const Signal2D f = random_sparse(d, gen, 0.3);
    const auto p = support_profile(f, 0.0);
    for (std::size_t a = 0; a < d.t; ++a) {
      std::size_t c = 0;
      for (std::size_t x = 0; x < d.n; ++x) c += f.at(x, a) != Complex(0.0);
      EXPECT_EQ(p.row_supports[a], c);
    }
    EXPECT_LE(p.e_max, d.n);
    EXPECT_LE(p.e_max, p.total_support == 0 ? 0 : p.total_support);
    EXPECT_LE(p.total_support, d.t * p.e_max);
    EXPECT_EQ(p.total_support, support(f, 0.0).size());
  }
}

TEST(ColumnSupportMax, Basics) {
  EXPECT_EQ(column_support_max(Signal2D::zeros({4, 3}), 0.0), 0u);
  std::vector<Complex> v(12, 0.0);
  for (std::size_t a = 0; a < 3; ++a) v[GridDims(4, 3).index(2, a)] = 1.0;
  EXPECT_EQ(column_support_max(Signal2D({4, 3}, v), 0.0), 3u);
}

TEST(ColumnSupportMax, MatchesBruteForce) {
  std::mt19937_64 gen(12);
  for (int i = 0; i < 100; ++i) {
    const GridDims d(1 + gen() % 9, 1 + gen() % 9);
    const Signal2D f = random_sparse(d, gen, 0.4);
    std::size_t best = 0;
    for (std::size_t x = 0; x < d.n; ++x) {
      std::size_t c = 0;
      for (std::size_t a = 0; a < d.t; ++a) c += f.at(x, a) != Complex(0.0);
      best = std::max(best, c);
    }
    EXPECT_EQ(column_support_max(f, 0.0), best);
  }
}

TEST(RelativeError, Definition) {
  const std::vector<Complex> a{1.0, 0.0}, b{1.0, 1.0};
  EXPECT_NEAR(relative_error(a, b), std::sqrt(0.5), 1e-15);
  EXPECT_DOUBLE_EQ(relative_error(std::vector<Complex>{3.0}, std::vector<Complex>{0.0}), 3.0);
  EXPECT_THROW(relative_error(a, std::vector<Complex>{1.0}), std::invalid_argument);
}
