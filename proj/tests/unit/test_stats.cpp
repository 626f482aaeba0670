#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bianchi/errors.hpp"
#include "bianchi/stats.hpp"
#include "oracles.hpp"

using namespace bianchi;
using namespace bianchi::stats;

namespace {

std::vector<double> uniform_levels(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, static_cast<double>(n));
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

double mean_spacing(const UnfoldedSpectrum& u) {
  return (u.levels.back() - u.levels.front()) / static_cast<double>(u.levels.size() - 1);
}

}  // namespace

TEST(Unfold, ArithmeticProgressionGivesUnitSpacings) {
  std::vector<double> v;
  for (int i = 0; i < 200; ++i) v.push_back(3.5 * i + 1.0);
  for (auto method : {UnfoldMethod::rank, UnfoldMethod::polynomial_fit}) {
    UnfoldOptions o;
    o.method = method;
    const auto u = unfold(v, o);
    for (double s : spacings(u)) EXPECT_NEAR(s, 1.0, 1e-9);
  }
}

TEST(Unfold, MultiplicityExpansion) {
  std::vector<double> v;
  for (int i = 0; i < 150; ++i) v.push_back(i);
  v.push_back(10.0);
  v.push_back(10.0);  // level 10 now has multiplicity 3
  const auto u = unfold(v);
  EXPECT_EQ(u.levels.size(), 152u);
  int zeros = 0;
  for (double s : spacings(u)) zeros += s < kZeroSpacing;
  EXPECT_EQ(zeros, 2);
  UnfoldOptions distinct;
  distinct.levels = LevelMode::distinct;
  EXPECT_EQ(unfold(v, distinct).levels.size(), 150u);
  EXPECT_EQ(u.raw_multiplicities[10], 3);
}

TEST(Unfold, MeanSpacingIsOneAndMonotone) {
  const auto s = spectrum::torus_spectrum(MetricParams(1.0, 1.0), lattice::Lattice2D::square(), [] {
    spectrum::SpectrumOptions o;
    o.E_max = 500.0;
    return o;
  }());
  for (auto mode : {LevelMode::distinct, LevelMode::with_multiplicity}) {
    UnfoldOptions o;
    o.levels = mode;
    const auto u = unfold(s.lines, o);
    EXPECT_NEAR(mean_spacing(u), 1.0, 1e-6);
    EXPECT_TRUE(std::is_sorted(u.levels.begin(), u.levels.end()));
  }
}

TEST(Unfold, Idempotence) {
  auto v = uniform_levels(3000, 5);
  v.push_back(v[10]);
  v.push_back(v[20]);
  for (auto method : {UnfoldMethod::rank, UnfoldMethod::polynomial_fit}) {
    UnfoldOptions o;
    o.method = method;
    const auto once = unfold(v, o);
    const auto twice = unfold(once.levels, o);
    ASSERT_EQ(once.levels.size(), twice.levels.size());
    for (std::size_t i = 0; i < once.levels.size(); ++i) EXPECT_NEAR(once.levels[i], twice.levels[i], 1e-9);
  }
}

TEST(Unfold, SampleSize) {
  EXPECT_THROW(unfold(std::vector<double>(50, 1.0)), SampleSizeError);
  std::vector<double> v(99);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  EXPECT_THROW(unfold(v), SampleSizeError);
  v.push_back(99.0);
  EXPECT_NO_THROW(unfold(v));
}

TEST(Spacings, ZeroAtomIsExcessMultiplicity) {
  const auto s = spectrum::quotient_spectrum(MetricParams(1.0, 2.0), lattice::Lattice2D::square(), 4, [] {
    spectrum::SpectrumOptions o;
    o.E_max = 400.0;
    return o;
  }());
  const auto u = unfold(s.lines);
  const auto h = spacing_distribution(u);
  std::int64_t excess = 0;
  for (const auto& line : s.lines) excess += line.multiplicity - 1;
  EXPECT_DOUBLE_EQ(h.zero_atom, static_cast<double>(excess) / static_cast<double>(u.levels.size() - 1));
  std::int64_t total = 0;
  for (auto c : h.counts) {
    EXPECT_GE(c, 0);
    total += c;
  }
  EXPECT_EQ(total, static_cast<std::int64_t>(u.levels.size()) - 1);
  EXPECT_EQ(h.total, total);
}

UnfoldOptions linear_fit() {
  UnfoldOptions o;
  o.method = UnfoldMethod::polynomial_fit;
  return o;
}

TEST(Spacings, RankUnfoldingIsRigid) {
  // The staircase itself turns distinct levels into a picket fence.
  const auto h = spacing_distribution(unfold(uniform_levels(1000, 99)));
  EXPECT_EQ(h.counts[10], 999);
}

TEST(Spacings, PoissonControl) {
  const auto u = unfold(uniform_levels(10000, 99), linear_fit());
  const auto h = spacing_distribution(u);
  EXPECT_LT(h.ks_distance, 0.02);
  EXPECT_EQ(h.zero_atom, 0.0);
}

TEST(Spacings, PicketFence) {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  const auto h = spacing_distribution(unfold(v));
  EXPECT_GT(h.ks_distance, 0.5);
  EXPECT_EQ(h.counts[10], 999);  // bin [1.0, 1.1)
}

TEST(Spacings, KsMatchesDoubleLoop) {
  std::mt19937_64 rng(3);
  std::exponential_distribution<double> e(1.0);
  std::vector<double> s(1000);
  for (auto& x : s) x = e(rng);
  s[5] = s[6] = 0.0;
  s[7] = s[8];
  EXPECT_NEAR(ks_distance_exponential(s), oracle::ks_double_loop(s), 1e-15);
}

TEST(PairCorrelation, PoissonIsFlat) {
  const auto u = unfold(uniform_levels(100000, 17), linear_fit());
  const auto pc = pair_correlation(u, 1.0, 10);
  EXPECT_LT(max_flatness_deviation(pc), 0.1);
  EXPECT_EQ(pc.zero_pairs, 0);
}

TEST(PairCorrelation, GoldenFormIsFlatSquareFormIsNot) {
  UnfoldOptions o;
  o.levels = LevelMode::distinct;
  o.method = UnfoldMethod::polynomial_fit;
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  const auto ug = unfold(diagonal_form_values(golden, 1e6), o);
  EXPECT_LT(max_flatness_deviation(pair_correlation(ug, 1.0, 10)), 0.1);

  UnfoldOptions m;
  m.method = UnfoldMethod::polynomial_fit;
  const auto us = unfold(diagonal_form_values(1.0, 20000.0), m);
  const auto pc = pair_correlation(us, 1.0, 10);
  EXPECT_GT(static_cast<double>(pc.zero_pairs), static_cast<double>(pc.references));
  const auto h = spacing_distribution(us);
  EXPECT_GT(h.zero_atom, 0.5);
}

TEST(PairCorrelation, ThreadCountDoesNotChangeCounts) {
  const auto u = unfold(uniform_levels(20000, 8));
  const auto a = pair_correlation(u, 2.0, 20, 1);
  const auto b = pair_correlation(u, 2.0, 20, 3);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_THROW(pair_correlation(u, 0.0, 10), DomainError);
}

TEST(FormValues, CountsAndOrder) {
  const auto v = diagonal_form_values(1.0, 25.0);
  std::size_t expected = 0;
  for (std::int64_t K = 1; K <= 25; ++K) expected += static_cast<std::size_t>(oracle::box_repcount(1, 0, 1, K));
  EXPECT_EQ(v.size(), expected);
  EXPECT_TRUE(std::is_sorted(v.begin(), v.end()));
}
