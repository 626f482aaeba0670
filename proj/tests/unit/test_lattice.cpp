#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <numbers>
#include <random>
#include <set>

#include "bianchi/errors.hpp"
#include "bianchi/lattice.hpp"
#include "oracles.hpp"

using namespace bianchi;
using namespace bianchi::lattice;

namespace {

QuadraticForm form_for(const Lattice2D& lat) { return QuadraticForm::from_dual(dual_basis(lat)); }

}  // namespace

TEST(Lattice, RotationMatricesAreExact) {
  const auto r4 = rotation(4);
  EXPECT_EQ(r4[0][0], 0.0);
  EXPECT_EQ(r4[0][1], -1.0);
  EXPECT_EQ(r4[1][0], 1.0);
  const auto r3 = rotation(3);
  EXPECT_EQ(r3[0][0], -0.5);
  EXPECT_DOUBLE_EQ(r3[1][0], std::sqrt(3.0) / 2.0);
  const auto r6 = rotation(6);
  EXPECT_EQ(r6[0][0], 0.5);
  for (int n : {1, 2, 3, 4, 6}) {
    const auto r = rotation(n);
    EXPECT_NEAR(r[0][0] * r[1][1] - r[0][1] * r[1][0], 1.0, 1e-15);
  }
}

TEST(Lattice, CrystallographicRestriction) {
  for (int n : {1, 2, 3, 4, 6}) EXPECT_TRUE(is_crystallographic_order(n));
  for (int n : {0, 5, 7, 8, 12}) EXPECT_FALSE(is_crystallographic_order(n));
  EXPECT_THROW(Lattice2D::square(5), SymmetryError);
}

TEST(Lattice, SymmetryValidation) {
  EXPECT_NO_THROW(Lattice2D::square(4));
  EXPECT_NO_THROW(Lattice2D::square(2));
  EXPECT_THROW(Lattice2D::square(3), SymmetryError);
  EXPECT_THROW(Lattice2D::square(6), SymmetryError);
  EXPECT_NO_THROW(Lattice2D::hexagonal(3));
  EXPECT_NO_THROW(Lattice2D::hexagonal(6));
  EXPECT_THROW(Lattice2D::hexagonal(4), SymmetryError);
  EXPECT_THROW(Lattice2D({1.0, 0.0}, {0.3, 1.7}, 4), SymmetryError);
  EXPECT_NO_THROW(Lattice2D({1.0, 0.0}, {0.3, 1.7}, 2));
}

TEST(Lattice, DegenerateBasisRejected) {
  EXPECT_THROW(Lattice2D({1.0, 2.0}, {2.0, 4.0}), DegenerateLatticeError);
  EXPECT_THROW(Lattice2D({0.0, 0.0}, {1.0, 0.0}), DegenerateLatticeError);
}

TEST(Lattice, DualBasisPairing) {
  const Lattice2D lat({1.3, 0.2}, {-0.4, 2.1});
  const auto d = dual_basis(lat);
  const std::array<Vec2, 2> e{lat.e1(), lat.e2()};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double dot = d.omega[i][0] * e[j][0] + d.omega[i][1] * e[j][1];
      EXPECT_NEAR(dot, i == j ? 2.0 * std::numbers::pi : 0.0, 1e-13);
    }
  }
}

TEST(Lattice, PresetFormsAreTheClassicalOnes) {
  const auto sq = form_for(Lattice2D::square());
  EXPECT_NEAR(sq.a, 1.0, 1e-15);
  EXPECT_NEAR(sq.b, 0.0, 1e-15);
  EXPECT_NEAR(sq.c, 1.0, 1e-15);
  const auto hx = form_for(Lattice2D::hexagonal());
  EXPECT_NEAR(hx.a, 1.0, 1e-15);
  EXPECT_NEAR(hx.b, 1.0, 1e-15);
  EXPECT_NEAR(hx.c, 1.0, 1e-15);
  EXPECT_TRUE(sq.is_integral());
  EXPECT_TRUE(hx.is_integral());
}

TEST(Lattice, FormValueEqualsSquaredNorm) {
  const Lattice2D lat({2.0, 0.5}, {0.1, 1.6});
  const auto d = dual_basis(lat);
  const auto q = QuadraticForm::from_dual(d);
  for (std::int64_t a = -4; a <= 4; ++a) {
    for (std::int64_t b = -4; b <= 4; ++b) {
      const auto v = d.apply_transpose({a, b});
      EXPECT_NEAR(qform_value(q, {a, b}), v[0] * v[0] + v[1] * v[1], 1e-12);
    }
  }
}

TEST(RepresentationCount, DivisorFormulaExamples) {
  EXPECT_EQ(representation_count_divisor(FormKind::square, 1).N, 4);
  EXPECT_EQ(representation_count_divisor(FormKind::square, 2).N, 4);
  EXPECT_EQ(representation_count_divisor(FormKind::square, 3).N, 0);
  EXPECT_EQ(representation_count_divisor(FormKind::square, 5).N, 8);
  EXPECT_EQ(representation_count_divisor(FormKind::square, 25).N, 12);
  EXPECT_EQ(representation_count_divisor(FormKind::hexagonal, 1).N, 6);
  EXPECT_EQ(representation_count_divisor(FormKind::hexagonal, 3).N, 6);
  EXPECT_EQ(representation_count_divisor(FormKind::hexagonal, 7).N, 12);
  EXPECT_EQ(representation_count_divisor(FormKind::hexagonal, 2).N, 0);
  EXPECT_THROW(representation_count_divisor(FormKind::square, 0), DomainError);
}

TEST(RepresentationCount, BruteForceAgreesWithBoxOracle) {
  const auto table_sq = oracle::box_repcount_table(1, 0, 1, 600);
  const auto table_hx = oracle::box_repcount_table(1, 1, 1, 600);
  for (std::int64_t K = 1; K <= 600; ++K) {
    EXPECT_EQ(representation_count_bruteforce(QuadraticForm::square(), static_cast<double>(K)).N,
              table_sq[static_cast<std::size_t>(K)]);
    EXPECT_EQ(representation_count_bruteforce(QuadraticForm::hexagonal(), static_cast<double>(K)).N,
              table_hx[static_cast<std::size_t>(K)]);
    EXPECT_EQ(representation_count_divisor(FormKind::square, K).N, table_sq[static_cast<std::size_t>(K)]);
    EXPECT_EQ(representation_count_divisor(FormKind::hexagonal, K).N, table_hx[static_cast<std::size_t>(K)]);
  }
  EXPECT_EQ(oracle::box_repcount(1, 0, 1, 65), 16);
}

TEST(RepresentationCount, NonIntegralFormComparesWithTolerance) {
  const QuadraticForm q{1.0, 0.0, std::numbers::sqrt2};
  EXPECT_EQ(representation_count_bruteforce(q, 1.0 + std::numbers::sqrt2).N, 4);
  EXPECT_EQ(representation_count_bruteforce(q, 2.0).N, 0);
}

TEST(RepresentationCount, MultiplicativityOfSquareCounts) {
  // r2(mn) / 4 is multiplicative for coprime m, n.
  for (std::int64_t m : {5, 13, 9, 2}) {
    for (std::int64_t n : {17, 29, 49}) {
      if (std::gcd(m, n) != 1) continue;
      EXPECT_EQ(representation_count_divisor(FormKind::square, m * n).N / 4,
                representation_count_divisor(FormKind::square, m).N / 4 *
                    (representation_count_divisor(FormKind::square, n).N / 4));
    }
  }
}

TEST(Density, SmallExamples) {
  // Sums of two squares in [1, 10]: 1 2 4 5 8 9 10.
  EXPECT_EQ(representable_density(FormKind::square, 10).count, 7);
  // x^2 + xy + y^2 in [1, 10]: 1 3 4 7 9.
  EXPECT_EQ(representable_density(FormKind::hexagonal, 10).count, 5);
  const auto d = representable_density(FormKind::square, 1000);
  std::int64_t direct = 0;
  for (std::int64_t K = 1; K <= 1000; ++K) direct += representation_count_divisor(FormKind::square, K).N > 0;
  EXPECT_EQ(d.count, direct);
  EXPECT_NEAR(d.normalized, static_cast<double>(direct) * std::sqrt(std::log(1000.0)) / 1000.0, 1e-15);
  EXPECT_THROW(representable_density(FormKind::square, 1), DomainError);
}

TEST(IndexRotation, IntegralAndOfOrderN) {
  for (auto [lat, n] : std::vector<std::pair<Lattice2D, int>>{
           {Lattice2D::square(), 4}, {Lattice2D::hexagonal(), 3}, {Lattice2D::hexagonal(), 6}}) {
    const auto d = dual_basis(lat);
    const auto m = index_rotation(d, n);
    const IVec2 k{2, 1};
    IVec2 x = k;
    for (int i = 0; i < n; ++i) x = lattice::apply(m, x);
    EXPECT_EQ(x, k);
    const auto q = QuadraticForm::from_dual(d);
    EXPECT_EQ(qform_value_integral(q, lattice::apply(m, k)), qform_value_integral(q, k));
  }
  EXPECT_THROW(index_rotation(dual_basis(Lattice2D::square()), 3), SymmetryError);
}

TEST(Orbits, SizesAndCounts) {
  const auto shells = orbit_decomposition(dual_basis(Lattice2D::square()), 4, 25.0);
  const auto& last = shells.back();
  EXPECT_DOUBLE_EQ(last.K, 25.0);
  EXPECT_EQ(last.vector_count(), 12u);
  EXPECT_EQ(last.orbits.size(), 3u);
  for (const auto& s : shells) {
    for (const auto& o : s.orbits) {
      EXPECT_EQ(o.members.size(), 4u);
      EXPECT_EQ(o.representative, *std::min_element(o.members.begin(), o.members.end()));
    }
  }
  const auto hx = dual_basis(Lattice2D::hexagonal());
  for (int n : {3, 6}) {
    const auto h = orbit_decomposition(hx, n, 7.0);
    EXPECT_EQ(h.back().orbits.size(), 12u / static_cast<std::size_t>(n));
  }
}

TEST(Orbits, EveryVectorAppearsOnce) {
  const Lattice2D lat({1.0, 0.2}, {0.3, 1.1});
  const auto d = dual_basis(lat);
  const auto shells = orbit_decomposition(d, 2, 30.0);
  std::set<IVec2> seen;
  std::size_t total = 0;
  for (const auto& s : shells) {
    for (const auto& o : s.orbits) {
      EXPECT_EQ(o.members.size(), 2u);
      for (const auto& k : o.members) {
        EXPECT_TRUE(seen.insert(k).second);
        ++total;
      }
    }
  }
  EXPECT_EQ(total, enumerate_vectors(QuadraticForm::from_dual(d), 30.0).size());
}

TEST(Enumerate, SortedAndComplete) {
  const auto q = QuadraticForm::hexagonal();
  const auto v = enumerate_vectors(q, 50.0);
  for (std::size_t i = 1; i < v.size(); ++i) EXPECT_LE(qform_value(q, v[i - 1]), qform_value(q, v[i]));
  std::size_t expected = 0;
  for (std::int64_t K = 1; K <= 50; ++K) expected += static_cast<std::size_t>(oracle::box_repcount(1, 1, 1, K));
  EXPECT_EQ(v.size(), expected);
  EXPECT_THROW(enumerate_vectors(q, 1e12, 1000), ResourceError);
}

TEST(ParseLattice, Forms) {
  EXPECT_NO_THROW(parse_lattice("square", 4));
  EXPECT_NO_THROW(parse_lattice("hexagonal", 6));
  const auto g = parse_lattice("generic:1,0,0.3,2", 1);
  EXPECT_DOUBLE_EQ(g.e2()[1], 2.0);
  EXPECT_THROW(parse_lattice("generic:1,0,0.3", 1), DomainError);
  EXPECT_THROW(parse_lattice("generic:1,0,0.3,2,5", 1), DomainError);
  EXPECT_THROW(parse_lattice("triangle", 1), DomainError);
  EXPECT_THROW(parse_lattice("square", 3), SymmetryError);
  EXPECT_EQ(parse_form_kind("hexagonal"), FormKind::hexagonal);
  EXPECT_THROW(parse_form_kind("cubic"), DomainError);
}
