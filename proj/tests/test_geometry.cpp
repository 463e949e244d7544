#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "cubeshadow/geometry.hpp"
#include "cubeshadow/oracle.hpp"
#include "cubeshadow/sphere_sampler.hpp"

namespace cubeshadow {
namespace {

UnitVector basis(std::size_t n, std::size_t k) {
  std::vector<double> c(n, 0.0);
  c[k] = 1.0;
  return UnitVector::normalize(c);
}

UnitVector diagonal(std::size_t n) { return UnitVector::normalize(std::vector<double>(n, 1.0)); }

TEST(UnitVectorTest, NormalizesAndRejectsZero) {
  const UnitVector u = UnitVector::normalize({3.0, 4.0});
  EXPECT_DOUBLE_EQ(u[0], 0.6);
  EXPECT_DOUBLE_EQ(u[1], 0.8);
  EXPECT_THROW(UnitVector::normalize({0.0, 0.0}), ZeroVector);
  EXPECT_THROW(UnitVector::normalize({}), InvalidInput);
  EXPECT_THROW(UnitVector::normalize({1.0, NAN}), InvalidInput);
  EXPECT_THROW(UnitVector::normalize({1.0, INFINITY}), InvalidInput);
}

TEST(UnitVectorTest, NormWithinToleranceForExtremeScales) {
  for (double scale : {1e-300, 1e-20, 1.0, 1e20, 1e300}) {
    std::vector<double> raw{scale, -2 * scale, 0.5 * scale, 7 * scale};
    const UnitVector u = UnitVector::normalize(raw);
    EXPECT_LE(std::abs(l2_norm(u.coords()) - 1.0), Tolerances::norm_tol(u.dim())) << scale;
  }
}

TEST(VertexTest, RejectsNonSigns) {
  const std::vector<int> bad{1, 0, -1};
  EXPECT_THROW(Vertex::from_signs(bad), InvalidInput);
  const std::vector<int> good{1, -1};
  EXPECT_EQ(Vertex::from_signs(good).to_string(), "+-");
}

TEST(VertexTest, LexicographicOrderPutsPlusFirst) {
  const std::vector<int> a{1, -1, 1}, b{-1, 1, 1}, c{1, 1, -1};
  EXPECT_LT(Vertex::from_signs(a), Vertex::from_signs(b));
  EXPECT_LT(Vertex::from_signs(c), Vertex::from_signs(a));
  // Packed bits order agrees with vertex order.
  for (std::uint64_t x = 0; x < 15; ++x) EXPECT_LT(Vertex::from_bits(4, x), Vertex::from_bits(4, x + 1));
}

TEST(NormsTest, Examples) {
  const Norms e = norms(basis(3, 0));
  EXPECT_EQ(e.l1, 1.0);
  EXPECT_EQ(e.l2, 1.0);
  EXPECT_EQ(e.linf, 1.0);

  for (std::size_t n : {2u, 5u, 16u}) {
    const Norms d = norms(diagonal(n));
    EXPECT_NEAR(d.l1, std::sqrt(n), 1e-14);
    EXPECT_NEAR(d.l2, 1.0, 1e-15);
    EXPECT_NEAR(d.linf, 1.0 / std::sqrt(n), 1e-15);
  }

  const Norms p = norms(UnitVector::normalize({3.0, 4.0}));
  EXPECT_NEAR(p.l1, 1.4, 1e-15);
  EXPECT_NEAR(p.l2, 1.0, 1e-15);
  EXPECT_NEAR(p.linf, 0.8, 1e-15);
}

TEST(NormsTest, OrderingProperty) {
  for (std::uint64_t i = 0; i < 500; ++i) {
    const std::size_t n = 1 + i % 40;
    const Norms nm = norms(sample_sphere(n, 3, i));
    EXPECT_GE(nm.l1, nm.l2);
    EXPECT_GE(nm.l2, nm.linf);
    EXPECT_LE(nm.l1, n * nm.linf * (1 + 1e-15));
  }
}

TEST(ProjectTest, Examples) {
  const auto e1 = basis(3, 0);
  const std::vector<double> x1{1, 0, 0}, x2{0, 1, 0};
  EXPECT_EQ(project(e1, x1), (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(project(e1, x2), x2);

  const auto d = diagonal(2);
  const std::vector<double> ones{1, 1};
  for (double c : project(d, ones)) EXPECT_NEAR(c, 0.0, 1e-15);

  const std::vector<double> short_x{1, 2};
  EXPECT_THROW(project(e1, short_x), DimensionMismatch);
}

TEST(ProjectTest, OrthogonalAndIdempotent) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  const double proj_tol = 1e-12;
  for (std::uint64_t i = 0; i < 300; ++i) {
    const std::size_t n = 1 + i % 30;
    const UnitVector u = sample_sphere(n, 5, i);
    std::vector<double> x(n);
    for (double& v : x) v = 10 * g(rng);
    const auto p = project(u, x);
    EXPECT_LE(std::abs(dot(p, u.coords())), proj_tol * (1 + l2_norm(x)));
    const auto pp = project(u, p);
    for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(pp[k], p[k], proj_tol * (1 + l2_norm(x)));
  }
}

TEST(CanonicalVertexTest, Examples) {
  EXPECT_EQ(canonical_vertex(UnitVector::normalize({0.6, 0.8})).to_string(), "++");
  EXPECT_EQ(canonical_vertex(UnitVector::normalize({0.6, -0.8})).to_string(), "+-");
  EXPECT_EQ(canonical_vertex(basis(3, 0)).to_string(), "+++");
  // Below zero_tol counts as zero and takes +1.
  EXPECT_EQ(canonical_vertex(UnitVector::normalize({1.0, -1e-15})).to_string(), "++");
  EXPECT_EQ(canonical_vertex(UnitVector::normalize({1.0, -1e-12})).to_string(), "+-");
}

TEST(ShadowTest, Examples) {
  for (std::size_t n : {1u, 4u, 9u}) {
    const ShadowReport r = shadow(diagonal(n), Vertex::all_ones(n));
    EXPECT_NEAR(r.inf_norm, 0.0, 1e-15);
    EXPECT_TRUE(r.inside);
  }

  const std::vector<int> s{-1, 1, 1, 1};
  const ShadowReport r = shadow(basis(4, 0), Vertex::from_signs(s));
  EXPECT_EQ(r.shadow, (std::vector<double>{0, 1, 1, 1}));
  EXPECT_EQ(r.inf_norm, 1.0);
  EXPECT_TRUE(r.inside);

  const UnitVector u = UnitVector::normalize({0.6, 0.8});
  const ShadowReport q = shadow(u, Vertex::all_ones(2));
  EXPECT_NEAR(q.inner_product, 1.4, 1e-15);
  EXPECT_NEAR(q.shadow[0], 0.16, 1e-15);
  EXPECT_NEAR(q.shadow[1], -0.12, 1e-15);
  EXPECT_NEAR(q.inf_norm, 0.16, 1e-15);
  EXPECT_TRUE(q.inside);
  // Cross-check against the generic projection.
  const std::vector<double> ones{1, 1};
  const auto p = project(u, ones);
  EXPECT_NEAR(p[0], q.shadow[0], 1e-15);
  EXPECT_NEAR(p[1], q.shadow[1], 1e-15);

  EXPECT_THROW(shadow(u, Vertex::all_ones(3)), DimensionMismatch);
}

TEST(ShadowTest, InfNormIsExactMaxOfShadow) {
  for (std::uint64_t i = 0; i < 200; ++i) {
    const std::size_t n = 1 + i % 12;
    const UnitVector u = sample_sphere(n, 8, i);
    const ShadowReport r = shadow(u, Vertex::from_bits(n, i % (std::uint64_t{1} << n)));
    double m = 0;
    for (double c : r.shadow) m = std::max(m, std::abs(c));
    EXPECT_EQ(r.inf_norm, m);
    EXPECT_EQ(r.inside, m <= 1.0 + Tolerances{}.inside_tol);
  }
}

TEST(ClosedFormTest, Examples) {
  EXPECT_NEAR(shadow_norm_closed_form(diagonal(2)), 0.0, 1e-15);
  EXPECT_EQ(shadow_norm_closed_form(basis(3, 0)), 1.0);
  for (std::size_t n : {3u, 7u, 25u}) EXPECT_NEAR(shadow_norm_closed_form(diagonal(n)), 0.0, 1e-14);
}

TEST(ClosedFormTest, MatchesDirectShadowOfCanonicalVertex) {
  // Include vectors with exact zeros and sign flips.
  for (std::uint64_t i = 0; i < 3000; ++i) {
    const std::size_t n = 1 + i % 40;
    const UnitVector base = sample_sphere(n, 21, i);
    std::vector<double> c(base.coords().begin(), base.coords().end());
    if (i % 3 == 0 && n > 1) c[i % n] = 0.0;
    const UnitVector u = UnitVector::normalize(c);
    const double direct = shadow(u, canonical_vertex(u)).inf_norm;
    EXPECT_NEAR(shadow_norm_closed_form(u), direct, 1e-12 * n) << "i=" << i;
  }
}

TEST(CriterionTest, Examples) {
  const CriterionResult d = criterion(diagonal(50));
  EXPECT_NEAR(d.product, 1.0, 1e-14);
  EXPECT_TRUE(d.satisfied);
  EXPECT_FALSE(d.degenerate_zero_coords);
  EXPECT_FALSE(d.near_vertex_orthogonal.has_value());

  const CriterionResult e = criterion(basis(3, 1));
  EXPECT_EQ(e.product, 1.0);
  EXPECT_TRUE(e.degenerate_zero_coords);
  EXPECT_EQ(e.witness.to_string(), "+++");

  const CriterionResult p = criterion(UnitVector::normalize({0.6, 0.8}));
  EXPECT_NEAR(p.product, 1.12, 1e-15);
}

TEST(CriterionTest, BoundaryIsInclusiveAndMarginExcludesIt) {
  const std::vector<double> c{0.5, 0.5, 0.5, 0.5};  // product exactly 1
  const UnitVector u = UnitVector::from_unit_coords(c);
  ASSERT_EQ(criterion(u).product, 1.0);
  Tolerances tol;
  tol.criterion_tol = -1.0;  // threshold exactly 1: inclusive
  EXPECT_TRUE(criterion(u, tol).satisfied);
  tol.criterion_tol = -1.0 - 1e-9;
  EXPECT_FALSE(criterion(u, tol).satisfied);
}

TEST(CriterionTest, ProductInvariantUnderPermutationAndSignFlips) {
  std::mt19937_64 rng(99);
  for (std::uint64_t i = 0; i < 500; ++i) {
    const std::size_t n = 2 + i % 60;
    const UnitVector u = sample_sphere(n, 17, i);
    std::vector<double> c(u.coords().begin(), u.coords().end());
    std::shuffle(c.begin(), c.end(), rng);
    for (double& x : c)
      if (rng() & 1) x = -x;
    const UnitVector v = UnitVector::from_unit_coords(c);
    EXPECT_EQ(criterion(u).product, criterion(v).product);
  }
}

TEST(CriterionTest, SufficiencyWithMargin) {
  const double margin = 1e-6;
  int checked = 0;
  for (std::uint64_t i = 0; i < 4000; ++i) {
    const std::size_t n = 2 + i % 30;
    const UnitVector u = sample_sphere(n, 31, i);
    const CriterionResult c = criterion(u);
    if (c.product > 2.0 - margin) continue;
    ++checked;
    EXPECT_TRUE(shadow(u, c.witness).inside) << "i=" << i;
  }
  EXPECT_GT(checked, 1000);
}

TEST(CriterionTest, NecessityWithMarginAgainstOracle) {
  const double margin = 1e-6;
  int checked = 0;
  for (std::uint64_t i = 0; i < 3000; ++i) {
    const std::size_t n = 11 + i % 4;
    const UnitVector u = sample_sphere(n, 41, i);
    const CriterionResult c = criterion(u);
    if (c.product <= 2.0 + margin) continue;
    const OracleVerdict v = enumerate_shadows(u);
    if (v.min_abs_inner_product < 1e-9) continue;
    ++checked;
    EXPECT_FALSE(v.exists_inside) << "i=" << i;
  }
  EXPECT_GT(checked, 20);
}

TEST(CriterionTest, WrongSignAtPositiveCoordinatePushesBelowMinusOne) {
  // u > 0 and <eps,u> > 0: eps_k = -1 at u_k > 0 gives shadow_k < -1.
  for (std::uint64_t i = 0; i < 300; ++i) {
    const std::size_t n = 2 + i % 10;
    const UnitVector base = sample_sphere(n, 51, i);
    std::vector<double> c(base.coords().begin(), base.coords().end());
    for (double& x : c) x = std::abs(x);
    const UnitVector u = UnitVector::normalize(c);
    for (std::uint64_t bits = 1; bits < (std::uint64_t{1} << n); ++bits) {
      const Vertex eps = Vertex::from_bits(n, bits);
      const ShadowReport r = shadow(u, eps);
      if (r.inner_product <= 0) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (eps[k] == -1 && u[k] > 0) {
          EXPECT_LT(r.shadow[k], -1.0);
        }
      }
    }
  }
}

}  // namespace
}  // namespace cubeshadow
