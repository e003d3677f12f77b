#include "ccycles/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ccycles/closed_forms.hpp"
#include "ccycles/solver.hpp"
#include "test_support.hpp"

namespace ccycles {
namespace {

using testing::euclidean_perimeter;
using testing::fd_gradient;
using testing::fd_hessian;
using testing::random_config;
using testing::random_radii;
using testing::relative_error;

TEST(RadiiTest, RejectsInvalidInput) {
  EXPECT_THROW(Radii({1.0, 2.0}), InvalidArgument);
  EXPECT_THROW(Radii({1.0, 0.0, 2.0}), InvalidArgument);
  EXPECT_THROW(Radii({1.0, -1.0, 2.0}), InvalidArgument);
  EXPECT_THROW(Radii({1.0, NAN, 2.0}), InvalidArgument);
}

TEST(RadiiTest, GenericPredicate) {
  EXPECT_TRUE(Radii({1, 2, 3}).generic());
  EXPECT_FALSE(Radii({1, 1, 3}).generic());
  EXPECT_FALSE(Radii({3, 2.53, 3, 4.6}).generic());
  EXPECT_TRUE(Radii({1, 1 + 1e-9, 3}).generic());
}

TEST(ConfigurationTest, AnglesAreReducedModTwoPi) {
  const ReducedConfiguration a({-0.5, 7.0});
  EXPECT_NEAR(a[0], kTwoPi - 0.5, 1e-15);
  EXPECT_NEAR(a[1], 7.0 - kTwoPi, 1e-15);
  EXPECT_LT(torus_distance(a, ReducedConfiguration({kTwoPi - 0.5, 7.0 + kTwoPi})), 1e-14);
  EXPECT_NEAR(torus_distance(ReducedConfiguration({0.05, 0.0}), ReducedConfiguration({kTwoPi - 0.05, 0.0})), 0.1,
              1e-14);
}

TEST(PerimeterTest, ShortestParadeOfOneTwoThree) {
  EXPECT_DOUBLE_EQ(perimeter(Radii({1, 2, 3}), ReducedConfiguration({0.0, 0.0})), 4.0);
}

TEST(PerimeterTest, EquilateralTriangle) {
  const ReducedConfiguration eq({2 * kPi / 3, 4 * kPi / 3});
  EXPECT_NEAR(perimeter(Radii({1, 1, 1}), eq), 3 * std::sqrt(3.0), 1e-14);
}

TEST(PerimeterTest, MatchesCartesianDistances) {
  const Radii r({1, 2, 3});
  const ReducedConfiguration c({0.7, 2.1});
  EXPECT_NEAR(perimeter(r, c), euclidean_perimeter(r, c), 1e-13);
}

TEST(PerimeterTest, MirrorInvariant) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const Radii r = random_radii(rng, 3 + i % 4);
    const auto c = random_config(rng, r.size());
    EXPECT_NEAR(perimeter(r, c), perimeter(r, c.mirrored()), 1e-12);
  }
}

TEST(PerimeterTest, DimensionMismatchThrows) {
  EXPECT_THROW(perimeter(Radii({1, 2, 3}), ReducedConfiguration({0.1, 0.2, 0.3})), DimensionMismatch);
}

TEST(GradientTest, ZeroAtEveryParade) {
  for (std::size_t n = 3; n <= 6; ++n) {
    std::vector<double> rv;
    for (std::size_t i = 0; i < n; ++i) rv.push_back(1.0 + 0.7 * static_cast<double>(i));
    const Radii r(rv);
    for (const auto& s : all_parade_signs(n)) {
      const Eigen::VectorXd g = gradient(r, parade_config(s));
      for (Eigen::Index i = 0; i < g.size(); ++i) EXPECT_EQ(g[i], 0.0) << s.to_string();
    }
  }
}

TEST(GradientTest, MatchesFiniteDifferences) {
  const Radii r({1, 2, 3});
  const ReducedConfiguration c({0.7, 2.1});
  const Eigen::VectorXd fd = fd_gradient(r, c);
  EXPECT_LT((gradient(r, c) - fd).norm() / fd.norm(), 1e-6);
}

TEST(GradientTest, FullGradientSumsToZero) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const Radii r = random_radii(rng, 3 + i % 4);
    EXPECT_LT(std::abs(full_gradient(r, random_config(rng, r.size())).sum()), 1e-12);
  }
}

TEST(GradientTest, MirrorAntisymmetry) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const Radii r = random_radii(rng, 4);
    const auto c = random_config(rng, 4);
    EXPECT_LT((gradient(r, c) + gradient(r, c.mirrored())).norm(), 1e-12);
  }
}

TEST(GradientTest, CoincidentVerticesAreSingular) {
  const Radii r({2, 2, 3});
  EXPECT_THROW(gradient(r, ReducedConfiguration({1.0, 1.0})), SingularConfiguration);
  EXPECT_THROW(hessian(r, ReducedConfiguration({1.0, 1.0})), SingularConfiguration);
  EXPECT_NO_THROW(perimeter(r, ReducedConfiguration({1.0, 1.0})));
}

TEST(HessianTest, ShortestParadeOfOneTwoThree) {
  const Eigen::MatrixXd h = hessian(Radii({1, 2, 3}), ReducedConfiguration({0.0, 0.0}));
  EXPECT_NEAR(h(0, 0), 3.5, 1e-14);
  EXPECT_NEAR(h(0, 1), -2.0, 1e-14);
  EXPECT_NEAR(h(1, 0), -2.0, 1e-14);
  EXPECT_NEAR(h(1, 1), 8.0, 1e-14);
  EXPECT_NEAR(h.determinant(), 24.0, 1e-12);
  EXPECT_LT(relative_error(h, fd_hessian(Radii({1, 2, 3}), ReducedConfiguration({0.0, 0.0}))), 1e-5);
}

TEST(HessianTest, MatchesFiniteDifferencesAtRandomConfig) {
  const Radii r({1, 2, 3, 4.6});
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const auto c = random_config(rng, 4);
    EXPECT_LT(relative_error(hessian(r, c), fd_hessian(r, c)), 1e-5);
  }
}

TEST(HessianTest, FullHessianIsCyclicTridiagonal) {
  std::mt19937_64 rng(9);
  const Radii r = random_radii(rng, 6);
  const Eigen::MatrixXd h = full_hessian(r, random_config(rng, 6));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      const int d = std::abs(i - j);
      if (d > 1 && d != 5) {
        EXPECT_EQ(h(i, j), 0.0);
      }
    }
  EXPECT_LT((h - h.transpose()).norm(), 1e-14);
}

TEST(HessianTest, AnnihilatesRotationAtCriticalPoints) {
  const Radii r({1, 2, 3, 4.6});
  const auto cat = find_all(r);
  for (const auto& p : cat.points) {
    const Eigen::MatrixXd h = full_hessian(r, p.config);
    EXPECT_LT((h * Eigen::VectorXd::Ones(4)).norm(), 1e-8);
  }
}

TEST(ClassifyVerticesTest, ParadeVerticesAreRefractions) {
  const auto events = classify_vertices(Radii({1, 2, 3}), ReducedConfiguration({0.0, 0.0}), 1e-8);
  for (const auto& e : events) EXPECT_EQ(e.kind, VertexKind::Refraction);
}

TEST(ClassifyVerticesTest, EquilateralVerticesAreReflections) {
  const auto events =
      classify_vertices(Radii({1, 1, 1}), ReducedConfiguration({2 * kPi / 3, 4 * kPi / 3}), 1e-8);
  for (const auto& e : events) {
    EXPECT_EQ(e.kind, VertexKind::Reflection);
    EXPECT_LT(e.residual, 1e-12);
  }
}

TEST(ClassifyVerticesTest, RandomConfigHasNonStationaryVertex) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 50; ++i) {
    const Radii r = random_radii(rng, 4);
    const auto c = random_config(rng, 4);
    ASSERT_GT(gradient(r, c).norm(), 1e-6);
    const auto events = classify_vertices(r, c, 1e-8);
    EXPECT_TRUE(std::any_of(events.begin(), events.end(),
                            [](const VertexEvent& e) { return e.kind == VertexKind::NonStationary; }));
  }
}

TEST(TangentialDistancesTest, ParadeAndEquilateral) {
  for (double d : tangential_distances(Radii({1, 2, 3}), ReducedConfiguration({kPi, 0.0}))) EXPECT_EQ(d, 0.0);
  for (double d : tangential_distances(Radii({1, 1, 1}), ReducedConfiguration({2 * kPi / 3, 4 * kPi / 3})))
    EXPECT_NEAR(d, 0.5, 1e-14);
}

TEST(TangentialDistancesTest, EqualAtConvergedCriticalPoint) {
  const Radii r({1, 2, 3});
  const auto res = newton_refine(r, ReducedConfiguration({1.9, 3.8}));
  ASSERT_EQ(res.status, RefineStatus::Converged);
  const auto d = tangential_distances(r, res.point->config);
  EXPECT_LT(*std::max_element(d.begin(), d.end()) - *std::min_element(d.begin(), d.end()), 1e-8);
}

// Gradient norm < 1e-10 <=> all vertices Fermat <=> equal tangential distances.
TEST(FermatEquivalenceTest, HoldsAtCriticalAndRandomConfigs) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const Radii r = random_radii(rng, 3 + trial % 2);
    std::vector<ReducedConfiguration> configs;
    for (const auto& p : find_all(r).points) configs.push_back(p.config);
    for (int i = 0; i < 20; ++i) configs.push_back(random_config(rng, r.size()));
    for (const auto& c : configs) {
      const bool stationary = gradient(r, c).norm() < 1e-10;
      const auto events = classify_vertices(r, c, 1e-8);
      const bool fermat = std::none_of(events.begin(), events.end(),
                                       [](const VertexEvent& e) { return e.kind == VertexKind::NonStationary; });
      const auto d = tangential_distances(r, c);
      const bool tangent = *std::max_element(d.begin(), d.end()) - *std::min_element(d.begin(), d.end()) < 1e-8;
      EXPECT_EQ(stationary, fermat);
      EXPECT_EQ(stationary, tangent);
    }
  }
}

TEST(ShapeTest, Parade) {
  const Radii r({1, 2, 3, 4});
  const auto s = ParadeSigns({1, -1, 1});
  EXPECT_EQ(shape_of(make_circuit(r, parade_config(s)), 1e-8), Shape::Parade);
}

TEST(ShapeTest, InscribedSquareIsConvex) {
  EXPECT_EQ(shape_of(make_circuit(Radii({1, 1, 1, 1}), ReducedConfiguration({kPi / 2, kPi, 3 * kPi / 2})), 1e-8),
            Shape::Convex);
}

TEST(ShapeTest, PentagramIsSelfIntersecting) {
  const ReducedConfiguration star =
      reduce_full_angles(std::vector<double>{0.0, 4 * kPi / 5, 8 * kPi / 5, 2 * kPi / 5, 6 * kPi / 5});
  EXPECT_EQ(shape_of(make_circuit(Radii({1, 1, 1, 1, 1}), star), 1e-8), Shape::SelfIntersecting);
}

TEST(ShapeTest, NonConvexSimpleQuadrilateralIsSpear) {
  // Dart: the vertex on the small circle points inward.
  const Radii r({3, 0.5, 3, 4.6});
  const ReducedConfiguration dart({2.0, kPi, 4.28});
  EXPECT_EQ(shape_of(make_circuit(r, dart), 1e-8), Shape::Spear);
}

TEST(ShapeTest, ShapeNamesRoundTrip) {
  for (Shape s : {Shape::Parade, Shape::Convex, Shape::Spear, Shape::PartiallyAligned, Shape::SelfIntersecting,
                  Shape::Other})
    EXPECT_EQ(shape_from_string(to_string(s)), s);
  EXPECT_THROW(shape_from_string("blob"), InvalidArgument);
}

}  // namespace
}  // namespace ccycles
