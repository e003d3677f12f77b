#include "ccycles/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "test_support.hpp"

namespace ccycles {
namespace {

using testing::random_config;
using testing::random_radii;

TEST(MorseIndexTest, Examples) {
  Eigen::MatrixXd h(2, 2);
  h << 3.5, -2, -2, 8;
  const auto info = morse_index(h, 1e-8);
  EXPECT_EQ(info.index, 0);
  EXPECT_FALSE(info.degenerate);

  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(3, 3);
  z(0, 0) = -1;
  z(1, 1) = 2;
  const auto zinfo = morse_index(z, 1e-8);
  EXPECT_TRUE(zinfo.degenerate);
  EXPECT_EQ(zinfo.index, 1);

  const auto b = parade_hessian(Radii({1, 2, 3, 4.6}), ParadeSigns({-1, 1, -1}));
  EXPECT_EQ(morse_index(b.matrix, 1e-8).index, 3);
}

TEST(NewtonRefineTest, ParadeIsFixed) {
  const Radii r({1, 2, 3, 4.6});
  for (const auto& s : all_parade_signs(4)) {
    const auto res = newton_refine(r, parade_config(s));
    ASSERT_EQ(res.status, RefineStatus::Converged);
    EXPECT_LE(res.iterations, 1);
    EXPECT_EQ(res.point->config, parade_config(s));
    EXPECT_EQ(res.point->shape, Shape::Parade);
    EXPECT_EQ(res.point->tangential_radius, 0.0);
  }
}

TEST(NewtonRefineTest, EquilateralTriangle) {
  const Radii r({1, 1, 1});
  const auto res = newton_refine(r, ReducedConfiguration({2.0, 4.3}));
  ASSERT_EQ(res.status, RefineStatus::Converged);
  EXPECT_NEAR(res.point->tangential_radius, 0.5, 1e-10);
  EXPECT_NEAR(res.point->perimeter, 3 * std::sqrt(3.0), 1e-10);
  EXPECT_EQ(res.point->morse_index, 2);
}

TEST(NewtonRefineTest, RandomStartsLandOnCatalogue) {
  const Radii r({1, 2, 3});
  const auto cat = three_cc_catalogue(1, 2, 3);
  std::mt19937_64 rng(7);
  int converged = 0;
  for (int i = 0; i < 200; ++i) {
    const auto res = newton_refine(r, random_config(rng, 3));
    if (res.status != RefineStatus::Converged) continue;
    ++converged;
    bool listed = false;
    for (const auto& v : cat)
      if (std::abs(v.value - res.point->perimeter) < 1e-8) listed = true;
    EXPECT_TRUE(listed) << res.point->perimeter;
    EXPECT_LT(res.point->gradient_norm, 1e-12 * (1 + 3));
  }
  EXPECT_GT(converged, 100);
}

TEST(NewtonRefineTest, InvalidInput) {
  EXPECT_THROW(newton_refine(Radii({1, 2, 3}), ReducedConfiguration({0.1})), DimensionMismatch);
  SolverSettings bad;
  bad.max_iter = 0;
  EXPECT_THROW(newton_refine(Radii({1, 2, 3}), ReducedConfiguration({0.1, 0.2}), bad), InvalidArgument);
}

TEST(FindAllTest, OneTwoThree) {
  const auto cat = find_all(Radii({1, 2, 3}));
  ASSERT_EQ(cat.points.size(), 6u);
  EXPECT_EQ(cat.morse_counts, (std::vector<int>{1, 3, 2}));
  EXPECT_EQ(cat.euler_sum, 0);
  EXPECT_TRUE(cat.warnings.empty());
  EXPECT_FALSE(cat.max_is_parade);
  EXPECT_NEAR(cat.points[0].perimeter, 4.0, 1e-12);
  EXPECT_NEAR(cat.points[5].perimeter, 10.708944006804613, 1e-10);
  // mirror pairing
  ASSERT_TRUE(cat.points[5].mirror_partner.has_value());
  EXPECT_EQ(*cat.points[5].mirror_partner, 4u);
  EXPECT_FALSE(cat.points[0].mirror_partner.has_value());
}

TEST(FindAllTest, StationarityEquivalence) {
  const Radii r({1, 2, 3, 4.6});
  const auto cat = find_all(r);
  for (const auto& p : cat.points) {
    EXPECT_LT(p.gradient_norm, 1e-10);
    for (const auto& e : p.vertex_events) EXPECT_NE(e.kind, VertexKind::NonStationary);
    const auto d = tangential_distances(r, p.config);
    const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
    EXPECT_LT(*hi - *lo, 1e-8);
  }
}

TEST(FindAllTest, ExampleFourCircles) {
  const auto cat = find_all(Radii({3, 2.53, 3, 4.6}));
  std::map<Shape, int> shapes;
  for (const auto& p : cat.points) ++shapes[p.shape];
  EXPECT_EQ(shapes[Shape::Parade], 8);
  EXPECT_EQ(shapes[Shape::Convex], 2);
  EXPECT_EQ(shapes[Shape::PartiallyAligned], 8);
  EXPECT_EQ(shapes[Shape::SelfIntersecting], 0);
  EXPECT_EQ(cat.points.size(), 18u);
  EXPECT_EQ(cat.euler_sum, 0);
  EXPECT_TRUE(cat.warnings.size() == 1 && cat.warnings[0] == "non-generic radii");
  for (const auto& p : cat.points)
    if (p.shape != Shape::Parade) {
      ASSERT_TRUE(p.mirror_partner.has_value());
      EXPECT_NEAR(cat.points[*p.mirror_partner].perimeter, p.perimeter, 1e-10);
    }
}

TEST(FindAllTest, EqualRadiiWarns) {
  const auto cat = find_all(Radii({1, 1, 1}));
  ASSERT_FALSE(cat.warnings.empty());
  EXPECT_EQ(cat.warnings[0], "non-generic radii");
  EXPECT_TRUE(cat.non_generic);
}

TEST(FindAllTest, EulerAndMorseBound) {
  std::mt19937_64 rng(11);
  for (std::size_t n : {3u, 4u, 5u}) {
    for (int i = 0; i < 3; ++i) {
      const Radii r = random_radii(rng, n);
      const auto cat = find_all(r);
      EXPECT_EQ(cat.euler_sum, 0);
      EXPECT_GE(cat.points.size(), std::size_t{1} << (n - 1));
      for (const auto& p : cat.points) EXPECT_FALSE(p.degenerate);
    }
  }
}

TEST(FindAllTest, DeterministicOutput) {
  const Radii r({1.3, 2.2, 3.7, 0.9});
  const auto a = find_all(r);
  const auto b = find_all(r);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    EXPECT_EQ(a.points[i].config, b.points[i].config);
    EXPECT_EQ(a.points[i].perimeter, b.points[i].perimeter);
  }
}

TEST(FindAllTest, FullHessianAnnihilatesOnes) {
  const Radii r({1.3, 2.2, 3.7, 0.9});
  for (const auto& p : find_all(r).points) {
    const Eigen::MatrixXd h = full_hessian(r, p.config);
    EXPECT_LT((h * Eigen::VectorXd::Ones(4)).norm(), 1e-8);
  }
}

TEST(BruteForceOracleTest, MatchesFindAllForThreeCircles) {
  const Radii r({1, 2, 3});
  const auto oracle = brute_force_oracle(r, 360);
  EXPECT_TRUE(catalogues_match(oracle, find_all(r), 1e-6));
  EXPECT_EQ(oracle.points.size(), 6u);
}

TEST(BruteForceOracleTest, ExampleFourCircles) {
  const Radii r({3, 2.53, 3, 4.6});
  EXPECT_TRUE(catalogues_match(brute_force_oracle(r, 72), find_all(r), 1e-6));
}

TEST(BruteForceOracleTest, EqualRadiiAreFlagged) {
  const auto oracle = brute_force_oracle(Radii({1, 1, 1}), 60);
  EXPECT_TRUE(oracle.non_generic);
  EXPECT_FALSE(oracle.warnings.empty());
}

TEST(BruteForceOracleTest, RefusesLargeN) {
  EXPECT_THROW(brute_force_oracle(Radii({1, 2, 3, 4, 5}), 10), InvalidArgument);
}

TEST(PentagramTest, NonDegenerateMaximum) {
  const Radii r({1, 1, 1, 1, 1});
  std::vector<double> full;
  for (int k = 0; k < 5; ++k) full.push_back(4.0 * kPi * k / 5.0);
  const auto cfg = reduce_full_angles(full);
  EXPECT_LT(gradient(r, cfg).norm(), 1e-12);
  const auto info = morse_index(hessian(r, cfg), 1e-8);
  EXPECT_EQ(info.index, 4);
  EXPECT_FALSE(info.degenerate);
  EXPECT_EQ(shape_of(make_circuit(r, cfg), 1e-8), Shape::SelfIntersecting);
}

}  // namespace
}  // namespace ccycles
