#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "symgeo/classical.hpp"
#include "symgeo/extremal.hpp"
#include "symgeo/geometric_measure.hpp"
#include "symgeo/majorana.hpp"

using namespace symgeo;

namespace {

std::vector<double> pair_distances(const std::vector<Eigen::Vector3d>& p) {
  std::vector<double> d;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) d.push_back((p[i] - p[j]).norm());
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<Eigen::Vector3d> unit_vectors(const std::vector<SpherePoint>& pts) {
  std::vector<Eigen::Vector3d> v;
  for (const auto& p : pts) v.push_back(p.bloch());
  return v;
}

void expect_congruent(const std::vector<Eigen::Vector3d>& a, const std::vector<Eigen::Vector3d>& b, double tol) {
  const auto da = pair_distances(a), db = pair_distances(b);
  ASSERT_EQ(da.size(), db.size());
  for (std::size_t i = 0; i < da.size(); ++i) EXPECT_NEAR(da[i], db[i], tol);
}

}  // namespace

TEST(Thomson, SmallExamples) {
  const ClassicalConfiguration two = solve_thomson(2);
  EXPECT_NEAR(two.thomson_cost, 0.5, 1e-12);
  EXPECT_NEAR((two.points[0] + two.points[1]).norm(), 0.0, 1e-9);

  const ClassicalConfiguration three = solve_thomson(3);
  EXPECT_NEAR(three.thomson_cost, std::sqrt(3.0), 1e-12);
  for (double d : pair_distances(three.points)) EXPECT_NEAR(d, std::sqrt(3.0), 1e-8);
  EXPECT_NEAR((three.points[0] + three.points[1] + three.points[2]).norm(), 0.0, 1e-8);
}

TEST(Thomson, KnownOptima) {
  // Minimum energies of the Thomson problem.
  const std::pair<int, double> known[] = {{4, 3.674234614}, {5, 6.474691495}, {6, 9.985281374},
                                          {7, 14.452977414}, {8, 19.675287861}, {12, 49.165253058}};
  for (auto [n, e] : known) {
    const ClassicalConfiguration c = solve_thomson(n);
    EXPECT_NEAR(c.thomson_cost, e, 1e-6 * e) << n;
    EXPECT_TRUE(c.converged) << n;
    for (const auto& p : c.points) EXPECT_NEAR(p.norm(), 1.0, 1e-12);
  }
}

TEST(Thomson, IcosahedronStateIsTheMajoranaOptimum) {
  const ClassicalConfiguration c = solve_thomson(12);
  EXPECT_NEAR(geometric_measure(to_symmetric_state(c)), std::log2(243.0 / 28), 1e-8);
}

TEST(Thomson, StatesMatchNamedStatesUpToRotation) {
  for (auto [n, name] : {std::pair{5, "trigonal-bipyramid"}, {7, "pentagonal-dipyramid-7"}, {4, "tetrahedron"}}) {
    const ClassicalConfiguration c = solve_thomson(n);
    const SymmetricState named = named_state(name);
    expect_congruent(c.points, unit_vectors(state_to_points(named).points), 1e-6);
    EXPECT_NEAR(geometric_measure(to_symmetric_state(c)), geometric_measure(named), 1e-8) << name;
  }
}

TEST(Toth, PlatonicOptima) {
  EXPECT_NEAR(solve_toth(4).toth_cost, std::sqrt(8.0 / 3), 1e-6);
  EXPECT_NEAR(solve_toth(6).toth_cost, std::sqrt(2.0), 1e-6);
  EXPECT_NEAR(solve_toth(12).toth_cost, 1.0514622242, 1e-6);
}

TEST(Toth, SevenPointsAreOffCentre) {
  const ClassicalConfiguration c = solve_toth(7);
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& p : c.points) centroid += p;
  EXPECT_GT(centroid.norm() / 7, 1e-3);
  EXPECT_NEAR(c.toth_cost, 1.2568704684, 1e-6);
}

TEST(Toth, FivePointsNonUniqueButEqualCost) {
  ClassicalSearchConfig a, b;
  a.seed = 1;
  b.seed = 2;
  const ClassicalConfiguration ca = solve_toth(5, a), cb = solve_toth(5, b);
  EXPECT_NEAR(ca.toth_cost, cb.toth_cost, 1e-8);
  EXPECT_NEAR(ca.toth_cost, std::sqrt(2.0), 1e-8);
}

TEST(Configuration, CostsRecomputeExactly) {
  for (int n : {3, 6, 9}) {
    for (const ClassicalConfiguration& c : {solve_toth(n), solve_thomson(n)}) {
      EXPECT_EQ(toth_cost(c.points), c.toth_cost);
      EXPECT_EQ(thomson_cost(c.points), c.thomson_cost);
      const ClassicalConfiguration again = make_configuration(c.points);
      EXPECT_EQ(again.thomson_cost, c.thomson_cost);
    }
  }
}

TEST(Configuration, CanonicalDistanceIgnoresRotations) {
  const ClassicalConfiguration c = solve_toth(7);
  const Eigen::Matrix3d r = Eigen::AngleAxisd(1.234, Eigen::Vector3d(1, 2, 3).normalized()).toRotationMatrix();
  std::vector<Eigen::Vector3d> rotated;
  for (const auto& p : c.points) rotated.push_back(r * p);
  EXPECT_LT(configuration_distance(c, make_configuration(rotated)), 1e-6);
  EXPECT_GT(configuration_distance(c, solve_thomson(7)), 1e-2);

  // Zero centroid, mirrored and shuffled.
  const ClassicalConfiguration t = solve_thomson(8);
  std::vector<Eigen::Vector3d> moved;
  for (auto it = t.points.rbegin(); it != t.points.rend(); ++it) moved.push_back(-(r * *it));
  EXPECT_LT(configuration_distance(t, make_configuration(moved)), 1e-6);
  EXPECT_LT(configuration_distance(canonicalize(c), c), 1e-6);
  EXPECT_THROW(configuration_distance(c, t), std::domain_error);
}

TEST(Curve, RowsFollowTheAgreementPattern) {
  const std::vector<CurveRow> rows = lower_bound_curve(12);
  ASSERT_EQ(rows.size(), 11u);
  EXPECT_EQ(rows.front().n, 2);
  EXPECT_NEAR(rows.front().upper, std::log2(3.0), 1e-15);
  const CurveRow& four = rows[2];
  EXPECT_NEAR(four.toth_eg, std::log2(3.0), 1e-8);
  EXPECT_NEAR(four.thomson_eg, std::log2(3.0), 1e-8);
  EXPECT_NEAR(rows[3].thomson_eg, std::log2(16.0 / 5), 1e-8);
  EXPECT_LT(rows[3].thomson_eg, 1.742268948 - 1e-3);
  EXPECT_NEAR(rows[10].thomson_eg, std::log2(243.0 / 28), 1e-8);
  for (const auto& r : rows) {
    EXPECT_LE(r.thomson_eg, r.upper);
    EXPECT_NEAR(r.dicke_lower, bounds(r.n).dicke_lower, 1e-15);
  }
  EXPECT_THROW(lower_bound_curve(17), std::domain_error);
}
