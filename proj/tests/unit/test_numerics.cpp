#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "symgeo/assignment.hpp"
#include "symgeo/minimax.hpp"
#include "symgeo/nelder_mead.hpp"
#include "symgeo/permanent.hpp"
#include "symgeo/polynomial.hpp"
#include "symgeo/quadrature.hpp"
#include "symgeo/states.hpp"

using namespace symgeo;

namespace {

template <typename M>
typename M::Scalar permanent_by_permutations(const M& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  typename M::Scalar total(0);
  do {
    typename M::Scalar p(1);
    for (int i = 0; i < n; ++i) p *= a(i, perm[i]);
    total += p;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

}  // namespace

TEST(Permanent, MatchesPermutationSum) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  for (int n = 1; n <= 7; ++n) {
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = cplx(normal(rng), normal(rng));
    const cplx ryser = permanent(a);
    const cplx brute = permanent_by_permutations(a);
    EXPECT_LT(std::abs(ryser - brute), 1e-10 * std::max(1.0, std::abs(brute))) << n;
  }
  EXPECT_DOUBLE_EQ(permanent(Eigen::MatrixXd::Ones(4, 4)), 24.0);
  EXPECT_DOUBLE_EQ(permanent(Eigen::MatrixXd(0, 0)), 1.0);
  EXPECT_THROW(permanent(Eigen::MatrixXd::Ones(2, 3)), std::domain_error);
}

TEST(Polynomial, AberthAgreesWithCompanionEigenvalues) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  for (int d = 1; d <= 16; ++d) {
    std::vector<cplx> c(d + 1);
    for (auto& x : c) x = cplx(normal(rng), normal(rng));
    const RootReport rep = aberth_roots(c);
    ASSERT_EQ(static_cast<int>(rep.roots.size()), d);
    EXPECT_LT(rep.residual, 1e-12);

    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) comp(i, d - 1) = -c[i] / c[d];
    const Eigen::VectorXcd eig = comp.eigenvalues();
    std::vector<bool> used(d, false);
    for (const cplx& r : rep.roots) {
      int best = -1;
      for (int i = 0; i < d; ++i)
        if (!used[i] && (best < 0 || std::abs(eig[i] - r) < std::abs(eig[best] - r))) best = i;
      used[best] = true;
      EXPECT_LT(std::abs(eig[best] - r), 1e-8 * std::max(1.0, std::abs(r)));
    }
    for (const cplx& r : rep.roots) EXPECT_LE(std::abs(r), cauchy_bound(c) * (1 + 1e-12));
  }
}

TEST(Polynomial, RepeatedRootsAndHorner) {
  // (w - 1)^3 (w + 2)
  const std::vector<cplx> c{-2.0, 5.0, -3.0, -1.0, 1.0};
  const RootReport rep = aberth_roots(c);
  int near_one = 0;
  for (const cplx& r : rep.roots) near_one += std::abs(r - 1.0) < 1e-4;
  EXPECT_EQ(near_one, 3);
  cplx p, dp;
  horner(c, 2.0, p, dp);
  EXPECT_NEAR(std::abs(p - cplx(4.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(dp - cplx(13.0)), 0.0, 1e-13);
}

TEST(Assignment, MatchesBruteForce) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 1; n <= 7; ++n) {
    Eigen::MatrixXd cost(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) cost(i, j) = u(rng);
    const std::vector<int> perm = optimal_assignment(cost);
    double got = 0.0;
    for (int i = 0; i < n; ++i) got += cost(i, perm[i]);
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    double best = 1e300;
    do {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += cost(i, p[i]);
      best = std::min(best, s);
    } while (std::next_permutation(p.begin(), p.end()));
    EXPECT_NEAR(got, best, 1e-12);
  }
}

TEST(Quadrature, ExactForPolynomials) {
  for (int order = 1; order <= 30; ++order) {
    const GaussLegendreRule rule = gauss_legendre(order);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    EXPECT_NEAR(wsum, 2.0, 1e-13);
    for (int k = 0; k <= 2 * order - 1; ++k) {
      double s = 0.0;
      for (int i = 0; i < order; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], k);
      const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
      EXPECT_NEAR(s, exact, 1e-13) << "order " << order << " k " << k;
    }
  }
}

TEST(NelderMead, MinimizesRosenbrock) {
  auto f = [](const Eigen::VectorXd& x) {
    return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
  };
  NelderMeadOptions opt;
  opt.max_evaluations = 5000;
  opt.initial_step = 0.5;
  const NelderMeadResult r = nelder_mead(f, Eigen::Vector2d(-1.2, 1.0), opt);
  EXPECT_LT((r.x - Eigen::Vector2d(1, 1)).norm(), 1e-4);
  EXPECT_LE(r.evaluations, 5000);
}

TEST(Minimax, SimplexProjection) {
  const Eigen::VectorXd p = project_to_simplex(Eigen::Vector3d(0.5, 2.0, -1.0));
  EXPECT_NEAR(p.sum(), 1.0, 1e-15);
  EXPECT_GE(p.minCoeff(), 0.0);
  EXPECT_NEAR(p[1], 1.0, 1e-15);
}

TEST(Minimax, StepBalancesTwoPieces) {
  // max(x, -x) near x = 1: the proximal step lands on the kink at 0 when the radius allows.
  Eigen::VectorXd v(2);
  v << 1.0, -1.0;
  Eigen::MatrixXd g(1, 2);
  g << 1.0, -1.0;
  const MinimaxStep s = minimax_step(v, g, 10.0);
  EXPECT_NEAR(s.step[0], -1.0, 1e-6);
  EXPECT_NEAR(s.model_max, 0.0, 1e-6);
  const MinimaxStep small = minimax_step(v, g, 0.1);
  EXPECT_NEAR(small.step[0], -0.1, 1e-6);
}
