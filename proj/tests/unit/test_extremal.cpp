#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"
#include "symgeo/extremal.hpp"
#include "symgeo/geometric_measure.hpp"
#include "symgeo/majorana.hpp"

using namespace symgeo;
using namespace symgeo::testing;

namespace {

// Newton on a polynomial given in descending order, from x0.
double newton_root(const std::vector<double>& c, double x) {
  for (int it = 0; it < 100; ++it) {
    double p = 0.0, dp = 0.0;
    for (double a : c) {
      dp = dp * x + p;
      p = p * x + a;
    }
    const double step = p / dp;
    x -= step;
    if (std::abs(step) < 1e-16) break;
  }
  return x;
}

ExtremalResult wrap(const SymmetricState& s, AnsatzKind kind = AnsatzKind::Complex) {
  ExtremalResult r;
  r.n = s.n();
  r.state = s;
  r.analysis = find_cpps(s);
  r.ansatz = Ansatz{kind, {}};
  r.converged = true;
  return r;
}

constexpr double kKnownPositive[] = {0, 0, 1.0, 1.169925001, 1.584962501, 1.742268948, 2.169925001, 2.298691396,
                                     2.445210159, 2.553960277};

}  // namespace

TEST(Ansatz, ParametersRoundTrip) {
  std::mt19937_64 rng(89);
  for (const char* name : {"positive", "real", "complex"}) {
    const Ansatz a = parse_ansatz(name);
    for (int n : {2, 5, 9}) {
      Kind k = a.kind == AnsatzKind::Positive ? Kind::Positive : a.kind == AnsatzKind::Real ? Kind::Real : Kind::Complex;
      const SymmetricState s = random_state(n, rng, k);
      ASSERT_TRUE(a.admits(s));
      const Eigen::VectorXd p = a.parameters(s);
      EXPECT_EQ(p.size(), a.dimension(n));
      EXPECT_GT(fidelity(a.state(n, p), s), 1 - 1e-14);
    }
  }
  EXPECT_EQ(parse_ansatz("complex").dimension(4), 9);
  EXPECT_EQ(parse_ansatz("positive-sparse", {1, 5}).dimension(6), 2);
  EXPECT_FALSE(parse_ansatz("positive").admits(named_state("icosahedron")));
  EXPECT_THROW(parse_ansatz("positive-sparse"), std::domain_error);
  EXPECT_THROW(parse_ansatz("imaginary"), std::domain_error);
}

TEST(NamedStates, ClosedFormEntanglement) {
  EXPECT_NEAR(geometric_measure(named_state("tetrahedron")), std::log2(3.0), 1e-10);
  EXPECT_NEAR(geometric_measure(named_state("trigonal-bipyramid")), std::log2(16.0 / 5), 1e-10);
  EXPECT_NEAR(geometric_measure(named_state("octahedron")), std::log2(9.0 / 2), 1e-10);
  EXPECT_NEAR(geometric_measure(named_state("psi10-pos-sym")), std::log2(32.0 / 5), 1e-10);
  EXPECT_NEAR(geometric_measure(named_state("icosahedron")), std::log2(243.0 / 28), 1e-10);
  EXPECT_NEAR(geometric_measure(named_state("w3")), std::log2(9.0 / 4), 1e-10);
  EXPECT_THROW(named_state("dodecahedron"), std::domain_error);
}

TEST(NamedStates, IcosahedronCoefficients) {
  const SymmetricState s = named_state("icosahedron");
  EXPECT_NEAR(s[1].real(), std::sqrt(7.0) / 5, 1e-15);
  EXPECT_NEAR(s[6].real(), -std::sqrt(11.0) / 5, 1e-15);
  EXPECT_NEAR(s[11].real(), -std::sqrt(7.0) / 5, 1e-15);
}

TEST(NamedStates, SquarePyramidFromQuartic) {
  const double x = newton_root({4, 4, 4, -1, -1}, 0.5);
  EXPECT_NEAR(x, 0.46657, 1e-5);
  const double a = (1 - std::pow(x, 5)) / (std::sqrt(5.0) * x * std::pow(1 - x * x, 2));
  EXPECT_NEAR(a, 1.53154, 1e-5);
  const SymmetricState s = named_state("square-pyramid");
  const double norm = std::sqrt(1 + a * a);
  EXPECT_NEAR(s[0].real(), 1 / norm, 1e-12);
  EXPECT_NEAR(s[4].real(), a / norm, 1e-12);
  EXPECT_NEAR(geometric_measure(s), std::log2(1 + a * a), 1e-10);
  EXPECT_NEAR(std::log2(1 + a * a), 1.742268948, 1e-9);
  EXPECT_NEAR(std::cos(polynomial_root_cpp("square-pyramid").theta() / 2), x, 1e-12);
}

TEST(NamedStates, DipyramidCppsFromCubics) {
  const struct {
    const char* name;
    std::vector<double> cubic;
    double guess;
    double expected;
  } cases[] = {{"pentagonal-dipyramid-7", {49, 165, -205, 55}, 0.4, 2.298691396},
               {"pentagonal-dipyramid-9", {81, 385, -245, 35}, 0.2, 2.553960277}};
  for (const auto& c : cases) {
    const double x = newton_root(c.cubic, c.guess);
    const SymmetricState s = named_state(c.name);
    const SpherePoint cpp(std::acos(std::sqrt(x)), 0.0);
    EXPECT_LT(angular_distance(cpp, polynomial_root_cpp(c.name)), 1e-10);
    const double e = eg_from_g(direct_overlap(s, cpp.theta(), cpp.phi()));
    EXPECT_NEAR(e, c.expected, 1e-8) << c.name;
    EXPECT_NEAR(e, geometric_measure(s), 1e-10) << c.name;
  }
  EXPECT_THROW(polynomial_root_cpp("tetrahedron"), std::domain_error);
}

TEST(NamedStates, EightQubitOptimumHasCoincidingPoints) {
  const auto clusters = cluster_points(state_to_points(named_state("asym-pentagonal-dipyramid-8")).points);
  int largest = 0;
  for (const auto& c : clusters) largest = std::max(largest, c.multiplicity);
  EXPECT_EQ(largest, 2);
}

TEST(BracketedRoot, FindsSignChange) {
  EXPECT_NEAR(bracketed_root({1, 0, -2}, 0, 2), std::sqrt(2.0), 1e-15);
  EXPECT_THROW(bracketed_root({1, 0, 2}, 0, 2), std::domain_error);
}

TEST(Maximize, SmallPositiveCasesMatchKnownOptima) {
  for (int n = 2; n <= 6; ++n) {
    SearchConfig cfg;
    cfg.grid_rows = 201;
    cfg.grid_cols = 400;
    const ExtremalResult r = maximize_entanglement(n, cfg);
    EXPECT_NEAR(r.analysis.e_g, kKnownPositive[n], 1e-6) << n;
    EXPECT_TRUE(r.converged) << n;
    EXPECT_TRUE(r.analysis.is_ring() || r.analysis.cpp_count() >= 2) << n;
    EXPECT_LT(std::abs(r.certificate), 1e-6);
  }
}

TEST(Maximize, EightQubitSearchHasCoincidingPoints) {
  const ExtremalResult r = maximize_entanglement(8);
  EXPECT_NEAR(r.analysis.e_g, kKnownPositive[8], 1e-6);
  int largest = 0;
  for (const auto& c : cluster_points(state_to_points(r.state).points)) largest = std::max(largest, c.multiplicity);
  EXPECT_GE(largest, 2);
}

TEST(Maximize, DeterministicAcrossThreadCounts) {
  SearchConfig a;
  a.ansatz = parse_ansatz("real");
  a.seed = 42;
  a.threads = 1;
  a.grid_rows = 101;
  a.grid_cols = 200;
  SearchConfig b = a;
  b.threads = 3;
  const ExtremalResult ra = maximize_entanglement(4, a);
  const ExtremalResult rb = maximize_entanglement(4, b);
  EXPECT_EQ(ra.state.coeffs(), rb.state.coeffs());
  EXPECT_EQ(ra.origin, rb.origin);
}

TEST(Maximize, RejectsBadInput) {
  EXPECT_THROW(maximize_entanglement(1), std::domain_error);
  EXPECT_THROW(maximize_entanglement(17), std::domain_error);
  SearchConfig cfg;
  cfg.ansatz = parse_ansatz("positive-sparse", {0, 7});
  EXPECT_THROW(maximize_entanglement(5, cfg), std::domain_error);
}

TEST(RefineOnSupport, RecoversSquarePyramid) {
  const SymmetricState s = refine_on_support(5, AnsatzKind::Positive, {0, 4}, {1.0, 1.5});
  EXPECT_NEAR(geometric_measure(s), 1.742268948, 1e-8);
}

TEST(PerturbCheck, Examples) {
  EXPECT_EQ(perturb_check(wrap(named_state("tetrahedron")), 200).improving, 0);
  EXPECT_EQ(perturb_check(wrap(make_dicke(3, 1)), 200).improving, 0);
  const PerturbReport product = perturb_check(wrap(make_dicke(4, 0)), 200);
  EXPECT_GT(product.improving_fraction, 0.0);
  EXPECT_FALSE(product.has_two_cpps);
  EXPECT_TRUE(perturb_check(wrap(named_state("tetrahedron")), 1).has_two_cpps);
}
