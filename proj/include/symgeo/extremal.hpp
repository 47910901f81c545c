#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "symgeo/geometric_measure.hpp"
#include "symgeo/states.hpp"

namespace symgeo {

enum class AnsatzKind { Positive, Real, Complex };

/// Parametrization of the outer search space. An empty support means all
/// n + 1 Dicke coefficients are free.
struct Ansatz {
  AnsatzKind kind = AnsatzKind::Positive;
  std::vector<int> support;

  /// positive, positive-sparse, real, real-sparse, complex or complex-sparse.
  std::string name() const;
  /// Number of real parameters for n qubits.
  int dimension(int n) const;
  /// Coefficients from parameters: positive uses |p_i| (normalized, so the
  /// squares lie on the unit simplex), real uses p directly, complex fixes
  /// the first free coefficient real and nonnegative.
  SymmetricState state(int n, const Eigen::VectorXd& p) const;
  /// Parameters reproducing `s` up to global phase; throws std::domain_error
  /// if `s` is outside the ansatz.
  Eigen::VectorXd parameters(const SymmetricState& s) const;
  bool admits(const SymmetricState& s) const;
};

/// Parses positive | positive-sparse | real | complex. The sparse form
/// requires a nonempty support; a support given to the full forms restricts them.
Ansatz parse_ansatz(const std::string& name, const std::vector<int>& support = {});

struct SearchConfig {
  std::uint64_t seed = 1;
  /// Latin-hypercube restarts in addition to the warm starts.
  int restarts = 4;
  Ansatz ansatz;
  /// Budget for the final CPP analysis.
  CppSearchOptions inner;
  /// A polishing cycle that gains less than this in E_G ends the descent.
  double outer_tol = 1e-10;
  /// Evaluations per Nelder-Mead run; 0 picks 300 d + 600.
  int max_evaluations = 0;
  /// Worker threads for restarts; 0 uses the hardware concurrency.
  int threads = 0;
  bool use_warm_starts = true;
  /// Resolution of the certificate grid scan.
  int grid_rows = 801;
  int grid_cols = 1600;
};

struct ExtremalResult {
  int n = 0;
  SymmetricState state;
  CppAnalysis analysis;
  Ansatz ansatz;
  /// Refined grid maximum of g minus the reported g_max.
  double certificate = 0.0;
  bool converged = false;
  int evaluations = 0;
  std::uint64_t seed = 0;
  /// Which start produced the winner, e.g. "warm positive {0,3}" or "restart 2".
  std::string origin;
};

/// Outer min-max search: minimizes the maximal product overlap over the ansatz.
ExtremalResult maximize_entanglement(int n, const SearchConfig& config = {});

/// Minimizes g_max over coefficients restricted to `support`, starting from
/// `initial` (one value per support element). Used by the named states whose
/// coefficients are known only to a few digits.
SymmetricState refine_on_support(int n, AnsatzKind kind, const std::vector<int>& support,
                                 const std::vector<double>& initial);

/// Names accepted by named_state, in a fixed order.
const std::vector<std::string>& named_state_names();

/// Library of extremal and reference states. Throws std::domain_error for an unknown name.
SymmetricState named_state(const std::string& name);

/// CPP of the states whose extremal overlap is pinned by a polynomial root,
/// for square-pyramid, pentagonal-dipyramid-7 and pentagonal-dipyramid-9.
SpherePoint polynomial_root_cpp(const std::string& name);

/// Real root of a polynomial (descending coefficients) in [lo, hi], by bisection.
double bracketed_root(const std::vector<double>& descending, double lo, double hi);

struct PerturbReport {
  int trials = 0;
  int improving = 0;
  double improving_fraction = 0.0;
  double best_gain = 0.0;
  /// Number of CPPs of the result (-1 for a ring).
  int cpp_count = 0;
  /// At least two distinct CPPs.
  bool has_two_cpps = false;
};

/// Random perturbations of norm `magnitude` in the parameters of the result's
/// ansatz; a trial improves if E_G grows by more than `gain_tolerance`.
PerturbReport perturb_check(const ExtremalResult& result, int trials, std::uint64_t seed = 7,
                            double magnitude = 1e-3, double gain_tolerance = 1e-9);

/// SplitMix64 step, used to derive independent sub-seeds.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace symgeo
