#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "symgeo/states.hpp"

namespace symgeo {

/// n unit vectors together with both classical cost functions.
struct ClassicalConfiguration {
  std::vector<Eigen::Vector3d> points;
  /// Smallest pairwise Euclidean distance (Toth / Tammes objective).
  double toth_cost = 0.0;
  /// Coulomb energy sum_{i<j} 1 / |r_i - r_j| (Thomson objective).
  double thomson_cost = 0.0;
  bool converged = false;
};

struct ClassicalSearchConfig {
  std::uint64_t seed = 1;
  int restarts = 24;
  /// Iteration cap for each descent or annealing stage.
  int max_iterations = 20000;
  /// 0 uses the hardware concurrency.
  int threads = 0;
};

double toth_cost(const std::vector<Eigen::Vector3d>& points);
double thomson_cost(const std::vector<Eigen::Vector3d>& points);

/// Normalizes the points and fills in both costs.
ClassicalConfiguration make_configuration(std::vector<Eigen::Vector3d> points);

/// Minimum Coulomb energy by multistart Riemannian gradient descent.
ClassicalConfiguration solve_thomson(int n, const ClassicalSearchConfig& config = {});

/// Maximin distance by annealed log-sum-exp smoothing and an exact polish of the active pairs.
ClassicalConfiguration solve_toth(int n, const ClassicalSearchConfig& config = {});

/// Centroid (when nonzero) to +z, then the first point onto the phi = 0 meridian.
ClassicalConfiguration canonicalize(const ClassicalConfiguration& config);

/// Largest angle between matched points after an optimal assignment, minimized over rotations and
/// reflections of b.
double configuration_distance(const ClassicalConfiguration& a, const ClassicalConfiguration& b);

/// The symmetric state whose Majorana points are the configuration.
SymmetricState to_symmetric_state(const ClassicalConfiguration& config);

struct CurveRow {
  int n = 0;
  double toth_eg = 0.0;
  double thomson_eg = 0.0;
  double dicke_lower = 0.0;
  double upper = 0.0;
};

/// E_G of both classical solutions next to the Dicke lower and log2(n + 1)
/// upper bounds, for n = 2..n_max.
std::vector<CurveRow> lower_bound_curve(int n_max, const ClassicalSearchConfig& config = {});

}  // namespace symgeo
