#pragma once

#include <Eigen/Core>

namespace symgeo {

struct MinimaxStep {
  Eigen::VectorXd step;
  /// max_j (v_j + g_j . step) at the returned step.
  double model_max = 0.0;
};

/// Proximal step for a pointwise maximum of linearized pieces:
///   minimize_d  max_j (v_j + G.col(j) . d) + |d|^2 / (2 radius).
/// Solved through its dual, a concave quadratic over the unit simplex, by
/// accelerated projected gradient ascent; d = -radius * G lambda.
MinimaxStep minimax_step(const Eigen::VectorXd& values, const Eigen::MatrixXd& gradients, double radius,
                         int iterations = 2000);

/// Euclidean projection onto {x >= 0, sum x = 1}.
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& y);

}  // namespace symgeo
