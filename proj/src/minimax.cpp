#include "symgeo/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Eigenvalues>

namespace symgeo {

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& y) {
  std::vector<double> u(y.data(), y.data() + y.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double tau = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cumulative += u[i];
    const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) tau = t;
  }
  return (y.array() - tau).max(0.0).matrix();
}

MinimaxStep minimax_step(const Eigen::VectorXd& values, const Eigen::MatrixXd& gradients, double radius,
                         int iterations) {
  const Eigen::Index m = values.size();
  const Eigen::MatrixXd gram = gradients.transpose() * gradients;
  const double lipschitz = radius * std::max(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram, Eigen::EigenvaluesOnly)
                                                 .eigenvalues()
                                                 .maxCoeff(),
                                             1e-300);
  Eigen::VectorXd lambda = Eigen::VectorXd::Constant(m, 1.0 / m);
  Eigen::VectorXd momentum = lambda;
  double t = 1.0;
  for (int it = 0; it < iterations; ++it) {
    const Eigen::VectorXd grad = values - radius * (gram * momentum);
    const Eigen::VectorXd next = project_to_simplex(momentum + grad / lipschitz);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double change = (next - lambda).lpNorm<Eigen::Infinity>();
    momentum = next + ((t - 1.0) / t_next) * (next - lambda);
    lambda = next;
    t = t_next;
    if (change < 1e-15) break;
  }
  MinimaxStep out;
  out.step = -radius * (gradients * lambda);
  out.model_max = (values + gradients.transpose() * out.step).maxCoeff();
  return out;
}

}  // namespace symgeo
