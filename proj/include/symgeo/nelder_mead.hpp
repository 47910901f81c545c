#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

#include <Eigen/Core>

namespace symgeo {

struct NelderMeadOptions {
  int max_evaluations = 2000;
  /// Stop when the spread of simplex values and the simplex diameter are both below these.
  double f_tolerance = 1e-13;
  double x_tolerance = 1e-10;
  /// Edge length of the initial axis-aligned simplex.
  double initial_step = 0.1;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Adaptive Nelder-Mead minimization (dimension-dependent coefficients of
/// Gao and Han), which behaves better than the textbook values beyond a few
/// dimensions.
inline NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                                    const Eigen::VectorXd& x0, const NelderMeadOptions& opt = {}) {
  const int d = static_cast<int>(x0.size());
  const double alpha = 1.0;
  const double beta = d >= 2 ? 1.0 + 2.0 / d : 2.0;
  const double gamma = d >= 2 ? 0.75 - 0.5 / d : 0.5;
  const double delta = d >= 2 ? 1.0 - 1.0 / d : 0.5;

  NelderMeadResult res;
  std::vector<Eigen::VectorXd> x(d + 1, x0);
  std::vector<double> fx(d + 1);
  for (int i = 0; i < d; ++i) x[i + 1](i) += opt.initial_step;
  for (int i = 0; i <= d; ++i) fx[i] = f(x[i]);
  res.evaluations = d + 1;

  std::vector<int> order(d + 1);
  while (res.evaluations < opt.max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fx[a] < fx[b]; });
    const int best = order.front();
    const int worst = order.back();
    const int second = order[d - 1 >= 0 ? d - 1 : 0];

    double diameter = 0.0;
    for (int i = 0; i <= d; ++i) diameter = std::max(diameter, (x[i] - x[best]).lpNorm<Eigen::Infinity>());
    if (fx[worst] - fx[best] <= opt.f_tolerance && diameter <= opt.x_tolerance) {
      res.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
    for (int i = 0; i <= d; ++i) {
      if (i != worst) centroid += x[i];
    }
    centroid /= d;

    const Eigen::VectorXd xr = centroid + alpha * (centroid - x[worst]);
    const double fr = f(xr);
    ++res.evaluations;
    if (fr < fx[best]) {
      const Eigen::VectorXd xe = centroid + beta * (xr - centroid);
      const double fe = f(xe);
      ++res.evaluations;
      if (fe < fr) {
        x[worst] = xe;
        fx[worst] = fe;
      } else {
        x[worst] = xr;
        fx[worst] = fr;
      }
      continue;
    }
    if (fr < fx[second]) {
      x[worst] = xr;
      fx[worst] = fr;
      continue;
    }
    const bool outside = fr < fx[worst];
    const Eigen::VectorXd xc =
        outside ? Eigen::VectorXd(centroid + gamma * (xr - centroid)) : Eigen::VectorXd(centroid - gamma * (centroid - x[worst]));
    const double fc = f(xc);
    ++res.evaluations;
    if (fc < (outside ? fr : fx[worst])) {
      x[worst] = xc;
      fx[worst] = fc;
      continue;
    }
    for (int i = 0; i <= d; ++i) {
      if (i == best) continue;
      x[i] = x[best] + delta * (x[i] - x[best]);
      fx[i] = f(x[i]);
      ++res.evaluations;
    }
  }
  const int best = static_cast<int>(std::min_element(fx.begin(), fx.end()) - fx.begin());
  res.x = x[best];
  res.f = fx[best];
  return res;
}

}  // namespace symgeo
