#pragma once

#include <vector>

namespace symgeo {

struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1] with `order` nodes, exact for polynomials
/// of degree up to 2 order - 1.
GaussLegendreRule gauss_legendre(int order);

}  // namespace symgeo
