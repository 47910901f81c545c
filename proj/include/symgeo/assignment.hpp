#pragma once

#include <vector>

#include <Eigen/Core>

namespace symgeo {

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method,
/// O(n^3)). Returns perm with row i assigned to column perm[i].
std::vector<int> optimal_assignment(const Eigen::MatrixXd& cost);

}  // namespace symgeo
