#pragma once

#include <utility>
#include <vector>

#include "symgeo/polynomial.hpp"
#include "symgeo/states.hpp"

namespace symgeo {

/// The n Majorana points of a symmetric state together with the constant
/// K = n! perm(<phi_i|phi_j>) that normalizes the permutation sum.
struct MajoranaDistribution {
  int n = 0;
  std::vector<SpherePoint> points;
  double k_norm = 1.0;
};

struct PointCluster {
  SpherePoint point;
  int multiplicity = 0;
};

/// Roots closer than this (great-circle angle) are merged into one point of
/// higher multiplicity.
inline constexpr double kClusterTolerance = 1e-6;

/// Coefficients of the amplitude polynomial Q(w) = sum_k a_k sqrt(C(n,k)) w^k.
std::vector<cplx> amplitude_polynomial(const SymmetricState& state);

/// Majorana points of a state. Each root w of the amplitude polynomial is a
/// zero of the overlap at e^{-i phi} tan(theta/2) = w, and the MP is its
/// antipode. A degree deficit d puts d MPs on the north pole, a zero root of
/// order z puts z MPs on the south pole. Throws NumericError if the root
/// solver fails.
MajoranaDistribution state_to_points(const SymmetricState& state, const AberthOptions& options = {});

/// Symmetric state whose MPs are `points`; `n` must equal points.size()
/// when given (pass -1 to skip the check).
std::pair<SymmetricState, MajoranaDistribution> points_to_state(const std::vector<SpherePoint>& points,
                                                                int n = -1);

/// n! times the permanent of the Gram matrix of the point spinors.
double normalization_constant(const std::vector<SpherePoint>& points);

/// phi -> 2 pi - phi for every point, i.e. complex conjugation of the state.
MajoranaDistribution reflect_conjugate(const MajoranaDistribution& dist);

/// Greedy single-linkage clustering of points within `tol` radians.
std::vector<PointCluster> cluster_points(const std::vector<SpherePoint>& points,
                                         double tol = kClusterTolerance);

/// |<sigma|^n |psi>| from the MPs: n!/sqrt(K) prod_i |<sigma|phi_i>|.
double mp_overlap(const MajoranaDistribution& dist, const SpherePoint& sigma);

/// Largest angular distance between two equally sized multisets after an
/// optimal assignment minimizing the summed angular distance.
double matched_distance(const std::vector<SpherePoint>& a, const std::vector<SpherePoint>& b);

}  // namespace symgeo
