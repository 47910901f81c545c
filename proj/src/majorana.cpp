#include "symgeo/majorana.hpp"

#include <algorithm>
#include <cmath>

#include "symgeo/assignment.hpp"
#include "symgeo/permanent.hpp"

namespace symgeo {

namespace {

// Coefficients this far below the largest one are treated as exact zeros
// when locating the effective degree and the zero root order.
constexpr double kStripTolerance = 1e-14;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

std::vector<cplx> amplitude_polynomial(const SymmetricState& state) {
  const int n = state.n();
  std::vector<cplx> q(n + 1);
  for (int k = 0; k <= n; ++k) q[k] = state[k] * std::sqrt(binomial(n, k));
  return q;
}

MajoranaDistribution state_to_points(const SymmetricState& state, const AberthOptions& options) {
  const int n = state.n();
  const std::vector<cplx> q = amplitude_polynomial(state);
  double qmax = 0.0;
  for (const cplx& c : q) qmax = std::max(qmax, std::abs(c));
  if (qmax == 0.0) throw std::domain_error("state_to_points: zero state");
  const double cut = kStripTolerance * qmax;

  int lo = 0;
  while (std::abs(q[lo]) <= cut) ++lo;
  int hi = n;
  while (std::abs(q[hi]) <= cut) --hi;

  MajoranaDistribution dist;
  dist.n = n;
  dist.points.reserve(n);
  for (int i = 0; i < n - hi; ++i) dist.points.push_back(SpherePoint::north());
  for (int i = 0; i < lo; ++i) dist.points.push_back(SpherePoint::south());
  if (hi > lo) {
    const std::vector<cplx> reduced(q.begin() + lo, q.begin() + hi + 1);
    const RootReport report = aberth_roots(reduced, options);
    std::vector<SpherePoint> roots;
    roots.reserve(report.roots.size());
    for (const cplx& w : report.roots) {
      roots.emplace_back(2.0 * std::atan2(1.0, std::abs(w)), std::arg(-1.0 / w));
    }
    // Nearly coincident roots stand for one repeated MP; snap them together.
    for (const PointCluster& c : cluster_points(roots)) {
      for (int i = 0; i < c.multiplicity; ++i) dist.points.push_back(c.point);
    }
  }
  dist.k_norm = normalization_constant(dist.points);
  return dist;
}

std::pair<SymmetricState, MajoranaDistribution> points_to_state(const std::vector<SpherePoint>& points, int n) {
  if (points.empty()) throw std::domain_error("points_to_state: need at least one point");
  if (n >= 0 && static_cast<int>(points.size()) != n) {
    throw std::domain_error("points_to_state: expected exactly n points");
  }
  const int m = static_cast<int>(points.size());
  // prod_i (C_i + S_i t) = sum_k e_k t^k; then a_k is proportional to e_k / sqrt(C(m,k)).
  std::vector<cplx> e{1.0};
  e.reserve(m + 1);
  for (const SpherePoint& p : points) {
    const Eigen::Vector2cd s = p.spinor();
    e.push_back(0.0);
    for (std::size_t i = e.size() - 1; i > 0; --i) e[i] = e[i] * s[0] + e[i - 1] * s[1];
    e[0] *= s[0];
  }
  Eigen::VectorXcd a(m + 1);
  for (int k = 0; k <= m; ++k) a[k] = e[k] / std::sqrt(binomial(m, k));
  MajoranaDistribution dist{m, points, normalization_constant(points)};
  return {SymmetricState(std::move(a)), std::move(dist)};
}

double normalization_constant(const std::vector<SpherePoint>& points) {
  const int n = static_cast<int>(points.size());
  Eigen::MatrixXcd gram(n, n);
  std::vector<Eigen::Vector2cd> spinors;
  spinors.reserve(n);
  for (const SpherePoint& p : points) spinors.push_back(p.spinor());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) gram(i, j) = spinors[i].dot(spinors[j]);
  }
  return factorial(n) * permanent(gram).real();
}

MajoranaDistribution reflect_conjugate(const MajoranaDistribution& dist) {
  MajoranaDistribution out = dist;
  for (SpherePoint& p : out.points) p = p.conjugate();
  return out;
}

std::vector<PointCluster> cluster_points(const std::vector<SpherePoint>& points, double tol) {
  const int n = static_cast<int>(points.size());
  std::vector<int> label(n, -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    if (label[i] >= 0) continue;
    label[i] = next;
    std::vector<int> stack{i};
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      for (int b = 0; b < n; ++b) {
        if (label[b] < 0 && angular_distance(points[a], points[b]) < tol) {
          label[b] = next;
          stack.push_back(b);
        }
      }
    }
    ++next;
  }
  std::vector<PointCluster> clusters;
  for (int c = 0; c < next; ++c) {
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    int count = 0;
    SpherePoint first;
    for (int i = 0; i < n; ++i) {
      if (label[i] != c) continue;
      if (count == 0) first = points[i];
      sum += points[i].bloch();
      ++count;
    }
    clusters.push_back({count == 1 ? first : SpherePoint::from_vector(sum), count});
  }
  return clusters;
}

double mp_overlap(const MajoranaDistribution& dist, const SpherePoint& sigma) {
  const Eigen::Vector2cd s = sigma.spinor();
  double prod = factorial(dist.n) / std::sqrt(dist.k_norm);
  for (const SpherePoint& p : dist.points) prod *= std::abs(s.dot(p.spinor()));
  return prod;
}

double matched_distance(const std::vector<SpherePoint>& a, const std::vector<SpherePoint>& b) {
  if (a.size() != b.size()) throw std::domain_error("matched_distance: sizes differ");
  const int n = static_cast<int>(a.size());
  if (n == 0) return 0.0;
  Eigen::MatrixXd cost(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) cost(i, j) = angular_distance(a[i], b[j]);
  }
  const std::vector<int> perm = optimal_assignment(cost);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) worst = std::max(worst, cost(i, perm[i]));
  return worst;
}

}  // namespace symgeo
