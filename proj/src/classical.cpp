#include "symgeo/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Geometry>
#include <stdexcept>

#include "parallel.hpp"
#include "symgeo/extremal.hpp"
#include "symgeo/geometric_measure.hpp"
#include "symgeo/majorana.hpp"
#include "symgeo/minimax.hpp"

namespace symgeo {

using Points = std::vector<Eigen::Vector3d>;

double toth_cost(const Points& points) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) best = std::min(best, (points[i] - points[j]).norm());
  }
  return best;
}

double thomson_cost(const Points& points) {
  double e = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) e += 1.0 / (points[i] - points[j]).norm();
  }
  return e;
}

ClassicalConfiguration make_configuration(Points points) {
  for (auto& p : points) {
    const double r = p.norm();
    if (!(r > 0.0)) throw std::domain_error("make_configuration: zero vector");
    p /= r;
  }
  ClassicalConfiguration c;
  c.points = std::move(points);
  c.toth_cost = toth_cost(c.points);
  c.thomson_cost = thomson_cost(c.points);
  return c;
}

namespace {

Points random_points(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Points pts(n);
  for (auto& p : pts) {
    do {
      p = Eigen::Vector3d(normal(rng), normal(rng), normal(rng));
    } while (p.norm() < 1e-6);
    p.normalize();
  }
  return pts;
}

// Projects each per-point gradient onto the tangent plane at that point.
void project_tangent(const Points& x, Points& g) {
  for (std::size_t i = 0; i < x.size(); ++i) g[i] -= g[i].dot(x[i]) * x[i];
}

double dot(const Points& a, const Points& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].dot(b[i]);
  return s;
}

Points retract(const Points& x, const Points& d, double t) {
  Points y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = (x[i] + t * d[i]).normalized();
  return y;
}

struct Smooth {
  double value;
  Points grad;  // Euclidean gradient
};

// Riemannian gradient descent with Barzilai-Borwein steps safeguarded by Armijo backtracking.
template <typename Objective>
Points riemannian_descent(Points x, Objective&& f, int max_iterations, double gtol, bool& converged) {
  Smooth cur = f(x);
  project_tangent(x, cur.grad);
  double step = 1e-2;
  Points prev_x, prev_g;
  converged = false;
  for (int it = 0; it < max_iterations; ++it) {
    double gmax = 0.0;
    for (const auto& g : cur.grad) gmax = std::max(gmax, g.norm());
    if (gmax < gtol) {
      converged = true;
      break;
    }
    if (it > 0) {
      double ss = 0.0, sy = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const Eigen::Vector3d s = x[i] - prev_x[i];
        const Eigen::Vector3d y = cur.grad[i] - prev_g[i];
        ss += s.dot(s);
        sy += s.dot(y);
      }
      if (sy > 0.0) step = std::clamp(ss / sy, 1e-10, 10.0);
    }
    const double gg = dot(cur.grad, cur.grad);
    Points d(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) d[i] = -cur.grad[i];
    double t = step;
    Points trial;
    Smooth next;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      trial = retract(x, d, t);
      next = f(trial);
      if (next.value < cur.value && next.value <= cur.value - 1e-4 * t * gg) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (gmax > 1e-6) break;
      // Energy differences are below rounding here, so shrink the gradient instead.
      t = step;
      for (int ls = 0; ls < 60 && !accepted; ++ls, t *= 0.5) {
        trial = retract(x, d, t);
        next = f(trial);
        project_tangent(trial, next.grad);
        double m = 0.0;
        for (const auto& g : next.grad) m = std::max(m, g.norm());
        accepted = m < gmax;
      }
      if (!accepted) break;
    }
    prev_x = std::move(x);
    prev_g = std::move(cur.grad);
    x = std::move(trial);
    cur = std::move(next);
    project_tangent(x, cur.grad);
  }
  return x;
}

Smooth coulomb(const Points& x) {
  Smooth s{0.0, Points(x.size(), Eigen::Vector3d::Zero())};
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const Eigen::Vector3d d = x[i] - x[j];
      const double r = d.norm();
      s.value += 1.0 / r;
      const Eigen::Vector3d g = d / (r * r * r);
      s.grad[i] -= g;
      s.grad[j] += g;
    }
  }
  return s;
}

// Negative log-sum-exp soft minimum of the pair distances at inverse temperature beta.
Smooth soft_min_loss(const Points& x, double beta) {
  const std::size_t n = x.size();
  std::vector<double> dist;
  dist.reserve(n * (n - 1) / 2);
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      dist.push_back((x[i] - x[j]).norm());
      dmin = std::min(dmin, dist.back());
    }
  }
  double z = 0.0;
  for (double d : dist) z += std::exp(-beta * (d - dmin));
  Smooth s{0.0, Points(n, Eigen::Vector3d::Zero())};
  // loss = -softmin = -(dmin - log(z) / beta)
  s.value = -(dmin - std::log(z) / beta);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++idx) {
      const double w = std::exp(-beta * (dist[idx] - dmin)) / z;
      const Eigen::Vector3d g = w * (x[i] - x[j]) / dist[idx];
      s.grad[i] -= g;
      s.grad[j] += g;
    }
  }
  return s;
}

// Orthonormal tangent basis at a unit vector.
std::pair<Eigen::Vector3d, Eigen::Vector3d> tangent_basis(const Eigen::Vector3d& r) {
  const Eigen::Vector3d a = std::abs(r.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  const Eigen::Vector3d e1 = (a - a.dot(r) * r).normalized();
  return {e1, r.cross(e1)};
}

// Trust-region polish of min_{i<j} |r_i - r_j| on the near-active pairs.
Points polish_maximin(Points x, int max_iterations) {
  const int n = static_cast<int>(x.size());
  double radius = 1e-2;
  for (int it = 0; it < max_iterations; ++it) {
    const double dmin = toth_cost(x);
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if ((x[i] - x[j]).norm() < dmin + 0.05) pairs.emplace_back(i, j);
      }
    }
    std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>> basis(n);
    for (int i = 0; i < n; ++i) basis[i] = tangent_basis(x[i]);
    // Pieces are -d_ij, so minimizing their maximum maximizes the smallest distance.
    const int m = static_cast<int>(pairs.size());
    Eigen::VectorXd v(m);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2 * n, m);
    for (int p = 0; p < m; ++p) {
      const auto [i, j] = pairs[p];
      const Eigen::Vector3d diff = x[i] - x[j];
      const double d = diff.norm();
      v(p) = -d;
      const Eigen::Vector3d u = diff / d;
      g(2 * i, p) = -u.dot(basis[i].first);
      g(2 * i + 1, p) = -u.dot(basis[i].second);
      g(2 * j, p) = u.dot(basis[j].first);
      g(2 * j + 1, p) = u.dot(basis[j].second);
    }
    const MinimaxStep st = minimax_step(v, g, radius);
    const double predicted = -dmin - st.model_max;
    if (predicted < 1e-16) break;
    Points trial(n);
    for (int i = 0; i < n; ++i) {
      trial[i] = (x[i] + st.step(2 * i) * basis[i].first + st.step(2 * i + 1) * basis[i].second).normalized();
    }
    const double actual = toth_cost(trial) - dmin;
    if (actual > 0.1 * predicted) {
      x = std::move(trial);
      radius = std::min(2.0 * radius, 0.1);
    } else {
      radius *= 0.25;
      if (radius < 1e-14) break;
    }
  }
  return x;
}

template <typename Solve>
ClassicalConfiguration best_of_restarts(int n, const ClassicalSearchConfig& config, Solve&& solve,
                                        bool maximize_toth) {
  if (n < 2) throw std::domain_error("classical solvers need n >= 2");
  if (config.restarts < 1) throw std::domain_error("classical solvers need at least one restart");
  std::vector<ClassicalConfiguration> runs(config.restarts);
  detail::run_parallel(config.restarts, detail::resolve_threads(config.threads), [&](int r) {
    const std::uint64_t sub = splitmix64(config.seed ^ splitmix64(static_cast<std::uint64_t>(r) + 1));
    runs[r] = solve(random_points(n, sub));
  });
  int best = 0;
  for (int r = 1; r < config.restarts; ++r) {
    const bool better = maximize_toth ? runs[r].toth_cost > runs[best].toth_cost * (1.0 + 1e-13)
                                      : runs[r].thomson_cost < runs[best].thomson_cost * (1.0 - 1e-13);
    if (better) best = r;
  }
  return runs[best];
}

}  // namespace

ClassicalConfiguration solve_thomson(int n, const ClassicalSearchConfig& config) {
  return best_of_restarts(
      n, config,
      [&](Points x) {
        bool converged = false;
        x = riemannian_descent(std::move(x), coulomb, config.max_iterations, 1e-11, converged);
        ClassicalConfiguration c = make_configuration(std::move(x));
        c.converged = converged;
        return c;
      },
      false);
}

ClassicalConfiguration solve_toth(int n, const ClassicalSearchConfig& config) {
  return best_of_restarts(
      n, config,
      [&](Points x) {
        bool converged = true;
        for (double beta = 32.0; beta <= 4096.0; beta *= 2.0) {
          bool stage = false;
          x = riemannian_descent(
              std::move(x), [beta](const Points& p) { return soft_min_loss(p, beta); }, config.max_iterations / 8,
              1e-9, stage);
          converged = converged && stage;
        }
        x = polish_maximin(std::move(x), 500);
        ClassicalConfiguration c = make_configuration(std::move(x));
        c.converged = true;
        return c;
      },
      true);
}

ClassicalConfiguration canonicalize(const ClassicalConfiguration& config) {
  Points pts = config.points;
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& p : pts) centroid += p;
  Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
  if (centroid.norm() > 1e-9) {
    rot = Eigen::Quaterniond::FromTwoVectors(centroid.normalized(), Eigen::Vector3d::UnitZ()).toRotationMatrix();
  }
  for (auto& p : pts) p = rot * p;
  // Rotate about z so that the first point off the axis sits on phi = 0.
  for (const auto& p : pts) {
    const double rho = std::hypot(p.x(), p.y());
    if (rho > 1e-9) {
      const double a = -std::atan2(p.y(), p.x());
      const Eigen::Matrix3d rz = Eigen::AngleAxisd(a, Eigen::Vector3d::UnitZ()).toRotationMatrix();
      for (auto& q : pts) q = rz * q;
      break;
    }
  }
  ClassicalConfiguration out = make_configuration(std::move(pts));
  out.converged = config.converged;
  return out;
}

namespace {

// Orthonormal frame with u along the first axis and v in the first two.
Eigen::Matrix3d frame(const Eigen::Vector3d& u, const Eigen::Vector3d& v) {
  Eigen::Matrix3d f;
  f.col(0) = u.normalized();
  f.col(1) = (v - v.dot(f.col(0)) * f.col(0)).normalized();
  f.col(2) = f.col(0).cross(f.col(1));
  return f;
}

double matched_angle(const Points& a, const Points& b, const Eigen::Matrix3d& rot) {
  std::vector<SpherePoint> pa, pb;
  for (const auto& p : a) pa.push_back(SpherePoint::from_vector(p));
  for (const auto& p : b) pb.push_back(SpherePoint::from_vector(rot * p));
  return matched_distance(pa, pb);
}

}  // namespace

double configuration_distance(const ClassicalConfiguration& a, const ClassicalConfiguration& b) {
  const Points& pa = a.points;
  const Points& pb = b.points;
  if (pa.size() != pb.size()) throw std::domain_error("configuration_distance: sizes differ");
  if (pa.size() < 2) return pa.empty() ? 0.0 : matched_angle(pa, pb, Eigen::Matrix3d::Identity());
  // Anchor a on its first point and the partner closest to orthogonal, then try every image of that pair in b.
  std::size_t k = 1;
  for (std::size_t j = 2; j < pa.size(); ++j) {
    if (std::abs(pa[0].dot(pa[j])) < std::abs(pa[0].dot(pa[k]))) k = j;
  }
  const double anchor = pa[0].dot(pa[k]);
  if (std::abs(anchor) > 1.0 - 1e-12) {
    // Every point of a lies on one axis.
    double best = kPi;
    for (const auto& q : pb) {
      best = std::min(best, matched_angle(pa, pb, Eigen::Quaterniond::FromTwoVectors(q, pa[0]).toRotationMatrix()));
    }
    return best;
  }
  Eigen::Matrix3d fa = frame(pa[0], pa[k]);
  Eigen::Matrix3d fa_mirror = fa;
  fa_mirror.col(2) *= -1.0;
  double best = kPi;
  for (std::size_t i = 0; i < pb.size(); ++i) {
    for (std::size_t j = 0; j < pb.size(); ++j) {
      if (i == j || std::abs(pb[i].dot(pb[j]) - anchor) > 1e-2) continue;
      const Eigen::Matrix3d fb = frame(pb[i], pb[j]);
      best = std::min({best, matched_angle(pa, pb, fa * fb.transpose()), matched_angle(pa, pb, fa_mirror * fb.transpose())});
    }
  }
  return best;
}

SymmetricState to_symmetric_state(const ClassicalConfiguration& config) {
  std::vector<SpherePoint> pts;
  pts.reserve(config.points.size());
  for (const auto& p : config.points) pts.push_back(SpherePoint::from_vector(p));
  return points_to_state(pts).first;
}

std::vector<CurveRow> lower_bound_curve(int n_max, const ClassicalSearchConfig& config) {
  if (n_max < 2 || n_max > 16) throw std::domain_error("lower_bound_curve: n_max must lie in [2, 16]");
  std::vector<CurveRow> rows;
  for (int n = 2; n <= n_max; ++n) {
    CurveRow r;
    r.n = n;
    r.toth_eg = geometric_measure(to_symmetric_state(solve_toth(n, config)));
    r.thomson_eg = geometric_measure(to_symmetric_state(solve_thomson(n, config)));
    const BoundsReport b = bounds(n);
    r.dicke_lower = b.dicke_lower;
    r.upper = b.upper;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace symgeo
