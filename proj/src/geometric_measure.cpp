#include "symgeo/geometric_measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <optional>

#include <Eigen/Eigenvalues>

#include "symgeo/quadrature.hpp"

namespace symgeo {

namespace {

constexpr int kAscentIterations = 100;
constexpr int kSlowAscentIterations = 5000;
constexpr int kSlowRetries = 8;

// Second-order Taylor data of Q(z) = <sigma(z)|^n |psi> in the stereographic
// chart centred at sigma = (c, e^{i phi} s), with
// sigma(z) ~ (c - e^{-i phi} s conj(z), e^{i phi} s + c conj(z)) and |sigma(z)|^2 = 1 + |z|^2.
struct ChartExpansion {
  cplx q0, q1, q2;
};

class OverlapEvaluator {
 public:
  explicit OverlapEvaluator(const SymmetricState& state) : n_(state.n()), b_(n_ + 1) {
    for (int k = 0; k <= n_; ++k) b_[k] = state[k] * std::sqrt(binomial(n_, k));
    cpow_.resize(n_ + 1);
    bpow_.resize(n_ + 1);
  }

  int n() const { return n_; }

  cplx amplitude(const SpherePoint& p) {
    fill_powers(p);
    cplx sum = 0.0;
    for (int k = 0; k <= n_; ++k) sum += b_[k] * cpow_[n_ - k] * bpow_[k];
    return sum;
  }

  double g(const SpherePoint& p) { return std::abs(amplitude(p)); }

  ChartExpansion expand(const SpherePoint& p) {
    fill_powers(p);
    const double c = std::cos(p.theta() / 2.0);
    const cplx alpha = std::polar(std::sin(p.theta() / 2.0), p.phi());
    auto cp = [&](int e) { return e < 0 ? 0.0 : cpow_[e]; };
    auto bp = [&](int e) { return e < 0 ? cplx(0.0) : bpow_[e]; };
    ChartExpansion ex{0.0, 0.0, 0.0};
    for (int k = 0; k <= n_; ++k) {
      if (b_[k] == cplx(0.0)) continue;
      const int m = n_ - k;
      // (c - alpha z)^m and (beta + c z)^k truncated at z^2.
      const cplx a0 = cp(m);
      const cplx a1 = -static_cast<double>(m) * cp(m - 1) * alpha;
      const cplx a2 = 0.5 * m * (m - 1) * cp(m - 2) * alpha * alpha;
      const cplx e0 = bp(k);
      const cplx e1 = static_cast<double>(k) * bp(k - 1) * c;
      const cplx e2 = 0.5 * k * (k - 1) * bp(k - 2) * c * c;
      ex.q0 += b_[k] * a0 * e0;
      ex.q1 += b_[k] * (a0 * e1 + a1 * e0);
      ex.q2 += b_[k] * (a0 * e2 + a1 * e1 + a2 * e0);
    }
    return ex;
  }

 private:
  void fill_powers(const SpherePoint& p) {
    const double c = std::cos(p.theta() / 2.0);
    const cplx beta = std::polar(std::sin(p.theta() / 2.0), -p.phi());
    cpow_[0] = 1.0;
    bpow_[0] = 1.0;
    for (int k = 1; k <= n_; ++k) {
      cpow_[k] = cpow_[k - 1] * c;
      bpow_[k] = bpow_[k - 1] * beta;
    }
  }

  int n_;
  std::vector<cplx> b_;
  std::vector<double> cpow_;
  std::vector<cplx> bpow_;
};

SpherePoint chart_point(const SpherePoint& p, cplx z) {
  const double c = std::cos(p.theta() / 2.0);
  const double s = std::sin(p.theta() / 2.0);
  const cplx zc = std::conj(z);
  return SpherePoint::from_spinor(c - std::polar(s, -p.phi()) * zc, std::polar(s, p.phi()) + c * zc);
}

struct ChartDerivatives {
  double g = 0.0;
  Eigen::Vector2d grad = Eigen::Vector2d::Zero();  // of log g^2 in chart coordinates
  Eigen::Matrix2d hess = Eigen::Matrix2d::Zero();
};

ChartDerivatives chart_derivatives(OverlapEvaluator& ev, const SpherePoint& p) {
  const ChartExpansion ex = ev.expand(p);
  ChartDerivatives d;
  d.g = std::abs(ex.q0);
  if (d.g == 0.0) return d;
  const cplx h1 = ex.q1 / ex.q0;
  const cplx h2 = (2.0 * ex.q2 * ex.q0 - ex.q1 * ex.q1) / (ex.q0 * ex.q0);
  const double n = ev.n();
  d.grad << 2.0 * h1.real(), -2.0 * h1.imag();
  d.hess << 2.0 * h2.real() - 2.0 * n, -2.0 * h2.imag(), -2.0 * h2.imag(), -2.0 * h2.real() - 2.0 * n;
  return d;
}

std::vector<SpherePoint> fibonacci_lattice(int count) {
  std::vector<SpherePoint> pts;
  pts.reserve(count);
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    pts.emplace_back(std::acos(z), golden * i);
  }
  return pts;
}

// k nearest neighbours of every lattice point, cached per lattice size.
const std::vector<std::vector<int>>& lattice_neighbours(int count) {
  constexpr int k = 8;
  static std::mutex mutex;
  static std::map<int, std::vector<std::vector<int>>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(count);
  if (it != cache.end()) return it->second;
  const std::vector<SpherePoint> pts = fibonacci_lattice(count);
  std::vector<Eigen::Vector3d> v;
  v.reserve(count);
  for (const SpherePoint& p : pts) v.push_back(p.bloch());
  std::vector<std::vector<int>> nbrs(count);
  std::vector<std::pair<double, int>> d(count);
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < count; ++j) d[j] = {j == i ? 1e300 : (v[i] - v[j]).squaredNorm(), j};
    const int m = std::min(k, count - 1);
    std::partial_sort(d.begin(), d.begin() + m, d.end());
    for (int j = 0; j < m; ++j) nbrs[i].push_back(d[j].second);
  }
  return cache.emplace(count, std::move(nbrs)).first->second;
}

bool point_less(const LocalMaximum& a, const LocalMaximum& b) {
  if (a.g != b.g) return a.g > b.g;
  if (a.point.theta() != b.point.theta()) return a.point.theta() < b.point.theta();
  return a.point.phi() < b.point.phi();
}

// Keeps the best representative of every group of maxima within `tol`.
std::vector<LocalMaximum> dedupe(std::vector<LocalMaximum> maxima, double tol) {
  std::stable_sort(maxima.begin(), maxima.end(), point_less);
  std::vector<LocalMaximum> out;
  for (const LocalMaximum& m : maxima) {
    const bool seen = std::any_of(out.begin(), out.end(), [&](const LocalMaximum& o) {
      return angular_distance(o.point, m.point) < tol;
    });
    if (!seen) out.push_back(m);
  }
  return out;
}

CppAnalysis assemble(std::vector<LocalMaximum> maxima, const CppSearchOptions& options, std::string strategy) {
  if (maxima.empty()) throw NumericError("find_cpps: no local maximum converged", 0.0);
  maxima = dedupe(std::move(maxima), options.dedupe_tolerance);
  CppAnalysis out;
  out.strategy = std::move(strategy);
  out.g_max = maxima.front().g;
  const double cut = out.g_max * (1.0 - options.cpp_tolerance);
  for (const LocalMaximum& m : maxima) {
    if (m.g >= cut) {
      out.cpps.push_back(m.point);
    } else {
      out.local_maxima.push_back(m);
    }
  }
  out.e_g = entanglement_from_overlap(out.g_max);
  return out;
}

// d/dtheta and d^2/dtheta^2 of log g^2 along the meridian through p.
std::pair<double, double> meridian_derivatives(OverlapEvaluator& ev, const SpherePoint& p, double phi0) {
  const ChartExpansion ex = ev.expand(p);
  if (ex.q0 == cplx(0.0)) return {0.0, 0.0};
  const cplx h1 = ex.q1 / ex.q0;
  const cplx h2 = (2.0 * ex.q2 * ex.q0 - ex.q1 * ex.q1) / (ex.q0 * ex.q0);
  // Moving along the meridian is z = x e^{-i phi0}, and theta = theta0 + 2 atan(x).
  const cplx dir = std::polar(1.0, -phi0);
  const double f1 = 2.0 * (h1 * dir).real();
  const double f2 = 2.0 * (h2 * dir * dir).real() - 2.0 * ev.n();
  return {f1 / 2.0, f2 / 4.0};
}

}  // namespace

double overlap(const SymmetricState& state, const SpherePoint& sigma) {
  OverlapEvaluator ev(state);
  return ev.g(sigma);
}

LocalProbe probe(const SymmetricState& state, const SpherePoint& sigma) {
  OverlapEvaluator ev(state);
  const ChartDerivatives d = chart_derivatives(ev, sigma);
  LocalProbe out;
  out.g = d.g;
  // Arc length is twice the chart length at the centre.
  out.gradient_norm = d.g * d.grad.norm() / 4.0;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(d.hess / 4.0, Eigen::EigenvaluesOnly);
  out.max_curvature = eig.eigenvalues()(1);
  return out;
}

AscentResult ascend(const SymmetricState& state, const SpherePoint& start, int max_iterations) {
  OverlapEvaluator ev(state);
  AscentResult res;
  SpherePoint p = start;
  // A start on an exact zero of g carries no gradient; nudge it off.
  if (ev.g(p) < 1e-300) p = SpherePoint(p.theta() + 1e-3, p.phi() + 1e-3);
  const double n = state.n();
  for (int it = 0; it < max_iterations; ++it) {
    res.iterations = it;
    const ChartDerivatives d = chart_derivatives(ev, p);
    if (d.g == 0.0) break;
    const double gnorm = d.grad.norm();
    if (gnorm < 1e-10) {
      res.converged = true;
      break;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(d.hess);
    Eigen::Vector2d lam = eig.eigenvalues();
    if (gnorm < 1e-6 && lam(1) < -1e-8 * n) {
      // Inside the quadratic basin: pure Newton, since the objective change
      // is below rounding and a line search would only stall.
      const Eigen::Vector2d step = -d.hess.inverse() * d.grad;
      if (step.allFinite() && step.norm() < 1e-2) {
        p = chart_point(p, cplx(step(0), step(1)));
        continue;
      }
    }
    for (int i = 0; i < 2; ++i) lam(i) = -std::max(std::abs(lam(i)), 1e-10 * n);
    const Eigen::Matrix2d& v = eig.eigenvectors();
    Eigen::Vector2d step = -(v * lam.cwiseInverse().asDiagonal() * v.transpose()) * d.grad;
    const double len = step.norm();
    if (len > 0.5) step *= 0.5 / len;

    const double f0 = 2.0 * std::log(d.g);
    const double slope = d.grad.dot(step);
    double t = 1.0;
    bool accepted = false;
    SpherePoint trial = p;
    for (int ls = 0; ls < 40; ++ls) {
      trial = chart_point(p, cplx(t * step(0), t * step(1)));
      const double gt = ev.g(trial);
      if (gt > 0.0 && 2.0 * std::log(gt) >= f0 + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      // Rounding dominates the line search near a maximum; take the Newton step
      // only if it cannot lose more than a few ulps.
      trial = chart_point(p, cplx(step(0), step(1)));
      if (ev.g(trial) < d.g * (1.0 - 1e-14)) break;
    }
    p = trial;
  }
  const ChartDerivatives d = chart_derivatives(ev, p);
  res.point = p;
  res.g = d.g;
  res.gradient_norm = d.g * d.grad.norm() / 4.0;
  if (!res.converged && d.grad.norm() < 1e-10) res.converged = true;
  return res;
}

std::vector<LocalMaximum> meridian_maxima(const SymmetricState& state, double phi0, int grid_points) {
  OverlapEvaluator ev(state);
  const int count = std::max(grid_points, 8);
  std::vector<double> theta(count), f(count);
  for (int i = 0; i < count; ++i) {
    theta[i] = kPi * i / (count - 1);
    f[i] = ev.g(SpherePoint(theta[i], phi0));
  }
  std::vector<int> candidates;
  for (int i = 0; i < count; ++i) {
    const bool left_ok = i == 0 || f[i] >= f[i - 1];
    const bool right_ok = i == count - 1 || f[i] >= f[i + 1];
    if (left_ok && right_ok && f[i] > 0.0) candidates.push_back(i);
  }
  // g^2 along a great circle is a trigonometric polynomial of degree n, so a
  // half circle holds at most n + 1 genuine maxima; more means a flat plateau.
  const std::size_t cap = static_cast<std::size_t>(state.n()) + 2;
  if (candidates.size() > cap) {
    std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) { return f[a] > f[b]; });
    candidates.resize(cap);
    std::sort(candidates.begin(), candidates.end());
  }
  std::vector<LocalMaximum> out;
  for (int i : candidates) {

    double lo = theta[std::max(i - 1, 0)];
    double hi = theta[std::min(i + 1, count - 1)];
    double t = theta[i];
    for (int it = 0; it < 100; ++it) {
      const auto [d1, d2] = meridian_derivatives(ev, SpherePoint(t, phi0), phi0);
      if (std::abs(d1) < 1e-13) break;
      // Maxima on the boundary of [0, pi] stay there.
      if ((t <= 0.0 && d1 < 0.0) || (t >= kPi && d1 > 0.0)) break;
      if (d1 > 0.0) {
        lo = t;
      } else {
        hi = t;
      }
      double next = d2 < 0.0 ? t - d1 / d2 : std::numeric_limits<double>::quiet_NaN();
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - t) < 1e-15) break;
      t = next;
      if (hi - lo < 1e-15) break;
    }
    const SpherePoint p(t, phi0);
    out.push_back({p, ev.g(p)});
  }
  return dedupe(std::move(out), kDedupeTolerance);
}

namespace {

// A state whose MPs form one point, or two antipodal points, is a rotated Dicke state. Returns the
// point carrying the n - k coinciding MPs and the Dicke index k after rotating that point north.
struct RotatedDicke {
  SpherePoint axis;
  int k = 0;
};

std::optional<RotatedDicke> rotated_dicke(const SymmetricState& state) {
  const std::vector<SpherePoint> pts = state_to_points(state).points;
  const std::vector<PointCluster> clusters = cluster_points(pts, 0.05);
  if (clusters.size() > 2) return std::nullopt;
  if (clusters.size() == 2 && angular_distance(clusters[0].point.antipode(), clusters[1].point) > 0.05) {
    return std::nullopt;
  }
  // Starting axis: all points folded onto the first cluster and averaged.
  const SpherePoint seed = clusters[0].point;
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (const SpherePoint& p : pts) {
    const Eigen::Vector3d v = p.bloch();
    mean += angular_distance(p, seed) < 0.1 ? v : Eigen::Vector3d(-v);
  }
  Eigen::Vector3d a = mean.normalized();
  auto to_north = [&](const Eigen::Vector3d& v) {
    const SpherePoint p = SpherePoint::from_vector(v);
    return rotate_y(rotate_z(state, -p.phi()), -p.theta());
  };
  int k = 0;
  to_north(a).coeffs().cwiseAbs().maxCoeff(&k);
  const int n = state.n();
  // Off-Dicke amplitudes as a real residual vector.
  auto residual = [&](const Eigen::Vector3d& v) {
    const SymmetricState r = to_north(v);
    Eigen::VectorXd out(2 * n);
    for (int j = 0, i = 0; j <= n; ++j) {
      if (j == k) continue;
      out[i++] = r[j].real();
      out[i++] = r[j].imag();
    }
    return out;
  };
  // Multiple roots carry errors near sqrt(eps); a few Gauss-Newton steps on the axis remove them.
  for (int it = 0; it < 4; ++it) {
    const Eigen::VectorXd r0 = residual(a);
    if (r0.norm() < 1e-14) break;
    Eigen::Vector3d e1 = a.unitOrthogonal();
    Eigen::Vector3d e2 = a.cross(e1);
    Eigen::MatrixXd jac(r0.size(), 2);
    const double h = 1e-7;
    jac.col(0) = (residual((a + h * e1).normalized()) - r0) / h;
    jac.col(1) = (residual((a + h * e2).normalized()) - r0) / h;
    const Eigen::Vector2d step = jac.colPivHouseholderQr().solve(-r0);
    a = (a + step[0] * e1 + step[1] * e2).normalized();
  }
  if (residual(a).norm() > 1e-10) return std::nullopt;
  return RotatedDicke{SpherePoint::from_vector(a), k};
}

// Image of the point at polar angle theta on the prime meridian, in the frame whose pole is `axis`.
SpherePoint from_axis_frame(const SpherePoint& axis, double theta, double psi = 0.0) {
  const Eigen::Matrix3d r = (Eigen::AngleAxisd(axis.phi(), Eigen::Vector3d::UnitZ()) *
                             Eigen::AngleAxisd(axis.theta(), Eigen::Vector3d::UnitY()))
                                .toRotationMatrix();
  return SpherePoint::from_vector(r * Eigen::Vector3d(std::sin(theta) * std::cos(psi), std::sin(theta) * std::sin(psi), std::cos(theta)));
}

// Dicke detection holds only up to a tolerance: take the best ring sample and polish it, so g_max
// is never below the true maximum by more than the ascent tolerance.
void settle_ring(const SymmetricState& state, const SpherePoint& axis, CppAnalysis& out) {
  out.g_max = overlap(state, out.cpps.front());
  if (out.is_ring()) {
    const int samples = 8 * (state.n() + 1);
    for (int j = 1; j < samples; ++j) {
      const SpherePoint p = from_axis_frame(axis, *out.ring_theta, kTwoPi * j / samples);
      const double g = overlap(state, p);
      if (g > out.g_max) {
        out.g_max = g;
        out.cpps = {p};
      }
    }
  }
  const AscentResult polished = ascend(state, out.cpps.front());
  if (polished.g > out.g_max) {
    out.g_max = polished.g;
    out.cpps = {polished.point};
  }
  out.e_g = entanglement_from_overlap(out.g_max);
}

// Meridian or multistart search for states that are not exactly Dicke.
CppAnalysis search_cpps(const SymmetricState& state, const CppSearchOptions& options, const SymmetryInfo& info) {
  const int n = state.n();
  if (options.exploit_symmetry && info.is_positive) {
    const int grid = options.meridian_points > 0 ? options.meridian_points : 400 + 40 * n;
    const std::vector<LocalMaximum> base = meridian_maxima(state, 0.0, grid);
    const int m = info.rotational_order;
    std::vector<LocalMaximum> all;
    for (const LocalMaximum& lm : base) {
      for (int r = 0; r < m; ++r) {
        const SpherePoint p(lm.point.theta(), kTwoPi * r / m);
        all.push_back({p, r == 0 ? lm.g : overlap(state, p)});
      }
    }
    return assemble(std::move(all), options, m > 1 ? "meridian" : "meridian-free");
  }

  const int count = options.starts > 0 ? options.starts : std::max(40 * n, 240);
  std::vector<SpherePoint> starts = options.warm_starts;
  const std::vector<SpherePoint> lattice = fibonacci_lattice(count);
  if (options.prune_lattice) {
    // Ascend only from lattice points that beat all of their nearest neighbours.
    const std::vector<std::vector<int>>& nbrs = lattice_neighbours(count);
    OverlapEvaluator ev(state);
    std::vector<double> vals(count);
    for (int i = 0; i < count; ++i) vals[i] = ev.g(lattice[i]);
    // Near-top points also start, since two close peaks can share one lattice maximum.
    const double top = 0.98 * *std::max_element(vals.begin(), vals.end());
    for (int i = 0; i < count; ++i) {
      if (vals[i] >= top ||
          std::all_of(nbrs[i].begin(), nbrs[i].end(), [&](int j) { return vals[i] >= vals[j]; })) {
        starts.push_back(lattice[i]);
      }
    }
  } else {
    starts.insert(starts.end(), lattice.begin(), lattice.end());
  }
  std::vector<LocalMaximum> maxima;
  std::vector<AscentResult> stalled;
  auto climb = [&](const SpherePoint& s, int iterations) {
    const AscentResult r = ascend(state, s, iterations);
    if (r.gradient_norm < 1e-8 && r.g > 0.0) {
      const LocalProbe pr = probe(state, r.point);
      if (pr.max_curvature <= 1e-6) maxima.push_back({r.point, r.g});
    } else if (r.g > 0.0) {
      stalled.push_back(r);
    }
  };
  auto climb_default = [&](const SpherePoint& s) { climb(s, kAscentIterations); };
  for (const SpherePoint& s : starts) climb_default(s);
  if (options.exploit_symmetry && (info.is_real || info.rotational_order > 1)) {
    // Symmetry images of a CPP are CPPs too; ascend from the ones not yet seen. Too many candidates
    // means a degenerate continuum, where images add nothing.
    double best = 0.0;
    for (const LocalMaximum& lm : maxima) best = std::max(best, lm.g);
    std::vector<LocalMaximum> top;
    for (const LocalMaximum& lm : maxima) {
      if (lm.g >= best * (1.0 - options.cpp_tolerance)) top.push_back(lm);
    }
    top = dedupe(std::move(top), kDedupeTolerance);
    const int m = info.rotational_order;
    if (static_cast<int>(top.size()) <= n * n) {
      std::vector<SpherePoint> known;
      for (const LocalMaximum& lm : top) known.push_back(lm.point);
      for (const LocalMaximum& lm : top) {
        for (int r = 0; r < m; ++r) {
          const SpherePoint p(lm.point.theta(), lm.point.phi() + kTwoPi * r / m);
          std::vector<SpherePoint> images{p};
          if (info.is_real) images.push_back(p.conjugate());
          for (const SpherePoint& img : images) {
            if (std::none_of(known.begin(), known.end(),
                             [&](const SpherePoint& q) { return angular_distance(img, q) < kDedupeTolerance; })) {
              known.push_back(img);
              climb_default(img);
            }
          }
        }
      }
    }
  }
  if (maxima.empty() && !stalled.empty()) {
    // Nearly flat ridges (states close to a rotated Dicke ring) need far more Newton steps.
    std::stable_sort(stalled.begin(), stalled.end(),
                     [](const AscentResult& a, const AscentResult& b) { return a.g > b.g; });
    std::vector<AscentResult> slow(stalled.begin(),
                                   stalled.begin() + std::min<std::size_t>(stalled.size(), kSlowRetries));
    stalled.clear();
    for (const AscentResult& r : slow) climb(r.point, kSlowAscentIterations);
  }
  if (maxima.empty() && options.prune_lattice) {
    CppSearchOptions wide = options;
    wide.prune_lattice = false;
    return search_cpps(state, wide, info);
  }
  if (maxima.empty()) {
    // Last resort: the highest stalled endpoint that is not a saddle.
    for (const AscentResult& r : stalled) {
      if (probe(state, r.point).max_curvature <= 1e-6 &&
          (maxima.empty() || r.g > maxima.front().g)) {
        maxima.assign(1, {r.point, r.g});
      }
    }
  }
  return assemble(std::move(maxima), options, "multistart");
}


// Ring result for a Dicke state in a rotated frame, if the state is one.
std::optional<CppAnalysis> rotated_dicke_analysis(const SymmetricState& state) {
  const std::optional<RotatedDicke> rd = rotated_dicke(state);
  if (!rd) return std::nullopt;
  const int n = state.n();
  CppAnalysis out;
  out.strategy = "rotated-dicke";
  if (rd->k == 0 || rd->k == n) {
    out.cpps = {from_axis_frame(rd->axis, rd->k == 0 ? 0.0 : kPi)};
  } else {
    const double t = dicke_ring_theta(n, rd->k);
    out.ring_theta = t;
    out.ring_axis = rd->axis;
    out.cpps = {from_axis_frame(rd->axis, t)};
  }
  settle_ring(state, rd->axis, out);
  return out;
}

}  // namespace

CppAnalysis find_cpps(const SymmetricState& state, const CppSearchOptions& options) {
  const int n = state.n();
  const SymmetryInfo info = classify(snap_small(state));

  if (options.exploit_symmetry && info.dicke_index) {
    const int k = *info.dicke_index;
    CppAnalysis out;
    out.strategy = "dicke";
    if (k == 0 || k == n) {
      const SpherePoint pole = k == 0 ? SpherePoint::north() : SpherePoint::south();
      out.cpps = {pole};
    } else {
      const double t = dicke_ring_theta(n, k);
      out.ring_theta = t;
      out.cpps = {SpherePoint(t, 0.0)};
    }
    settle_ring(state, SpherePoint::north(), out);
    return out;
  }

  if (!options.exploit_symmetry) return search_cpps(state, options, info);
  // Rotated Dicke states surface as a failed search or as more tied maxima than isolated CPPs allow;
  // only then is the root-based frame test worth its cost.
  const std::size_t ring_hint = std::max(n, 2 * n - 4);
  try {
    CppAnalysis out = search_cpps(state, options, info);
    if (out.cpps.size() <= ring_hint) return out;
    if (std::optional<CppAnalysis> rd = rotated_dicke_analysis(state)) return *rd;
    return out;
  } catch (const NumericError&) {
    if (std::optional<CppAnalysis> rd = rotated_dicke_analysis(state)) return *rd;
    throw;
  }
}

double geometric_measure(const SymmetricState& state, const CppSearchOptions& options) {
  return find_cpps(state, options).e_g;
}

double dicke_entanglement(int n, int k) {
  if (n < 1 || k < 0 || k > n) throw std::domain_error("dicke_entanglement: need 0 <= k <= n");
  if (k == 0 || k == n) return 0.0;
  const double nn = n;
  const double bits = k * std::log2(nn / k) + (n - k) * std::log2(nn / (n - k)) - std::log2(binomial(n, k));
  return bits;
}

double dicke_ring_theta(int n, int k) {
  if (n < 1 || k < 0 || k > n) throw std::domain_error("dicke_ring_theta: need 0 <= k <= n");
  return 2.0 * std::acos(std::sqrt(static_cast<double>(n - k) / n));
}

double sphere_mean_g2(const SymmetricState& state, int quadrature_order) {
  const GaussLegendreRule rule = gauss_legendre(std::max(quadrature_order, 1));
  const int n = state.n();
  const int nphi = std::max(2 * n + 1, 2 * quadrature_order);
  OverlapEvaluator ev(state);
  double total = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double theta = std::acos(rule.nodes[i]);
    double ring = 0.0;
    for (int j = 0; j < nphi; ++j) {
      const double g = ev.g(SpherePoint(theta, kTwoPi * j / nphi));
      ring += g * g;
    }
    total += rule.weights[i] * ring / nphi;
  }
  // Weights integrate to 2 over cos(theta); the phi average is already taken.
  return total / 2.0;
}

BoundsReport bounds(int n) {
  if (n < 1) throw std::domain_error("bounds: n must be at least 1");
  BoundsReport r;
  r.n = n;
  r.upper = std::log2(n + 1.0);
  for (int k = 0; k <= n; ++k) r.dicke_lower = std::max(r.dicke_lower, dicke_entanglement(n, k));
  r.stirling_approx = std::log2(std::sqrt(n * kPi / 2.0));
  r.general_lower = n / 2.0;
  return r;
}

namespace {

// |amplitude| on the tensor grid via one complex matrix product.
Eigen::MatrixXd grid_values(const SymmetricState& state, int rows, int cols) {
  const int n = state.n();
  Eigen::MatrixXcd radial(rows, n + 1);
  for (int i = 0; i < rows; ++i) {
    const double theta = rows > 1 ? kPi * i / (rows - 1) : 0.0;
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    for (int k = 0; k <= n; ++k) {
      radial(i, k) = state[k] * std::sqrt(binomial(n, k)) * std::pow(c, n - k) * std::pow(s, k);
    }
  }
  Eigen::MatrixXcd phase(n + 1, cols);
  for (int j = 0; j < cols; ++j) {
    const double phi = kTwoPi * j / cols;
    for (int k = 0; k <= n; ++k) phase(k, j) = std::polar(1.0, -k * phi);
  }
  return (radial * phase).cwiseAbs();
}

}  // namespace

std::vector<GridSample> grid_scan(const SymmetricState& state, int rows, int cols) {
  if (rows < 2 || cols < 1) throw std::domain_error("grid_scan: need rows >= 2 and cols >= 1");
  const Eigen::MatrixXd g = grid_values(state, rows, cols);
  std::vector<GridSample> out;
  out.reserve(static_cast<std::size_t>(rows) * cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      out.push_back({kPi * i / (rows - 1), kTwoPi * j / cols, g(i, j) * g(i, j)});
    }
  }
  return out;
}

double grid_max(const SymmetricState& state, int rows, int cols) {
  if (rows < 3 || cols < 3) throw std::domain_error("grid_max: need at least a 3 x 3 grid");
  const Eigen::MatrixXd g = grid_values(state, rows, cols);
  const double dtheta = kPi / (rows - 1);
  const double dphi = kTwoPi / cols;
  OverlapEvaluator ev(state);
  double best = std::max(g.row(0).maxCoeff(), g.row(rows - 1).maxCoeff());
  const double coarse = g.maxCoeff();
  best = std::max(best, coarse);

  auto vertex = [](double fm, double f0, double fp) {
    const double den = fm - 2.0 * f0 + fp;
    if (den >= 0.0) return 0.0;
    return std::clamp(0.5 * (fm - fp) / den, -1.0, 1.0);
  };

  for (int i = 1; i < rows - 1; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double v = g(i, j);
      if (v < coarse * (1.0 - 1e-2)) continue;
      bool is_max = true;
      for (int di = -1; di <= 1 && is_max; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if ((di || dj) && g(i + di, (j + dj + cols) % cols) > v) {
            is_max = false;
            break;
          }
        }
      }
      if (!is_max) continue;
      // Alternating parabolic refinement on a shrinking stencil.
      double theta = kPi * i / (rows - 1);
      double phi = kTwoPi * j / cols;
      double ht = dtheta;
      double hp = dphi;
      double f0 = v;
      for (int pass = 0; pass < 6; ++pass) {
        const double ft_m = ev.g(SpherePoint(theta - ht, phi));
        const double ft_p = ev.g(SpherePoint(theta + ht, phi));
        theta += ht * vertex(ft_m, f0, ft_p);
        f0 = ev.g(SpherePoint(theta, phi));
        const double fp_m = ev.g(SpherePoint(theta, phi - hp));
        const double fp_p = ev.g(SpherePoint(theta, phi + hp));
        phi += hp * vertex(fp_m, f0, fp_p);
        f0 = ev.g(SpherePoint(theta, phi));
        ht *= 0.25;
        hp *= 0.25;
      }
      best = std::max(best, f0);
    }
  }
  return best;
}

}  // namespace symgeo
