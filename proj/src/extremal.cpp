#include "symgeo/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "parallel.hpp"
#include "symgeo/minimax.hpp"
#include "symgeo/nelder_mead.hpp"

namespace symgeo {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// ---------------------------------------------------------------------------
// Ansatz

namespace {

std::vector<int> effective_support(const Ansatz& a, int n) {
  if (!a.support.empty()) return a.support;
  std::vector<int> all(n + 1);
  for (int k = 0; k <= n; ++k) all[k] = k;
  return all;
}

std::string support_string(const std::vector<int>& support) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < support.size(); ++i) os << (i ? "," : "") << support[i];
  os << '}';
  return os.str();
}

}  // namespace

std::string Ansatz::name() const {
  std::string base = kind == AnsatzKind::Positive ? "positive" : kind == AnsatzKind::Real ? "real" : "complex";
  return support.empty() ? base : base + "-sparse";
}

int Ansatz::dimension(int n) const {
  const int m = support.empty() ? n + 1 : static_cast<int>(support.size());
  return kind == AnsatzKind::Complex ? 2 * m - 1 : m;
}

SymmetricState Ansatz::state(int n, const Eigen::VectorXd& p) const {
  const std::vector<int> supp = effective_support(*this, n);
  if (p.size() != dimension(n)) throw std::domain_error("Ansatz::state: wrong parameter count");
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n + 1);
  for (std::size_t i = 0; i < supp.size(); ++i) {
    const int k = supp[i];
    switch (kind) {
      case AnsatzKind::Positive:
        c[k] = std::abs(p[i]);
        break;
      case AnsatzKind::Real:
        c[k] = p[i];
        break;
      case AnsatzKind::Complex:
        c[k] = i == 0 ? cplx(std::abs(p[0])) : cplx(p[2 * i - 1], p[2 * i]);
        break;
    }
  }
  return SymmetricState(std::move(c));
}

bool Ansatz::admits(const SymmetricState& s) const {
  try {
    parameters(s);
    return true;
  } catch (const std::domain_error&) {
    return false;
  }
}

Eigen::VectorXd Ansatz::parameters(const SymmetricState& s) const {
  const int n = s.n();
  const std::vector<int> supp = effective_support(*this, n);
  for (int k = 0; k <= n; ++k) {
    if (std::abs(s[k]) > kSupportTolerance && std::find(supp.begin(), supp.end(), k) == supp.end()) {
      throw std::domain_error("Ansatz::parameters: state has weight outside the support");
    }
  }
  // Gauge: the first nonzero supported coefficient becomes real and positive.
  cplx phase = 1.0;
  for (int k : supp) {
    if (std::abs(s[k]) > kSupportTolerance) {
      phase = std::conj(s[k]) / std::abs(s[k]);
      break;
    }
  }
  Eigen::VectorXd p(dimension(n));
  for (std::size_t i = 0; i < supp.size(); ++i) {
    const cplx a = s[supp[i]] * phase;
    switch (kind) {
      case AnsatzKind::Positive:
        if (a.real() < -kNormTolerance || std::abs(a.imag()) > kNormTolerance) {
          throw std::domain_error("Ansatz::parameters: state is not positive");
        }
        p[i] = std::max(a.real(), 0.0);
        break;
      case AnsatzKind::Real:
        if (std::abs(a.imag()) > kNormTolerance) throw std::domain_error("Ansatz::parameters: state is not real");
        p[i] = a.real();
        break;
      case AnsatzKind::Complex:
        if (i == 0) {
          p[0] = a.real();
        } else {
          p[2 * i - 1] = a.real();
          p[2 * i] = a.imag();
        }
        break;
    }
  }
  return p;
}

Ansatz parse_ansatz(const std::string& name, const std::vector<int>& support) {
  Ansatz a;
  a.support = support;
  std::sort(a.support.begin(), a.support.end());
  a.support.erase(std::unique(a.support.begin(), a.support.end()), a.support.end());
  if (name == "positive" || name == "positive-full") {
    a.kind = AnsatzKind::Positive;
  } else if (name == "positive-sparse") {
    a.kind = AnsatzKind::Positive;
    if (a.support.empty()) throw std::domain_error("ansatz positive-sparse needs a support");
  } else if (name == "real" || name == "real-full" || name == "real-sparse") {
    a.kind = AnsatzKind::Real;
  } else if (name == "complex" || name == "complex-full" || name == "complex-sparse") {
    a.kind = AnsatzKind::Complex;
  } else {
    throw std::domain_error("unknown ansatz '" + name + "'");
  }
  return a;
}

// ---------------------------------------------------------------------------
// Outer search

namespace {

// Inner maximum as seen by the outer optimizer. Between periodic full
// searches it only re-ascends from the maxima of the previous call plus a
// coarse lattice, which tracks moving maxima at a fraction of the cost.
class InnerMaximum {
 public:
  InnerMaximum(int n, Ansatz ansatz) : n_(n), ansatz_(std::move(ansatz)) {}

  double operator()(const Eigen::VectorXd& p) {
    ++evaluations_;
    Eigen::VectorXd q = p;
    if (!q.allFinite() || q.norm() == 0.0) return 1.0;
    const SymmetricState s = ansatz_.state(n_, q);
    CppSearchOptions opt;
    if (calls_++ % kRefreshPeriod != 0) opt.starts = 4 * n_ + 8;
    opt.warm_starts = memory_;
    const CppAnalysis a = find_cpps(s, opt);
    memory_ = a.cpps;
    for (std::size_t i = 0; i < a.local_maxima.size() && memory_.size() < static_cast<std::size_t>(4 * n_); ++i) {
      memory_.push_back(a.local_maxima[i].point);
    }
    return a.g_max;
  }

  int evaluations() const { return evaluations_; }

 private:
  static constexpr int kRefreshPeriod = 25;
  int n_;
  Ansatz ansatz_;
  std::vector<SpherePoint> memory_;
  int calls_ = 0;
  int evaluations_ = 0;
};

double full_gmax(int n, const Ansatz& ansatz, const Eigen::VectorXd& p) {
  if (!p.allFinite() || p.norm() == 0.0) return 1.0;
  return find_cpps(ansatz.state(n, p)).g_max;
}

struct Descent {
  Eigen::VectorXd p;
  double g = 1.0;
  int evaluations = 0;
  bool converged = false;
};

// Nelder-Mead followed by polishing cycles restarted from the incumbent with
// a shrinking simplex, until a cycle gains less than outer_tol in E_G.
Descent descend(int n, const Ansatz& ansatz, const Eigen::VectorXd& p0, double step, int budget,
                double outer_tol, int cycles) {
  InnerMaximum f(n, ansatz);
  NelderMeadOptions opt;
  opt.max_evaluations = budget;
  opt.initial_step = step;
  auto fn = [&](const Eigen::VectorXd& p) { return f(p); };
  NelderMeadResult r = nelder_mead(fn, p0, opt);
  Descent d;
  d.p = r.x;
  d.g = full_gmax(n, ansatz, r.x);
  for (int c = 0; c < cycles; ++c) {
    opt.initial_step = std::max(step * std::pow(0.2, c + 1), 1e-6);
    const Eigen::VectorXd start = d.p / d.p.norm();
    r = nelder_mead(fn, start, opt);
    const double g = full_gmax(n, ansatz, r.x);
    const double gain = g < d.g ? -2.0 * std::log2(g / d.g) : 0.0;
    if (g < d.g) {
      d.p = r.x;
      d.g = g;
    }
    if (gain < outer_tol) {
      d.converged = true;
      break;
    }
  }
  d.p /= d.p.norm();
  d.evaluations = f.evaluations();
  return d;
}

struct Polish {
  Eigen::VectorXd p;
  double g = 1.0;
  int steps = 0;
  bool stationary = false;
};

// Trust-region steps on the linearized pointwise maximum over the near-top
// local maxima of g. Finishes what the simplex search leaves unequalized.
Polish minimax_polish(int n, const Ansatz& ansatz, Eigen::VectorXd p, const CppSearchOptions& inner) {
  const int dim = static_cast<int>(p.size());
  // Maxima found so far seed the next search, so a tracked peak cannot slip
  // between lattice points as the state moves.
  auto analyse = [&](const Eigen::VectorXd& q, const CppAnalysis* prev) {
    CppSearchOptions o = inner;
    if (prev) {
      o.warm_starts = prev->cpps;
      for (const auto& m : prev->local_maxima) o.warm_starts.push_back(m.point);
    }
    return find_cpps(ansatz.state(n, q), o);
  };
  CppAnalysis a = analyse(p, nullptr);
  Polish out;
  double radius = 1e-3;
  for (int it = 0; it < 1000 && radius > 1e-14; ++it) {
    std::vector<SpherePoint> active = a.cpps;
    for (const auto& m : a.local_maxima) {
      if (m.g >= a.g_max * 0.95) active.push_back(m.point);
    }
    if (a.is_ring()) break;  // no finite active set
    const int m = static_cast<int>(active.size());
    Eigen::VectorXd v(m);
    Eigen::MatrixXd grads(dim, m);
    const double h = 1e-6;
    for (int j = 0; j < m; ++j) {
      v[j] = overlap(ansatz.state(n, p), active[j]);
      for (int i = 0; i < dim; ++i) {
        Eigen::VectorXd up = p, dn = p;
        up[i] += h;
        dn[i] -= h;
        grads(i, j) = (overlap(ansatz.state(n, up), active[j]) - overlap(ansatz.state(n, dn), active[j])) / (2 * h);
      }
    }
    const MinimaxStep ms = minimax_step(v, grads, radius);
    const double predicted = a.g_max - ms.model_max;
    if (predicted < 1e-15 * a.g_max) {
      out.stationary = true;
      break;
    }
    const Eigen::VectorXd q = p + ms.step;
    CppAnalysis b = analyse(q, &a);
    const double rho = (a.g_max - b.g_max) / predicted;
    if (rho > 0.1) {
      p = q;
      a = std::move(b);
      ++out.steps;
      if (rho > 0.75) radius = std::min(2.0 * radius, 10.0);
    } else {
      radius *= 0.25;
    }
  }
  out.p = p / p.norm();
  out.g = a.g_max;
  return out;
}

struct WarmStart {
  AnsatzKind kind;
  std::vector<int> support;
  std::vector<double> initial;
};

// Sparse supports of the known optima, positive and general.
std::vector<WarmStart> warm_starts_for(int n) {
  std::vector<WarmStart> w;
  w.push_back({AnsatzKind::Positive, {n / 2}, {1.0}});
  const std::map<int, std::vector<std::vector<int>>> positive{
      {4, {{0, 3}}},         {5, {{0, 4}}},  {6, {{1, 5}}},     {7, {{1, 6}}},     {8, {{1, 6}}},
      {9, {{2, 7}}},         {10, {{0, 4, 9}, {2, 8}}},         {11, {{1, 5, 10}}}, {12, {{1, 6, 11}}}};
  if (auto it = positive.find(n); it != positive.end()) {
    for (const auto& s : it->second) w.push_back({AnsatzKind::Positive, s, std::vector<double>(s.size(), 1.0)});
  }
  if (n == 10) w.push_back({AnsatzKind::Real, {1, 5, 9}, {1.0, 1.0, -1.0}});
  if (n == 11) w.push_back({AnsatzKind::Real, {0, 5, 10}, {1.0, 1.0, -1.0}});
  if (n == 12) w.push_back({AnsatzKind::Real, {1, 6, 11}, {1.0, -1.0, -1.0}});
  return w;
}

int rank(AnsatzKind k) { return k == AnsatzKind::Positive ? 0 : k == AnsatzKind::Real ? 1 : 2; }

struct Outcome {
  Eigen::VectorXd p;
  double g = 1.0;
  int evaluations = 0;
  bool converged = false;
  std::string origin;
};

bool lexicographic_less(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    if (a[k].real() != b[k].real()) return a[k].real() < b[k].real();
    if (a[k].imag() != b[k].imag()) return a[k].imag() < b[k].imag();
  }
  return false;
}

}  // namespace

SymmetricState refine_on_support(int n, AnsatzKind kind, const std::vector<int>& support,
                                 const std::vector<double>& initial) {
  Ansatz a{kind, support};
  Eigen::VectorXd p0(a.dimension(n));
  if (kind == AnsatzKind::Complex) {
    p0.setZero();
    p0[0] = initial.at(0);
    for (std::size_t i = 1; i < support.size(); ++i) p0[2 * i - 1] = initial.at(i);
  } else {
    for (std::size_t i = 0; i < support.size(); ++i) p0[i] = initial.at(i);
  }
  p0 /= p0.norm();
  const Descent d = descend(n, a, p0, 0.05, 200 * a.dimension(n) + 400, 1e-12, 4);
  return a.state(n, d.p);
}

ExtremalResult maximize_entanglement(int n, const SearchConfig& config) {
  if (n < 2 || n > 16) throw std::domain_error("maximize_entanglement: n must lie in [2, 16]");
  if (config.restarts < 1) throw std::domain_error("maximize_entanglement: restarts must be at least 1");
  if (!(config.outer_tol > 0.0)) throw std::domain_error("maximize_entanglement: outer_tol must be positive");
  const Ansatz& ansatz = config.ansatz;
  for (int k : ansatz.support) {
    if (k < 0 || k > n) throw std::domain_error("maximize_entanglement: support index out of range");
  }
  const int dim = ansatz.dimension(n);
  const int budget = config.max_evaluations > 0 ? config.max_evaluations : 300 * dim + 600;
  const int threads = detail::resolve_threads(config.threads);

  // Warm starts compatible with the requested ansatz.
  std::vector<WarmStart> warm;
  if (config.use_warm_starts) {
    for (const WarmStart& w : warm_starts_for(n)) {
      if (rank(w.kind) > rank(ansatz.kind)) continue;
      if (!ansatz.support.empty() &&
          !std::includes(ansatz.support.begin(), ansatz.support.end(), w.support.begin(), w.support.end())) {
        continue;
      }
      warm.push_back(w);
    }
  }

  // Stage one: each warm start optimized on its own support.
  std::vector<SymmetricState> warm_states(warm.size());
  detail::run_parallel(static_cast<int>(warm.size()), threads, [&](int i) {
    warm_states[i] = refine_on_support(n, warm[i].kind, warm[i].support, warm[i].initial);
  });

  // Stage two: every start descends in the full ansatz.
  const int total = static_cast<int>(warm.size()) + config.restarts;
  std::vector<Outcome> outcomes(total);

  // Latin hypercube design for the random restarts.
  std::mt19937_64 design_rng(splitmix64(config.seed));
  const double lo = ansatz.kind == AnsatzKind::Positive ? 0.0 : -1.0;
  std::vector<std::vector<int>> strata(dim, std::vector<int>(config.restarts));
  for (int j = 0; j < dim; ++j) {
    for (int r = 0; r < config.restarts; ++r) strata[j][r] = r;
    std::shuffle(strata[j].begin(), strata[j].end(), design_rng);
  }

  detail::run_parallel(total, threads, [&](int i) {
    Eigen::VectorXd p0(dim);
    double step = 0.2;
    std::string origin;
    if (i < static_cast<int>(warm.size())) {
      p0 = ansatz.parameters(warm_states[i]);
      step = 1e-3;
      origin = "warm " + Ansatz{warm[i].kind, warm[i].support}.name() + " " + support_string(warm[i].support);
    } else {
      const int r = i - static_cast<int>(warm.size());
      std::mt19937_64 rng(splitmix64(config.seed ^ splitmix64(static_cast<std::uint64_t>(r) + 1)));
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (int j = 0; j < dim; ++j) {
        p0[j] = lo + (1.0 - lo) * (strata[j][r] + unit(rng)) / config.restarts;
      }
      if (p0.norm() == 0.0) p0.setConstant(1.0);
      origin = "restart " + std::to_string(r);
    }
    p0 /= p0.norm();
    const Descent d = descend(n, ansatz, p0, step, budget, config.outer_tol, 4);
    outcomes[i] = {d.p, d.g, d.evaluations, d.converged, origin};
  });

  // Deterministic merge: smallest g_max, then lexicographic coefficients.
  int best = 0;
  for (int i = 1; i < total; ++i) {
    const Outcome& a = outcomes[i];
    const Outcome& b = outcomes[best];
    const bool tie = std::abs(a.g - b.g) <= 1e-12 * b.g;
    if ((!tie && a.g < b.g) || (tie && lexicographic_less(ansatz.state(n, a.p).coeffs(), ansatz.state(n, b.p).coeffs()))) {
      best = i;
    }
  }

  Polish pol = minimax_polish(n, ansatz, outcomes[best].p, config.inner);
  {
    // Re-judge both candidates with a denser unpruned search.
    CppSearchOptions dense = config.inner;
    dense.prune_lattice = false;
    dense.starts = std::max(dense.starts, 80 * n);
    const double g_polished = find_cpps(ansatz.state(n, pol.p), dense).g_max;
    const double g_simplex = find_cpps(ansatz.state(n, outcomes[best].p), dense).g_max;
    if (g_polished > g_simplex) {
      pol.p = outcomes[best].p;
      pol.g = g_simplex;
      pol.stationary = false;
    } else {
      pol.g = g_polished;
    }
  }

  ExtremalResult res;
  res.n = n;
  res.ansatz = ansatz;
  res.seed = config.seed;
  res.state = ansatz.state(n, pol.p);
  res.analysis = find_cpps(res.state, config.inner);
  res.certificate = grid_max(res.state, config.grid_rows, config.grid_cols) - res.analysis.g_max;
  res.origin = outcomes[best].origin;
  for (const Outcome& o : outcomes) res.evaluations += o.evaluations;
  res.converged = (outcomes[best].converged || pol.stationary) && std::abs(res.certificate) <= 1e-6;
  return res;
}

// ---------------------------------------------------------------------------
// Named states

double bracketed_root(const std::vector<double>& descending, double lo, double hi) {
  auto eval = [&](double x) {
    double v = 0.0;
    for (double c : descending) v = v * x + c;
    return v;
  };
  double flo = eval(lo);
  const double fhi = eval(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw std::domain_error("bracketed_root: no sign change on the interval");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = eval(mid);
    if (fm == 0.0 || hi - lo < 1e-17) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

SymmetricState from_pairs(int n, const std::vector<std::pair<int, cplx>>& entries) {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n + 1);
  for (const auto& [k, v] : entries) c[k] = v;
  return SymmetricState(std::move(c));
}

double square_pyramid_x() { return bracketed_root({4.0, 4.0, 4.0, -1.0, -1.0}, 0.0, 1.0); }

double square_pyramid_a() {
  const double x = square_pyramid_x();
  return (1.0 - std::pow(x, 5)) / (std::sqrt(5.0) * x * std::pow(1.0 - x * x, 2));
}

SymmetricState cube_state() {
  std::vector<SpherePoint> pts;
  for (int sx : {-1, 1}) {
    for (int sy : {-1, 1}) {
      for (int sz : {-1, 1}) pts.push_back(SpherePoint::from_vector(Eigen::Vector3d(sx, sy, sz)));
    }
  }
  return points_to_state(pts).first;
}

}  // namespace

const std::vector<std::string>& named_state_names() {
  static const std::vector<std::string> names{
      "bell",       "w3",   "ghz3",
      "tetrahedron", "trigonal-bipyramid", "square-pyramid",
      "octahedron", "pentagonal-dipyramid-7", "cube",
      "asym-pentagonal-dipyramid-8", "pentagonal-dipyramid-9", "psi10-pos-sym",
      "psi10-candidate", "psi11-candidate", "icosahedron",
      "icosa-positive-12"};
  return names;
}

SymmetricState named_state(const std::string& name) {
  const double h = 1.0 / std::sqrt(2.0);
  if (name == "bell") return make_dicke(2, 1);
  if (name == "w3") return make_dicke(3, 1);
  if (name == "ghz3") return from_pairs(3, {{0, h}, {3, h}});
  if (name == "tetrahedron") return from_pairs(4, {{0, std::sqrt(1.0 / 3.0)}, {3, std::sqrt(2.0 / 3.0)}});
  if (name == "trigonal-bipyramid") return from_pairs(5, {{1, h}, {4, h}});
  if (name == "square-pyramid") return from_pairs(5, {{0, 1.0}, {4, square_pyramid_a()}});
  if (name == "octahedron") return from_pairs(6, {{1, h}, {5, h}});
  if (name == "pentagonal-dipyramid-7") return from_pairs(7, {{1, h}, {6, h}});
  if (name == "cube") return cube_state();
  if (name == "asym-pentagonal-dipyramid-8") return refine_on_support(8, AnsatzKind::Positive, {1, 6}, {0.672, 0.741});
  if (name == "pentagonal-dipyramid-9") return from_pairs(9, {{2, h}, {7, h}});
  if (name == "psi10-pos-sym") return from_pairs(10, {{2, h}, {8, h}});
  if (name == "psi10-candidate") return refine_on_support(10, AnsatzKind::Real, {1, 5, 9}, {1.0, 1.0, -1.0});
  if (name == "psi11-candidate") return refine_on_support(11, AnsatzKind::Real, {0, 5, 10}, {1.0, 1.0, -1.0});
  if (name == "icosahedron") {
    return from_pairs(12, {{1, std::sqrt(7.0) / 5.0}, {6, -std::sqrt(11.0) / 5.0}, {11, -std::sqrt(7.0) / 5.0}});
  }
  if (name == "icosa-positive-12") return refine_on_support(12, AnsatzKind::Positive, {1, 6, 11}, {1.0, 1.0, 1.0});
  throw std::domain_error("named_state: unknown name '" + name + "'");
}

SpherePoint polynomial_root_cpp(const std::string& name) {
  if (name == "square-pyramid") return {2.0 * std::acos(square_pyramid_x()), 0.0};
  // For the dipyramids the root is x = cos^2(theta) of a CPP on the prime meridian.
  if (name == "pentagonal-dipyramid-7") {
    return {std::acos(std::sqrt(bracketed_root({49.0, 165.0, -205.0, 55.0}, 0.0, 0.5))), 0.0};
  }
  if (name == "pentagonal-dipyramid-9") {
    return {std::acos(std::sqrt(bracketed_root({81.0, 385.0, -245.0, 35.0}, 0.0, 0.3))), 0.0};
  }
  throw std::domain_error("polynomial_root_cpp: no polynomial condition for '" + name + "'");
}

// ---------------------------------------------------------------------------
// Local optimality probe

PerturbReport perturb_check(const ExtremalResult& result, int trials, std::uint64_t seed, double magnitude,
                            double gain_tolerance) {
  PerturbReport rep;
  rep.trials = trials;
  rep.cpp_count = result.analysis.cpp_count();
  rep.has_two_cpps = result.analysis.is_ring() || rep.cpp_count >= 2;
  const int n = result.state.n();
  const double base = result.analysis.e_g;
  std::mt19937_64 rng(splitmix64(seed));
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::VectorXd p0 = result.ansatz.parameters(result.state);
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXd d(p0.size());
    for (Eigen::Index k = 0; k < d.size(); ++k) d[k] = normal(rng);
    d *= magnitude / d.norm();
    const SymmetricState s = result.ansatz.state(n, p0 + d);
    const double gain = geometric_measure(s) - base;
    rep.best_gain = std::max(rep.best_gain, gain);
    if (gain > gain_tolerance) ++rep.improving;
  }
  rep.improving_fraction = trials > 0 ? static_cast<double>(rep.improving) / trials : 0.0;
  return rep;
}

}  // namespace symgeo
