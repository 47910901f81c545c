#include "symgeo/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace symgeo {

namespace {

// Canonical ranges; the pole snap keeps "north pole" a single value.
constexpr double kPoleSnap = 1e-13;

double wrap_angle(double phi) {
  double w = std::fmod(phi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w -= kTwoPi;
  return w == 0.0 ? 0.0 : w;  // no negative zero
}

// Multiplies polynomial p (ascending powers) by (c0 + c1 t).
void mul_linear(std::vector<cplx>& p, cplx c0, cplx c1) {
  p.push_back(0.0);
  for (std::size_t i = p.size() - 1; i > 0; --i) p[i] = p[i] * c0 + p[i - 1] * c1;
  p[0] *= c0;
}

}  // namespace

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

// ---------------------------------------------------------------------------
// SpherePoint

SpherePoint::SpherePoint(double theta, double phi) {
  if (!std::isfinite(theta) || !std::isfinite(phi)) {
    throw std::domain_error("SpherePoint: non-finite angle");
  }
  // Fold theta into [0, pi] first; a fold past a pole flips the meridian.
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t > kPi) {
    t = kTwoPi - t;
    phi += kPi;
  }
  if (t < kPoleSnap) {
    theta_ = 0.0;
    phi_ = 0.0;
  } else if (kPi - t < kPoleSnap) {
    theta_ = kPi;
    phi_ = 0.0;
  } else {
    theta_ = t;
    phi_ = wrap_angle(phi);
  }
}

SpherePoint SpherePoint::from_spinor(cplx up, cplx down) {
  const double au = std::abs(up);
  const double ad = std::abs(down);
  if (au == 0.0 && ad == 0.0) throw std::domain_error("SpherePoint: zero spinor");
  const double theta = 2.0 * std::atan2(ad, au);
  const double phi = (au == 0.0 || ad == 0.0) ? 0.0 : std::arg(down) - std::arg(up);
  return {theta, phi};
}

SpherePoint SpherePoint::from_vector(const Eigen::Vector3d& v) {
  const double r = v.norm();
  if (!(r > 0.0)) throw std::domain_error("SpherePoint: zero vector");
  const double rho = std::hypot(v.x(), v.y());
  const double theta = std::atan2(rho, v.z());
  const double phi = rho == 0.0 ? 0.0 : std::atan2(v.y(), v.x());
  return {theta, phi};
}

Eigen::Vector3d SpherePoint::bloch() const {
  if (theta_ == kPi) return {0.0, 0.0, -1.0};
  const double st = std::sin(theta_);
  return {st * std::cos(phi_), st * std::sin(phi_), std::cos(theta_)};
}

Eigen::Vector2cd SpherePoint::spinor() const {
  return {cplx(std::cos(theta_ / 2.0), 0.0), std::polar(std::sin(theta_ / 2.0), phi_)};
}

SpherePoint SpherePoint::antipode() const { return {kPi - theta_, phi_ + kPi}; }

SpherePoint SpherePoint::conjugate() const { return {theta_, kTwoPi - phi_}; }

double angular_distance(const SpherePoint& a, const SpherePoint& b) {
  // atan2 form stays accurate for nearly coincident and nearly antipodal pairs.
  const Eigen::Vector3d u = a.bloch();
  const Eigen::Vector3d v = b.bloch();
  return std::atan2(u.cross(v).norm(), u.dot(v));
}

// ---------------------------------------------------------------------------
// SymmetricState

SymmetricState::SymmetricState(Eigen::VectorXcd coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() < 2) throw std::domain_error("SymmetricState: need at least one qubit");
  const double norm = coeffs_.norm();
  if (!std::isfinite(norm) || norm == 0.0) {
    throw std::domain_error("SymmetricState: coefficient vector is zero or not finite");
  }
  correction_ = norm;
  coeffs_ /= norm;
}

SymmetricState make_dicke(int n, int k) {
  if (n < 1) throw std::domain_error("make_dicke: n must be at least 1");
  if (k < 0 || k > n) throw std::domain_error("make_dicke: k out of range [0, n]");
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n + 1);
  c[k] = 1.0;
  return SymmetricState(std::move(c));
}

Eigen::Matrix2cd rotation_z(double angle) {
  Eigen::Matrix2cd r;
  r << 1.0, 0.0, 0.0, std::polar(1.0, angle);
  return r;
}

Eigen::Matrix2cd rotation_y(double angle) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  Eigen::Matrix2cd r;
  r << c, -s, s, c;
  return r;
}

SymmetricState apply_local_unitary(const SymmetricState& state, const Eigen::Matrix2cd& u) {
  // Symmetric states are homogeneous polynomials: |S_k> <-> sqrt(C(n,k)) x^{n-k} y^k,
  // and U acts by x -> u00 x + u10 y, y -> u01 x + u11 y. Work in t = y / x.
  const int n = state.n();
  std::vector<cplx> out(n + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    const cplx b = state[k] * std::sqrt(binomial(n, k));
    if (b == cplx(0.0)) continue;
    std::vector<cplx> p{b};
    p.reserve(n + 1);
    for (int i = 0; i < n - k; ++i) mul_linear(p, u(0, 0), u(1, 0));
    for (int i = 0; i < k; ++i) mul_linear(p, u(0, 1), u(1, 1));
    for (int j = 0; j <= n; ++j) out[j] += p[j];
  }
  Eigen::VectorXcd c(n + 1);
  for (int j = 0; j <= n; ++j) c[j] = out[j] / std::sqrt(binomial(n, j));
  return SymmetricState(std::move(c));
}

SymmetricState rotate_z(const SymmetricState& state, double angle) {
  Eigen::VectorXcd c = state.coeffs();
  for (int k = 0; k <= state.n(); ++k) c[k] *= std::polar(1.0, k * angle);
  return SymmetricState(std::move(c));
}

SymmetricState rotate_y(const SymmetricState& state, double angle) {
  return apply_local_unitary(state, rotation_y(angle));
}

cplx inner(const SymmetricState& a, const SymmetricState& b) {
  if (a.n() != b.n()) throw std::domain_error("inner: qubit counts differ");
  return a.coeffs().dot(b.coeffs());  // Eigen's dot conjugates the left operand
}

double fidelity(const SymmetricState& a, const SymmetricState& b) { return std::abs(inner(a, b)); }

std::vector<int> support_of(const SymmetricState& state, double tol) {
  std::vector<int> s;
  for (int k = 0; k <= state.n(); ++k) {
    if (std::abs(state[k]) > tol) s.push_back(k);
  }
  return s;
}

int rotational_order(const std::vector<int>& support, int n) {
  if (n < 2) return 1;
  if (support.size() <= 1) return n;
  int g = 0;
  for (std::size_t i = 1; i < support.size(); ++i) g = std::gcd(g, support[i] - support[0]);
  return g > 1 ? std::min(g, n) : 1;
}

namespace {

// Checks whether phases alpha_k can be cancelled by alpha_k + k chi + delta = 0 (mod 2 pi).
bool diagonal_gauge_exists(const std::vector<int>& ks, const std::vector<double>& alphas) {
  const std::size_t m = ks.size();
  if (m <= 2) return true;
  const int gap = ks[1] - ks[0];
  const double tol = 1e-9;
  for (int j = 0; j < gap; ++j) {
    const double chi = (alphas[0] - alphas[1] + kTwoPi * j) / gap;
    const double delta = -alphas[0] - ks[0] * chi;
    bool ok = true;
    for (std::size_t i = 2; i < m && ok; ++i) {
      const double r = std::remainder(alphas[i] + ks[i] * chi + delta, kTwoPi);
      ok = std::abs(r) < tol;
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace

SymmetryInfo classify(const SymmetricState& state, double tol) {
  SymmetryInfo info;
  const std::vector<int> supp = support_of(state, tol);
  info.rotational_order = rotational_order(supp, state.n());
  if (supp.size() == 1) info.dicke_index = supp.front();

  // Remove the global phase using the largest coefficient.
  Eigen::Index imax = 0;
  state.coeffs().cwiseAbs().maxCoeff(&imax);
  const cplx phase = std::conj(state[static_cast<int>(imax)]) / std::abs(state[static_cast<int>(imax)]);
  const double phase_tol = 1e-10;
  bool real = true;
  bool positive = true;
  for (int k = 0; k <= state.n(); ++k) {
    const cplx a = state[k] * phase;
    if (std::abs(a.imag()) > phase_tol) real = false;
    if (a.real() < -phase_tol || std::abs(a.imag()) > phase_tol) positive = false;
  }
  info.is_real = real;
  info.is_positive = positive;

  if (positive) {
    info.positive_gauge = true;
  } else if (supp.size() <= 4) {
    std::vector<double> alphas;
    for (int k : supp) alphas.push_back(std::arg(state[k]));
    info.positive_gauge = diagonal_gauge_exists(supp, alphas);
  }
  return info;
}

SymmetricState snap_small(const SymmetricState& state, double tol) {
  Eigen::VectorXcd c = state.coeffs();
  for (int k = 0; k <= state.n(); ++k) {
    if (std::abs(c[k]) < tol) c[k] = 0.0;
  }
  return SymmetricState(std::move(c));
}

}  // namespace symgeo
