#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace symgeo {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Tolerance on |1 - <psi|psi>| that predicates treat as normalized.
inline constexpr double kNormTolerance = 1e-10;

/// Coefficients with modulus below this are treated as absent when reasoning
/// about supports (rotational symmetry, Dicke detection).
inline constexpr double kSupportTolerance = 1e-12;

/// Raised when an iterative numerical routine gives up. Carries the final
/// residual so callers can decide whether the answer is still usable.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A pure single-qubit state, i.e. a point on the Bloch sphere:
///   cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
/// theta in [0, pi], phi in [0, 2 pi); the poles carry phi = 0.
class SpherePoint {
 public:
  SpherePoint() = default;
  SpherePoint(double theta, double phi);

  static SpherePoint north() { return {}; }
  static SpherePoint south() { return {kPi, 0.0}; }
  /// Point of the (not necessarily normalized) spinor up|0> + down|1>.
  static SpherePoint from_spinor(cplx up, cplx down);
  /// Point in the direction of a nonzero vector of R^3.
  static SpherePoint from_vector(const Eigen::Vector3d& v);

  double theta() const { return theta_; }
  double phi() const { return phi_; }

  Eigen::Vector3d bloch() const;
  /// (cos(theta/2), e^{i phi} sin(theta/2)).
  Eigen::Vector2cd spinor() const;
  SpherePoint antipode() const;
  /// Complex conjugate qubit state: reflection phi -> 2 pi - phi.
  SpherePoint conjugate() const;

 private:
  double theta_ = 0.0;
  double phi_ = 0.0;
};

/// Great-circle angle between two points, in [0, pi].
double angular_distance(const SpherePoint& a, const SpherePoint& b);

/// Permutation-symmetric n-qubit pure state in the Dicke basis,
/// |psi> = sum_k a_k |S_{n,k}>. Stored normalized; the norm of the input is
/// kept as `correction()` so readers can report how much they rescaled.
class SymmetricState {
 public:
  /// The one-qubit state |0>.
  SymmetricState() : coeffs_(Eigen::VectorXcd::Unit(2, 0)) {}
  /// Renormalizes. Throws std::domain_error for an empty or zero vector.
  explicit SymmetricState(Eigen::VectorXcd coeffs);

  int n() const { return static_cast<int>(coeffs_.size()) - 1; }
  const Eigen::VectorXcd& coeffs() const { return coeffs_; }
  cplx operator[](int k) const { return coeffs_[k]; }
  /// Norm of the vector handed to the constructor.
  double correction() const { return correction_; }

 private:
  Eigen::VectorXcd coeffs_;
  double correction_ = 1.0;
};

SymmetricState make_dicke(int n, int k);

/// Applies U^{(x)n} for a single-qubit unitary U.
SymmetricState apply_local_unitary(const SymmetricState& state, const Eigen::Matrix2cd& u);

Eigen::Matrix2cd rotation_z(double angle);
Eigen::Matrix2cd rotation_y(double angle);

/// a_k -> a_k e^{i k angle}.
SymmetricState rotate_z(const SymmetricState& state, double angle);
/// Coefficient-space Y rotation (Wigner small-d action on the Dicke basis).
SymmetricState rotate_y(const SymmetricState& state, double angle);

/// sum_k conj(a_k) b_k. Throws std::domain_error on qubit-count mismatch.
cplx inner(const SymmetricState& a, const SymmetricState& b);
/// |<a|b>|; states are equal up to global phase iff this is 1.
double fidelity(const SymmetricState& a, const SymmetricState& b);

struct SymmetryInfo {
  /// Largest m in (1, n] with Z-rotation symmetry 2 pi / m, or 1.
  int rotational_order = 1;
  bool is_real = false;
  /// Nonnegative up to a global phase, in the given basis.
  bool is_positive = false;
  /// A Z-rotation plus global phase makes the state nonnegative. Checked
  /// exhaustively for supports of at most four; otherwise equals is_positive.
  bool positive_gauge = false;
  std::optional<int> dicke_index;
};

/// Indices k with |a_k| > tol.
std::vector<int> support_of(const SymmetricState& state, double tol = kSupportTolerance);

/// Largest m in (1, n] dividing every gap of the support, or 1. A single
/// nonzero coefficient is symmetric under every angle and reports n.
int rotational_order(const std::vector<int>& support, int n);

SymmetryInfo classify(const SymmetricState& state, double tol = kSupportTolerance);

/// Copy with coefficients below `tol` set to zero (then renormalized).
SymmetricState snap_small(const SymmetricState& state, double tol = kSupportTolerance);

double binomial(int n, int k);

}  // namespace symgeo
