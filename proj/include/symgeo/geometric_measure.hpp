#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "symgeo/majorana.hpp"
#include "symgeo/states.hpp"

namespace symgeo {

/// Reference constant: no pure n-qubit state exceeds n - 1 bits.
inline double general_upper_bound(int n) { return n - 1.0; }

/// Relative tolerance separating CPPs from other local maxima.
inline constexpr double kCppRelativeTolerance = 1e-9;
/// Maxima closer than this (radians) are the same point.
inline constexpr double kDedupeTolerance = 1e-5;

struct LocalMaximum {
  SpherePoint point;
  double g = 0.0;
};

struct CppAnalysis {
  /// Global maxima. For a ring this holds a single representative.
  std::vector<SpherePoint> cpps;
  /// Set when the CPPs form a full circle at this angle from ring_axis.
  std::optional<double> ring_theta;
  /// Axis of the ring: the north pole for Dicke states, otherwise the rotated pole.
  SpherePoint ring_axis;
  double g_max = 0.0;
  double e_g = 0.0;
  /// Local maxima that are not CPPs, sorted like the CPPs.
  std::vector<LocalMaximum> local_maxima;
  /// Which search path produced the result: dicke, rotated-dicke, meridian,
  /// meridian-free or multistart.
  std::string strategy;

  bool is_ring() const { return ring_theta.has_value(); }
  /// Number of distinct CPPs; a ring counts as unbounded and reports -1.
  int cpp_count() const { return is_ring() ? -1 : static_cast<int>(cpps.size()); }
};

struct CppSearchOptions {
  /// Use the Dicke ring and positive-meridian shortcuts; off forces the 2-D multistart.
  bool exploit_symmetry = true;
  /// Number of Fibonacci starts for the 2-D search; 0 picks max(40 n, 240).
  int starts = 0;
  /// Grid points along a meridian for the 1-D search; 0 picks 400 + 40 n.
  int meridian_points = 0;
  /// Ascend only from lattice points that are discrete local maxima of g
  /// among their nearest lattice neighbours; off ascends from every point.
  bool prune_lattice = true;
  /// Extra starting points tried before the lattice.
  std::vector<SpherePoint> warm_starts;
  double cpp_tolerance = kCppRelativeTolerance;
  double dedupe_tolerance = kDedupeTolerance;
};

/// Overlap function g(sigma) = |<sigma|^n |psi>| from the coefficients.
double overlap(const SymmetricState& state, const SpherePoint& sigma);

/// Value, Riemannian gradient norm and Hessian definiteness of log g^2 at a point.
struct LocalProbe {
  double g = 0.0;
  /// |grad g| with respect to arc length on the unit sphere.
  double gradient_norm = 0.0;
  /// Largest Hessian eigenvalue of log g^2 in arc-length coordinates.
  double max_curvature = 0.0;
};
LocalProbe probe(const SymmetricState& state, const SpherePoint& sigma);

struct AscentResult {
  SpherePoint point;
  double g = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Modified Newton ascent of log g^2 in a stereographic chart recentred at
/// every iterate, so the poles need no special treatment.
AscentResult ascend(const SymmetricState& state, const SpherePoint& start, int max_iterations = 100);

/// Maximizes g along the half great circle phi = phi0, theta in [0, pi].
/// Returns the local maxima of the restriction, polished to |dg/dtheta| ~ 0.
std::vector<LocalMaximum> meridian_maxima(const SymmetricState& state, double phi0, int grid_points);

/// Closest product points, g_max and E_G.
CppAnalysis find_cpps(const SymmetricState& state, const CppSearchOptions& options = {});

/// Convenience: E_G in bits.
double geometric_measure(const SymmetricState& state, const CppSearchOptions& options = {});

/// Closed form for |S_{n,k}>.
double dicke_entanglement(int n, int k);

/// Polar angle of the CPP ring of |S_{n,k}>.
double dicke_ring_theta(int n, int k);

/// Mean of g^2 over the sphere by a Gauss-Legendre (cos theta) times
/// uniform phi product rule. Exact once quadrature_order >= (n + 1) / 2.
double sphere_mean_g2(const SymmetricState& state, int quadrature_order);

struct BoundsReport {
  int n = 0;
  double upper = 0.0;
  double dicke_lower = 0.0;
  double stirling_approx = 0.0;
  double general_lower = 0.0;
};
BoundsReport bounds(int n);

struct GridSample {
  double theta = 0.0;
  double phi = 0.0;
  double g2 = 0.0;
};

/// g^2 on theta_i = pi i / (rows - 1), phi_j = 2 pi j / cols.
std::vector<GridSample> grid_scan(const SymmetricState& state, int rows, int cols);

/// Largest g found by the grid scan after a parabolic refinement around each
/// discrete local maximum; the refined value is an actual evaluation of g.
double grid_max(const SymmetricState& state, int rows, int cols);

/// E_G in bits from a maximal overlap.
inline double entanglement_from_overlap(double g_max) { return -2.0 * std::log2(g_max); }

}  // namespace symgeo
