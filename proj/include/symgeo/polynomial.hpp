#pragma once

#include <complex>
#include <span>
#include <vector>

namespace symgeo {

struct AberthOptions {
  int max_iterations = 200;
  /// Backward-error target: |p(z)| <= tol * sum_k |c_k| |z|^k for every root.
  double residual_tolerance = 1e-12;
};

struct RootReport {
  std::vector<std::complex<double>> roots;
  int iterations = 0;
  /// Largest relative backward error over the returned roots.
  double residual = 0.0;
};

/// Evaluates p and p' at z by Horner's rule; coefficients in ascending order.
void horner(std::span<const std::complex<double>> coeffs, std::complex<double> z,
            std::complex<double>& p, std::complex<double>& dp);

/// Unique positive root of |c_d| x^d - sum_{k<d} |c_k| x^k, an upper bound on
/// every root modulus (Cauchy).
double cauchy_bound(std::span<const std::complex<double>> coeffs);

/// All roots of a polynomial with nonzero leading coefficient, by
/// Aberth-Ehrlich simultaneous iteration from a circle of radius given by
/// the Cauchy bound, followed by one Newton polish per root. Throws
/// NumericError carrying the residual if the iteration does not converge.
RootReport aberth_roots(std::span<const std::complex<double>> coeffs,
                        const AberthOptions& options = {});

}  // namespace symgeo
