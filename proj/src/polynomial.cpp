#include "symgeo/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "symgeo/states.hpp"

namespace symgeo {

void horner(std::span<const cplx> coeffs, cplx z, cplx& p, cplx& dp) {
  p = 0.0;
  dp = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    dp = dp * z + p;
    p = p * z + coeffs[i];
  }
}

namespace {

double abs_horner(std::span<const cplx> coeffs, double r) {
  double s = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) s = s * r + std::abs(coeffs[i]);
  return s;
}

double backward_error(std::span<const cplx> coeffs, cplx z) {
  cplx p, dp;
  horner(coeffs, z, p, dp);
  const double scale = abs_horner(coeffs, std::abs(z));
  return scale > 0.0 ? std::abs(p) / scale : 0.0;
}

}  // namespace

double cauchy_bound(std::span<const cplx> coeffs) {
  const std::size_t d = coeffs.size() - 1;
  const double lead = std::abs(coeffs[d]);
  // f(x) = lead x^d - sum_{k<d} |c_k| x^k has exactly one positive root.
  auto f = [&](double x) {
    double s = 0.0;
    for (std::size_t i = d; i-- > 0;) s = s * x + std::abs(coeffs[i]);
    return lead * std::pow(x, static_cast<double>(d)) - s * 1.0;
  };
  double hi = 1.0;
  for (std::size_t k = 0; k < d; ++k) hi = std::max(hi, 1.0 + std::abs(coeffs[k]) / lead);
  double lo = 0.0;
  if (f(hi) < 0.0) return hi;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? hi : lo) = mid;
  }
  return hi;
}

RootReport aberth_roots(std::span<const cplx> coeffs, const AberthOptions& options) {
  if (coeffs.size() < 2) throw std::domain_error("aberth_roots: polynomial of degree < 1");
  if (coeffs.back() == cplx(0.0)) throw std::domain_error("aberth_roots: leading coefficient is zero");
  const int d = static_cast<int>(coeffs.size()) - 1;

  RootReport report;
  if (d == 1) {
    report.roots = {-coeffs[0] / coeffs[1]};
    report.residual = backward_error(coeffs, report.roots[0]);
    return report;
  }

  std::vector<cplx> deriv(d);
  for (int k = 1; k <= d; ++k) deriv[k - 1] = coeffs[k] * static_cast<double>(k);

  // Start on a circle; the offset angle avoids symmetric stalls on real polynomials.
  double radius = cauchy_bound(coeffs);
  const double c0 = std::abs(coeffs[0]);
  if (c0 > 0.0) {
    // Geometric mean of the root moduli is a better-centred radius when roots spread.
    const double gm = std::pow(c0 / std::abs(coeffs[d]), 1.0 / d);
    radius = std::min(radius, std::max(gm, 1e-3 * radius));
  } else {
    radius *= 0.5;
  }
  std::vector<cplx> z(d);
  for (int j = 0; j < d; ++j) z[j] = std::polar(radius, kTwoPi * j / d + 0.4);

  std::vector<bool> done(d, false);
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    bool all_done = true;
    for (int j = 0; j < d; ++j) {
      if (done[j]) continue;
      cplx p, dp;
      horner(coeffs, z[j], p, dp);
      const double scale = abs_horner(coeffs, std::abs(z[j]));
      if (std::abs(p) <= options.residual_tolerance * 1e-2 * scale) {
        done[j] = true;
        continue;
      }
      all_done = false;
      cplx sum = 0.0;
      for (int k = 0; k < d; ++k) {
        if (k != j) {
          const cplx diff = z[j] - z[k];
          if (diff != cplx(0.0)) sum += 1.0 / diff;
        }
      }
      const cplx ratio = dp == cplx(0.0) ? cplx(1e-8 * (1.0 + std::abs(z[j]))) : p / dp;
      const cplx step = ratio / (1.0 - ratio * sum);
      z[j] -= step;
      if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(z[j])) {
        done[j] = true;
      }
    }
    if (all_done) break;
  }
  report.iterations = it;

  // One Newton polish per root, kept only when it lowers the residual.
  for (int j = 0; j < d; ++j) {
    cplx p, dp;
    horner(coeffs, z[j], p, dp);
    if (dp != cplx(0.0)) {
      const cplx cand = z[j] - p / dp;
      if (backward_error(coeffs, cand) < backward_error(coeffs, z[j])) z[j] = cand;
    }
  }

  double worst = 0.0;
  for (int j = 0; j < d; ++j) worst = std::max(worst, backward_error(coeffs, z[j]));
  report.residual = worst;
  report.roots = std::move(z);
  if (!(worst <= options.residual_tolerance)) {
    throw NumericError("aberth_roots: no convergence within the iteration budget", worst);
  }
  return report;
}

}  // namespace symgeo
