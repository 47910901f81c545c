#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "symgeo/states.hpp"

namespace symgeo::testing {

enum class Kind { Complex, Real, Positive };

inline Eigen::VectorXcd random_coeffs(int n, std::mt19937_64& rng, Kind kind = Kind::Complex) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXcd c(n + 1);
  for (int k = 0; k <= n; ++k) {
    switch (kind) {
      case Kind::Complex: c[k] = cplx(normal(rng), normal(rng)); break;
      case Kind::Real: c[k] = normal(rng); break;
      case Kind::Positive: c[k] = std::abs(normal(rng)); break;
    }
  }
  return c;
}

inline SymmetricState random_state(int n, std::mt19937_64& rng, Kind kind = Kind::Complex) {
  return SymmetricState(random_coeffs(n, rng, kind));
}

inline SymmetricState random_sparse(int n, const std::vector<int>& support, std::mt19937_64& rng,
                                    Kind kind = Kind::Complex) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n + 1);
  for (int k : support) {
    const double mag = 0.3 + std::abs(normal(rng));
    c[k] = kind == Kind::Complex ? std::polar(mag, 6.283185307179586 * std::uniform_real_distribution<>(0, 1)(rng))
           : kind == Kind::Real  ? (normal(rng) < 0 ? -mag : mag)
                                 : mag;
  }
  return SymmetricState(c);
}

/// |<sigma|^n |psi>| summed over all 2^n computational basis strings.
inline double brute_overlap(const SymmetricState& s, double theta, double phi) {
  const int n = s.n();
  const cplx up(std::cos(theta / 2), 0.0);
  const cplx down = std::polar(std::sin(theta / 2), phi);
  cplx total = 0.0;
  for (unsigned bits = 0; bits < (1u << n); ++bits) {
    const int k = __builtin_popcount(bits);
    cplx prod = 1.0;
    for (int q = 0; q < n; ++q) prod *= ((bits >> q) & 1u) ? std::conj(down) : std::conj(up);
    total += prod * s[k] / std::sqrt(binomial(n, k));
  }
  return std::abs(total);
}

/// Direct-sum overlap, cheap enough for dense grids.
inline double direct_overlap(const SymmetricState& s, double theta, double phi) {
  const int n = s.n();
  const double c = std::cos(theta / 2), sn = std::sin(theta / 2);
  cplx total = 0.0;
  for (int k = 0; k <= n; ++k) {
    total += std::sqrt(binomial(n, k)) * std::pow(c, n - k) * std::pow(sn, k) * std::polar(1.0, -k * phi) * s[k];
  }
  return std::abs(total);
}

/// Maximum of g from a rows x cols grid followed by compass search around the
/// best grid points. Independent of the library's CPP machinery.
inline double oracle_gmax(const SymmetricState& s, int rows = 241, int cols = 480, int refine = 40) {
  std::vector<std::pair<double, std::pair<double, double>>> samples;
  samples.reserve(static_cast<std::size_t>(rows) * cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double t = 3.141592653589793 * i / (rows - 1);
      const double p = 6.283185307179586 * j / cols;
      samples.push_back({direct_overlap(s, t, p), {t, p}});
    }
  }
  refine = std::min<int>(refine, static_cast<int>(samples.size()));
  std::partial_sort(samples.begin(), samples.begin() + refine, samples.end(),
                    [](const auto& a, const auto& b) { return a.first > b.first; });
  double best = 0.0;
  for (int q = 0; q < refine; ++q) {
    double g = samples[q].first;
    auto [t, p] = samples[q].second;
    for (double h = 2e-2; h > 1e-11;) {
      bool moved = false;
      for (auto [dt, dp] : {std::pair{h, 0.0}, {-h, 0.0}, {0.0, h}, {0.0, -h}}) {
        const double v = direct_overlap(s, t + dt, p + dp);
        if (v > g) {
          g = v;
          t += dt;
          p += dp;
          moved = true;
        }
      }
      if (!moved) h *= 0.5;
    }
    best = std::max(best, g);
  }
  return best;
}

/// Positive-style support with every gap a multiple of m, first index random.
inline std::vector<int> spaced_support(int n, int m, std::mt19937_64& rng) {
  std::vector<int> s;
  const int start = std::uniform_int_distribution<int>(0, std::min(m - 1, n))(rng);
  for (int k = start; k <= n; k += m) s.push_back(k);
  return s;
}

inline bool equal_up_to_phase(const SymmetricState& a, const SymmetricState& b, double tol = 1e-12) {
  return std::abs(1.0 - fidelity(a, b)) < tol;
}

inline double eg_from_g(double g) { return -2.0 * std::log2(g); }

}  // namespace symgeo::testing
