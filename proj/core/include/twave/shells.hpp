#pragma once

#include <cmath>
#include <random>

#include "twave/vec3.hpp"

namespace twave {

/// Open support of psi_k: |x| in (5 * 2^{k-3}, 3 * 2^{k-1}).
inline double shell_inner(int k) { return 5.0 * std::ldexp(1.0, k - 3); }
inline double shell_outer(int k) { return 3.0 * std::ldexp(1.0, k - 1); }
inline bool in_shell(double r, int k) { return r > shell_inner(k) && r < shell_outer(k); }

/// Volume of the ball of radius r in R^3.
inline double ball_volume(double r) { return 4.0 / 3.0 * 3.14159265358979323846 * r * r * r; }

/// Uniform point of the annulus {r0 < |x| < r1} in R^3.
template <class Rng>
Vec3 uniform_in_annulus(Rng& rng, double r0, double r1) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double a = r0 * r0 * r0, b = r1 * r1 * r1;
  const double r = std::cbrt(a + (b - a) * u(rng));
  const double z = 2.0 * u(rng) - 1.0;
  const double phi = 2.0 * 3.14159265358979323846 * u(rng);
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * z, r * s * std::cos(phi), r * s * std::sin(phi)};
}

template <class Rng>
Vec3 uniform_in_shell(Rng& rng, int k) {
  return uniform_in_annulus(rng, shell_inner(k), shell_outer(k));
}

}  // namespace twave
