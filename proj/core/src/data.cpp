#include "twave/data.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "twave/errors.hpp"

namespace twave {

PhysicalField gaussian_bump(const Grid& g, double sigma, const Vec3& center, const Vec3& xi0) {
  if (!(sigma > 0.0)) throw UsageError("gaussian_bump: sigma must be positive");
  PhysicalField f(g);
  const auto& len = g.lengths();
  g.for_each([&](int i, int j, int k, std::size_t idx) {
    Vec3 d = g.x(i, j, k) - center;
    for (int ax = 0; ax < 3; ++ax) {
      if (g.dims()[ax] == 1) {
        d[ax] = 0.0;
        continue;
      }
      d[ax] -= len[ax] * std::round(d[ax] / len[ax]);
    }
    f.values[idx] = std::exp(-dot(d, d) / (2 * sigma * sigma)) * std::cos(dot(d, xi0));
  });
  return f;
}

SpectralField random_envelope_field(const Grid& g, std::uint64_t seed, int envelope_order) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  SpectralField f(g);
  // draw in storage order and mirror, so the field is real
  g.for_each([&](int i, int j, int k, std::size_t idx) {
    const double phi = u(rng);
    const std::size_t m = g.mirror(i, j, k);
    if (m < idx) return;
    if (g.is_nyquist(0, i) || g.is_nyquist(1, j) || g.is_nyquist(2, k)) return;
    const Vec3 xi = g.xi(i, j, k);
    if (is_zero(xi)) return;
    const double amp = std::pow(1.0 + dot(xi, xi), -0.5 * envelope_order);
    f[idx] = std::polar(amp, phi);
    f[m] = std::conj(f[idx]);
  });
  return f;
}

}  // namespace twave
