#include <doctest.h>

#include <cmath>
#include <numbers>

#include "test_util.hpp"
#include "twave/errors.hpp"
#include "twave/grid.hpp"

using namespace twave;

TEST_CASE("wavenumbers follow the signed FFT ordering") {
  Grid g({8, 1, 4}, {2.0 * std::numbers::pi, 1.0, 4.0 * std::numbers::pi});
  CHECK(g.wavenumber(0, 3) == doctest::Approx(3.0));
  CHECK(g.wavenumber(0, 4) == doctest::Approx(-4.0));
  CHECK(g.wavenumber(0, 7) == doctest::Approx(-1.0));
  CHECK(g.wavenumber(1, 0) == 0.0);
  CHECK(g.wavenumber(2, 1) == doctest::Approx(0.5));
  CHECK(g.is_nyquist(0, 4));
  CHECK_FALSE(g.is_nyquist(1, 0));
  CHECK(g.volume() == doctest::Approx(8.0 * std::numbers::pi * std::numbers::pi));
  CHECK(g.coordinate(0, 7) == doctest::Approx(-std::numbers::pi / 4.0));
}

TEST_CASE("continuous Fourier normalization on a Gaussian") {
  // integral of exp(-|x|^2/2) over R^3 is (2 pi)^{3/2}; its transform at 0 must match
  Grid g = Grid::cube(32, 24.0);
  PhysicalField p(g);
  g.for_each([&](int i, int j, int k, std::size_t idx) {
    const Vec3 x = g.x(i, j, k);
    p.values[idx] = std::exp(-0.5 * dot(x, x));
  });
  SpectralField f = to_spectral(p);
  CHECK(f[0].real() == doctest::Approx(std::pow(2.0 * std::numbers::pi, 1.5)).epsilon(1e-10));
  // transform at xi = (1,0,0) is (2 pi)^{3/2} e^{-1/2}; wavenumber 2 pi / 24 * m
  const int m = 4;
  const double kx = g.wavenumber(0, m);
  CHECK(f[g.flat(m, 0, 0)].real() ==
        doctest::Approx(std::pow(2.0 * std::numbers::pi, 1.5) * std::exp(-0.5 * kx * kx)).epsilon(1e-10));
  CHECK(l2_norm(f) == doctest::Approx(l2_norm(p)).epsilon(1e-12));
  // integral of |g|^2 = pi^{3/2}
  CHECK(l2_norm(p) == doctest::Approx(std::pow(std::numbers::pi, 0.75)).epsilon(1e-7));  // aliasing e^{-pi^2/dx^2}
}

TEST_CASE("spectral roundtrip and mirror index") {
  Grid g({6, 5, 4}, {1.0, 2.0, 3.0});
  SpectralField f = testing::random_real_field(g, 7);
  PhysicalField p = to_physical(f);
  for (const auto& v : p.values) CHECK(std::abs(v.imag()) < 1e-12);
  CHECK(testing::rel_diff(to_spectral(p), f) < 1e-13);
  g.for_each([&](int i, int j, int k, std::size_t idx) {
    CHECK(std::abs(f[g.mirror(i, j, k)] - std::conj(f[idx])) < 1e-12);
  });
}

TEST_CASE("grid rejects invalid shapes and require_finite flags NaN") {
  CHECK_THROWS_AS(Grid({0, 4, 4}, {1.0, 1.0, 1.0}), UsageError);
  CHECK_THROWS_AS(Grid({4, 4, 4}, {1.0, -1.0, 1.0}), UsageError);
  SpectralField f(Grid::cube(4, 1.0));
  f[3] = std::nan("");
  CHECK_THROWS_AS(require_finite(f, "f"), DataError);
}
