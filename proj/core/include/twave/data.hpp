#pragma once

#include <cstdint>

#include "twave/grid.hpp"

namespace twave {

/// Real bump exp(-|x - center|^2 / (2 sigma^2)) cos((x - center).xi0) on the grid, using
/// minimal-image distances so the bump wraps smoothly across the box.
PhysicalField gaussian_bump(const Grid& g, double sigma, const Vec3& center = {}, const Vec3& xi0 = {});

/// Spectrum of a real random field with coefficients of size <xi>^{-envelope_order} and
/// uniformly random phases, Hermitian symmetric, zero mean, Nyquist planes cleared.
SpectralField random_envelope_field(const Grid& g, std::uint64_t seed, int envelope_order = 8);

}  // namespace twave
