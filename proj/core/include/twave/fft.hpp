#pragma once

#include <array>
#include <span>

#include "twave/grid.hpp"

namespace twave::fft {

/// In-place unnormalized DFTs over a row-major array with the given dimensions.
/// Degenerate axes (n = 1) are dropped from the transform rank.
///
/// Plans are created with FFTW_ESTIMATE so repeated runs pick the same algorithm
/// and produce bitwise-identical output.
void forward(const std::array<int, 3>& dims, std::span<cplx> data);
void backward(const std::array<int, 3>& dims, std::span<cplx> data);

}  // namespace twave::fft
