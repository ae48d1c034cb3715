#pragma once

#include <Eigen/Core>

#include "wkb/grid.hpp"

// Internal d-dimensional complex-to-complex DFT helpers.  Data is flat
// row-major; "digital" order means axis bin j corresponds to mode j for
// j < n/2 and j - n for j >= n/2 (the native FFT layout).  Plans are cached
// per transform length in a thread-local engine, so workspaces never cross
// workers.
namespace wkb::fft {

// Unscaled forward DFT, sign convention e^{-i 2 pi j k / n} per axis.
void forward_inplace(const std::vector<int>& n, Eigen::ArrayXcd& data);
// Inverse DFT including the 1/N normalization.
void inverse_inplace(const std::vector<int>& n, Eigen::ArrayXcd& data);

// Swap between digital and centered-lattice order (self-inverse for even n).
Eigen::ArrayXcd half_shift(const Grid& grid, const Eigen::ArrayXcd& in);

}  // namespace wkb::fft
