#pragma once

#include <memory>
#include <span>

#include "wkb/spectral_field.hpp"

namespace wkb {

// Convolution kernel realized as a real, even, bounded Fourier multiplier
// m_hat(xi) acting on lattice coefficients.  An optional scalar weight is
// folded into the symbol, so K = c*delta is Identity with weight c.
struct KernelSpec {
  enum class Kind { Identity, Zero, DaveyStewartson, Tabulated };

  Kind kind = Kind::Identity;
  double weight = 1.0;
  int axis_p = 1;  // 1-based axes of the Davey-Stewartson symbol
  int axis_q = 2;
  std::shared_ptr<const SpectralField> table;  // real symbol values per mode

  static KernelSpec identity(double weight = 1.0);
  static KernelSpec zero();
  // xi_p^2 / (xi_p^2 + xi_q^2), set to 0 where both components vanish (the
  // unique even bounded mean-annihilating choice).
  static KernelSpec davey_stewartson(int axis_p, int axis_q,
                                     double weight = 1.0);
  // Symbol table validated to be real and even at construction.
  static KernelSpec tabulated(SpectralField symbol, double weight = 1.0);
};

double kernel_symbol(const KernelSpec& spec, std::span<const double> xi);
// Symbol sampled over a grid's centered lattice.
Eigen::ArrayXd kernel_symbol_array(const KernelSpec& spec, const Grid& grid);

// Multiplier application; requires a real-valued (conjugate-symmetric)
// input and preserves realness.
SpectralField apply_kernel(const KernelSpec& spec, const SpectralField& rho);

}  // namespace wkb
