#pragma once

#include <span>
#include <vector>

#include "wkb/spectral_field.hpp"

namespace wkb {

// Zero-padded evaluation grid for alias-free polynomial products.  A product
// of q band-limited factors is exact on a grid enlarged by the factor
// (q+1)/2 per axis, provided the unpaired Nyquist plane of the target
// lattice is discarded; truncation therefore always zeroes it.
class PaddedTransform {
 public:
  PaddedTransform(const Grid& base, int max_factors);

  const Grid& base() const { return base_; }
  const Grid& padded() const { return padded_; }
  int max_factors() const { return max_factors_; }

  // Spectral embedding / restriction between the two centered lattices.
  Eigen::ArrayXcd pad(const Eigen::ArrayXcd& base_coeff) const;
  Eigen::ArrayXcd truncate(const Eigen::ArrayXcd& padded_coeff) const;

  // Collocation values of a base-lattice field on the padded grid (exact
  // band-limited interpolation), and the way back (forward transform plus
  // restriction).
  Eigen::ArrayXcd to_padded_physical(const Eigen::ArrayXcd& base_coeff) const;
  Eigen::ArrayXcd from_padded_physical(const Eigen::ArrayXcd& phys) const;

 private:
  Grid base_;
  Grid padded_;
  int max_factors_;
  std::vector<Eigen::Index> embed_;  // flat base index -> flat padded index
};

// Pointwise product of q >= 2 fields on a shared grid, computed on the
// zero-padded grid and truncated back: the exact finite Fourier convolution
// of the inputs restricted to the original lattice (Nyquist plane zeroed).
SpectralField dealiased_product(std::span<const SpectralField> factors);
SpectralField dealiased_product(const SpectralField& a,
                                const SpectralField& b);

}  // namespace wkb
