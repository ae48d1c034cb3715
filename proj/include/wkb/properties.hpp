#pragma once

#include <cstdint>

#include "wkb/harness.hpp"

namespace wkb {

// Randomized and exhaustive checks of the norm machinery: the bilinear
// product estimate with the computed constant, weight monotonicity, the
// Sobolev comparison, the norm-evolution identity, the convolution oracle
// for dealiased products, the bracket triangle inequality, and the discrete
// Young inequality.
struct PropertyReport {
  long tame_trials = 0;
  long tame_violations = 0;
  double tame_max_ratio = 0.0;

  long monotone_trials = 0;
  long monotone_violations = 0;
  long sobolev_trials = 0;
  long sobolev_violations = 0;
  long inner_trials = 0;
  long inner_violations = 0;  // hermitian symmetry or Cauchy-Schwarz

  double evol_norm_order = 0.0;  // >= 1.9 expected
  double dealias_max_err = 0.0;  // vs the direct convolution sum
  long bracket_checked = 0;
  long bracket_violations = 0;
  long young_checked = 0;
  long young_violations = 0;

  bool ok() const {
    return tame_violations == 0 && monotone_violations == 0 &&
           sobolev_violations == 0 && inner_violations == 0 &&
           evol_norm_order >= 1.9 && dealias_max_err <= 1e-12 &&
           bracket_violations == 0 && young_violations == 0;
  }
};

// `tame_trials` random pairs are split over the torus dimensions {1, 2} and
// the index pairs (ell, s) in {(2,2), (3,2)}; the product constant is taken
// at the given lattice truncation.
PropertyReport check_spaces(std::uint64_t seed, long tame_trials,
                            long bilinear_truncation = 10000);

}  // namespace wkb
