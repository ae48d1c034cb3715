#include "wkb/dealias.hpp"

#include <cmath>
#include <stdexcept>

#include "wkb/fft.hpp"

namespace wkb {
namespace {

int next_even_at_least(double x) {
  int v = static_cast<int>(std::ceil(x - 1e-12));
  if (v % 2 != 0) ++v;
  return v;
}

Grid padded_grid_for(const Grid& base, int q) {
  std::vector<int> n(base.dim());
  for (int a = 0; a < base.dim(); ++a)
    n[a] = next_even_at_least(base.n()[a] * (q + 1) * 0.5);
  return Grid(std::move(n), base.box());
}

}  // namespace

PaddedTransform::PaddedTransform(const Grid& base, int max_factors)
    : base_(base),
      padded_(padded_grid_for(base, max_factors)),
      max_factors_(max_factors) {
  if (max_factors < 2)
    throw std::invalid_argument("padded transform: need at least 2 factors");
  embed_.resize(base_.size());
  const int d = base_.dim();
  std::vector<int> c(d, 0), cp(d);
  for (Eigen::Index k = 0; k < base_.size(); ++k) {
    for (int a = 0; a < d; ++a)
      cp[a] = c[a] - base_.n()[a] / 2 + padded_.n()[a] / 2;
    embed_[k] = padded_.flatten(cp.data());
    for (int a = d - 1; a >= 0; --a) {
      if (++c[a] < base_.n()[a]) break;
      c[a] = 0;
    }
  }
}

Eigen::ArrayXcd PaddedTransform::pad(const Eigen::ArrayXcd& base_coeff) const {
  Eigen::ArrayXcd out = Eigen::ArrayXcd::Zero(padded_.size());
  for (Eigen::Index k = 0; k < base_.size(); ++k)
    out[embed_[k]] = base_coeff[k];
  return out;
}

Eigen::ArrayXcd PaddedTransform::truncate(
    const Eigen::ArrayXcd& padded_coeff) const {
  Eigen::ArrayXcd out(base_.size());
  for (Eigen::Index k = 0; k < base_.size(); ++k)
    out[k] = padded_coeff[embed_[k]];
  out = base_.nyquist_mask().select(std::complex<double>(0.0), out);
  return out;
}

Eigen::ArrayXcd PaddedTransform::to_padded_physical(
    const Eigen::ArrayXcd& base_coeff) const {
  return to_physical(SpectralField(padded_, pad(base_coeff)));
}

Eigen::ArrayXcd PaddedTransform::from_padded_physical(
    const Eigen::ArrayXcd& phys) const {
  return truncate(to_spectral(padded_, phys).coeff);
}

SpectralField dealiased_product(std::span<const SpectralField> factors) {
  if (factors.size() < 2)
    throw std::invalid_argument("dealiased_product: need at least 2 factors");
  const Grid& grid = factors[0].grid;
  for (const auto& f : factors)
    require_same_grid(grid, f.grid, "dealiased_product");

  PaddedTransform pt(grid, static_cast<int>(factors.size()));
  Eigen::ArrayXcd prod = pt.to_padded_physical(factors[0].coeff);
  for (std::size_t i = 1; i < factors.size(); ++i)
    prod *= pt.to_padded_physical(factors[i].coeff);
  return SpectralField(grid, pt.from_padded_physical(prod));
}

SpectralField dealiased_product(const SpectralField& a,
                                const SpectralField& b) {
  const SpectralField fs[2] = {a, b};
  return dealiased_product(std::span<const SpectralField>(fs, 2));
}

}  // namespace wkb
