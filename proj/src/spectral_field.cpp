#include "wkb/spectral_field.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "wkb/fft.hpp"

namespace wkb {
namespace {

// (2*pi)^{-d/2} * prod(L_i / n_i): scale turning the raw forward DFT into
// the trapezoid discretization of the Fourier coefficients.
double forward_scale(const Grid& g) {
  double s = std::pow(kTwoPi, -0.5 * g.dim());
  return s * g.cell_volume();
}

}  // namespace

SpectralField::SpectralField(const Grid& g, Eigen::ArrayXcd c)
    : grid(g), coeff(std::move(c)) {
  if (coeff.size() != grid.size())
    throw std::invalid_argument("spectral field: coefficient count mismatch");
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (a != b)
    throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

SpectralField to_spectral(const Grid& grid, const Eigen::ArrayXcd& samples) {
  if (samples.size() != grid.size())
    throw std::invalid_argument("to_spectral: sample shape mismatch");
  Eigen::ArrayXcd work = samples;
  fft::forward_inplace(grid.n(), work);
  return SpectralField(grid, fft::half_shift(grid, work) * forward_scale(grid));
}

Eigen::ArrayXcd to_physical(const SpectralField& f) {
  Eigen::ArrayXcd work = fft::half_shift(f.grid, f.coeff);
  work /= forward_scale(f.grid);
  fft::inverse_inplace(f.grid.n(), work);
  return work;
}

SpectralField partial_derivative(const SpectralField& f, int axis) {
  if (axis < 1 || axis > f.grid.dim())
    throw std::invalid_argument("partial_derivative: axis out of range");
  const std::complex<double> i_unit(0.0, 1.0);
  return SpectralField(f.grid, i_unit * f.grid.xi(axis - 1) * f.coeff);
}

Eigen::ArrayXd d2_multiplier(const Grid& grid, const Eigen::MatrixXd& H) {
  const int d = grid.dim();
  if (H.rows() != d || H.cols() != d)
    throw std::invalid_argument("d2_multiplier: H dimension mismatch");
  if (!H.isApprox(H.transpose(), 1e-12))
    throw std::invalid_argument("d2_multiplier: H must be symmetric");
  Eigen::ArrayXd mult = Eigen::ArrayXd::Zero(grid.size());
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      if (H(j, k) != 0.0) mult -= H(j, k) * grid.xi(j) * grid.xi(k);
  return mult;
}

SpectralField apply_D2(const SpectralField& f, const Eigen::MatrixXd& H) {
  return SpectralField(f.grid, d2_multiplier(f.grid, H) * f.coeff);
}

SpectralField constant_field(const Grid& grid, std::complex<double> value) {
  SpectralField f(grid);
  std::vector<int> center(grid.dim());
  for (int a = 0; a < grid.dim(); ++a) center[a] = grid.n()[a] / 2;
  f.coeff[grid.flatten(center.data())] =
      value * grid.box_volume() * std::pow(kTwoPi, -0.5 * grid.dim());
  return f;
}

SpectralField single_mode(const Grid& grid, const std::vector<int>& m0,
                          std::complex<double> amplitude) {
  if (static_cast<int>(m0.size()) != grid.dim())
    throw std::invalid_argument("single_mode: mode dimension mismatch");
  SpectralField f(grid);
  std::vector<int> c(grid.dim());
  for (int a = 0; a < grid.dim(); ++a) {
    c[a] = m0[a] + grid.n()[a] / 2;
    if (c[a] < 0 || c[a] >= grid.n()[a])
      throw std::invalid_argument("single_mode: mode outside lattice");
  }
  f.coeff[grid.flatten(c.data())] =
      amplitude * grid.box_volume() * std::pow(kTwoPi, -0.5 * grid.dim());
  return f;
}

double conjugate_asymmetry(const SpectralField& f) {
  const Grid& g = f.grid;
  const int d = g.dim();
  std::vector<int> c(d, 0), r(d);
  double worst = 0.0;
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    bool paired = true;
    for (int a = 0; a < d; ++a) {
      if (c[a] == 0) {  // Nyquist has no partner
        paired = false;
        break;
      }
      r[a] = g.n()[a] - c[a];
    }
    if (paired) {
      const auto diff = f.coeff[g.flatten(r.data())] - std::conj(f.coeff[k]);
      worst = std::max(worst, std::abs(diff));
    } else {
      worst = std::max(worst, std::abs(f.coeff[k]));
    }
    for (int a = d - 1; a >= 0; --a) {
      if (++c[a] < g.n()[a]) break;
      c[a] = 0;
    }
  }
  return worst;
}

bool is_real_valued(const SpectralField& f, double tol) {
  const double scale = f.coeff.abs().maxCoeff();
  return conjugate_asymmetry(f) <= tol * std::max(1.0, scale);
}

double l2_norm(const SpectralField& f) {
  const double scale = std::pow(kTwoPi, f.grid.dim()) / f.grid.box_volume();
  return std::sqrt(scale * f.coeff.abs2().sum());
}

double linf_norm(const SpectralField& f) {
  return to_physical(f).abs().maxCoeff();
}

double l1_norm(const SpectralField& f) {
  return to_physical(f).abs().sum() * f.grid.cell_volume();
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a.grid, b.grid, "field sum");
  return SpectralField(a.grid, a.coeff + b.coeff);
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a.grid, b.grid, "field difference");
  return SpectralField(a.grid, a.coeff - b.coeff);
}

SpectralField operator*(std::complex<double> s, const SpectralField& f) {
  return SpectralField(f.grid, s * f.coeff);
}

SpectralField operator*(double s, const SpectralField& f) {
  return SpectralField(f.grid, s * f.coeff);
}

}  // namespace wkb
