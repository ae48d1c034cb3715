#pragma once

#include <Eigen/Core>

#include <complex>

#include "wkb/grid.hpp"

namespace wkb {

// Complex Fourier coefficients on the centered frequency lattice of a Grid.
// The transform pair is normalized so that
//
//   coeff(m) = (prod L_i / n_i) (2*pi)^{-d/2} sum_k samples(y_k) e^{-i<xi(m),y_k>}
//   samples(y_k) = (2*pi)^{d/2} / (prod L_i) sum_m coeff(m) e^{+i<xi(m),y_k>}
//
// which is the trapezoid discretization of the unitary-with-(2*pi)^{-d/2}
// Fourier series; the round trip is exact on band-limited data.
struct SpectralField {
  Grid grid;
  Eigen::ArrayXcd coeff;

  SpectralField() : grid(Grid::torus({4})), coeff(Eigen::ArrayXcd::Zero(4)) {}
  explicit SpectralField(const Grid& g)
      : grid(g), coeff(Eigen::ArrayXcd::Zero(g.size())) {}
  SpectralField(const Grid& g, Eigen::ArrayXcd c);
};

SpectralField to_spectral(const Grid& grid, const Eigen::ArrayXcd& samples);
Eigen::ArrayXcd to_physical(const SpectralField& f);

// Spectral derivative along one axis (1-based), i.e. multiplication of the
// coefficients by i*xi_axis(m).
SpectralField partial_derivative(const SpectralField& f, int axis);

// Second-order operator <grad, H grad>: multiplier -<xi, H xi>.  H must be
// symmetric.
SpectralField apply_D2(const SpectralField& f, const Eigen::MatrixXd& H);
Eigen::ArrayXd d2_multiplier(const Grid& grid, const Eigen::MatrixXd& H);

// Constant function with the given value.
SpectralField constant_field(const Grid& grid, std::complex<double> value);
// e^{i <m0, 2 pi y / L>} with integer mode m0 and unit amplitude.
SpectralField single_mode(const Grid& grid, const std::vector<int>& m0,
                          std::complex<double> amplitude = 1.0);

// max_m |coeff(-m) - conj(coeff(m))| over paired (non-Nyquist) modes; zero
// for fields representing real-valued functions.
double conjugate_asymmetry(const SpectralField& f);
bool is_real_valued(const SpectralField& f, double tol = 1e-10);

// Physical-space L2 norm, i.e. the square root of the integral of |f|^2 over
// the box (equals the plain coefficient l2 norm when L = 2*pi).
double l2_norm(const SpectralField& f);
double linf_norm(const SpectralField& f);  // max |f| over collocation points
double l1_norm(const SpectralField& f);    // integral of |f| (trapezoid)

// Field algebra on a shared grid.
SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator*(std::complex<double> s, const SpectralField& f);
SpectralField operator*(double s, const SpectralField& f);

void require_same_grid(const Grid& a, const Grid& b, const char* where);

}  // namespace wkb
