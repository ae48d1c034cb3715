#pragma once

#include <complex>
#include <vector>

#include "wkb/spectral_field.hpp"

namespace wkb {

// Linearly decaying analyticity weight w(t) = w0 - M*t, valid on
// 0 <= t < w0/M.
struct WeightSchedule {
  double w0 = 1.0;
  double M = 1.0;

  double horizon() const { return w0 / M; }
  double weight_at(double t) const;  // throws outside [0, w0/M)
};

// Parameters of the weighted Sobolev norm
//   ||f||^2 = sum_m <xi(m)>^{2 ell} e^{2 w <xi(m)>} |coeff(m)|^2.
struct NormSpec {
  double ell = 0.0;
  double w = 0.0;
};

// Exponent guard: the weight factor e^{2 w <xi>} raises std::range_error as
// soon as 2 w <xi> > 700 at a populated mode instead of overflowing.
double analytic_norm(const SpectralField& f, const NormSpec& spec);
std::complex<double> inner_product(const SpectralField& f,
                                   const SpectralField& g,
                                   const NormSpec& spec);

// Upper bound on the bilinear product constant
//   2^ell (2*pi)^{-d/2} || <.>^{-s} ||_{l2(Z^d)},   s > d/2,
// obtained from the lattice sum over |m_i| <= truncation plus an integral
// comparison tail.  The reported value is monotone nonincreasing in the
// truncation radius.
double bilinear_constant(double ell, double s, int d, long truncation);

// Running evaluation of
//   ||| psi |||_{ell,T}^2 = max( sup_s ||psi(s)||^2_{H^ell_{w(s)}},
//                                2 M int_0^T ||psi(s)||^2_{H^{ell+1/2}_{w(s)}} ds )
// over uniformly spaced samples (trapezoid quadrature for the integral).
class TripleNormAccumulator {
 public:
  TripleNormAccumulator(double ell, const WeightSchedule& schedule,
                        double sample_dt);

  void add(const SpectralField& f);
  int count() const { return count_; }
  double time() const { return (count_ - 1) * sample_dt_; }

  double sup_part() const { return sup_sq_; }         // squared
  double integral_part() const { return integral_; }  // int of H^{ell+1/2} sq.
  double value() const;                               // the triple norm

 private:
  double ell_;
  WeightSchedule schedule_;
  double sample_dt_;
  int count_ = 0;
  double sup_sq_ = 0.0;
  double integral_ = 0.0;
  double prev_half_sq_ = 0.0;
};

// Triple norm of a uniformly sampled trajectory; samples[k] is the state at
// time k * sample_dt and the covered horizon must stay below w0/M.
double triple_norm(const std::vector<SpectralField>& samples, double sample_dt,
                   double ell, const WeightSchedule& schedule);

}  // namespace wkb
