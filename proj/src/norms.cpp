#include "wkb/norms.hpp"

#include <cmath>
#include <stdexcept>

namespace wkb {
namespace {

constexpr double kExpGuard = 700.0;  // e^700 is the last safe double exponent

double checked_weight_factor(double two_w_bracket, bool populated) {
  if (two_w_bracket > kExpGuard) {
    if (populated)
      throw std::range_error(
          "analytic norm: exponential weight overflow (2*w*<xi> > 700); "
          "shrink the weight or the lattice");
    return 0.0;  // empty mode contributes nothing either way
  }
  return std::exp(two_w_bracket);
}

}  // namespace

double WeightSchedule::weight_at(double t) const {
  if (!(w0 > 0.0) || !(M > 0.0))
    throw std::invalid_argument("weight schedule: w0 and M must be positive");
  if (t < 0.0 || t >= horizon())
    throw std::range_error("weight schedule exhausted: t outside [0, w0/M)");
  return w0 - M * t;
}

double analytic_norm(const SpectralField& f, const NormSpec& spec) {
  const Eigen::ArrayXd& bracket = f.grid.bracket();
  double sum = 0.0;
  for (Eigen::Index k = 0; k < f.coeff.size(); ++k) {
    const double mag2 = std::norm(f.coeff[k]);
    const double factor =
        checked_weight_factor(2.0 * spec.w * bracket[k], mag2 != 0.0);
    sum += std::pow(bracket[k], 2.0 * spec.ell) * factor * mag2;
  }
  return std::sqrt(sum);
}

std::complex<double> inner_product(const SpectralField& f,
                                   const SpectralField& g,
                                   const NormSpec& spec) {
  require_same_grid(f.grid, g.grid, "inner_product");
  const Eigen::ArrayXd& bracket = f.grid.bracket();
  std::complex<double> sum = 0.0;
  for (Eigen::Index k = 0; k < f.coeff.size(); ++k) {
    const bool populated = f.coeff[k] != 0.0 && g.coeff[k] != 0.0;
    const double factor =
        checked_weight_factor(2.0 * spec.w * bracket[k], populated);
    sum += std::pow(bracket[k], 2.0 * spec.ell) * factor *
           std::conj(f.coeff[k]) * g.coeff[k];
  }
  return sum;
}

double bilinear_constant(double ell, double s, int d, long truncation) {
  if (d < 1 || d > 3)
    throw std::invalid_argument("bilinear_constant: d must be 1, 2, or 3");
  if (!(s > 0.5 * d))
    throw std::invalid_argument(
        "bilinear_constant: need s > d/2, the lattice sum diverges");
  if (truncation < 8)
    throw std::invalid_argument("bilinear_constant: truncation must be >= 8");

  const long R = truncation;
  const bool s_is_integer = s == std::floor(s) && s <= 16.0;
  const int si = static_cast<int>(s);
  auto term = [&](double m2) {
    const double t = 1.0 + m2;
    if (s_is_integer) {
      double p = 1.0;
      for (int i = 0; i < si; ++i) p *= t;
      return 1.0 / p;
    }
    return std::pow(t, -s);
  };

  double sum = 0.0;
  if (d == 1) {
    sum = term(0.0);
    for (long m = 1; m <= R; ++m) sum += 2.0 * term(double(m) * m);
  } else if (d == 2) {
    for (long m1 = -R; m1 <= R; ++m1) {
      const double a = double(m1) * m1;
      double row = term(a);
      for (long m2 = 1; m2 <= R; ++m2) row += 2.0 * term(a + double(m2) * m2);
      sum += row;
    }
  } else {
    for (long m1 = -R; m1 <= R; ++m1)
      for (long m2 = -R; m2 <= R; ++m2) {
        const double a = double(m1) * m1 + double(m2) * m2;
        double row = term(a);
        for (long m3 = 1; m3 <= R; ++m3)
          row += 2.0 * term(a + double(m3) * m3);
        sum += row;
      }
  }

  // Tail of the sum over |m|_inf > R: each unit cube around an outside mode
  // lies in {|x|_inf > R + 1/2} and dominates the lattice term, giving
  //   tail <= d 2^d int_{R+1/2}^inf (v)^{-2s} (v + 1/2)^{d-1} dv
  // (shell measure of {|x|_inf = u} is d 2^d u^{d-1} du, then v = u - 1/2 and
  // (1+v^2)^{-s} <= v^{-2s}).  This keeps sum + tail nonincreasing in R.
  const double v0 = static_cast<double>(R) + 0.5;
  double tail = 0.0;
  double binom = 1.0;
  for (int k = 0; k < d; ++k) {
    if (k > 0) binom = binom * (d - k) / k;
    const double denom = 2.0 * s - k - 1.0;  // positive since s > d/2
    tail += binom * std::pow(0.5, d - 1 - k) * std::pow(v0, k + 1 - 2.0 * s) /
            denom;
  }
  tail *= d * std::pow(2.0, d);

  return std::pow(2.0, ell) * std::pow(kTwoPi, -0.5 * d) *
         std::sqrt(sum + tail);
}

TripleNormAccumulator::TripleNormAccumulator(double ell,
                                             const WeightSchedule& schedule,
                                             double sample_dt)
    : ell_(ell), schedule_(schedule), sample_dt_(sample_dt) {
  if (!(sample_dt > 0.0))
    throw std::invalid_argument("triple norm: sample spacing must be > 0");
}

void TripleNormAccumulator::add(const SpectralField& f) {
  const double t = count_ * sample_dt_;
  const double w = schedule_.weight_at(t);  // throws once the schedule runs out
  const double ns = analytic_norm(f, {ell_, w});
  const double nh = analytic_norm(f, {ell_ + 0.5, w});
  sup_sq_ = std::max(sup_sq_, ns * ns);
  if (count_ > 0)
    integral_ += 0.5 * sample_dt_ * (prev_half_sq_ + nh * nh);
  prev_half_sq_ = nh * nh;
  ++count_;
}

double TripleNormAccumulator::value() const {
  return std::sqrt(std::max(sup_sq_, 2.0 * schedule_.M * integral_));
}

double triple_norm(const std::vector<SpectralField>& samples, double sample_dt,
                   double ell, const WeightSchedule& schedule) {
  if (samples.empty())
    throw std::invalid_argument("triple_norm: empty trajectory");
  TripleNormAccumulator acc(ell, schedule, sample_dt);
  for (const auto& f : samples) acc.add(f);
  return acc.value();
}

}  // namespace wkb
