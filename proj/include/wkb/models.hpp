#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "wkb/dealias.hpp"
#include "wkb/kernels.hpp"
#include "wkb/norms.hpp"

namespace wkb {

struct NonlocalTerm {
  int sigma = 1;  // power of the density |a|^{2 sigma}
  KernelSpec kernel;
};

// Real analytic potential: absent, static, or piecewise-linear between
// time-stamped frames (clamped outside the stamped range).
class Potential {
 public:
  Potential() = default;
  static Potential constant(SpectralField v);
  static Potential timed(std::vector<double> times,
                         std::vector<SpectralField> frames);

  bool is_zero() const { return frames_.empty(); }
  bool is_static() const { return frames_.size() == 1; }
  const Grid* grid() const {
    return frames_.empty() ? nullptr : &frames_.front().grid;
  }
  Eigen::ArrayXcd coeff_at(double t) const;  // lattice coefficients
  // L^2-in-time norm of t -> ||V(t)||_{H^{ell+1/2}_{w0}} over [0, T0]
  double l2_time_norm(double ell, double w0, double T0) const;

 private:
  std::vector<double> times_;
  std::vector<SpectralField> frames_;
};

struct ModelParams {
  Eigen::MatrixXd H;     // symmetric d x d second-order coefficients
  Eigen::VectorXd beta;  // derivative-nonlinearity direction
  double alpha = 1.0;    // g(s) = alpha * s^gamma
  int gamma = 1;
  std::vector<NonlocalTerm> nonlocal;
  Potential potential;
  double epsilon = 0.0;  // semiclassical parameter in [0,1]
  double ell = 2.0;      // regularity index, > (d+1)/2
  WeightSchedule schedule;

  int dim() const { return static_cast<int>(H.rows()); }
  int max_sigma() const;
  // Largest pointwise monomial degree appearing in any right-hand side:
  // max(2*max sigma + 1, 2*gamma + 1, 2).
  int max_product_factors() const;
  void validate(const Grid& grid) const;
};

// Phase-amplitude pair: real phase, complex amplitude.
struct GrenierState {
  SpectralField phi;
  SpectralField a;

  GrenierState() = default;
  GrenierState(SpectralField phi_, SpectralField a_)
      : phi(std::move(phi_)), a(std::move(a_)) {}
  explicit GrenierState(const Grid& g) : phi(g), a(g) {}
};

GrenierState operator+(const GrenierState& x, const GrenierState& y);
GrenierState operator-(const GrenierState& x, const GrenierState& y);
GrenierState operator*(double s, const GrenierState& x);

// Time-indexed record of states on a uniform grid (spacing sample_dt, which
// is dt/2 when half-step recording is on).  Used as frozen background for
// the linearized and iterative solves and for time quadratures.
template <class State>
struct Trajectory {
  double dt = 0.0;         // integrator step
  double sample_dt = 0.0;  // record spacing
  std::vector<State> samples;

  double time_of(Eigen::Index k) const { return k * sample_dt; }
  double horizon() const { return time_of(samples.size() - 1); }
  // Exact-grid lookup; throws when t is not a recorded time.
  Eigen::Index index_of(double t) const;
  const State& at_time(double t) const { return samples[index_of(t)]; }
};

template <class State>
Eigen::Index Trajectory<State>::index_of(double t) const {
  const double x = t / sample_dt;
  const auto k = static_cast<Eigen::Index>(std::llround(x));
  if (k < 0 || k >= static_cast<Eigen::Index>(samples.size()) ||
      std::abs(x - k) > 1e-6)
    throw std::invalid_argument("trajectory: time not on the recorded grid");
  return k;
}

using GrenierTrajectory = Trajectory<GrenierState>;
using FieldTrajectory = Trajectory<SpectralField>;

// Pointwise monomials g(s) = alpha s^gamma, g'(s) = alpha gamma s^{gamma-1},
// h(s) = g(s)/s, evaluated as dealiased powers of a real field.
SpectralField g_eval(const ModelParams& p, const SpectralField& s);
SpectralField g_prime(const ModelParams& p, const SpectralField& s);
SpectralField h_eval(const ModelParams& p, const SpectralField& s);

// Right-hand-side assembly for the four systems, sharing one padded
// workspace (all products dealiased on a grid sized for the model's largest
// monomial).  Construct once per (grid, params) and reuse.
class ModelOps {
 public:
  ModelOps(const Grid& grid, const ModelParams& params);

  const Grid& grid() const { return grid_; }
  const ModelParams& params() const { return params_; }
  const PaddedTransform& padded() const { return pt_; }

  // d/dt of the phase-amplitude system; realness of the phase derivative is
  // structural.  limit_rhs is exactly grenier_rhs at epsilon = 0.
  GrenierState grenier_rhs(const GrenierState& state, double t) const;
  GrenierState limit_rhs(const GrenierState& state, double t) const;

  // Corrector system about a frozen background state; the inhomogeneous
  // (i/2) D^2 a term can be switched off for directional-derivative checks.
  GrenierState linearized_rhs(const GrenierState& corr,
                              const GrenierState& background, double t,
                              bool with_dispersion_source = true) const;

  // Full wave-function right-hand side (requires epsilon > 0).  The linear
  // dispersion block is diagonal in Fourier and can be excluded, in which
  // case the remainder is what an integrating-factor stepper needs.
  SpectralField nls_rhs(const SpectralField& u, double t,
                        bool include_dispersion = true) const;
  // Per-mode symbol of the linear dispersion block (i eps / 2) D^2.
  Eigen::ArrayXcd dispersion_symbol(double epsilon) const;

  // a * e^{i phi1} * e^{i phi / eps} evaluated pointwise on the padded grid;
  // the spectral result is the truncation of that product.
  Eigen::ArrayXcd reconstruct_padded(const SpectralField& a,
                                     const SpectralField& phi, double eps,
                                     const SpectralField* phi1 = nullptr) const;
  SpectralField reconstruct(const SpectralField& a, const SpectralField& phi,
                            double eps,
                            const SpectralField* phi1 = nullptr) const;

  // |a|^2 d_j phi for each axis (dealiased), the zero-dispersion momentum.
  std::vector<SpectralField> momentum_limit(const SpectralField& a,
                                            const SpectralField& phi) const;

 private:
  struct KernelGroup {
    int sigma;
    Eigen::ArrayXd symbol;           // sum of kernel symbols with this sigma
    Eigen::ArrayXd sigma_symbol;     // sum of sigma_j-weighted symbols
  };

  GrenierState phase_amplitude_rhs(const GrenierState& state, double t,
                                   double eps_dispersion) const;
  Eigen::ArrayXcd padded_phys(const Eigen::ArrayXcd& coeff) const {
    return pt_.to_padded_physical(coeff);
  }

  Grid grid_;
  ModelParams params_;
  PaddedTransform pt_;
  Eigen::ArrayXd d2_;  // -<xi, H xi> on the base lattice
  std::vector<KernelGroup> kernel_groups_;
  bool has_H_ = false;
  bool has_beta_ = false;
};

// One-shot wrappers mirroring the per-operation contracts; callers with a
// long-lived system should construct a ModelOps instead.
GrenierState grenier_rhs(const GrenierState& s, const ModelParams& p, double t);
GrenierState limit_rhs(const GrenierState& s, const ModelParams& p, double t);
GrenierState linearized_rhs(const GrenierState& corr,
                            const GrenierState& background,
                            const ModelParams& p, double t,
                            bool with_dispersion_source = true);
SpectralField nls_rhs(const SpectralField& u, const ModelParams& p, double t);

// Named presets: "hyperbolic-nls", "davey-stewartson-2", "free".
struct PresetOptions {
  double strength = 1.0;   // hyperbolic-nls kernel weight
  double chi = 1.0;        // davey-stewartson local coupling
  double omega = -2.0;     // davey-stewartson nonlocal coupling
  bool ds_integrable = true;  // force omega = -2 chi
};
ModelParams make_preset(const std::string& name, int dim,
                        const PresetOptions& opts = {});

}  // namespace wkb
