#include "wkb/models.hpp"

#include <cmath>
#include <stdexcept>

namespace wkb {
namespace {

const std::complex<double> kI(0.0, 1.0);

Eigen::ArrayXd int_power(const Eigen::ArrayXd& s, int p) {
  Eigen::ArrayXd out = Eigen::ArrayXd::Ones(s.size());
  for (int i = 0; i < p; ++i) out *= s;
  return out;
}

}  // namespace

Potential Potential::constant(SpectralField v) {
  if (!is_real_valued(v))
    throw std::invalid_argument("potential: field must be real-valued");
  Potential p;
  p.times_ = {0.0};
  p.frames_.push_back(std::move(v));
  return p;
}

Potential Potential::timed(std::vector<double> times,
                           std::vector<SpectralField> frames) {
  if (times.size() != frames.size() || times.empty())
    throw std::invalid_argument("potential: times/frames mismatch");
  for (std::size_t i = 0; i + 1 < times.size(); ++i)
    if (!(times[i] < times[i + 1]))
      throw std::invalid_argument("potential: times must increase");
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (!is_real_valued(frames[i]))
      throw std::invalid_argument("potential: fields must be real-valued");
    require_same_grid(frames[0].grid, frames[i].grid, "potential");
  }
  Potential p;
  p.times_ = std::move(times);
  p.frames_ = std::move(frames);
  return p;
}

Eigen::ArrayXcd Potential::coeff_at(double t) const {
  if (frames_.empty())
    throw std::logic_error("potential: empty, check is_zero first");
  if (frames_.size() == 1 || t <= times_.front())
    return frames_.front().coeff;
  if (t >= times_.back()) return frames_.back().coeff;
  std::size_t hi = 1;
  while (times_[hi] < t) ++hi;
  const double span = times_[hi] - times_[hi - 1];
  const double theta = (t - times_[hi - 1]) / span;
  return (1.0 - theta) * frames_[hi - 1].coeff + theta * frames_[hi].coeff;
}

double Potential::l2_time_norm(double ell, double w0, double T0) const {
  if (is_zero() || !(T0 > 0.0)) return 0.0;
  const NormSpec spec{ell + 0.5, w0};
  if (is_static()) {
    const double n = analytic_norm(frames_.front(), spec);
    return std::sqrt(T0) * n;
  }
  // trapezoid over a fixed subdivision of [0, T0] on the interpolant
  const int steps = 256;
  const double h = T0 / steps;
  double acc = 0.0;
  double prev = 0.0;
  for (int i = 0; i <= steps; ++i) {
    SpectralField v(frames_.front().grid, coeff_at(i * h));
    const double n2 = std::pow(analytic_norm(v, spec), 2);
    if (i > 0) acc += 0.5 * h * (prev + n2);
    prev = n2;
  }
  return std::sqrt(acc);
}

int ModelParams::max_sigma() const {
  int s = 0;
  for (const auto& term : nonlocal) s = std::max(s, term.sigma);
  return s;
}

int ModelParams::max_product_factors() const {
  return std::max({2 * max_sigma() + 1, 2 * gamma + 1, 2});
}

void ModelParams::validate(const Grid& grid) const {
  const int d = grid.dim();
  if (H.rows() != d || H.cols() != d)
    throw std::invalid_argument("model: H must be d x d");
  if (!H.isApprox(H.transpose(), 1e-12))
    throw std::invalid_argument("model: H must be symmetric");
  if (beta.size() != d) throw std::invalid_argument("model: beta must have d entries");
  if (gamma < 1) throw std::invalid_argument("model: gamma must be >= 1");
  for (const auto& term : nonlocal)
    if (term.sigma < 1)
      throw std::invalid_argument("model: sigma must be >= 1");
  if (!(ell > 0.5 * (d + 1)))
    throw std::invalid_argument("model: need ell > (d+1)/2");
  if (epsilon < 0.0 || epsilon > 1.0)
    throw std::invalid_argument("model: epsilon must lie in [0,1]");
  if (!(schedule.w0 > 0.0) || !(schedule.M > 0.0))
    throw std::invalid_argument("model: weight schedule must be positive");
  if (!potential.is_zero() && *potential.grid() != grid)
    throw std::invalid_argument("model: potential grid mismatch");
}

GrenierState operator+(const GrenierState& x, const GrenierState& y) {
  return {x.phi + y.phi, x.a + y.a};
}
GrenierState operator-(const GrenierState& x, const GrenierState& y) {
  return {x.phi - y.phi, x.a - y.a};
}
GrenierState operator*(double s, const GrenierState& x) {
  return {s * x.phi, s * x.a};
}

SpectralField g_eval(const ModelParams& p, const SpectralField& s) {
  if (p.gamma == 1) return p.alpha * s;
  std::vector<SpectralField> copies(p.gamma, s);
  return p.alpha * dealiased_product(copies);
}

SpectralField g_prime(const ModelParams& p, const SpectralField& s) {
  if (p.gamma == 1) return constant_field(s.grid, p.alpha);
  if (p.gamma == 2) return (2.0 * p.alpha) * s;
  std::vector<SpectralField> copies(p.gamma - 1, s);
  return (p.alpha * p.gamma) * dealiased_product(copies);
}

SpectralField h_eval(const ModelParams& p, const SpectralField& s) {
  if (p.gamma == 1) return constant_field(s.grid, p.alpha);
  if (p.gamma == 2) return p.alpha * s;
  std::vector<SpectralField> copies(p.gamma - 1, s);
  return p.alpha * dealiased_product(copies);
}

ModelOps::ModelOps(const Grid& grid, const ModelParams& params)
    : grid_(grid),
      params_(params),
      pt_(grid, params.max_product_factors()),
      d2_(d2_multiplier(grid, params.H)) {
  params_.validate(grid_);
  has_H_ = params_.H.cwiseAbs().maxCoeff() != 0.0;
  has_beta_ = params_.beta.size() > 0 && params_.beta.cwiseAbs().maxCoeff() != 0.0;
  // group kernels by density power so each power costs one transform
  for (const auto& term : params_.nonlocal) {
    const Eigen::ArrayXd sym = kernel_symbol_array(term.kernel, grid_);
    bool merged = false;
    for (auto& g : kernel_groups_) {
      if (g.sigma == term.sigma) {
        g.symbol += sym;
        g.sigma_symbol += double(term.sigma) * sym;
        merged = true;
        break;
      }
    }
    if (!merged)
      kernel_groups_.push_back(
          {term.sigma, sym, Eigen::ArrayXd(double(term.sigma) * sym)});
  }
}

GrenierState ModelOps::grenier_rhs(const GrenierState& state, double t) const {
  return phase_amplitude_rhs(state, t, params_.epsilon);
}

GrenierState ModelOps::limit_rhs(const GrenierState& state, double t) const {
  return phase_amplitude_rhs(state, t, 0.0);
}

GrenierState ModelOps::phase_amplitude_rhs(const GrenierState& state, double t,
                                           double eps_dispersion) const {
  require_same_grid(state.phi.grid, grid_, "phase-amplitude rhs");
  require_same_grid(state.a.grid, grid_, "phase-amplitude rhs");
  const int d = grid_.dim();
  const Eigen::Index np = pt_.padded().size();

  const Eigen::ArrayXcd a_p = padded_phys(state.a.coeff);
  const Eigen::ArrayXd dens = a_p.abs2();

  std::vector<Eigen::ArrayXcd> dphi_p, da_p;
  Eigen::ArrayXcd d2phi_p;
  if (has_H_ || has_beta_) {
    dphi_p.reserve(d);
    for (int j = 0; j < d; ++j)
      dphi_p.push_back(padded_phys(kI * grid_.xi(j) * state.phi.coeff));
  }
  if (has_H_) {
    da_p.reserve(d);
    for (int j = 0; j < d; ++j)
      da_p.push_back(padded_phys(kI * grid_.xi(j) * state.a.coeff));
    d2phi_p = padded_phys(d2_ * state.phi.coeff);
  }

  Eigen::ArrayXcd t_phi = Eigen::ArrayXcd::Zero(np);
  Eigen::ArrayXcd t_a = Eigen::ArrayXcd::Zero(np);
  if (has_H_) {
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        const double eta = params_.H(j, k);
        if (eta == 0.0) continue;
        t_phi -= (0.5 * eta) * dphi_p[j] * dphi_p[k];
        t_a -= eta * dphi_p[j] * da_p[k];
      }
    t_a -= 0.5 * a_p * d2phi_p;
  }

  Eigen::ArrayXd g_p;
  if (has_beta_) {
    g_p = params_.alpha * int_power(dens, params_.gamma);
    Eigen::ArrayXcd beta_dphi = Eigen::ArrayXcd::Zero(np);
    for (int j = 0; j < d; ++j)
      if (params_.beta[j] != 0.0) beta_dphi += params_.beta[j] * dphi_p[j];
    t_phi -= g_p * beta_dphi;
  }

  Eigen::ArrayXcd phi_dot = pt_.from_padded_physical(t_phi);
  Eigen::ArrayXcd a_dot = pt_.from_padded_physical(t_a);

  for (const auto& grp : kernel_groups_) {
    const Eigen::ArrayXcd rho =
        pt_.from_padded_physical(int_power(dens, grp.sigma).cast<std::complex<double>>());
    phi_dot -= grp.symbol * rho;
  }
  if (!params_.potential.is_zero()) phi_dot -= params_.potential.coeff_at(t);

  if (has_beta_) {
    const Eigen::ArrayXcd p_hat = pt_.from_padded_physical(g_p * a_p);
    for (int j = 0; j < d; ++j)
      if (params_.beta[j] != 0.0)
        a_dot -= kI * params_.beta[j] * grid_.xi(j) * p_hat;
  }
  if (eps_dispersion != 0.0)
    a_dot += (kI * 0.5 * eps_dispersion) * d2_ * state.a.coeff;

  return {SpectralField(grid_, std::move(phi_dot)),
          SpectralField(grid_, std::move(a_dot))};
}

GrenierState ModelOps::linearized_rhs(const GrenierState& corr,
                                      const GrenierState& background,
                                      double /*t*/,
                                      bool with_dispersion_source) const {
  require_same_grid(corr.phi.grid, grid_, "linearized rhs");
  require_same_grid(background.phi.grid, grid_, "linearized rhs");
  const int d = grid_.dim();
  const Eigen::Index np = pt_.padded().size();

  const Eigen::ArrayXcd a_p = padded_phys(background.a.coeff);
  const Eigen::ArrayXcd a1_p = padded_phys(corr.a.coeff);
  const Eigen::ArrayXd dens = a_p.abs2();
  const Eigen::ArrayXd re_aa1 = (a_p.conjugate() * a1_p).real();

  std::vector<Eigen::ArrayXcd> dphi_p(d), dphi1_p(d), da_p(d), da1_p(d);
  Eigen::ArrayXcd d2phi_p, d2phi1_p;
  if (has_H_ || has_beta_) {
    for (int j = 0; j < d; ++j) {
      dphi_p[j] = padded_phys(kI * grid_.xi(j) * background.phi.coeff);
      dphi1_p[j] = padded_phys(kI * grid_.xi(j) * corr.phi.coeff);
    }
  }
  if (has_H_) {
    for (int j = 0; j < d; ++j) {
      da_p[j] = padded_phys(kI * grid_.xi(j) * background.a.coeff);
      da1_p[j] = padded_phys(kI * grid_.xi(j) * corr.a.coeff);
    }
    d2phi_p = padded_phys(d2_ * background.phi.coeff);
    d2phi1_p = padded_phys(d2_ * corr.phi.coeff);
  }

  Eigen::ArrayXcd t_phi = Eigen::ArrayXcd::Zero(np);
  Eigen::ArrayXcd t_a = Eigen::ArrayXcd::Zero(np);
  if (has_H_) {
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        const double eta = params_.H(j, k);
        if (eta == 0.0) continue;
        t_phi -= eta * dphi_p[j] * dphi1_p[k];
        t_a -= eta * (dphi_p[j] * da1_p[k] + da_p[j] * dphi1_p[k]);
      }
    t_a -= 0.5 * (a1_p * d2phi_p + a_p * d2phi1_p);
  }

  Eigen::ArrayXd g_p, gp_p;  // g(|a|^2), g'(|a|^2) on the padded grid
  if (has_beta_) {
    g_p = params_.alpha * int_power(dens, params_.gamma);
    gp_p = params_.alpha * params_.gamma * int_power(dens, params_.gamma - 1);
    Eigen::ArrayXcd beta_dphi = Eigen::ArrayXcd::Zero(np);
    Eigen::ArrayXcd beta_dphi1 = Eigen::ArrayXcd::Zero(np);
    for (int j = 0; j < d; ++j) {
      if (params_.beta[j] == 0.0) continue;
      beta_dphi += params_.beta[j] * dphi_p[j];
      beta_dphi1 += params_.beta[j] * dphi1_p[j];
    }
    t_phi -= g_p * beta_dphi1;
    t_phi -= 2.0 * gp_p * re_aa1 * beta_dphi;
  }

  Eigen::ArrayXcd phi_dot = pt_.from_padded_physical(t_phi);
  Eigen::ArrayXcd a_dot = pt_.from_padded_physical(t_a);

  for (const auto& grp : kernel_groups_) {
    const Eigen::ArrayXd mix = int_power(dens, grp.sigma - 1) * re_aa1;
    const Eigen::ArrayXcd rho =
        pt_.from_padded_physical(mix.cast<std::complex<double>>());
    phi_dot -= 2.0 * grp.sigma_symbol * rho;
  }

  if (has_beta_) {
    const Eigen::ArrayXcd p1 = pt_.from_padded_physical(g_p * a1_p);
    const Eigen::ArrayXcd p2 =
        pt_.from_padded_physical(2.0 * a_p * gp_p * re_aa1);
    for (int j = 0; j < d; ++j)
      if (params_.beta[j] != 0.0)
        a_dot -= kI * params_.beta[j] * grid_.xi(j) * (p1 + p2);
  }

  if (with_dispersion_source)
    a_dot += (kI * 0.5) * d2_ * background.a.coeff;

  return {SpectralField(grid_, std::move(phi_dot)),
          SpectralField(grid_, std::move(a_dot))};
}

SpectralField ModelOps::nls_rhs(const SpectralField& u, double t,
                                bool include_dispersion) const {
  require_same_grid(u.grid, grid_, "nls rhs");
  if (!(params_.epsilon > 0.0))
    throw std::invalid_argument("nls rhs: epsilon must be positive");
  const int d = grid_.dim();

  const Eigen::ArrayXcd u_p = padded_phys(u.coeff);
  const Eigen::ArrayXd dens = u_p.abs2();

  // potential-like multiplier W = V + sum_j K_j * |u|^{2 sigma_j}
  Eigen::ArrayXcd w_hat = Eigen::ArrayXcd::Zero(grid_.size());
  for (const auto& grp : kernel_groups_) {
    const Eigen::ArrayXcd rho = pt_.from_padded_physical(
        int_power(dens, grp.sigma).cast<std::complex<double>>());
    w_hat += grp.symbol * rho;
  }
  if (!params_.potential.is_zero()) w_hat += params_.potential.coeff_at(t);

  const Eigen::ArrayXcd w_p = padded_phys(w_hat);
  Eigen::ArrayXcd out =
      pt_.from_padded_physical(((-kI / params_.epsilon) * (w_p * u_p)).eval());

  if (has_beta_) {
    const Eigen::ArrayXd g_p = params_.alpha * int_power(dens, params_.gamma);
    const Eigen::ArrayXcd p_hat = pt_.from_padded_physical(g_p * u_p);
    for (int j = 0; j < d; ++j)
      if (params_.beta[j] != 0.0)
        out -= kI * params_.beta[j] * grid_.xi(j) * p_hat;
  }

  if (include_dispersion)
    out += (kI * 0.5 * params_.epsilon) * d2_ * u.coeff;
  return SpectralField(grid_, std::move(out));
}

Eigen::ArrayXcd ModelOps::dispersion_symbol(double epsilon) const {
  return (kI * 0.5 * epsilon) * d2_;
}

Eigen::ArrayXcd ModelOps::reconstruct_padded(const SpectralField& a,
                                             const SpectralField& phi,
                                             double eps,
                                             const SpectralField* phi1) const {
  if (!(eps > 0.0))
    throw std::invalid_argument("reconstruct: epsilon must be positive");
  const Eigen::ArrayXcd a_p = padded_phys(a.coeff);
  Eigen::ArrayXd phase = padded_phys(phi.coeff).real() / eps;
  if (phi1) phase += padded_phys(phi1->coeff).real();
  return a_p * (kI * phase.cast<std::complex<double>>()).exp();
}

SpectralField ModelOps::reconstruct(const SpectralField& a,
                                    const SpectralField& phi, double eps,
                                    const SpectralField* phi1) const {
  return SpectralField(grid_,
                       pt_.from_padded_physical(reconstruct_padded(a, phi, eps, phi1)));
}

std::vector<SpectralField> ModelOps::momentum_limit(
    const SpectralField& a, const SpectralField& phi) const {
  const Eigen::ArrayXcd a_p = padded_phys(a.coeff);
  const Eigen::ArrayXd dens = a_p.abs2();
  std::vector<SpectralField> out;
  for (int j = 0; j < grid_.dim(); ++j) {
    const Eigen::ArrayXcd dphi_p = padded_phys(kI * grid_.xi(j) * phi.coeff);
    out.emplace_back(grid_,
                     pt_.from_padded_physical(dens * dphi_p));
  }
  return out;
}

GrenierState grenier_rhs(const GrenierState& s, const ModelParams& p,
                         double t) {
  return ModelOps(s.phi.grid, p).grenier_rhs(s, t);
}
GrenierState limit_rhs(const GrenierState& s, const ModelParams& p, double t) {
  return ModelOps(s.phi.grid, p).limit_rhs(s, t);
}
GrenierState linearized_rhs(const GrenierState& corr,
                            const GrenierState& background,
                            const ModelParams& p, double t,
                            bool with_dispersion_source) {
  return ModelOps(corr.phi.grid, p)
      .linearized_rhs(corr, background, t, with_dispersion_source);
}
SpectralField nls_rhs(const SpectralField& u, const ModelParams& p, double t) {
  return ModelOps(u.grid, p).nls_rhs(u, t);
}

ModelParams make_preset(const std::string& name, int dim,
                        const PresetOptions& opts) {
  ModelParams p;
  p.beta = Eigen::VectorXd::Zero(dim);
  p.alpha = 1.0;
  p.gamma = 1;
  if (name == "hyperbolic-nls") {
    if (dim != 2)
      throw std::invalid_argument("hyperbolic-nls preset requires d = 2");
    p.H = Eigen::MatrixXd::Zero(2, 2);
    p.H(0, 0) = 1.0;
    p.H(1, 1) = -1.0;
    p.nonlocal.push_back({1, KernelSpec::identity(opts.strength)});
  } else if (name == "davey-stewartson-2") {
    if (dim != 2)
      throw std::invalid_argument("davey-stewartson-2 preset requires d = 2");
    p.H = Eigen::MatrixXd::Zero(2, 2);
    p.H(0, 0) = 1.0;
    p.H(1, 1) = -1.0;
    const double omega = opts.ds_integrable ? -2.0 * opts.chi : opts.omega;
    p.nonlocal.push_back({1, KernelSpec::identity(opts.chi)});
    p.nonlocal.push_back({1, KernelSpec::davey_stewartson(1, 2, omega)});
  } else if (name == "free") {
    p.H = Eigen::MatrixXd::Identity(dim, dim);
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return p;
}

}  // namespace wkb
