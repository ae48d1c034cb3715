#include "wkb/picard.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <stdexcept>

namespace wkb {
namespace {

const std::complex<double> kI(0.0, 1.0);

Eigen::ArrayXd int_power(const Eigen::ArrayXd& s, int p) {
  Eigen::ArrayXd out = Eigen::ArrayXd::Ones(s.size());
  for (int i = 0; i < p; ++i) out *= s;
  return out;
}

// Frozen coefficients of one background sample, prepared once and shared by
// the stages that read it.
struct FrozenStage {
  std::vector<Eigen::ArrayXcd> dphi;  // padded physical grad of phi_j
  Eigen::ArrayXcd d2phi;              // padded physical D^2 phi_j
  Eigen::ArrayXd g;                   // g(|a_j|^2) on the padded grid
  Eigen::ArrayXcd zero_order;         // <beta, grad g> + h(|a_j|^2) conj(a_j) <beta, grad a_j>
  Eigen::ArrayXcd source_phi;         // -(sum_j K_j * |a_j|^{2 sigma_j}) - V(t)
};

class FrozenBackground {
 public:
  FrozenBackground(const ModelOps& ops, const GrenierTrajectory& background)
      : ops_(ops), bg_(background) {
    const auto& params = ops.params();
    has_H_ = params.H.cwiseAbs().maxCoeff() != 0.0;
    has_beta_ = params.beta.cwiseAbs().maxCoeff() != 0.0;
  }

  const FrozenStage& at(double t) {
    const Eigen::Index idx = bg_.index_of(t);
    auto it = cache_.find(idx);
    if (it == cache_.end()) {
      it = cache_.emplace(idx, prepare(idx, t)).first;
      // stages advance monotonically; drop everything older than one step
      for (auto jt = cache_.begin(); jt != cache_.end();)
        jt = (jt->first + 2 < idx) ? cache_.erase(jt) : std::next(jt);
    }
    return *it->second;
  }

  bool has_H() const { return has_H_; }
  bool has_beta() const { return has_beta_; }

 private:
  std::shared_ptr<FrozenStage> prepare(Eigen::Index idx, double t) const {
    const auto& params = ops_.params();
    const Grid& grid = ops_.grid();
    const PaddedTransform& pt = ops_.padded();
    const GrenierState& s = bg_.samples[idx];
    auto st = std::make_shared<FrozenStage>();

    const Eigen::ArrayXcd a_p = pt.to_padded_physical(s.a.coeff);
    const Eigen::ArrayXd dens = a_p.abs2();

    if (has_H_) {
      st->dphi.reserve(grid.dim());
      for (int j = 0; j < grid.dim(); ++j)
        st->dphi.push_back(
            pt.to_padded_physical(kI * grid.xi(j) * s.phi.coeff));
      st->d2phi = pt.to_padded_physical(
          d2_multiplier(grid, params.H) * s.phi.coeff);
    }

    st->source_phi = Eigen::ArrayXcd::Zero(grid.size());
    for (const auto& term : params.nonlocal) {
      const Eigen::ArrayXcd rho = pt.from_padded_physical(
          int_power(dens, term.sigma).cast<std::complex<double>>());
      st->source_phi -= kernel_symbol_array(term.kernel, grid) * rho;
    }
    if (!params.potential.is_zero())
      st->source_phi -= params.potential.coeff_at(t);

    if (has_beta_) {
      st->g = params.alpha * int_power(dens, params.gamma);
      // spectral derivative of g, back to the padded grid
      const Eigen::ArrayXcd g_hat =
          pt.from_padded_physical(st->g.cast<std::complex<double>>());
      Eigen::ArrayXcd zero =
          Eigen::ArrayXcd::Zero(pt.padded().size());
      for (int j = 0; j < grid.dim(); ++j) {
        if (params.beta[j] == 0.0) continue;
        zero += pt.to_padded_physical(
            (kI * params.beta[j] * grid.xi(j) * g_hat).eval());
        zero += params.alpha * int_power(dens, params.gamma - 1) *
                a_p.conjugate() * params.beta[j] *
                pt.to_padded_physical((kI * grid.xi(j) * s.a.coeff).eval());
      }
      st->zero_order = std::move(zero);
    }
    return st;
  }

  const ModelOps& ops_;
  const GrenierTrajectory& bg_;
  bool has_H_ = false;
  bool has_beta_ = false;
  std::map<Eigen::Index, std::shared_ptr<FrozenStage>> cache_;
};

}  // namespace

GrenierTrajectory picard_step(const ModelOps& ops,
                              const GrenierTrajectory& background,
                              const GrenierState& data, const StepPlan& plan) {
  plan.validate();
  if (!plan.record_half_steps)
    throw std::invalid_argument("picard: half-step recording is required");
  if (background.sample_dt != 0.5 * plan.dt ||
      background.horizon() < plan.T - 1e-12)
    throw std::invalid_argument(
        "picard: background does not cover the plan's half-step grid");

  const Grid& grid = ops.grid();
  const PaddedTransform& pt = ops.padded();
  const auto& params = ops.params();
  const int d = grid.dim();
  const double h = plan.dt;
  const int K = plan.steps();

  FrozenBackground frozen(ops, background);

  // nonlinear-free frozen RHS; the (i eps/2) D^2 block lives in the propagator
  const RhsFn<GrenierState> rhs = [&](const GrenierState& y, double t) {
    const FrozenStage& st = frozen.at(t);
    const Eigen::Index np = pt.padded().size();
    Eigen::ArrayXcd t_phi = Eigen::ArrayXcd::Zero(np);
    Eigen::ArrayXcd t_a = Eigen::ArrayXcd::Zero(np);
    const Eigen::ArrayXcd a_p = pt.to_padded_physical(y.a.coeff);
    if (frozen.has_H()) {
      for (int j = 0; j < d; ++j) {
        Eigen::ArrayXcd dnew_phi =
            pt.to_padded_physical((kI * grid.xi(j) * y.phi.coeff).eval());
        Eigen::ArrayXcd dnew_a =
            pt.to_padded_physical((kI * grid.xi(j) * y.a.coeff).eval());
        for (int i = 0; i < d; ++i) {
          const double eta = params.H(i, j);
          if (eta == 0.0) continue;
          t_phi -= (0.5 * eta) * st.dphi[i] * dnew_phi;
          t_a -= eta * st.dphi[i] * dnew_a;
        }
      }
      t_a -= 0.5 * st.d2phi * a_p;
    }
    if (frozen.has_beta()) {
      Eigen::ArrayXcd beta_dphi_new = Eigen::ArrayXcd::Zero(np);
      for (int j = 0; j < d; ++j)
        if (params.beta[j] != 0.0)
          beta_dphi_new +=
              params.beta[j] *
              pt.to_padded_physical((kI * grid.xi(j) * y.phi.coeff).eval());
      t_phi -= st.g * beta_dphi_new;
      t_a -= st.zero_order * a_p;
    }
    Eigen::ArrayXcd phi_dot = pt.from_padded_physical(t_phi) + st.source_phi;
    Eigen::ArrayXcd a_dot = pt.from_padded_physical(t_a);
    return GrenierState{SpectralField(grid, std::move(phi_dot)),
                        SpectralField(grid, std::move(a_dot))};
  };

  const Eigen::ArrayXcd symbol = ops.dispersion_symbol(params.epsilon);
  const LawsonExp prop(symbol, h);
  const Eigen::ArrayXcd inv_full = ((-h) * symbol).exp();

  GrenierTrajectory out;
  out.dt = plan.dt;
  out.sample_dt = 0.5 * h;
  out.samples.reserve(2 * K + 1);

  GrenierState y = data;
  GrenierState f = rhs(y, 0.0);  // also stage 1 of the first step
  out.samples.push_back(y);
  for (int k = 0; k < K; ++k) {
    const double t = k * h;
    const GrenierState& n1 = f;
    const GrenierState s2{
        SpectralField(grid, y.phi.coeff + (0.5 * h) * n1.phi.coeff),
        SpectralField(grid, prop.half * (y.a.coeff + (0.5 * h) * n1.a.coeff))};
    const GrenierState n2 = rhs(s2, t + 0.5 * h);
    const GrenierState s3{
        SpectralField(grid, y.phi.coeff + (0.5 * h) * n2.phi.coeff),
        SpectralField(grid, prop.half * y.a.coeff + (0.5 * h) * n2.a.coeff)};
    const GrenierState n3 = rhs(s3, t + 0.5 * h);
    const GrenierState s4{
        SpectralField(grid, y.phi.coeff + h * n3.phi.coeff),
        SpectralField(grid, prop.full * y.a.coeff + h * (prop.half * n3.a.coeff))};
    const GrenierState n4 = rhs(s4, t + h);
    GrenierState y1{
        SpectralField(grid, y.phi.coeff + (h / 6.0) * (n1.phi.coeff +
                                                       2.0 * n2.phi.coeff +
                                                       2.0 * n3.phi.coeff +
                                                       n4.phi.coeff)),
        SpectralField(grid,
                      prop.full * y.a.coeff +
                          (h / 6.0) * (prop.full * n1.a.coeff +
                                       2.0 * (prop.half *
                                              (n2.a.coeff + n3.a.coeff)) +
                                       n4.a.coeff))};
    if (!all_finite(y1))
      throw std::runtime_error("picard: non-finite iterate at t = " +
                               std::to_string(t + h));
    GrenierState f1 = rhs(y1, t + h);
    // dense-output midpoint: plain Hermite for the phase, Hermite in the
    // integrating-factor variable for the amplitude
    SpectralField phi_mid =
        hermite_midpoint(y.phi, f.phi, y1.phi, f1.phi, h);
    Eigen::ArrayXcd w_mid =
        0.5 * (y.a.coeff + inv_full * y1.a.coeff) +
        (h / 8.0) * (f.a.coeff - inv_full * f1.a.coeff);
    SpectralField a_mid(grid, prop.half * w_mid);
    out.samples.push_back({std::move(phi_mid), std::move(a_mid)});
    out.samples.push_back(y1);
    y = std::move(y1);
    f = std::move(f1);
  }
  return out;
}

PicardResult picard_run(const ModelOps& ops, const GrenierState& data,
                        const StepPlan& plan, const PicardOptions& options) {
  plan.validate();
  if (options.j_max < 2)
    throw std::invalid_argument("picard: j_max must be >= 2");
  const auto& params = ops.params();
  const double ell = params.ell;
  const WeightSchedule& schedule = params.schedule;
  const double half = 0.5 * plan.dt;
  const int samples = 2 * plan.steps() + 1;

  auto triple_of = [&](const GrenierTrajectory& traj, bool phase) {
    TripleNormAccumulator acc(phase ? ell + 1.0 : ell, schedule, half);
    for (const auto& s : traj.samples) acc.add(phase ? s.phi : s.a);
    return acc.value();
  };
  auto delta_triple = [&](const GrenierTrajectory& x,
                          const GrenierTrajectory& y, bool phase) {
    TripleNormAccumulator acc(phase ? ell + 1.0 : ell, schedule, half);
    for (int k = 0; k < samples; ++k)
      acc.add(phase ? x.samples[k].phi - y.samples[k].phi
                    : x.samples[k].a - y.samples[k].a);
    return acc.value();
  };

  PicardResult result;
  PicardReport& rep = result.report;

  // iterate 0: the time-independent initial pair
  GrenierTrajectory prev;
  prev.dt = plan.dt;
  prev.sample_dt = half;
  prev.samples.assign(samples, data);
  rep.phi_triple.push_back(triple_of(prev, true));
  rep.a_triple.push_back(triple_of(prev, false));

  int rising = 0;
  for (int j = 1; j <= options.j_max; ++j) {
    GrenierTrajectory next = picard_step(ops, prev, data, plan);
    rep.iterate_count = j;
    rep.phi_triple.push_back(triple_of(next, true));
    rep.a_triple.push_back(triple_of(next, false));
    const double dphi = delta_triple(next, prev, true);
    const double da = delta_triple(next, prev, false);
    rep.delta_phi.push_back(dphi);
    rep.delta_a.push_back(da);
    if (rep.delta_phi.size() >= 2) {
      const std::size_t i = rep.delta_phi.size() - 1;
      const double prev_sum = rep.delta_phi[i - 1] + rep.delta_a[i - 1];
      const double ratio =
          prev_sum > 0.0 ? (dphi + da) / prev_sum
                         : std::numeric_limits<double>::infinity();
      rep.ratios.push_back(ratio);
      rising = ratio > 1.0 ? rising + 1 : 0;
    }
    prev = std::move(next);
    if (std::max(dphi, da) <= options.tol) {
      rep.converged = true;
      break;
    }
    if (rising >= 3) {
      rep.diverged = true;
      break;
    }
  }

  // distance to the direct nonlinear solve, max over the shared grid
  const GrenierTrajectory direct = integrate_grenier(ops, data, plan);
  double gap = 0.0;
  for (int k = 0; k < samples; ++k) {
    gap = std::max(gap, l2_norm(prev.samples[k].phi - direct.samples[k].phi) +
                            l2_norm(prev.samples[k].a - direct.samples[k].a));
  }
  rep.final_gap_to_direct = gap;
  result.trajectory = std::move(prev);
  return result;
}

}  // namespace wkb
