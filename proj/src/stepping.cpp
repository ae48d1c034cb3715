#include "wkb/stepping.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "wkb/log.hpp"

namespace wkb {
namespace {

void check_finite(bool ok, double t) {
  if (!ok)
    throw std::runtime_error("integration aborted: non-finite state at t = " +
                             std::to_string(t));
}

// Guidance threshold only: explicit stages see the dispersion scale
// eps*||H||/dx^2, so warn when dt is clearly beyond it.
void cfl_hint(const ModelOps& ops, const StepPlan& plan) {
  const double eps = ops.params().epsilon;
  const double hnorm = ops.params().H.norm();
  if (eps <= 0.0 || hnorm == 0.0) return;
  double dx_min = 1e300;
  for (int a = 0; a < ops.grid().dim(); ++a)
    dx_min = std::min(dx_min, ops.grid().box()[a] / ops.grid().n()[a]);
  const double dt_hint = dx_min * dx_min / (eps * hnorm);
  if (plan.dt > dt_hint)
    log_info("step dt=" + std::to_string(plan.dt) +
             " above dispersion guidance threshold " + std::to_string(dt_hint));
}

}  // namespace

int StepPlan::steps() const {
  validate();
  return static_cast<int>(std::llround(T / dt));
}

void StepPlan::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("step plan: dt must be > 0");
  if (!(T > 0.0)) throw std::invalid_argument("step plan: T must be > 0");
  const double k = T / dt;
  if (std::abs(k - std::llround(k)) > 1e-9 * std::max(1.0, k))
    throw std::invalid_argument("step plan: T must be an integer multiple of dt");
}

LawsonExp::LawsonExp(const Eigen::ArrayXcd& symbol, double dt)
    : half((0.5 * dt * symbol).exp()), full((dt * symbol).exp()) {}

SpectralField lawson_rk4_step(const SpectralField& u, const LawsonExp& prop,
                              const RhsFn<SpectralField>& rhs, double t,
                              double dt) {
  const Grid& g = u.grid;
  const SpectralField n1 = rhs(u, t);
  const SpectralField s2(g, prop.half * (u.coeff + (0.5 * dt) * n1.coeff));
  const SpectralField n2 = rhs(s2, t + 0.5 * dt);
  const SpectralField s3(g, prop.half * u.coeff + (0.5 * dt) * n2.coeff);
  const SpectralField n3 = rhs(s3, t + 0.5 * dt);
  const SpectralField s4(g, prop.full * u.coeff + dt * (prop.half * n3.coeff));
  const SpectralField n4 = rhs(s4, t + dt);
  return SpectralField(
      g, prop.full * u.coeff +
             (dt / 6.0) * (prop.full * n1.coeff +
                           2.0 * (prop.half * (n2.coeff + n3.coeff)) +
                           n4.coeff));
}

SpectralField lawson_rk4_step(const SpectralField& u,
                              const Eigen::ArrayXcd& linear_symbol,
                              const RhsFn<SpectralField>& nonlinear_rhs,
                              double t, double dt) {
  return lawson_rk4_step(u, LawsonExp(linear_symbol, dt), nonlinear_rhs, t, dt);
}

GrenierState lawson_rk4_step(const GrenierState& y, const LawsonExp& prop,
                             const RhsFn<GrenierState>& rhs, double t,
                             double dt) {
  const Grid& g = y.phi.grid;
  const GrenierState n1 = rhs(y, t);
  const GrenierState s2{
      SpectralField(g, y.phi.coeff + (0.5 * dt) * n1.phi.coeff),
      SpectralField(g, prop.half * (y.a.coeff + (0.5 * dt) * n1.a.coeff))};
  const GrenierState n2 = rhs(s2, t + 0.5 * dt);
  const GrenierState s3{
      SpectralField(g, y.phi.coeff + (0.5 * dt) * n2.phi.coeff),
      SpectralField(g, prop.half * y.a.coeff + (0.5 * dt) * n2.a.coeff)};
  const GrenierState n3 = rhs(s3, t + 0.5 * dt);
  const GrenierState s4{
      SpectralField(g, y.phi.coeff + dt * n3.phi.coeff),
      SpectralField(g, prop.full * y.a.coeff + dt * (prop.half * n3.a.coeff))};
  const GrenierState n4 = rhs(s4, t + dt);
  return {SpectralField(g, y.phi.coeff +
                               (dt / 6.0) * (n1.phi.coeff + 2.0 * n2.phi.coeff +
                                             2.0 * n3.phi.coeff + n4.phi.coeff)),
          SpectralField(
              g, prop.full * y.a.coeff +
                     (dt / 6.0) * (prop.full * n1.a.coeff +
                                   2.0 * (prop.half * (n2.a.coeff + n3.a.coeff)) +
                                   n4.a.coeff))};
}

bool all_finite(const SpectralField& f) { return f.coeff.allFinite(); }
bool all_finite(const GrenierState& s) {
  return all_finite(s.phi) && all_finite(s.a);
}

namespace {

// Shared driver for the background-free phase-amplitude systems: advance
// with step dt/2 via the pair Lawson stepper (plain RK4 when the dispersion
// symbol vanishes) and record every internal step.
GrenierTrajectory run_pair(const ModelOps& ops, GrenierState init,
                           const StepPlan& plan, double eps_dispersion,
                           const GrenierObserver& observer) {
  plan.validate();
  const int half_steps = 2 * plan.steps();
  const double h = 0.5 * plan.dt;
  const LawsonExp prop(ops.dispersion_symbol(eps_dispersion), h);
  const RhsFn<GrenierState> rhs = [&](const GrenierState& s, double t) {
    return ops.limit_rhs(s, t);  // dispersion handled by the propagator
  };

  GrenierTrajectory traj;
  traj.dt = plan.dt;
  traj.sample_dt = plan.record_half_steps ? h : plan.dt;
  traj.samples.reserve((plan.record_half_steps ? half_steps : plan.steps()) + 1);

  GrenierState y = std::move(init);
  if (observer) observer(0.0, y);
  traj.samples.push_back(y);
  for (int k = 0; k < half_steps; ++k) {
    const double t = k * h;
    y = lawson_rk4_step(y, prop, rhs, t, h);
    check_finite(all_finite(y), t + h);
    if (plan.record_half_steps || (k % 2 == 1)) {
      if (observer) observer(t + h, y);
      traj.samples.push_back(y);
    }
  }
  return traj;
}

}  // namespace

GrenierTrajectory integrate_grenier(const ModelOps& ops, GrenierState init,
                                    const StepPlan& plan,
                                    const GrenierObserver& observer) {
  cfl_hint(ops, plan);
  return run_pair(ops, std::move(init), plan, ops.params().epsilon, observer);
}

GrenierTrajectory integrate_limit(const ModelOps& ops, GrenierState init,
                                  const StepPlan& plan,
                                  const GrenierObserver& observer) {
  return run_pair(ops, std::move(init), plan, 0.0, observer);
}

GrenierTrajectory integrate_linearized(const ModelOps& ops, GrenierState corr0,
                                       const GrenierTrajectory& background,
                                       const StepPlan& plan,
                                       const LinearizedOptions& options,
                                       const GrenierObserver& observer) {
  plan.validate();
  const int K = plan.steps();
  const double h = plan.dt;
  if (background.sample_dt != 0.5 * plan.dt)
    throw std::invalid_argument(
        "linearized: background must be recorded on the matched half-step grid");
  if (background.horizon() < plan.T - 1e-12)
    throw std::invalid_argument("linearized: background horizon too short");

  const RhsFn<GrenierState> rhs = [&](const GrenierState& s, double t) {
    return ops.linearized_rhs(s, background.at_time(t), t,
                              options.with_dispersion_source);
  };

  GrenierTrajectory traj;
  traj.dt = plan.dt;
  traj.sample_dt = plan.record_half_steps ? 0.5 * h : h;
  GrenierState y = std::move(corr0);
  GrenierState f = rhs(y, 0.0);
  if (observer) observer(0.0, y);
  traj.samples.push_back(y);
  for (int k = 0; k < K; ++k) {
    const double t = k * h;
    const GrenierState k2 = rhs(y + (0.5 * h) * f, t + 0.5 * h);
    const GrenierState k3 = rhs(y + (0.5 * h) * k2, t + 0.5 * h);
    const GrenierState k4 = rhs(y + h * k3, t + h);
    GrenierState y1 = y + (h / 6.0) * (f + 2.0 * k2 + 2.0 * k3 + k4);
    check_finite(all_finite(y1), t + h);
    GrenierState f1 = rhs(y1, t + h);
    if (plan.record_half_steps) {
      GrenierState mid = hermite_midpoint(y, f, y1, f1, h);
      if (observer) observer(t + 0.5 * h, mid);
      traj.samples.push_back(std::move(mid));
    }
    if (observer) observer(t + h, y1);
    traj.samples.push_back(y1);
    y = std::move(y1);
    f = std::move(f1);
  }
  return traj;
}

FieldTrajectory integrate_nls(const ModelOps& ops, SpectralField u0,
                              const StepPlan& plan,
                              const FieldObserver& observer) {
  plan.validate();
  cfl_hint(ops, plan);
  const int half_steps = 2 * plan.steps();
  const double h = 0.5 * plan.dt;
  const LawsonExp prop(ops.dispersion_symbol(ops.params().epsilon), h);
  const RhsFn<SpectralField> rhs = [&](const SpectralField& u, double t) {
    return ops.nls_rhs(u, t, /*include_dispersion=*/false);
  };

  FieldTrajectory traj;
  traj.dt = plan.dt;
  traj.sample_dt = plan.record_half_steps ? h : plan.dt;
  SpectralField u = std::move(u0);
  if (observer) observer(0.0, u);
  traj.samples.push_back(u);
  for (int k = 0; k < half_steps; ++k) {
    const double t = k * h;
    u = lawson_rk4_step(u, prop, rhs, t, h);
    check_finite(all_finite(u), t + h);
    if (plan.record_half_steps || (k % 2 == 1)) {
      if (observer) observer(t + h, u);
      traj.samples.push_back(u);
    }
  }
  return traj;
}

}  // namespace wkb
