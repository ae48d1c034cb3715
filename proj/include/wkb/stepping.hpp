#pragma once

#include <functional>

#include "wkb/models.hpp"

namespace wkb {

// Fixed-step plan; the horizon must be an integer number of steps.  States
// are recorded on the half-step grid (spacing dt/2) unless half-step
// recording is switched off, in which case only whole steps are kept.
struct StepPlan {
  double dt = 1e-3;
  double T = 1.0;
  bool record_half_steps = true;

  int steps() const;  // T/dt, validated
  void validate() const;
};

template <class State>
using RhsFn = std::function<State(const State&, double)>;

// Classical 4-stage Runge-Kutta step.
template <class State>
State rk4_step(const State& y, const RhsFn<State>& rhs, double t, double dt) {
  const State k1 = rhs(y, t);
  const State k2 = rhs(y + (0.5 * dt) * k1, t + 0.5 * dt);
  const State k3 = rhs(y + (0.5 * dt) * k2, t + 0.5 * dt);
  const State k4 = rhs(y + dt * k3, t + dt);
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Integrating-factor (Lawson) RK4: the diagonal linear symbol is propagated
// exactly and RK4 acts on the transformed nonlinearity.  With a zero symbol
// every exponential is exactly one and the step reduces to rk4_step.
struct LawsonExp {
  Eigen::ArrayXcd half;  // exp((dt/2) * symbol)
  Eigen::ArrayXcd full;  // exp(dt * symbol)

  LawsonExp() = default;
  LawsonExp(const Eigen::ArrayXcd& symbol, double dt);
};

SpectralField lawson_rk4_step(const SpectralField& u, const LawsonExp& prop,
                              const RhsFn<SpectralField>& nonlinear_rhs,
                              double t, double dt);
// One-shot form computing the exponentials from the symbol.
SpectralField lawson_rk4_step(const SpectralField& u,
                              const Eigen::ArrayXcd& linear_symbol,
                              const RhsFn<SpectralField>& nonlinear_rhs,
                              double t, double dt);
// Pair variant: the symbol acts on the amplitude component only, the phase
// block is untouched (identity propagation).
GrenierState lawson_rk4_step(const GrenierState& y, const LawsonExp& a_prop,
                             const RhsFn<GrenierState>& nonlinear_rhs,
                             double t, double dt);

// Dense-output midpoint: cubic Hermite from endpoint values and slopes,
// y(t+h/2) = (y0+y1)/2 + h (f0-f1)/8, locally O(h^4) accurate.
template <class State>
State hermite_midpoint(const State& y0, const State& f0, const State& y1,
                       const State& f1, double h) {
  return 0.5 * (y0 + y1) + (h / 8.0) * (f0 - f1);
}

using GrenierObserver = std::function<void(double, const GrenierState&)>;
using FieldObserver = std::function<void(double, const SpectralField&)>;

// Time integration of the four systems.  Background-free systems advance
// with internal step dt/2 so that every recorded half-step sample is a
// genuine integrator point; the linearized solve advances with step dt
// (its stages read the stored background at t, t+dt/2, t+dt exactly, with
// no interpolation) and fills the half-step record by Hermite dense output.
GrenierTrajectory integrate_grenier(const ModelOps& ops, GrenierState init,
                                    const StepPlan& plan,
                                    const GrenierObserver& observer = {});
GrenierTrajectory integrate_limit(const ModelOps& ops, GrenierState init,
                                  const StepPlan& plan,
                                  const GrenierObserver& observer = {});

struct LinearizedOptions {
  bool with_dispersion_source = true;
};
GrenierTrajectory integrate_linearized(const ModelOps& ops, GrenierState corr0,
                                       const GrenierTrajectory& background,
                                       const StepPlan& plan,
                                       const LinearizedOptions& options = {},
                                       const GrenierObserver& observer = {});

FieldTrajectory integrate_nls(const ModelOps& ops, SpectralField u0,
                              const StepPlan& plan,
                              const FieldObserver& observer = {});

bool all_finite(const SpectralField& f);
bool all_finite(const GrenierState& s);

}  // namespace wkb
