#pragma once

#include "wkb/stepping.hpp"

namespace wkb {

// Constructive fixed-point iteration for the phase-amplitude system: each
// sweep solves the pair of linear equations with coefficients frozen from
// the previous iterate's trajectory, and the sequence is monitored in the
// time-weighted triple norms.
struct PicardReport {
  int iterate_count = 0;
  std::vector<double> delta_phi;  // |||phi_j - phi_{j-1}|||_{ell+1,T}, j >= 1
  std::vector<double> delta_a;    // |||a_j - a_{j-1}|||_{ell,T}
  std::vector<double> ratios;     // successive quotients of the delta sums
  std::vector<double> phi_triple;  // |||phi_j|||_{ell+1,T} including j = 0
  std::vector<double> a_triple;    // |||a_j|||_{ell,T}
  bool converged = false;
  bool diverged = false;  // ratio > 1 three times in a row
  double final_gap_to_direct = 0.0;  // max over samples of L2 state distance
};

// One sweep: integrate the frozen-coefficient linear system over [0, T] with
// data as initial state.  The background must cover the plan's half-step
// grid; coefficients are read at stage times without interpolation, and the
// produced trajectory lands on the same half-step grid.
GrenierTrajectory picard_step(const ModelOps& ops,
                              const GrenierTrajectory& background,
                              const GrenierState& data, const StepPlan& plan);

struct PicardOptions {
  int j_max = 12;
  double tol = 1e-10;
};

struct PicardResult {
  PicardReport report;
  GrenierTrajectory trajectory;
};

// Full iteration starting from the time-independent initial pair, with
// delta-norm tracking, divergence as a reported (not thrown) outcome, and a
// final comparison against the direct nonlinear solve.
PicardResult picard_run(const ModelOps& ops, const GrenierState& data,
                        const StepPlan& plan, const PicardOptions& options = {});

}  // namespace wkb
