#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "wkb/config.hpp"
#include "wkb/log.hpp"
#include "wkb/picard.hpp"
#include "wkb/properties.hpp"
#include "wkb/snapshot.hpp"

namespace fs = std::filesystem;
using namespace wkb;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string slurp(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config: " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

RunConfig load_config(const std::string& config_path,
                      const std::optional<std::uint64_t>& seed,
                      const std::vector<double>& eps_override) {
  RunConfig config;
  if (!config_path.empty()) {
    const ParseResult parsed = parse_config(slurp(config_path));
    if (!parsed.ok()) {
      std::ostringstream msg;
      for (const auto& e : parsed.errors)
        msg << "line " << e.line << ": " << e.message << "; ";
      throw std::runtime_error("config errors: " + msg.str());
    }
    config = parsed.config;
  }
  if (seed) config.seed = *seed;
  if (!eps_override.empty()) {
    config.epsilon = eps_override;
    for (std::size_t i = 0; i < config.epsilon.size(); ++i) {
      if (!(config.epsilon[i] > 0.0 && config.epsilon[i] <= 1.0))
        throw std::runtime_error("--epsilon-override values must be in (0,1]");
      if (i > 0 && !(config.epsilon[i] < config.epsilon[i - 1]))
        throw std::runtime_error("--epsilon-override must strictly decrease");
    }
  }
  return config;
}

void write_provenance(std::ostream& os, const RunConfig& config) {
  std::stringstream ss(print_config(config));
  std::string line;
  while (std::getline(ss, line)) os << "# " << line << "\n";
}

std::ofstream open_artifact(const fs::path& dir, const std::string& name,
                            const RunConfig& config) {
  fs::create_directories(dir);
  std::ofstream os(dir / name);
  if (!os)
    throw std::runtime_error("cannot write artifact: " + (dir / name).string());
  write_provenance(os, config);
  return os;
}

std::string radius_or_nan(const SpectralField& f) {
  try {
    return fmt(radius_estimate(f));
  } catch (const std::exception&) {
    return "nan";
  }
}

int cmd_run(const RunConfig& config, const fs::path& out) {
  const CaseSetup setup = setup_from_config(config);
  const double eps = config.epsilon.front();
  ModelParams pe = setup.params;
  pe.epsilon = eps;
  const ModelOps ops(setup.grid, pe);
  const double ell = pe.ell;
  const WeightSchedule& sched = pe.schedule;

  std::ofstream csv = open_artifact(out, "diagnostics.csv", config);
  csv << "t,phi_norm,a_norm,mass,radius\n";

  if (config.system == "nls") {
    const auto [phi0e, a0e] = well_prepared_data(setup.phi0, setup.a0,
                                                 setup.phi10, setup.a10, eps);
    const SpectralField u0 = ops.reconstruct(a0e, phi0e, eps);
    const FieldTrajectory traj = integrate_nls(
        ops, u0, setup.plan, [&](double t, const SpectralField& u) {
          const double w = sched.weight_at(t);
          csv << fmt(t) << ",," << fmt(analytic_norm(u, {ell, w})) << ","
              << fmt(l2_norm(u) * l2_norm(u)) << "," << radius_or_nan(u)
              << "\n";
        });
    write_snapshot(out / "u_final.wkbf", traj.samples.back());
    std::cout << "wrote " << (out / "diagnostics.csv").string() << " and "
              << (out / "u_final.wkbf").string() << "\n";
    return 0;
  }

  const GrenierObserver observer = [&](double t, const GrenierState& s) {
    const double w = sched.weight_at(t);
    csv << fmt(t) << "," << fmt(analytic_norm(s.phi, {ell + 1.0, w})) << ","
        << fmt(analytic_norm(s.a, {ell, w})) << ","
        << fmt(l2_norm(s.a) * l2_norm(s.a)) << "," << radius_or_nan(s.a)
        << "\n";
  };

  GrenierTrajectory traj;
  if (config.system == "grenier") {
    const auto [phi0e, a0e] = well_prepared_data(setup.phi0, setup.a0,
                                                 setup.phi10, setup.a10, eps);
    traj = integrate_grenier(ops, {phi0e, a0e}, setup.plan, observer);
  } else if (config.system == "limit") {
    traj = integrate_limit(ops, {setup.phi0, setup.a0}, setup.plan, observer);
  } else {  // linearized
    const GrenierTrajectory limit =
        integrate_limit(ops, {setup.phi0, setup.a0}, setup.plan);
    traj = integrate_linearized(ops, {setup.phi10, setup.a10}, limit,
                                setup.plan, {}, observer);
  }
  write_snapshot(out / "phi_final.wkbf", traj.samples.back().phi);
  write_snapshot(out / "a_final.wkbf", traj.samples.back().a);
  std::cout << "wrote " << (out / "diagnostics.csv").string()
            << ", phi_final.wkbf, a_final.wkbf\n";
  return 0;
}

int cmd_sweep(const RunConfig& config, const fs::path& out, int jobs) {
  const CaseSetup setup = setup_from_config(config);
  const SweepResult sweep = run_sweep(setup, config.epsilon, jobs);

  std::ofstream csv = open_artifact(out, "sweep.csv", config);
  csv << "epsilon,err_phi_1st,err_a_1st,err_phi_2nd,err_a_2nd,err_u_L2,"
         "err_u_Linf,err_dens_L1,err_dens_Linf,err_mom_L1,err_mom_Linf,"
         "consistency_gap\n";
  for (const auto& r : sweep.rows)
    csv << fmt(r.epsilon) << "," << fmt(r.err_phi_1st) << ","
        << fmt(r.err_a_1st) << "," << fmt(r.err_phi_2nd) << ","
        << fmt(r.err_a_2nd) << "," << fmt(r.err_u_l2) << ","
        << fmt(r.err_u_linf) << "," << fmt(r.err_dens_l1) << ","
        << fmt(r.err_dens_linf) << "," << fmt(r.err_mom_l1) << ","
        << fmt(r.err_mom_linf) << "," << fmt(r.consistency_gap) << "\n";

  std::ofstream rates = open_artifact(out, "rates.txt", config);
  auto block = [&](const char* name, const RateFit& fit) {
    rates << name << ".slope = " << fmt(fit.slope) << "\n"
          << name << ".intercept = " << fmt(fit.intercept) << "\n"
          << name << ".r_squared = " << fmt(fit.r_squared) << "\n";
  };
  block("first_order", sweep.first_order);
  block("second_order", sweep.second_order);
  block("wavefn_l2", sweep.wavefn_l2);
  block("wavefn_linf", sweep.wavefn_linf);
  block("density_l1", sweep.dens_l1);
  block("density_linf", sweep.dens_linf);
  block("momentum_l1", sweep.mom_l1);
  block("momentum_linf", sweep.mom_linf);

  std::cout << "first-order slope " << fmt(sweep.first_order.slope)
            << " (r^2 " << fmt(sweep.first_order.r_squared)
            << "), second-order slope " << fmt(sweep.second_order.slope)
            << "\n";
  std::cout << "wrote " << (out / "sweep.csv").string() << " and "
            << (out / "rates.txt").string() << "\n";
  return 0;
}

int cmd_picard(const RunConfig& config, const fs::path& out) {
  const CaseSetup setup = setup_from_config(config);
  ModelParams pe = setup.params;
  pe.epsilon = config.epsilon.front();
  const ModelOps ops(setup.grid, pe);
  const PicardResult res =
      picard_run(ops, {setup.phi0, setup.a0}, setup.plan,
                 {config.picard_jmax, config.picard_tol});

  std::ofstream csv = open_artifact(out, "picard.csv", config);
  csv << "iterate,delta_phi,delta_a,ratio\n";
  for (std::size_t j = 0; j < res.report.delta_phi.size(); ++j)
    csv << (j + 1) << "," << fmt(res.report.delta_phi[j]) << ","
        << fmt(res.report.delta_a[j]) << ","
        << (j >= 1 ? fmt(res.report.ratios[j - 1]) : std::string("")) << "\n";

  std::ofstream summary = open_artifact(out, "picard_summary.txt", config);
  summary << "iterates = " << res.report.iterate_count << "\n"
          << "converged = " << (res.report.converged ? "true" : "false") << "\n"
          << "diverged = " << (res.report.diverged ? "true" : "false") << "\n"
          << "final_gap_to_direct = " << fmt(res.report.final_gap_to_direct)
          << "\n";
  std::cout << "picard: " << res.report.iterate_count << " iterates, "
            << (res.report.converged ? "converged" : "not converged")
            << ", gap " << fmt(res.report.final_gap_to_direct) << "\n";
  return res.report.diverged ? 1 : 0;
}

int cmd_check_spaces(const RunConfig& config) {
  const PropertyReport rep =
      check_spaces(config.seed, config.check_trials, config.bilinear_truncation);
  std::cout << "tame trials " << rep.tame_trials << ", violations "
            << rep.tame_violations << ", max ratio "
            << fmt(rep.tame_max_ratio) << "\n"
            << "monotone trials " << rep.monotone_trials << ", violations "
            << rep.monotone_violations << "\n"
            << "sobolev trials " << rep.sobolev_trials << ", violations "
            << rep.sobolev_violations << "\n"
            << "inner-product trials " << rep.inner_trials << ", violations "
            << rep.inner_violations << "\n"
            << "norm-evolution finite-difference order "
            << fmt(rep.evol_norm_order) << "\n"
            << "dealias vs convolution max err " << fmt(rep.dealias_max_err)
            << "\n"
            << "bracket triangle checked " << rep.bracket_checked
            << ", violations " << rep.bracket_violations << "\n"
            << "young checked " << rep.young_checked << ", violations "
            << rep.young_violations << "\n";
  std::cout << (rep.ok() ? "all property trials passed\n"
                         : "property violations found\n");
  return rep.ok() ? 0 : 1;
}

int cmd_observables(const RunConfig& config, const fs::path& out,
                    const std::string& snapshot_path) {
  if (snapshot_path.empty())
    throw std::runtime_error("observables: --in snapshot required");
  const SpectralField u = read_snapshot(snapshot_path);
  const double eps = config.epsilon.front();
  const QuadraticObservables obs = observables(u, eps);
  fs::create_directories(out);
  write_snapshot(out / "density.wkbf", obs.density);
  std::cout << "density: L1 " << fmt(l1_norm(obs.density)) << ", Linf "
            << fmt(linf_norm(obs.density)) << "\n";
  for (std::size_t j = 0; j < obs.momentum.size(); ++j) {
    const std::string name = "momentum_" + std::to_string(j + 1) + ".wkbf";
    write_snapshot(out / name, obs.momentum[j]);
    std::cout << "momentum_" << (j + 1) << ": L1 "
              << fmt(l1_norm(obs.momentum[j])) << ", Linf "
              << fmt(linf_norm(obs.momentum[j])) << "\n";
  }
  return 0;
}

int cmd_info(const RunConfig& config) {
  const CaseSetup setup = setup_from_config(config);
  std::cout << print_config(config);
  std::cout << "resolved.M = " << fmt(setup.params.schedule.M) << "\n"
            << "resolved.T = " << fmt(setup.plan.T) << "\n"
            << "resolved.steps = " << setup.plan.steps() << "\n"
            << "resolved.horizon_cap = "
            << fmt(setup.params.schedule.horizon()) << "\n"
            << "resolved.select_index = " << fmt(setup.select_index) << "\n"
            << "resolved.bilinear_C = " << fmt(setup.bilinear_C) << "\n"
            << "resolved.padded_n = "
            << ModelOps(setup.grid, setup.params).padded().padded().n()[0]
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudo-spectral phase-amplitude solver and rate harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::string snapshot_in;
  std::optional<std::uint64_t> seed;
  std::vector<double> eps_override;
  int jobs = 1;

  app.add_option("--config", config_path, "configuration file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "override the configured seed");
  app.add_option("--jobs", jobs, "concurrent sweep jobs");
  app.add_option("--epsilon-override", eps_override,
                 "replace the configured epsilon list")
      ->delimiter(',');

  auto* run = app.add_subcommand("run", "single integration with diagnostics");
  auto* sweep = app.add_subcommand("sweep", "epsilon sweep with rate fits");
  auto* picard = app.add_subcommand("picard", "fixed-point certification");
  auto* check = app.add_subcommand("check-spaces", "norm property suite");
  auto* obs = app.add_subcommand("observables",
                                 "density/momentum from a snapshot");
  obs->add_option("--in", snapshot_in, "wave-function snapshot");
  auto* info = app.add_subcommand("info", "echo resolved parameters");

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig config = load_config(config_path, seed, eps_override);
    const fs::path out(out_dir);
    if (run->parsed()) return cmd_run(config, out);
    if (sweep->parsed()) return cmd_sweep(config, out, jobs);
    if (picard->parsed()) return cmd_picard(config, out);
    if (check->parsed()) return cmd_check_spaces(config);
    if (obs->parsed()) return cmd_observables(config, out, snapshot_in);
    if (info->parsed()) return cmd_info(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
