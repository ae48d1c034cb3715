#include "wkb/harness.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "wkb/log.hpp"

namespace wkb {
namespace {

const std::complex<double> kI(0.0, 1.0);

double sq(double x) { return x * x; }

}  // namespace

RateFit fit_rate(const std::vector<std::pair<double, double>>& points) {
  std::vector<std::pair<double, double>> used;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& [eps, err] = points[i];
    if (!(eps > 0.0))
      throw std::invalid_argument("fit_rate: epsilon must be positive");
    if (i > 0 && !(eps < points[i - 1].first))
      throw std::invalid_argument("fit_rate: epsilons must strictly decrease");
    if (!(err > 0.0) || !std::isfinite(err)) {
      log_info("fit_rate: dropping point at eps=" + std::to_string(eps) +
               " with non-positive error (machine-precision floor)");
      continue;
    }
    used.push_back({eps, err});
  }
  if (used.size() < 3)
    throw std::invalid_argument("fit_rate: need at least 3 usable points");

  const auto n = static_cast<double>(used.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [eps, err] : used) {
    const double x = std::log(eps), y = std::log(err);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  RateFit fit;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double mean_y = sy / n;
  for (const auto& [eps, err] : used) {
    const double y = std::log(err);
    ss_res += sq(y - (fit.intercept + fit.slope * std::log(eps)));
    ss_tot += sq(y - mean_y);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.points = std::move(used);
  return fit;
}

double select_M(double ell, int d, double norm_phi0, double norm_a0,
                double norm_V, int sigma_max, int gamma, double C,
                double safety) {
  if (!(C > 0.0)) throw std::invalid_argument("select_M: C must be positive");
  if (!(safety >= 1.0))
    throw std::invalid_argument("select_M: safety must be >= 1");
  if (ell <= 0.0 || d < 1)
    throw std::invalid_argument("select_M: bad index arguments");
  if (sigma_max < 0 || gamma < 1)
    throw std::invalid_argument("select_M: bad exponents");

  const double p2 = sq(norm_phi0);
  const double a2 = sq(norm_a0);
  const double v2 = sq(norm_V);
  const auto admissible = [&](double M) {
    const double lhs = 4.0 * p2 +
                       (8.0 * sq(C) / sq(M)) * std::pow(2.0 * a2, 2.0 * sigma_max) +
                       (16.0 * sq(C) / M) * v2;
    const bool first = lhs <= sq(M) / (16.0 * sq(C));
    const bool second = std::pow(2.0 * a2, gamma) <= M / (4.0 * C);
    return first && second;
  };

  double hi = 1.0;
  int guard = 0;
  while (!admissible(hi)) {
    hi *= 2.0;
    if (++guard > 200)
      throw std::runtime_error("select_M: no admissible M found");
  }
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (admissible(mid) ? hi : lo) = mid;
  }
  return hi * safety;
}

std::pair<SpectralField, SpectralField> well_prepared_data(
    const SpectralField& phi0, const SpectralField& a0,
    const SpectralField& phi10, const SpectralField& a10, double eps) {
  require_same_grid(phi0.grid, a0.grid, "well_prepared_data");
  require_same_grid(phi0.grid, phi10.grid, "well_prepared_data");
  require_same_grid(phi0.grid, a10.grid, "well_prepared_data");
  return {phi0 + eps * phi10, a0 + eps * a10};
}

QuadraticObservables observables(const SpectralField& u, double eps) {
  const Grid& g = u.grid;
  PaddedTransform pt(g, 2);
  const Eigen::ArrayXcd u_p = pt.to_padded_physical(u.coeff);

  QuadraticObservables out;
  out.density = SpectralField(
      g, pt.from_padded_physical(u_p.abs2().cast<std::complex<double>>()));
  if (eps > 0.0) {
    for (int j = 0; j < g.dim(); ++j) {
      const Eigen::ArrayXcd du_p =
          pt.to_padded_physical((kI * g.xi(j) * u.coeff).eval());
      const Eigen::ArrayXd mom = eps * (u_p.conjugate() * du_p).imag();
      out.momentum.emplace_back(
          g, pt.from_padded_physical(mom.cast<std::complex<double>>()));
    }
  }
  return out;
}

double radius_estimate(const SpectralField& f) {
  const Eigen::ArrayXd& bracket = f.grid.bracket();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long n = 0;
  for (Eigen::Index k = 0; k < f.coeff.size(); ++k) {
    const double mag = std::abs(f.coeff[k]);
    if (mag <= 1e-13) continue;
    const double x = bracket[k];
    const double y = -std::log(mag);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 4)
    throw std::invalid_argument("radius_estimate: fewer than 4 usable modes");
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0)
    throw std::invalid_argument("radius_estimate: degenerate mode set");
  return (n * sxy - sx * sy) / denom;
}

SpectralField analytic_profile(const Grid& grid, double w_decay, double p,
                               const std::vector<double>& shift) {
  if (static_cast<int>(shift.size()) != grid.dim())
    throw std::invalid_argument("analytic_profile: shift dimension mismatch");
  SpectralField f(grid);
  for (Eigen::Index k = 0; k < grid.size(); ++k) {
    if (grid.nyquist_mask()[k]) continue;
    double phase = 0.0;
    for (int a = 0; a < grid.dim(); ++a) phase += grid.xi(a)[k] * shift[a];
    const double b = grid.bracket()[k];
    f.coeff[k] = std::exp(-w_decay * b) * std::pow(b, -p) *
                 std::exp(-kI * phase);
  }
  return f;
}

SpectralField scale_to_norm(SpectralField f, double ell, double w,
                            double target) {
  const double current = analytic_norm(f, {ell, w});
  if (!(current > 0.0))
    throw std::invalid_argument("scale_to_norm: zero field");
  f.coeff *= target / current;
  return f;
}

CaseBackground compute_background(const CaseSetup& setup) {
  ModelParams p = setup.params;
  p.epsilon = 0.0;
  ModelOps ops(setup.grid, p);
  CaseBackground bg;
  bg.limit = integrate_limit(ops, {setup.phi0, setup.a0}, setup.plan);
  bg.linearized =
      integrate_linearized(ops, {setup.phi10, setup.a10}, bg.limit, setup.plan);
  return bg;
}

CaseErrors run_case(const CaseSetup& setup, double eps,
                    const CaseBackground* background) {
  if (!(eps > 0.0)) throw std::invalid_argument("run_case: eps must be > 0");
  CaseBackground local;
  if (!background) {
    local = compute_background(setup);
    background = &local;
  }

  const Grid& grid = setup.grid;
  ModelParams pe = setup.params;
  pe.epsilon = eps;
  ModelOps ops(grid, pe);
  const PaddedTransform& pt = ops.padded();
  const WeightSchedule& sched = pe.schedule;
  const double ell = pe.ell;
  const double w0 = sched.w0;

  // index bookkeeping: the data norms the statements rely on, all finite
  log_debug("data norms: phi0 " +
            std::to_string(analytic_norm(setup.phi0, {ell + 1, w0})) + "/" +
            std::to_string(analytic_norm(setup.phi0, {ell + 3, w0})) +
            ", a0 " + std::to_string(analytic_norm(setup.a0, {ell, w0})) +
            "/" + std::to_string(analytic_norm(setup.a0, {ell + 2, w0})) +
            ", phi10 " +
            std::to_string(analytic_norm(setup.phi10, {ell + 2, w0})) +
            ", a10 " + std::to_string(analytic_norm(setup.a10, {ell + 1, w0})));

  const auto [phi0e, a0e] =
      well_prepared_data(setup.phi0, setup.a0, setup.phi10, setup.a10, eps);
  const GrenierTrajectory grenier =
      integrate_grenier(ops, {phi0e, a0e}, setup.plan);
  const SpectralField u0 = ops.reconstruct(a0e, phi0e, eps);
  const FieldTrajectory nls = integrate_nls(ops, u0, setup.plan);

  const auto& limit = background->limit;
  const auto& lin = background->linearized;
  const auto count = static_cast<Eigen::Index>(grenier.samples.size());
  if (static_cast<Eigen::Index>(limit.samples.size()) != count ||
      static_cast<Eigen::Index>(lin.samples.size()) != count ||
      static_cast<Eigen::Index>(nls.samples.size()) != count)
    throw std::invalid_argument("run_case: background grid mismatch");

  const double half = grenier.sample_dt;
  TripleNormAccumulator e1_phi(ell + 1, sched, half), e1_a(ell, sched, half);
  TripleNormAccumulator e2_phi(ell + 1, sched, half), e2_a(ell, sched, half);
  TripleNormAccumulator n_phi(ell + 1, sched, half), n_a(ell, sched, half);

  const double bound_a = 2.0 * sq(analytic_norm(a0e, {ell, w0}));
  double pow_a = 0.0;
  for (const auto& term : pe.nonlocal)
    pow_a = std::max(pow_a, std::pow(analytic_norm(a0e, {ell, w0}),
                                     4.0 * term.sigma));
  const double norm_v =
      pe.potential.l2_time_norm(ell, w0, std::max(setup.plan.T, 1.0));
  const double bound_phi =
      4.0 * sq(analytic_norm(phi0e, {ell + 1, w0})) + pow_a + sq(norm_v);

  CaseErrors out;
  out.epsilon = eps;
  out.radius_slack_min = 1e300;
  const double padded_cell = pt.padded().cell_volume();

  for (Eigen::Index k = 0; k < count; ++k) {
    const double t = k * half;
    const GrenierState& ge = grenier.samples[k];
    const GrenierState& gl = limit.samples[k];
    const GrenierState& gc = lin.samples[k];

    e1_phi.add(ge.phi - gl.phi);
    e1_a.add(ge.a - gl.a);
    e2_phi.add(ge.phi - gl.phi - eps * gc.phi);
    e2_a.add(ge.a - gl.a - eps * gc.a);

    // a-priori bound margins on every prefix
    n_phi.add(ge.phi);
    n_a.add(ge.a);
    out.apriori_a_margin = std::max(
        out.apriori_a_margin, sq(n_a.value()) / std::max(bound_a, 1e-300));
    out.apriori_phi_margin = std::max(
        out.apriori_phi_margin, sq(n_phi.value()) / std::max(bound_phi, 1e-300));

    // wave-function error on the padded collocation grid
    const Eigen::ArrayXcd u_p = pt.to_padded_physical(nls.samples[k].coeff);
    const Eigen::ArrayXcd w_p =
        ops.reconstruct_padded(gl.a, gl.phi, eps, &gc.phi);
    const Eigen::ArrayXcd diff = u_p - w_p;
    out.err_u_l2 =
        std::max(out.err_u_l2, std::sqrt(diff.abs2().sum() * padded_cell));
    out.err_u_linf = std::max(out.err_u_linf, diff.abs().maxCoeff());

    // quadratic observables against their zero-dispersion limits
    const Eigen::ArrayXd dens_e = u_p.abs2();
    const Eigen::ArrayXcd a_lim_p = pt.to_padded_physical(gl.a.coeff);
    const SpectralField dens_err(
        grid, pt.from_padded_physical(
                  (dens_e - a_lim_p.abs2()).cast<std::complex<double>>()));
    out.err_dens_l1 = std::max(out.err_dens_l1, l1_norm(dens_err));
    out.err_dens_linf = std::max(out.err_dens_linf, linf_norm(dens_err));
    const auto mom_lim = ops.momentum_limit(gl.a, gl.phi);
    for (int j = 0; j < grid.dim(); ++j) {
      const Eigen::ArrayXcd du_p =
          pt.to_padded_physical((kI * grid.xi(j) * nls.samples[k].coeff).eval());
      const Eigen::ArrayXd mom_e = eps * (u_p.conjugate() * du_p).imag();
      const SpectralField mom_err(
          grid, pt.from_padded_physical(mom_e.cast<std::complex<double>>()) -
                    mom_lim[j].coeff);
      out.err_mom_l1 = std::max(out.err_mom_l1, l1_norm(mom_err));
      out.err_mom_linf = std::max(out.err_mom_linf, linf_norm(mom_err));
    }

    // analyticity persistence
    const double w_t = sched.weight_at(t);
    out.radius_slack_min =
        std::min(out.radius_slack_min,
                 radius_estimate(ge.a) - (w_t - 0.1 * w0));
  }

  out.err_phi_1st = e1_phi.value();
  out.err_a_1st = e1_a.value();
  out.err_phi_2nd = e2_phi.value();
  out.err_a_2nd = e2_a.value();

  // the two algebraic routes to the wave function at the final time
  const SpectralField recon_T =
      ops.reconstruct(grenier.samples[count - 1].a,
                      grenier.samples[count - 1].phi, eps);
  out.consistency_gap =
      l2_norm(nls.samples[count - 1] - recon_T) / l2_norm(u0);
  return out;
}

SweepResult run_sweep(const CaseSetup& setup,
                      const std::vector<double>& epsilons, int jobs) {
  if (epsilons.size() < 3)
    throw std::invalid_argument("run_sweep: need at least 3 epsilons");
  for (std::size_t i = 1; i < epsilons.size(); ++i)
    if (!(epsilons[i] < epsilons[i - 1]))
      throw std::invalid_argument("run_sweep: epsilons must strictly decrease");

  const CaseBackground bg = compute_background(setup);
  SweepResult result;
  result.rows.resize(epsilons.size());

  const int workers =
      std::max(1, std::min<int>(jobs, static_cast<int>(epsilons.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < epsilons.size(); ++i)
      result.rows[i] = run_case(setup, epsilons[i], &bg);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next.fetch_add(1); i < epsilons.size();
               i = next.fetch_add(1))
            result.rows[i] = run_case(setup, epsilons[i], &bg);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  auto fit_of = [&](auto value) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : result.rows)
      pts.push_back({row.epsilon, value(row)});
    return fit_rate(pts);
  };
  result.first_order =
      fit_of([](const CaseErrors& r) { return r.err_phi_1st + r.err_a_1st; });
  result.second_order =
      fit_of([](const CaseErrors& r) { return r.err_phi_2nd + r.err_a_2nd; });
  result.wavefn_l2 = fit_of([](const CaseErrors& r) { return r.err_u_l2; });
  result.wavefn_linf =
      fit_of([](const CaseErrors& r) { return r.err_u_linf; });
  result.dens_l1 = fit_of([](const CaseErrors& r) { return r.err_dens_l1; });
  result.dens_linf =
      fit_of([](const CaseErrors& r) { return r.err_dens_linf; });
  result.mom_l1 = fit_of([](const CaseErrors& r) { return r.err_mom_l1; });
  result.mom_linf = fit_of([](const CaseErrors& r) { return r.err_mom_linf; });
  return result;
}

CaseSetup make_scenario(const ScenarioOptions& opt) {
  CaseSetup s;
  s.grid = Grid::torus({opt.n, opt.n});
  s.params = make_preset(opt.preset, 2, opt.preset_options);
  s.params.ell = opt.ell;
  s.params.epsilon = 0.0;
  s.safety = opt.safety;

  const double w0 = opt.w0;
  s.phi0 = analytic_profile(s.grid, w0, 4.0, {0.0, 0.0});
  SpectralField a_re = analytic_profile(s.grid, w0, 4.0, {1.1, 2.3});
  SpectralField a_im = analytic_profile(s.grid, w0, 4.0, {2.9, 0.7});
  s.a0 = a_re + std::complex<double>(0.0, 0.35) * a_im;
  s.phi10 = analytic_profile(s.grid, w0, 4.0, {0.6, 1.7});
  SpectralField a1_re = analytic_profile(s.grid, w0, 4.0, {2.2, 1.3});
  SpectralField a1_im = analytic_profile(s.grid, w0, 4.0, {0.4, 2.6});
  s.a10 = a1_re + std::complex<double>(0.0, 0.2) * a1_im;

  // Normalize where the M-selection looks: the corrector statement reads the
  // data two indices up, the fixed-point certification at the base index.
  const double idx = opt.base_index ? opt.ell : opt.ell + 2.0;
  s.select_index = idx;
  s.phi0 = scale_to_norm(std::move(s.phi0), idx + 1.0, w0, opt.data_norm);
  s.a0 = scale_to_norm(std::move(s.a0), idx, w0, opt.data_norm);
  s.phi10 = scale_to_norm(std::move(s.phi10), idx, w0, opt.data_norm);
  s.a10 = scale_to_norm(std::move(s.a10), idx - 1.0, w0, opt.data_norm);

  s.bilinear_C =
      bilinear_constant(idx, idx, 2, opt.bilinear_truncation) * opt.safety;
  double M;
  if (opt.M_override) {
    M = *opt.M_override;
  } else {
    const double norm_phi0 = analytic_norm(s.phi0, {idx + 1.0, w0});
    const double norm_a0 = analytic_norm(s.a0, {idx, w0});
    int sigma_max = 0;
    for (const auto& term : s.params.nonlocal)
      sigma_max = std::max(sigma_max, term.sigma);
    M = select_M(idx, 2, norm_phi0, norm_a0, /*norm_V=*/0.0, sigma_max,
                 s.params.gamma, s.bilinear_C, opt.safety);
  }
  s.params.schedule = {w0, M};

  const double t_raw = opt.t_fraction * std::min(w0 / M, opt.t_max);
  const auto steps = static_cast<long>(std::floor(t_raw / opt.dt + 1e-12));
  if (steps < 2)
    throw std::runtime_error(
        "scenario: selected M forces the horizon below two steps (T_raw = " +
        std::to_string(t_raw) + ")");
  s.plan = StepPlan{opt.dt, steps * opt.dt, true};
  log_info("scenario: M = " + std::to_string(M) + ", T = " +
           std::to_string(s.plan.T) + " (" + std::to_string(steps) + " steps)");
  return s;
}

}  // namespace wkb
