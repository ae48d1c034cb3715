#include "wkb/properties.hpp"

#include <cmath>
#include <vector>

#include "wkb/rng.hpp"

namespace wkb {
namespace {

// Direct double-sum convolution of two lattice spectra, restricted to the
// lattice (independent of the padded-FFT route).
SpectralField convolution_reference(const SpectralField& f,
                                    const SpectralField& g) {
  const Grid& grid = f.grid;
  const int d = grid.dim();
  // coefficients of the pointwise product under the box normalization:
  // h_hat(m) = (2*pi)^{d/2} / prod L * sum_k f_hat(k) g_hat(m-k)
  const double factor = std::pow(kTwoPi, 0.5 * d) / grid.box_volume();
  SpectralField out(grid);
  std::vector<int> cm(d), ck(d), cr(d);
  for (Eigen::Index m = 0; m < grid.size(); ++m) {
    if (grid.nyquist_mask()[m]) continue;  // pinned to zero by convention
    grid.unflatten(m, cm.data());
    std::complex<double> acc = 0.0;
    for (Eigen::Index k = 0; k < grid.size(); ++k) {
      grid.unflatten(k, ck.data());
      bool inside = true;
      for (int a = 0; a < d; ++a) {
        cr[a] = cm[a] - ck[a] + grid.n()[a] / 2;  // index of mode m - k
        if (cr[a] < 0 || cr[a] >= grid.n()[a]) {
          inside = false;
          break;
        }
      }
      if (inside) acc += f.coeff[k] * g.coeff[grid.flatten(cr.data())];
    }
    out.coeff[m] = acc * factor;
  }
  return out;
}

}  // namespace

PropertyReport check_spaces(std::uint64_t seed, long tame_trials,
                            long bilinear_truncation) {
  PropertyReport rep;

  // --- bilinear product estimate over random band-limited pairs
  struct Combo {
    int d;
    double ell, s;
  };
  const Combo combos[] = {{1, 2.0, 2.0}, {1, 3.0, 2.0},
                          {2, 2.0, 2.0}, {2, 3.0, 2.0}};
  const long per_combo = std::max(1L, tame_trials / 4);
  std::uint64_t stream = seed;
  for (const auto& combo : combos) {
    const Grid grid = combo.d == 1 ? Grid::torus({32})
                                   : Grid::torus({16, 16});
    const int band = combo.d == 1 ? 8 : 4;
    const double C =
        bilinear_constant(combo.ell, combo.s, combo.d, bilinear_truncation);
    for (long trial = 0; trial < per_combo; ++trial) {
      const SpectralField f = random_band_limited(grid, band, ++stream);
      const SpectralField g = random_band_limited(grid, band, ++stream);
      CounterRng wrng{stream, 977};
      const double w = 0.5 * wrng.next_double();
      const SpectralField fg = dealiased_product(f, g);
      const double lhs = analytic_norm(fg, {combo.ell, w});
      const double rhs =
          C * (analytic_norm(f, {combo.ell, w}) * analytic_norm(g, {combo.s, w}) +
               analytic_norm(f, {combo.s, w}) * analytic_norm(g, {combo.ell, w}));
      const double ratio = lhs / rhs;
      rep.tame_max_ratio = std::max(rep.tame_max_ratio, ratio);
      if (!(ratio <= 1.0)) ++rep.tame_violations;
      ++rep.tame_trials;
    }
  }

  // --- weight monotonicity and the Sobolev comparison
  {
    const Grid grid = Grid::torus({16, 16});
    for (long trial = 0; trial < 1000; ++trial) {
      const SpectralField f = random_band_limited(grid, 6, ++stream);
      CounterRng r{stream, 1303};
      const double w1 = 0.4 * r.next_double();
      const double w2 = w1 + 0.4 * r.next_double();
      const double ell = 3.0 * r.next_double();
      if (!(analytic_norm(f, {ell, w1}) <= analytic_norm(f, {ell, w2})))
        ++rep.monotone_violations;
      ++rep.monotone_trials;
      if (!(analytic_norm(f, {ell, 0.0}) <= analytic_norm(f, {ell, w2})))
        ++rep.sobolev_violations;
      ++rep.sobolev_trials;
    }
  }

  // --- inner product: hermitian symmetry, norm identity, Cauchy-Schwarz
  {
    const Grid grid = Grid::torus({16, 16});
    for (long trial = 0; trial < 1000; ++trial) {
      const SpectralField f = random_band_limited(grid, 6, ++stream);
      const SpectralField g = random_band_limited(grid, 6, ++stream);
      const NormSpec spec{2.0, 0.25};
      const auto fg = inner_product(f, g, spec);
      const auto gf = inner_product(g, f, spec);
      const double nf = analytic_norm(f, spec), ng = analytic_norm(g, spec);
      bool ok = std::abs(fg - std::conj(gf)) <= 1e-10 * nf * ng;
      ok = ok && std::abs(fg) <= nf * ng * (1.0 + 1e-12);
      ok = ok && std::abs(inner_product(f, f, spec).real() - nf * nf) <=
                     1e-10 * nf * nf;
      if (!ok) ++rep.inner_violations;
      ++rep.inner_trials;
    }
  }

  // --- norm-evolution identity: centered difference of ||psi||^2 under a
  // shrinking weight matches 2 Re (psi, dpsi) - 2M ||psi||^2_{ell+1/2}
  {
    const Grid grid = Grid::torus({32});
    const WeightSchedule sched{0.8, 1.0};
    const double ell = 2.0;
    const double t0 = 0.1;
    SpectralField base = random_band_limited(grid, 8, ++stream);
    Eigen::ArrayXcd lambda(grid.size());
    for (Eigen::Index k = 0; k < grid.size(); ++k)
      lambda[k] = std::complex<double>(-0.2, 0.4) * grid.bracket()[k];
    auto at = [&](double t) {
      return SpectralField(grid,
                           Eigen::ArrayXcd(base.coeff * (t * lambda).exp()));
    };
    auto identity_value = [&](double t) {
      const SpectralField psi = at(t);
      const SpectralField dpsi(grid, Eigen::ArrayXcd(lambda * psi.coeff));
      const double w = sched.weight_at(t);
      const double half = analytic_norm(psi, {ell + 0.5, w});
      return 2.0 * inner_product(psi, dpsi, {ell, w}).real() -
             2.0 * sched.M * half * half;
    };
    auto residual = [&](double dt) {
      auto sq_norm = [&](double t) {
        const double n = analytic_norm(at(t), {ell, sched.weight_at(t)});
        return n * n;
      };
      const double fd = (sq_norm(t0 + dt) - sq_norm(t0 - dt)) / (2.0 * dt);
      return std::abs(fd - identity_value(t0));
    };
    const double r1 = residual(2e-3);
    const double r2 = residual(1e-3);
    rep.evol_norm_order = std::log2(r1 / r2);
  }

  // --- dealiased products against the direct convolution sum
  {
    const Grid grid = Grid::torus({8, 8});
    for (long trial = 0; trial < 8; ++trial) {
      const SpectralField f = random_band_limited(grid, 3, ++stream);
      const SpectralField g = random_band_limited(grid, 3, ++stream);
      const SpectralField fast = dealiased_product(f, g);
      const SpectralField slow = convolution_reference(f, g);
      rep.dealias_max_err = std::max(
          rep.dealias_max_err, (fast.coeff - slow.coeff).abs().maxCoeff());
    }
  }

  // --- bracket triangle inequality, exhaustive small lattice
  for (int m1 = -8; m1 <= 8; ++m1)
    for (int m2 = -8; m2 <= 8; ++m2)
      for (int n1 = -8; n1 <= 8; ++n1)
        for (int n2 = -8; n2 <= 8; ++n2) {
          const auto br = [](double x, double y) {
            return std::sqrt(1.0 + x * x + y * y);
          };
          if (br(m1 + n1, m2 + n2) > br(m1, m2) + br(n1, n2) + 1e-12)
            ++rep.bracket_violations;
          ++rep.bracket_checked;
        }

  // --- discrete Young inequality on finitely supported sequences
  {
    CounterRng r{seed, 31337};
    for (long trial = 0; trial < 200; ++trial) {
      std::vector<double> u(17), v(17);
      for (auto& x : u) x = r.next_signed();
      for (auto& x : v) x = r.next_signed();
      std::vector<double> conv(33, 0.0);
      for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) conv[i + j] += u[i] * v[j];
      double l2u = 0, l1v = 0, l2c = 0;
      for (double x : u) l2u += x * x;
      for (double x : v) l1v += std::abs(x);
      for (double x : conv) l2c += x * x;
      if (std::sqrt(l2c) > std::sqrt(l2u) * l1v + 1e-12)
        ++rep.young_violations;
      ++rep.young_checked;
    }
  }

  return rep;
}

}  // namespace wkb
