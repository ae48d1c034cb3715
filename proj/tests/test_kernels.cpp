#include <doctest.h>

#include <cmath>
#include <complex>

#include "wkb/kernels.hpp"
#include "wkb/norms.hpp"
#include "wkb/rng.hpp"

using namespace wkb;
using cd = std::complex<double>;

TEST_CASE("kernel symbols") {
  SUBCASE("identity is one everywhere") {
    const KernelSpec k = KernelSpec::identity();
    const double xs[2] = {0.37, -4.2};
    CHECK(kernel_symbol(k, xs) == 1.0);
    const double origin[2] = {0.0, 0.0};
    CHECK(kernel_symbol(k, origin) == 1.0);
  }
  SUBCASE("zero kernel") {
    const KernelSpec k = KernelSpec::zero();
    const double xs[2] = {1.0, 2.0};
    CHECK(kernel_symbol(k, xs) == 0.0);
  }
  SUBCASE("anisotropic ratio spot values") {
    const KernelSpec k = KernelSpec::davey_stewartson(1, 2);
    const double a[2] = {1.0, 0.0};
    const double b[2] = {0.0, 1.0};
    const double c[2] = {1.0, 1.0};
    const double o[2] = {0.0, 0.0};
    CHECK(kernel_symbol(k, a) == 1.0);
    CHECK(kernel_symbol(k, b) == 0.0);
    CHECK(kernel_symbol(k, c) == 0.5);
    CHECK(kernel_symbol(k, o) == 0.0);  // both components vanish
  }
  SUBCASE("weights scale the symbol") {
    const KernelSpec k = KernelSpec::davey_stewartson(1, 2, -2.0);
    const double c[2] = {1.0, 1.0};
    CHECK(kernel_symbol(k, c) == -1.0);
  }
  SUBCASE("tabulated lookup and bounds") {
    const Grid g = Grid::torus({8, 8});
    SpectralField table(g);
    for (Eigen::Index i = 0; i < g.size(); ++i)
      table.coeff[i] = 1.0 / (1.0 + g.bracket()[i]);  // real, even
    const KernelSpec k = KernelSpec::tabulated(table);
    const double at[2] = {1.0, 2.0};
    const double br = std::sqrt(1.0 + 1.0 + 4.0);
    CHECK(kernel_symbol(k, at) == doctest::Approx(1.0 / (1.0 + br)));
    const double outside[2] = {7.0, 0.0};  // beyond the 8-point lattice
    CHECK_THROWS_AS(kernel_symbol(k, outside), std::out_of_range);
  }
  SUBCASE("odd tabulated symbols are rejected") {
    const Grid g = Grid::torus({8});
    SpectralField table(g);
    for (Eigen::Index i = 0; i < g.size(); ++i)
      table.coeff[i] = static_cast<double>(g.mode(0, static_cast<int>(i)));
    CHECK_THROWS_AS(KernelSpec::tabulated(table), std::invalid_argument);
  }
}

TEST_CASE("kernel application") {
  const Grid g = Grid::torus({16, 16});
  SUBCASE("identity acts as the local case") {
    const SpectralField rho = random_band_limited(g, 5, 101, /*real=*/true);
    const SpectralField out = apply_kernel(KernelSpec::identity(), rho);
    CHECK((out.coeff - rho.coeff).abs().maxCoeff() == 0.0);
  }
  SUBCASE("axis-aligned waves") {
    // cos(y1) passes through, cos(y2) is annihilated
    const KernelSpec k = KernelSpec::davey_stewartson(1, 2);
    const SpectralField cos1 =
        single_mode(g, {1, 0}, 0.5) + single_mode(g, {-1, 0}, 0.5);
    const SpectralField cos2 =
        single_mode(g, {0, 1}, 0.5) + single_mode(g, {0, -1}, 0.5);
    const SpectralField out1 = apply_kernel(k, cos1);
    CHECK((out1.coeff - cos1.coeff).abs().maxCoeff() < 1e-14);
    CHECK(apply_kernel(k, cos2).coeff.abs().maxCoeff() < 1e-14);
  }
  SUBCASE("matches the elliptic-solve oracle") {
    // K * rho = d1 phi where (d1^2 + d2^2) phi = d1 rho, solved spectrally
    const SpectralField rho = random_band_limited(g, 6, 103, /*real=*/true);
    const SpectralField out =
        apply_kernel(KernelSpec::davey_stewartson(1, 2), rho);
    SpectralField oracle(g);
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      const double x1 = g.xi(0)[i], x2 = g.xi(1)[i];
      const double denom = x1 * x1 + x2 * x2;
      const cd rhs = cd(0.0, x1) * rho.coeff[i];  // d1 rho
      const cd phi = denom == 0.0 ? cd(0.0) : -rhs / denom;
      oracle.coeff[i] = cd(0.0, x1) * phi;  // d1 phi
    }
    CHECK((out.coeff - oracle.coeff).abs().maxCoeff() < 1e-12);
  }
  SUBCASE("realness preserved and required") {
    const SpectralField rho = random_band_limited(g, 5, 107, /*real=*/true);
    const SpectralField out =
        apply_kernel(KernelSpec::davey_stewartson(1, 2), rho);
    CHECK(is_real_valued(out));
    const SpectralField complex_in = random_band_limited(g, 5, 109);
    CHECK_THROWS_AS(apply_kernel(KernelSpec::identity(), complex_in),
                    std::invalid_argument);
  }
  SUBCASE("commutes with translation") {
    // shifting the input shifts the output: phases e^{-i <xi, y0>}
    const KernelSpec k = KernelSpec::davey_stewartson(1, 2);
    const SpectralField rho = random_band_limited(g, 5, 113, /*real=*/true);
    SpectralField shifted(g);
    const double y0[2] = {0.7, 1.9};
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      const double phase = g.xi(0)[i] * y0[0] + g.xi(1)[i] * y0[1];
      shifted.coeff[i] = rho.coeff[i] * std::exp(cd(0.0, -phase));
    }
    const SpectralField a = apply_kernel(k, shifted);
    const SpectralField b = apply_kernel(k, rho);
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      const double phase = g.xi(0)[i] * y0[0] + g.xi(1)[i] * y0[1];
      CHECK(std::abs(a.coeff[i] - b.coeff[i] * std::exp(cd(0.0, -phase))) <
            1e-13);
    }
  }
  SUBCASE("norm bound by the symbol supremum") {
    const SpectralField rho = random_band_limited(g, 5, 127, /*real=*/true);
    for (double w : {0.0, 0.3}) {
      const NormSpec spec{2.0, w};
      CHECK(analytic_norm(
                apply_kernel(KernelSpec::davey_stewartson(1, 2), rho), spec) <=
            analytic_norm(rho, spec) * (1 + 1e-12));
      CHECK(analytic_norm(apply_kernel(KernelSpec::identity(3.0), rho),
                          spec) <=
            3.0 * analytic_norm(rho, spec) * (1 + 1e-12));
    }
  }
}
