#include "wkb/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace wkb {
namespace {

void check_axis(int axis, const char* name) {
  if (axis < 1) throw std::invalid_argument(std::string(name) + " axis < 1");
}

}  // namespace

KernelSpec KernelSpec::identity(double weight) {
  KernelSpec k;
  k.kind = Kind::Identity;
  k.weight = weight;
  return k;
}

KernelSpec KernelSpec::zero() {
  KernelSpec k;
  k.kind = Kind::Zero;
  k.weight = 0.0;
  return k;
}

KernelSpec KernelSpec::davey_stewartson(int axis_p, int axis_q, double weight) {
  check_axis(axis_p, "davey_stewartson p");
  check_axis(axis_q, "davey_stewartson q");
  if (axis_p == axis_q)
    throw std::invalid_argument("davey_stewartson: axes must differ");
  KernelSpec k;
  k.kind = Kind::DaveyStewartson;
  k.axis_p = axis_p;
  k.axis_q = axis_q;
  k.weight = weight;
  return k;
}

KernelSpec KernelSpec::tabulated(SpectralField symbol, double weight) {
  const Grid& g = symbol.grid;
  for (Eigen::Index k = 0; k < symbol.coeff.size(); ++k) {
    const auto v = symbol.coeff[k];
    if (!std::isfinite(v.real()) || std::abs(v.imag()) > 1e-12)
      throw std::invalid_argument(
          "tabulated kernel: symbol must be real and bounded");
  }
  // evenness: value at -m must match value at m (Nyquist rows exempt)
  const int d = g.dim();
  std::vector<int> c(d, 0), r(d);
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    bool paired = true;
    for (int a = 0; a < d; ++a) {
      if (c[a] == 0) {
        paired = false;
        break;
      }
      r[a] = g.n()[a] - c[a];
    }
    if (paired) {
      const double diff = std::abs(symbol.coeff[g.flatten(r.data())].real() -
                                   symbol.coeff[k].real());
      if (diff > 1e-12 * std::max(1.0, symbol.coeff.abs().maxCoeff()))
        throw std::invalid_argument("tabulated kernel: symbol must be even");
    }
    for (int a = d - 1; a >= 0; --a) {
      if (++c[a] < g.n()[a]) break;
      c[a] = 0;
    }
  }
  KernelSpec k;
  k.kind = Kind::Tabulated;
  k.weight = weight;
  k.table = std::make_shared<const SpectralField>(std::move(symbol));
  return k;
}

double kernel_symbol(const KernelSpec& spec, std::span<const double> xi) {
  switch (spec.kind) {
    case KernelSpec::Kind::Identity:
      return spec.weight;
    case KernelSpec::Kind::Zero:
      return 0.0;
    case KernelSpec::Kind::DaveyStewartson: {
      const std::size_t p = spec.axis_p - 1, q = spec.axis_q - 1;
      if (p >= xi.size() || q >= xi.size())
        throw std::invalid_argument("davey_stewartson: axis out of range");
      const double a = xi[p] * xi[p], b = xi[q] * xi[q];
      if (a + b == 0.0) return 0.0;
      return spec.weight * a / (a + b);
    }
    case KernelSpec::Kind::Tabulated: {
      const Grid& g = spec.table->grid;
      if (xi.size() != static_cast<std::size_t>(g.dim()))
        throw std::invalid_argument("tabulated kernel: dimension mismatch");
      std::vector<int> c(g.dim());
      for (int a = 0; a < g.dim(); ++a) {
        // xi = 2 pi m / L, recover the integer mode
        const double m = xi[a] * g.box()[a] / kTwoPi;
        const long mi = std::lround(m);
        if (std::abs(m - mi) > 1e-9)
          throw std::invalid_argument(
              "tabulated kernel: xi not on the stored lattice");
        c[a] = static_cast<int>(mi) + g.n()[a] / 2;
        if (c[a] < 0 || c[a] >= g.n()[a])
          throw std::out_of_range(
              "tabulated kernel: lookup outside stored lattice");
      }
      return spec.weight * spec.table->coeff[g.flatten(c.data())].real();
    }
  }
  throw std::logic_error("kernel_symbol: unknown kind");
}

Eigen::ArrayXd kernel_symbol_array(const KernelSpec& spec, const Grid& grid) {
  Eigen::ArrayXd out(grid.size());
  std::vector<double> xi(grid.dim());
  for (Eigen::Index k = 0; k < grid.size(); ++k) {
    for (int a = 0; a < grid.dim(); ++a) xi[a] = grid.xi(a)[k];
    out[k] = kernel_symbol(spec, xi);
  }
  return out;
}

SpectralField apply_kernel(const KernelSpec& spec, const SpectralField& rho) {
  if (!is_real_valued(rho))
    throw std::invalid_argument("apply_kernel: input must be real-valued");
  return SpectralField(rho.grid, kernel_symbol_array(spec, rho.grid) * rho.coeff);
}

}  // namespace wkb
