#include "wkb/rng.hpp"

#include <cmath>
#include <vector>

namespace wkb {

SpectralField random_band_limited(const Grid& grid, int max_mode,
                                  std::uint64_t seed, bool real_valued) {
  CounterRng rng{seed, 0};
  SpectralField f(grid);
  const int d = grid.dim();
  std::vector<int> c(d, 0);
  for (Eigen::Index k = 0; k < grid.size(); ++k) {
    bool inside = true;
    for (int a = 0; a < d; ++a) {
      const int m = grid.mode(a, c[a]);
      if (std::abs(m) > max_mode || c[a] == 0) {
        inside = false;  // outside the band or on the Nyquist plane
        break;
      }
    }
    if (inside) {
      const double re = rng.next_signed();
      const double im = rng.next_signed();
      const double decay = 1.0 / (1.0 + grid.bracket()[k]);
      f.coeff[k] = std::complex<double>(re, im) * decay;
    } else {
      // keep the counter stream aligned regardless of the band
      rng.next_signed();
      rng.next_signed();
    }
    for (int a = d - 1; a >= 0; --a) {
      if (++c[a] < grid.n()[a]) break;
      c[a] = 0;
    }
  }
  if (real_valued) {
    // symmetrize: coeff(m) <- (coeff(m) + conj(coeff(-m))) / 2
    Eigen::ArrayXcd sym(grid.size());
    std::vector<int> cc(d, 0), r(d);
    for (Eigen::Index k = 0; k < grid.size(); ++k) {
      bool paired = true;
      for (int a = 0; a < d; ++a) {
        if (cc[a] == 0) {
          paired = false;
          break;
        }
        r[a] = grid.n()[a] - cc[a];
      }
      sym[k] = paired ? 0.5 * (f.coeff[k] +
                               std::conj(f.coeff[grid.flatten(r.data())]))
                      : 0.0;
      for (int a = d - 1; a >= 0; --a) {
        if (++cc[a] < grid.n()[a]) break;
        cc[a] = 0;
      }
    }
    f.coeff = std::move(sym);
  }
  return f;
}

}  // namespace wkb
