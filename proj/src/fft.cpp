#include "wkb/fft.hpp"

#include <unsupported/Eigen/FFT>

#include <complex>
#include <vector>

namespace wkb::fft {
namespace {

Eigen::FFT<double>& engine() {
  thread_local Eigen::FFT<double> fft;
  return fft;
}

// Apply 1-D transforms along every axis of a row-major array.  Lines along
// the last axis are contiguous; other axes are gathered through a stride.
void transform_all_axes(const std::vector<int>& n, Eigen::ArrayXcd& data,
                        bool forward) {
  const int d = static_cast<int>(n.size());
  std::vector<Eigen::Index> stride(d, 1);
  for (int a = d - 2; a >= 0; --a) stride[a] = stride[a + 1] * n[a + 1];
  const Eigen::Index total = stride[0] * n[0];

  Eigen::VectorXcd in, out;
  for (int a = 0; a < d; ++a) {
    const Eigen::Index len = n[a];
    const Eigen::Index inner = stride[a];
    const Eigen::Index block = inner * len;
    in.resize(len);
    out.resize(len);
    for (Eigen::Index base = 0; base < total; base += block) {
      for (Eigen::Index r = 0; r < inner; ++r) {
        std::complex<double>* line = data.data() + base + r;
        if (inner == 1) {
          if (forward)
            engine().fwd(out.data(), line, len);
          else
            engine().inv(out.data(), line, len);
          for (Eigen::Index k = 0; k < len; ++k) line[k] = out[k];
        } else {
          for (Eigen::Index k = 0; k < len; ++k) in[k] = line[k * inner];
          if (forward)
            engine().fwd(out.data(), in.data(), len);
          else
            engine().inv(out.data(), in.data(), len);
          for (Eigen::Index k = 0; k < len; ++k) line[k * inner] = out[k];
        }
      }
    }
  }
}

}  // namespace

void forward_inplace(const std::vector<int>& n, Eigen::ArrayXcd& data) {
  transform_all_axes(n, data, true);
}

void inverse_inplace(const std::vector<int>& n, Eigen::ArrayXcd& data) {
  transform_all_axes(n, data, false);
}

Eigen::ArrayXcd half_shift(const Grid& grid, const Eigen::ArrayXcd& in) {
  const int d = grid.dim();
  Eigen::ArrayXcd out(in.size());
  std::vector<int> c(d, 0), s(d);
  const auto& n = grid.n();
  for (Eigen::Index k = 0; k < in.size(); ++k) {
    for (int a = 0; a < d; ++a) {
      s[a] = c[a] + n[a] / 2;
      if (s[a] >= n[a]) s[a] -= n[a];
    }
    out[grid.flatten(s.data())] = in[k];
    for (int a = d - 1; a >= 0; --a) {
      if (++c[a] < n[a]) break;
      c[a] = 0;
    }
  }
  return out;
}

}  // namespace wkb::fft
