#include "wkb/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wkb {

Grid::Grid(std::vector<int> n, std::vector<double> box_lengths)
    : n_(std::move(n)), box_(std::move(box_lengths)) {
  if (n_.empty()) throw std::invalid_argument("grid: dimension must be >= 1");
  if (box_.size() != n_.size())
    throw std::invalid_argument("grid: n and box length counts differ");
  for (std::size_t a = 0; a < n_.size(); ++a) {
    if (n_[a] < 4 || n_[a] % 2 != 0)
      throw std::invalid_argument("grid: n[" + std::to_string(a) +
                                  "] must be even and >= 4");
    if (!(box_[a] > 0.0))
      throw std::invalid_argument("grid: box length must be positive");
  }

  const int d = dim();
  stride_.assign(d, 1);
  for (int a = d - 2; a >= 0; --a) stride_[a] = stride_[a + 1] * n_[a + 1];
  size_ = stride_[0] * n_[0];

  auto xi = std::make_shared<std::vector<Eigen::ArrayXd>>(d);
  auto bracket = std::make_shared<Eigen::ArrayXd>(size_);
  auto nyq = std::make_shared<Eigen::Array<bool, Eigen::Dynamic, 1>>(size_);
  std::vector<int> c(d, 0);
  for (int a = 0; a < d; ++a) (*xi)[a].resize(size_);
  for (Eigen::Index k = 0; k < size_; ++k) {
    double norm2 = 0.0;
    bool on_nyquist = false;
    for (int a = 0; a < d; ++a) {
      const double x = xi_value(a, c[a]);
      (*xi)[a][k] = x;
      norm2 += x * x;
      on_nyquist = on_nyquist || (c[a] == 0);
    }
    (*bracket)[k] = std::sqrt(1.0 + norm2);
    (*nyq)[k] = on_nyquist;
    for (int a = d - 1; a >= 0; --a) {
      if (++c[a] < n_[a]) break;
      c[a] = 0;
    }
  }
  xi_ = std::move(xi);
  bracket_ = std::move(bracket);
  nyquist_ = std::move(nyq);
}

Grid Grid::torus(std::vector<int> n) {
  std::vector<double> box(n.size(), kTwoPi);
  return Grid(std::move(n), std::move(box));
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim(); ++a) v *= box_[a] / n_[a];
  return v;
}

double Grid::box_volume() const {
  double v = 1.0;
  for (double l : box_) v *= l;
  return v;
}

}  // namespace wkb
