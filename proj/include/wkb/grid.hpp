#pragma once

#include <Eigen/Core>

#include <memory>
#include <vector>

namespace wkb {

inline constexpr double kTwoPi = 6.28318530717958647692528676655900577;

// Uniform collocation grid on the d-dimensional periodic box
// [0,L_1) x ... x [0,L_d), together with its centered frequency lattice
// m_i in {-n_i/2, ..., n_i/2 - 1}.  The wavevector of the integer mode m is
// xi_i = 2*pi*m_i / L_i, so on the exact torus (L_i = 2*pi) xi = m.
//
// All flat storage (samples and coefficients) is row-major over the axes;
// coefficients are kept in centered-lattice order, i.e. axis index
// c_i = m_i + n_i/2.  Per-mode wavevector components and the Japanese
// bracket <xi> = sqrt(1 + |xi|^2) are precomputed once and shared between
// copies of the grid.
class Grid {
 public:
  Grid(std::vector<int> n, std::vector<double> box_lengths);

  // Exact torus (L_i = 2*pi on every axis).
  static Grid torus(std::vector<int> n);

  int dim() const { return static_cast<int>(n_.size()); }
  const std::vector<int>& n() const { return n_; }
  const std::vector<double>& box() const { return box_; }
  Eigen::Index size() const { return size_; }

  // Integer mode of a centered axis index.
  int mode(int axis, int centered_index) const {
    return centered_index - n_[axis] / 2;
  }
  double xi_value(int axis, int centered_index) const {
    return kTwoPi * mode(axis, centered_index) / box_[axis];
  }
  // Physical sample coordinate along one axis.
  double point(int axis, int sample_index) const {
    return box_[axis] * sample_index / n_[axis];
  }

  Eigen::Index flatten(const int* centered) const {
    Eigen::Index k = 0;
    for (int a = 0; a < dim(); ++a) k += stride_[a] * centered[a];
    return k;
  }
  void unflatten(Eigen::Index k, int* centered) const {
    for (int a = 0; a < dim(); ++a) {
      centered[a] = static_cast<int>(k / stride_[a]);
      k -= stride_[a] * centered[a];
    }
  }
  Eigen::Index stride(int axis) const { return stride_[axis]; }

  // Per-mode arrays over the flat centered lattice.
  const Eigen::ArrayXd& xi(int axis) const { return (*xi_)[axis]; }
  const Eigen::ArrayXd& bracket() const { return *bracket_; }
  // true where any axis sits on the unpaired Nyquist mode m_i = -n_i/2
  const Eigen::Array<bool, Eigen::Dynamic, 1>& nyquist_mask() const {
    return *nyquist_;
  }

  double cell_volume() const;  // prod L_i / n_i
  double box_volume() const;   // prod L_i

  bool operator==(const Grid& other) const {
    return n_ == other.n_ && box_ == other.box_;
  }
  bool operator!=(const Grid& other) const { return !(*this == other); }

 private:
  std::vector<int> n_;
  std::vector<double> box_;
  std::vector<Eigen::Index> stride_;
  Eigen::Index size_ = 0;
  std::shared_ptr<const std::vector<Eigen::ArrayXd>> xi_;
  std::shared_ptr<const Eigen::ArrayXd> bracket_;
  std::shared_ptr<const Eigen::Array<bool, Eigen::Dynamic, 1>> nyquist_;
};

}  // namespace wkb
