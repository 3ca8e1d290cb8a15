#ifndef KDG_VELOCITY_GRID_HPP
#define KDG_VELOCITY_GRID_HPP

#include <cmath>

#include "kdg/common.hpp"

namespace kdg {

/// Macroscopic state (rho, rho*u, E) with the derived temperature,
/// d_v = 2 throughout: E = rho*T + rho*|u|^2/2, p = rho*T, gamma = 2.
template <typename Scalar>
struct MomentsT {
  Scalar rho{0};
  Scalar ux{0};
  Scalar uy{0};
  Scalar E{0};
  Scalar T{0};

  static MomentsT from_conserved(Scalar rho, Scalar mx, Scalar my, Scalar E) {
    MomentsT m;
    m.rho = rho;
    if (rho != Scalar(0)) {
      m.ux = mx / rho;
      m.uy = my / rho;
      m.E = E;
      // T = (2E - rho|u|^2) / (d_v rho) with d_v = 2
      m.T = E / rho - (m.ux * m.ux + m.uy * m.uy) / Scalar(2);
    }
    return m;
  }

  static MomentsT primitive(Scalar rho, Scalar ux, Scalar uy, Scalar T) {
    MomentsT m;
    m.rho = rho;
    m.ux = ux;
    m.uy = uy;
    m.T = T;
    m.E = rho * T + rho * (ux * ux + uy * uy) / Scalar(2);
    return m;
  }

  Scalar pressure() const { return rho * T; }
};

using Moments = MomentsT<double>;

/// Uniform Cartesian truncation of the 2D velocity space.
///
/// Nodes sit at the lattice points v_(k1,k2) = (k1*dv + v_min, k2*dv + v_min),
/// k1,k2 in [0, n).  Mono-index k = k1*n + k2 (k1 slowest).  Immutable after
/// construction; the quadrature weight of every node is dv^2 (midpoint rule).
class VelocityGrid {
 public:
  VelocityGrid(int n_per_dim, double v_min, double v_max);

  int n_per_dim() const { return n_; }
  int size() const { return n_ * n_; }
  double v_min() const { return v_min_; }
  double v_max() const { return v_max_; }
  double dv() const { return dv_; }
  double weight() const { return dv_ * dv_; }
  /// Largest Euclidean node norm (the Rusanov / CFL speed bound).
  double max_speed() const { return max_speed_; }

  int index(int k1, int k2) const { return k1 * n_ + k2; }
  Vector2d node(int k) const { return {vx_[k], vy_[k]}; }

  const ArrayXd& vx() const { return vx_; }
  const ArrayXd& vy() const { return vy_; }
  /// |v_k|^2 per node.
  const ArrayXd& v2() const { return v2_; }

 private:
  int n_;
  double v_min_, v_max_, dv_, max_speed_;
  ArrayXd vx_, vy_, v2_;
};

/// Discrete moments U = sum_k dv^2 phi(v_k) f_k, phi = (1, v, |v|^2/2).
template <typename Scalar, typename Derived>
MomentsT<Scalar> moments_of(const Eigen::ArrayBase<Derived>& f, const VelocityGrid& grid) {
  const Scalar w = static_cast<Scalar>(grid.weight());
  const Scalar rho = w * f.sum();
  const Scalar mx = w * (f * grid.vx().template cast<Scalar>()).sum();
  const Scalar my = w * (f * grid.vy().template cast<Scalar>()).sum();
  const Scalar E = w * Scalar(0.5) * (f * grid.v2().template cast<Scalar>()).sum();
  return MomentsT<Scalar>::from_conserved(rho, mx, my, E);
}

inline Moments moments(const ArrayXd& f, const VelocityGrid& grid) {
  return moments_of<double>(f, grid);
}

/// Samples M(rho,u,T)(v_k) = rho/(2 pi T) exp(-|u - v_k|^2 / (2T)) at the nodes.
/// Throws numerical_error for rho <= 0 or T <= 0; `where` names the offender.
ArrayXd maxwellian(const Moments& m, const VelocityGrid& grid, const char* where = "");

/// Pointwise Maxwellian value at a single velocity.
inline double maxwellian_at(const Moments& m, double vx, double vy) {
  const double dx = m.ux - vx, dy = m.uy - vy;
  return m.rho / (2.0 * M_PI * m.T) * std::exp(-(dx * dx + dy * dy) / (2.0 * m.T));
}

/// Midpoint-rule entropy sum_k f_k ln f_k dv^2; non-positive entries are
/// skipped (the spectral operator produces small negative values).
double entropy(const ArrayXd& f, const VelocityGrid& grid);

}  // namespace kdg

#endif
