#include "kdg/velocity_grid.hpp"

#include <sstream>

namespace kdg {

VelocityGrid::VelocityGrid(int n_per_dim, double v_min, double v_max)
    : n_(n_per_dim), v_min_(v_min), v_max_(v_max) {
  if (n_per_dim < 2) throw invalid_input("velocity grid needs n_per_dim >= 2");
  if (!(v_max > v_min)) throw invalid_input("velocity grid needs v_max > v_min");
  dv_ = (v_max_ - v_min_) / n_;
  const int N = n_ * n_;
  vx_.resize(N);
  vy_.resize(N);
  v2_.resize(N);
  max_speed_ = 0.0;
  for (int k1 = 0; k1 < n_; ++k1) {
    for (int k2 = 0; k2 < n_; ++k2) {
      const int k = index(k1, k2);
      vx_[k] = k1 * dv_ + v_min_;
      vy_[k] = k2 * dv_ + v_min_;
      v2_[k] = vx_[k] * vx_[k] + vy_[k] * vy_[k];
      max_speed_ = std::max(max_speed_, std::sqrt(v2_[k]));
    }
  }
}

ArrayXd maxwellian(const Moments& m, const VelocityGrid& grid, const char* where) {
  if (!(m.rho > 0.0) || !(m.T > 0.0)) {
    std::ostringstream os;
    os << "invalid state for Maxwellian (rho=" << m.rho << ", T=" << m.T << ")";
    if (where && *where) os << " at " << where;
    throw numerical_error(os.str());
  }
  const double pref = m.rho / (2.0 * M_PI * m.T);
  const double inv2T = 1.0 / (2.0 * m.T);
  return pref * (-((grid.vx() - m.ux).square() + (grid.vy() - m.uy).square()) * inv2T).exp();
}

double entropy(const ArrayXd& f, const VelocityGrid& grid) {
  double s = 0.0;
  for (int k = 0; k < f.size(); ++k) {
    if (f[k] > 0.0) s += f[k] * std::log(f[k]);
  }
  return s * grid.weight();
}

}  // namespace kdg
