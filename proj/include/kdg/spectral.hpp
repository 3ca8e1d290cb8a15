#ifndef KDG_SPECTRAL_HPP
#define KDG_SPECTRAL_HPP

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "kdg/common.hpp"
#include "kdg/velocity_grid.hpp"

namespace kdg {

/// Support radius of the distribution in the mapped spectral coordinates.
inline constexpr double kSupportRadius = 2.0 * M_PI / (3.0 + 1.41421356237309515);

/// Maxwellian-molecule kernel amplitude giving unit total cross section,
/// the normalization under which the BKW decay rate is exactly 1/8 and the
/// Boltzmann loss frequency equals the density (see calibrate_kernel_strength).
inline constexpr double kDefaultKernelStrength = 1.0 / (2.0 * M_PI);

struct SpectralConfig {
  int n_modes = 32;                             // N_M, equal to velocity nodes per dim
  double support_radius = kSupportRadius;       // R
  int n_angles = 8;                             // A
  double kernel_strength = kDefaultKernelStrength;  // b0
  double knudsen = 1.0;                         // eps; must be > 0 to evaluate Q_B

  void validate() const;
};

enum class KernelBackend { direct, fast };

/// Precomputed spectral kernel modes.  Depends only on (N_M, R, A, b0) and is
/// treated as immutable after build; epsilon and the velocity-box scaling are
/// applied at evaluation time.  Mode arrays are stored in FFT bin layout:
/// bin b in [0,N) holds mode l = b for b < N/2 and l = b - N for b >= N/2.
struct CollisionKernelTable {
  KernelBackend backend_ = KernelBackend::fast;
  int n_ = 0;
  int n_angles_ = 0;
  double R_ = 0, b0_ = 0;
  std::vector<ArrayXXd> alpha_, alpha_prime_;  // fast: per-direction factors, N x N
  ArrayXXd loss_diag_;                         // B(m,m), consistent with the gain quadrature
  MatrixXd dense_;                             // direct: B(l,m) over flattened mode bins

  KernelBackend backend() const { return backend_; }
  int n_modes() const { return n_; }
  int n_angles() const { return n_angles_; }
  double support_radius() const { return R_; }
  double kernel_strength() const { return b0_; }
  const std::vector<ArrayXXd>& alpha() const { return alpha_; }
  const std::vector<ArrayXXd>& alpha_prime() const { return alpha_prime_; }
  const ArrayXXd& loss_diagonal() const { return loss_diag_; }
  const MatrixXd& dense() const { return dense_; }

  bool save(const std::string& path_prefix) const;
};

/// Builds (or loads from `cache_dir` if previously cached there) the kernel
/// table.  A corrupt cache entry is rebuilt with a warning; an empty
/// cache_dir disables caching.
CollisionKernelTable build_kernel_table(const SpectralConfig& cfg, KernelBackend backend,
                                        const std::string& cache_dir = "");

/// Per-caller scratch space for collide_boltzmann (FFT plans and buffers).
/// Each concurrent caller must own a private workspace.
class SpectralWorkspace {
 public:
  explicit SpectralWorkspace(int n_modes);
  int n() const { return n_; }

 private:
  friend ArrayXd collide_boltzmann(const ArrayXd&, const CollisionKernelTable&,
                                   const SpectralConfig&, const VelocityGrid&,
                                   SpectralWorkspace&);
  void fft2(Eigen::MatrixXcd& a, bool inverse);

  int n_, p_;
  Eigen::FFT<double> fft_;
  Eigen::MatrixXcd g_, spec_n_, work_p_, spec_p_;
  ArrayXXd acc_real_;
  std::vector<int> pad_bin_;  // N-bin -> P-bin mode map
};

/// Boltzmann collision operator Q_B(f)/eps on the velocity grid.  The grid's
/// box [v_min,v_max]^2 is affinely mapped onto [-pi,pi)^2 (lambda =
/// 2*pi/(v_max-v_min)); the returned physical-units operator carries the
/// induced 1/lambda^2 factor.  The mass moment of the output vanishes to
/// round-off by construction of the loss diagonal.
ArrayXd collide_boltzmann(const ArrayXd& f, const CollisionKernelTable& table,
                          const SpectralConfig& cfg, const VelocityGrid& grid,
                          SpectralWorkspace& ws);

/// BGK relaxation mu*(M[m] - f)/eps with mu = m.rho.
ArrayXd collide_bgk(const ArrayXd& f, const Moments& m, const VelocityGrid& grid, double eps);

/// Exact BKW solution of the homogeneous Boltzmann equation sampled at the
/// grid nodes: f(v,t) = exp(-v^2/2S)/(2 pi S^2) [2S-1 + (1-S)/(2S) v^2],
/// S = 1 - exp(-t/8)/2.
ArrayXd bkw_exact(double t, const VelocityGrid& grid);

/// Analytic time derivative of the BKW solution (operator-level oracle).
ArrayXd bkw_time_derivative(double t, const VelocityGrid& grid);

/// Recovers the kernel amplitude b0 by bisection: integrates the homogeneous
/// relaxation from the BKW datum and matches the fourth velocity moment
/// against the exact solution at t_match.  Ships as evidence for the
/// kDefaultKernelStrength default.
double calibrate_kernel_strength(int n_modes, double t_match = 1.0, double dt = 5e-3);

}  // namespace kdg

#endif
