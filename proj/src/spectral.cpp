#include "kdg/spectral.hpp"

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "kdg/quadrature.hpp"

namespace kdg {

namespace {

constexpr std::uint64_t kMagic = 0x314c42544b47444bULL;  // "KDGKTBL1"

/// Radial factor integral phi(s) = int_0^R cos(rho*s) d rho by fixed-order
/// Gauss-Legendre, with a refinement-doubling accuracy guard.
class RadialFactor {
 public:
  explicit RadialFactor(double R) : R_(R) {
    std::tie(x64_, w64_) = gauss_legendre(64, 0.0, R);
    std::tie(x128_, w128_) = gauss_legendre(128, 0.0, R);
  }

  double eval(double s) const {
    double acc = 0.0;
    for (int i = 0; i < 64; ++i) acc += w64_[i] * std::cos(x64_[i] * s);
    return acc;
  }

  double eval_refined(double s) const {
    double acc = 0.0;
    for (int i = 0; i < 128; ++i) acc += w128_[i] * std::cos(x128_[i] * s);
    return acc;
  }

  void check(double s) const {
    const double a = eval(s), b = eval_refined(s);
    if (std::abs(a - b) > 1e-10 * std::max(1.0, std::abs(b))) {
      std::ostringstream os;
      os << "kernel radial quadrature did not converge at s=" << s << " (" << a << " vs " << b
         << ")";
      throw numerical_error(os.str());
    }
  }

 private:
  double R_;
  VectorXd x64_, w64_, x128_, w128_;
};

int mode_of_bin(int b, int n) { return b < n / 2 ? b : b - n; }

std::string table_cache_key(const SpectralConfig& cfg, KernelBackend backend) {
  // FNV-1a over the exact parameter bits.
  auto mix = [](std::uint64_t h, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
    return h;
  };
  std::uint64_t h = 0xcbf29ce484222325ULL;
  std::uint64_t bits;
  h = mix(h, static_cast<std::uint64_t>(cfg.n_modes));
  h = mix(h, static_cast<std::uint64_t>(cfg.n_angles));
  std::memcpy(&bits, &cfg.support_radius, 8);
  h = mix(h, bits);
  std::memcpy(&bits, &cfg.kernel_strength, 8);
  h = mix(h, bits);
  h = mix(h, backend == KernelBackend::fast ? 1 : 2);
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

void write_doubles(std::ofstream& out, const double* p, std::size_t count) {
  out.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(count * 8));
}

bool read_doubles(std::ifstream& in, double* p, std::size_t count) {
  in.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(count * 8));
  return in.good();
}

}  // namespace

void SpectralConfig::validate() const {
  if (n_modes < 4 || n_modes % 2 != 0)
    throw invalid_input("spectral: n_modes must be even and >= 4");
  if (n_angles < 1) throw invalid_input("spectral: n_angles >= 1 required");
  if (!(support_radius > 0)) throw invalid_input("spectral: support radius must be positive");
  if (!(kernel_strength > 0)) throw invalid_input("spectral: kernel strength must be positive");
}

bool CollisionKernelTable::save(const std::string& path_prefix) const {
  std::ofstream bin(path_prefix + ".bin", std::ios::binary);
  if (!bin) return false;
  bin.write(reinterpret_cast<const char*>(&kMagic), 8);
  const std::int32_t hdr[3] = {backend_ == KernelBackend::fast ? 1 : 2, n_, n_angles_};
  bin.write(reinterpret_cast<const char*>(hdr), sizeof hdr);
  write_doubles(bin, &R_, 1);
  write_doubles(bin, &b0_, 1);
  if (backend_ == KernelBackend::fast) {
    for (int p = 0; p < n_angles_; ++p) {
      write_doubles(bin, alpha_[p].data(), alpha_[p].size());
      write_doubles(bin, alpha_prime_[p].data(), alpha_prime_[p].size());
    }
  } else {
    write_doubles(bin, dense_.data(), dense_.size());
  }
  write_doubles(bin, loss_diag_.data(), loss_diag_.size());
  if (!bin.good()) return false;

  nlohmann::json side;
  side["schema"] = "kdg-kernel-table-1";
  side["backend"] = backend_ == KernelBackend::fast ? "fast" : "direct";
  side["n_modes"] = n_;
  side["n_angles"] = n_angles_;
  side["support_radius"] = R_;
  side["kernel_strength"] = b0_;
  std::ofstream js(path_prefix + ".json");
  js << side.dump(2) << "\n";
  return js.good();
}

namespace {

bool load_table(const std::string& path_prefix, const SpectralConfig& cfg, KernelBackend backend,
                CollisionKernelTable& out);

CollisionKernelTable build_table_uncached(const SpectralConfig& cfg, KernelBackend backend) {
  cfg.validate();
  CollisionKernelTable t;
  t.backend_ = backend;
  t.n_ = cfg.n_modes;
  t.n_angles_ = cfg.n_angles;
  t.R_ = cfg.support_radius;
  t.b0_ = cfg.kernel_strength;

  const int n = t.n_;
  const RadialFactor radial(t.R_);
  // Guard the radial quadrature once over the extreme frequencies seen below.
  const double s_max = t.R_ * std::sqrt(2.0) * (n / 2.0);
  for (double s : {0.0, 0.5 * s_max, s_max}) radial.check(s);

  auto factor_row = [&](double ex, double ey) {
    // phi(l . e) for every mode bin.
    ArrayXXd a(n, n);
    for (int b1 = 0; b1 < n; ++b1) {
      const int l1 = mode_of_bin(b1, n);
      for (int b2 = 0; b2 < n; ++b2) {
        const int l2 = mode_of_bin(b2, n);
        a(b1, b2) = radial.eval(l1 * ex + l2 * ey);
      }
    }
    return a;
  };

  if (backend == KernelBackend::fast) {
    const int A = t.n_angles_;
    const double gain_weight = 8.0 * t.b0_ * M_PI / A;
    t.alpha_.resize(A);
    t.alpha_prime_.resize(A);
    t.loss_diag_ = ArrayXXd::Zero(n, n);
    for (int p = 0; p < A; ++p) {
      const double th = (p + 0.5) * M_PI / A;
      t.alpha_[p] = gain_weight * factor_row(std::cos(th), std::sin(th));
      t.alpha_prime_[p] = factor_row(-std::sin(th), std::cos(th));
      // Loss diagonal from the same angular quadrature: the k=0 mode of Q
      // then cancels identically for every A.
      t.loss_diag_ += t.alpha_[p] * t.alpha_prime_[p];
    }
  } else {
    // Dense B(l,m) with the angular integral converged to machine precision:
    // the A -> infinity limit of the fast factorization.
    const int n2 = n * n;
    auto assemble = [&](int A) {
      MatrixXd U(A, n2), V(A, n2);
      for (int p = 0; p < A; ++p) {
        const double th = (p + 0.5) * M_PI / A;
        const ArrayXXd u = factor_row(std::cos(th), std::sin(th));
        const ArrayXXd v = factor_row(-std::sin(th), std::cos(th));
        U.row(p) = Eigen::Map<const VectorXd>(u.data(), n2);
        V.row(p) = Eigen::Map<const VectorXd>(v.data(), n2);
      }
      return MatrixXd((8.0 * t.b0_ * M_PI / A) * U.transpose() * V);
    };
    const int A0 = 8 * n + 64;
    MatrixXd coarse = assemble(A0);
    t.dense_ = assemble(2 * A0);
    const double err = (coarse - t.dense_).cwiseAbs().maxCoeff();
    if (err > 1e-10 * std::max(1.0, t.dense_.cwiseAbs().maxCoeff()))
      throw numerical_error("kernel angular quadrature did not converge (direct table)");
    t.loss_diag_.resize(n, n);
    for (int b1 = 0; b1 < n; ++b1)
      for (int b2 = 0; b2 < n; ++b2) {
        const int flat = b1 * n + b2;
        t.loss_diag_(b1, b2) = t.dense_(flat, flat);
      }
  }
  return t;
}

bool load_table(const std::string& path_prefix, const SpectralConfig& cfg, KernelBackend backend,
                CollisionKernelTable& out) {
  std::ifstream bin(path_prefix + ".bin", std::ios::binary);
  if (!bin) return false;
  std::uint64_t magic = 0;
  bin.read(reinterpret_cast<char*>(&magic), 8);
  std::int32_t hdr[3] = {0, 0, 0};
  bin.read(reinterpret_cast<char*>(hdr), sizeof hdr);
  double R = 0, b0 = 0;
  if (!read_doubles(bin, &R, 1) || !read_doubles(bin, &b0, 1)) return false;
  const KernelBackend file_backend = hdr[0] == 1 ? KernelBackend::fast : KernelBackend::direct;
  if (magic != kMagic || file_backend != backend || hdr[1] != cfg.n_modes ||
      hdr[2] != cfg.n_angles || R != cfg.support_radius || b0 != cfg.kernel_strength)
    return false;

  const int n = cfg.n_modes;
  out.backend_ = backend;
  out.n_ = n;
  out.n_angles_ = cfg.n_angles;
  out.R_ = R;
  out.b0_ = b0;
  if (backend == KernelBackend::fast) {
    out.alpha_.resize(cfg.n_angles);
    out.alpha_prime_.resize(cfg.n_angles);
    for (int p = 0; p < cfg.n_angles; ++p) {
      out.alpha_[p].resize(n, n);
      out.alpha_prime_[p].resize(n, n);
      if (!read_doubles(bin, out.alpha_[p].data(), out.alpha_[p].size())) return false;
      if (!read_doubles(bin, out.alpha_prime_[p].data(), out.alpha_prime_[p].size())) return false;
    }
  } else {
    out.dense_.resize(n * n, n * n);
    if (!read_doubles(bin, out.dense_.data(), out.dense_.size())) return false;
  }
  out.loss_diag_.resize(n, n);
  if (!read_doubles(bin, out.loss_diag_.data(), out.loss_diag_.size())) return false;
  // Trailing garbage means a corrupt or stale file.
  char extra;
  bin.read(&extra, 1);
  if (!bin.eof()) return false;

  std::ifstream js(path_prefix + ".json");
  if (js) {
    try {
      auto side = nlohmann::json::parse(js);
      if (side.value("n_modes", -1) != n) return false;
    } catch (...) {
      return false;
    }
  }
  return true;
}

}  // namespace

CollisionKernelTable build_kernel_table(const SpectralConfig& cfg, KernelBackend backend,
                                        const std::string& cache_dir) {
  cfg.validate();
  std::string prefix;
  if (!cache_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(cache_dir, ec);
    prefix = (std::filesystem::path(cache_dir) /
              ("kernel_" + table_cache_key(cfg, backend)))
                 .string();
    CollisionKernelTable cached;
    if (std::filesystem::exists(prefix + ".bin")) {
      if (load_table(prefix, cfg, backend, cached)) return cached;
      std::cerr << "[kdg] warning: kernel cache " << prefix << " is corrupt, rebuilding\n";
    }
  }
  CollisionKernelTable t = build_table_uncached(cfg, backend);
  if (!prefix.empty() && !t.save(prefix))
    std::cerr << "[kdg] warning: could not write kernel cache " << prefix << "\n";
  return t;
}

SpectralWorkspace::SpectralWorkspace(int n_modes) : n_(n_modes), p_(2 * n_modes) {
  g_.resize(n_, n_);
  spec_n_.resize(n_, n_);
  work_p_.resize(p_, p_);
  spec_p_.resize(p_, p_);
  acc_real_.resize(p_, p_);
  pad_bin_.resize(n_);
  for (int b = 0; b < n_; ++b) {
    const int l = mode_of_bin(b, n_);
    pad_bin_[b] = l >= 0 ? l : l + p_;
  }
}

void SpectralWorkspace::fft2(Eigen::MatrixXcd& a, bool inverse) {
  const int n = static_cast<int>(a.rows());
  Eigen::VectorXcd in(n), out(n);
  for (int pass = 0; pass < 2; ++pass) {
    for (int c = 0; c < n; ++c) {
      in = a.col(c);
      if (inverse)
        fft_.inv(out, in);
      else
        fft_.fwd(out, in);
      a.col(c) = out;
    }
    a.transposeInPlace();
  }
}

ArrayXd collide_boltzmann(const ArrayXd& f, const CollisionKernelTable& table,
                          const SpectralConfig& cfg, const VelocityGrid& grid,
                          SpectralWorkspace& ws) {
  const int n = cfg.n_modes;
  if (grid.n_per_dim() != n || table.n_modes() != n || ws.n() != n)
    throw invalid_input("collide_boltzmann: grid/table/workspace size mismatch");
  if (!(cfg.knudsen > 0))
    throw invalid_input("collide_boltzmann: knudsen must be positive (the eps=0 limit is the "
                        "integrator's job)");

  const double lambda = 2.0 * M_PI / (grid.v_max() - grid.v_min());

  // Analysis: FH(b) = sum_j f_j exp(-2 pi i b.j / n).  The node-shift phases
  // (-1)^{l1+l2} of the [-pi,pi) grid cancel between analysis and synthesis.
  for (int k1 = 0; k1 < n; ++k1)
    for (int k2 = 0; k2 < n; ++k2) ws.g_(k1, k2) = f[k1 * n + k2];
  ws.fft2(ws.g_, false);
  const Eigen::MatrixXcd& FH = ws.g_;

  ArrayXd out(n * n);

  if (table.backend() == KernelBackend::fast) {
    using C = std::complex<double>;
    ws.acc_real_.setZero();

    auto padded_eval = [&](const ArrayXXd& re_tab, const ArrayXXd& im_tab) {
      ws.spec_p_.setZero();
      for (int b1 = 0; b1 < n; ++b1) {
        const int q1 = ws.pad_bin_[b1];
        for (int b2 = 0; b2 < n; ++b2) {
          ws.spec_p_(q1, ws.pad_bin_[b2]) = FH(b1, b2) * C(re_tab(b1, b2), im_tab(b1, b2));
        }
      }
      ws.fft2(ws.spec_p_, true);
    };

    // Loss: s(v) * d(v), both real, packed into one transform.
    ws.spec_p_.setZero();
    for (int b1 = 0; b1 < n; ++b1) {
      const int q1 = ws.pad_bin_[b1];
      for (int b2 = 0; b2 < n; ++b2)
        ws.spec_p_(q1, ws.pad_bin_[b2]) = FH(b1, b2) * C(1.0, table.loss_diagonal()(b1, b2));
    }
    ws.fft2(ws.spec_p_, true);
    ws.acc_real_ -= ws.spec_p_.real().array() * ws.spec_p_.imag().array();

    // Gain: per-direction factored convolutions, pairs packed likewise.
    for (int dir = 0; dir < table.n_angles(); ++dir) {
      padded_eval(table.alpha()[dir], table.alpha_prime()[dir]);
      ws.acc_real_ += ws.spec_p_.real().array() * ws.spec_p_.imag().array();
    }

    ws.work_p_ = ws.acc_real_.matrix().cast<C>();
    ws.fft2(ws.work_p_, false);
    for (int b1 = 0; b1 < n; ++b1)
      for (int b2 = 0; b2 < n; ++b2)
        ws.spec_n_(b1, b2) = ws.work_p_(ws.pad_bin_[b1], ws.pad_bin_[b2]);
    ws.fft2(ws.spec_n_, true);

    // Accumulated normalization of the pipeline: (P/N)^2 = 4.
    const double scale = 4.0 / (cfg.knudsen * lambda * lambda);
    for (int k1 = 0; k1 < n; ++k1)
      for (int k2 = 0; k2 < n; ++k2) out[k1 * n + k2] = scale * ws.spec_n_(k1, k2).real();
  } else {
    // Dense O(N^4) evaluation of the truncated quadrature (the oracle path).
    using C = std::complex<double>;
    const int n2 = n * n;
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(n2);
    std::vector<int> l1s(n2), l2s(n2);
    for (int b1 = 0; b1 < n; ++b1)
      for (int b2 = 0; b2 < n; ++b2) {
        l1s[b1 * n + b2] = mode_of_bin(b1, n);
        l2s[b1 * n + b2] = mode_of_bin(b2, n);
      }
    auto bin_of = [&](int l) { return l >= 0 ? l : l + n; };
    const MatrixXd& dense = table.dense();
    for (int bl = 0; bl < n2; ++bl) {
      const C fl = FH(bl / n, bl % n);
      if (fl == C(0.0, 0.0)) continue;
      for (int bm = 0; bm < n2; ++bm) {
        const int k1 = l1s[bl] + l1s[bm];
        const int k2 = l2s[bl] + l2s[bm];
        if (k1 < -n / 2 || k1 >= n / 2 || k2 < -n / 2 || k2 >= n / 2) continue;
        const double beta = dense(bl, bm) - table.loss_diagonal()(bm / n, bm % n);
        acc[bin_of(k1) * n + bin_of(k2)] += beta * fl * FH(bm / n, bm % n);
      }
    }
    for (int b1 = 0; b1 < n; ++b1)
      for (int b2 = 0; b2 < n; ++b2) ws.spec_n_(b1, b2) = acc[b1 * n + b2];
    ws.fft2(ws.spec_n_, true);
    const double scale = 1.0 / (static_cast<double>(n) * n * cfg.knudsen * lambda * lambda);
    for (int k1 = 0; k1 < n; ++k1)
      for (int k2 = 0; k2 < n; ++k2) out[k1 * n + k2] = scale * ws.spec_n_(k1, k2).real();
  }
  return out;
}

ArrayXd collide_bgk(const ArrayXd& f, const Moments& m, const VelocityGrid& grid, double eps) {
  if (!(eps > 0)) throw invalid_input("collide_bgk: eps must be positive");
  return (maxwellian(m, grid, "collide_bgk") - f) * (m.rho / eps);
}

ArrayXd bkw_exact(double t, const VelocityGrid& grid) {
  const double S = 1.0 - std::exp(-t / 8.0) / 2.0;
  const ArrayXd& v2 = grid.v2();
  return (-v2 / (2.0 * S)).exp() / (2.0 * M_PI * S * S) *
         (2.0 * S - 1.0 + (1.0 - S) / (2.0 * S) * v2);
}

ArrayXd bkw_time_derivative(double t, const VelocityGrid& grid) {
  const double S = 1.0 - std::exp(-t / 8.0) / 2.0;
  const double Sdot = (1.0 - S) / 8.0;
  const ArrayXd q = grid.v2() / 2.0;  // v^2 / 2
  const ArrayXd g = 2.0 * S - 1.0 + q / S - q;
  const ArrayXd expf = (-q / S).exp() / (2.0 * M_PI);
  // d/dS of [S^-2 exp(-q/S) g]
  const ArrayXd dS = expf * ((-2.0 / (S * S * S) + q / (S * S * S * S)) * g +
                             (1.0 / (S * S)) * (2.0 - q / (S * S)));
  return Sdot * dS;
}

double calibrate_kernel_strength(int n_modes, double t_match, double dt) {
  const VelocityGrid grid(n_modes, -12.0, 12.0);
  const ArrayXd f0 = bkw_exact(0.0, grid);
  const ArrayXd v4 = grid.v2() * grid.v2();
  const double m4_target = (bkw_exact(t_match, grid) * v4).sum() * grid.weight();

  auto fourth_moment_at = [&](double b0) {
    SpectralConfig cfg;
    cfg.n_modes = n_modes;
    cfg.kernel_strength = b0;
    cfg.knudsen = 1.0;
    CollisionKernelTable table = build_kernel_table(cfg, KernelBackend::fast);
    SpectralWorkspace ws(n_modes);
    ArrayXd f = f0;
    const int steps = static_cast<int>(std::round(t_match / dt));
    for (int s = 0; s < steps; ++s) {
      // Explicit midpoint rule; the homogeneous problem is non-stiff at eps=1.
      const ArrayXd k1 = collide_boltzmann(f, table, cfg, grid, ws);
      const ArrayXd k2 = collide_boltzmann(f + 0.5 * dt * k1, table, cfg, grid, ws);
      f += dt * k2;
    }
    return (f * v4).sum() * grid.weight();
  };

  // The fourth moment grows monotonically with the collision rate.
  double lo = 0.2 * kDefaultKernelStrength, hi = 5.0 * kDefaultKernelStrength;
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (fourth_moment_at(mid) < m4_target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-5) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace kdg
