#include <cmath>

#include "doctest.h"
#include "kdg/velocity_grid.hpp"

using namespace kdg;

namespace {

// Truncated-Gaussian moment oracle: separable erf integrals over the box.
double gauss_box_mass(const Moments& m, double lo, double hi) {
  auto cdf = [&](double u) {
    return 0.5 * (std::erf((hi - u) / std::sqrt(2.0 * m.T)) -
                  std::erf((lo - u) / std::sqrt(2.0 * m.T)));
  };
  return m.rho * cdf(m.ux) * cdf(m.uy);
}

}  // namespace

TEST_CASE("grid construction and spacing") {
  VelocityGrid g(32, -12.0, 12.0);
  CHECK(g.dv() == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(g.size() == 1024);
  CHECK(g.node(0).x() == doctest::Approx(-12.0));
  CHECK(g.node(g.index(1, 2)).x() == doctest::Approx(-12.0 + 0.75));
  CHECK(g.node(g.index(1, 2)).y() == doctest::Approx(-12.0 + 1.5));

  VelocityGrid naca(16, -5.0, 5.0);
  CHECK(naca.dv() == doctest::Approx(0.625));
  CHECK(naca.size() == 256);

  VelocityGrid lax(32, -15.0, 15.0);
  CHECK(lax.dv() == doctest::Approx(0.9375));

  CHECK_THROWS_AS(VelocityGrid(1, -1.0, 1.0), invalid_input);
  CHECK_THROWS_AS(VelocityGrid(8, 1.0, -1.0), invalid_input);
}

TEST_CASE("moments of a centered Maxwellian match analytic Gaussian integrals") {
  VelocityGrid g(32, -12.0, 12.0);
  const Moments ref = Moments::primitive(1.0, 0.0, 0.0, 1.0);
  const ArrayXd f = maxwellian(ref, g);
  const Moments m = moments(f, g);
  CHECK(m.rho == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(m.ux) < 1e-8);
  CHECK(std::abs(m.uy) < 1e-8);
  CHECK(m.E == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(m.T == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("zero distribution has zero moments and entropy") {
  VelocityGrid g(8, -3.0, 3.0);
  ArrayXd f = ArrayXd::Zero(g.size());
  const Moments m = moments(f, g);
  CHECK(m.rho == 0.0);
  CHECK(m.E == 0.0);
  CHECK(entropy(f, g) == 0.0);
}

TEST_CASE("hot drifting Maxwellian: density within the Gaussian-tail budget") {
  VelocityGrid g(32, -15.0, 15.0);
  const Moments lax_left = Moments::primitive(0.445, 0.698, 0.0, 7.928);
  const ArrayXd f = maxwellian(lax_left, g);
  const Moments m = moments(f, g);
  const double expected = gauss_box_mass(lax_left, -15.0, 15.0);
  // Midpoint sum differs from the box integral by Poisson-summation terms.
  CHECK(m.rho == doctest::Approx(expected).epsilon(1e-6));
  CHECK(std::abs(m.rho - 0.445) <= 0.445 - expected + 1e-6);
}

TEST_CASE("maxwellian basics") {
  VelocityGrid g(32, -12.0, 12.0);
  const Moments m1 = Moments::primitive(1.0, 0.0, 0.0, 1.0);
  const Moments m2 = Moments::primitive(2.0, 0.0, 0.0, 1.0);
  const ArrayXd f1 = maxwellian(m1, g);
  const ArrayXd f2 = maxwellian(m2, g);
  CHECK(maxwellian_at(m1, 0.0, 0.0) == doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-12));
  CHECK(((f2 - 2.0 * f1).abs().maxCoeff()) < 1e-15);

  Moments bad = Moments::primitive(1.0, 0.0, 0.0, -1.0);
  bad.T = -1.0;
  CHECK_THROWS_AS(maxwellian(bad, g, "cell 17"), numerical_error);
}

TEST_CASE("maxwellian -> moments round trip, randomized states") {
  VelocityGrid g(32, -12.0, 12.0);
  // |u| + 5 sqrt(T) <= v_max keeps the support well inside the box.
  const double states[][4] = {{1.0, 0.0, 0.0, 1.0},
                              {0.7, 1.5, -2.0, 2.5},
                              {3.0, -4.0, 1.0, 1.2},
                              {0.2, 2.0, 2.0, 2.56}};
  for (const auto& s : states) {
    const Moments in = Moments::primitive(s[0], s[1], s[2], s[3]);
    const Moments out = moments(maxwellian(in, g), g);
    CHECK(out.rho == doctest::Approx(in.rho).epsilon(1e-6));
    CHECK(out.ux == doctest::Approx(in.ux).epsilon(1e-6));
    CHECK(out.uy == doctest::Approx(in.uy).epsilon(1e-6));
    CHECK(out.T == doctest::Approx(in.T).epsilon(1e-6));
  }
}

TEST_CASE("midpoint quadrature is exact for per-node linear data") {
  VelocityGrid g(16, -4.0, 4.0);
  // f = a + b*vx + c*vy integrates exactly under the midpoint rule.
  const double a = 0.3, b = 0.1, c = -0.2;
  ArrayXd f = a + b * g.vx() + c * g.vy();
  const double w = g.weight();
  double rho_exact = 0.0, mx_exact = 0.0;
  for (int k = 0; k < g.size(); ++k) {
    rho_exact += w * f[k];
    mx_exact += w * f[k] * g.vx()[k];
  }
  const Moments m = moments(f, g);
  CHECK(m.rho == doctest::Approx(rho_exact).epsilon(1e-13));
  CHECK(m.rho * m.ux == doctest::Approx(mx_exact).epsilon(1e-13));
}

TEST_CASE("grid point symmetry of centered Maxwellians") {
  VelocityGrid g(16, -6.0, 6.0);
  const ArrayXd f = maxwellian(Moments::primitive(1.0, 0.0, 0.0, 1.3), g);
  const int n = g.n_per_dim();
  for (int k1 = 1; k1 < n; ++k1)
    for (int k2 = 1; k2 < n; ++k2) {
      CHECK(f[g.index(k1, k2)] ==
            doctest::Approx(f[g.index(n - k1, n - k2)]).epsilon(1e-13));
    }
}

TEST_CASE("entropy identities") {
  VelocityGrid g(32, -12.0, 12.0);
  const ArrayXd f = maxwellian(Moments::primitive(1.0, 0.0, 0.0, 1.0), g);
  const double eta = entropy(f, g);
  // Analytic value for the (rho=1, T=1) Gaussian: -(1 + ln 2 pi).
  CHECK(eta == doctest::Approx(-(1.0 + std::log(2.0 * M_PI))).epsilon(1e-7));
  // eta(e f) = e eta(f) + e rho.
  const double rho = moments(f, g).rho;
  CHECK(entropy(std::exp(1.0) * f, g) ==
        doctest::Approx(std::exp(1.0) * eta + std::exp(1.0) * rho).epsilon(1e-10));
}
