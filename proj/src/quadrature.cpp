#include "kdg/quadrature.hpp"

#include <cmath>

namespace kdg {

std::pair<VectorXd, VectorXd> gauss_legendre(int n) {
  if (n < 1) throw invalid_input("gauss_legendre: n >= 1 required");
  VectorXd x(n), w(n);
  // Newton iteration on P_n with the Chebyshev-like initial guess.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p0, p1, dp;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = t;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = -t;
    x[n - 1 - i] = t;
    const double wi = 2.0 / ((1.0 - t * t) * dp * dp);
    w[i] = wi;
    w[n - 1 - i] = wi;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
  return {x, w};
}

std::pair<VectorXd, VectorXd> gauss_legendre(int n, double a, double b) {
  auto [x, w] = gauss_legendre(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  return {(mid + half * x.array()).matrix(), (half * w.array()).matrix()};
}

namespace {

// Appends a symmetry orbit of barycentric coordinates (a,b,c): all distinct
// permutations, each with weight w (normalized to unit reference area).
void orbit(std::vector<std::array<double, 3>>& pts, std::vector<double>& wts, double a, double b,
           double c, double w) {
  const std::array<std::array<double, 3>, 6> perms = {{{a, b, c},
                                                       {a, c, b},
                                                       {b, a, c},
                                                       {b, c, a},
                                                       {c, a, b},
                                                       {c, b, a}}};
  std::vector<std::array<double, 3>> group;
  for (const auto& p : perms) {
    bool seen = false;
    for (const auto& q : group) {
      if (std::abs(q[0] - p[0]) < 1e-14 && std::abs(q[1] - p[1]) < 1e-14 &&
          std::abs(q[2] - p[2]) < 1e-14) {
        seen = true;
        break;
      }
    }
    if (!seen) group.push_back(p);
  }
  for (const auto& p : group) {
    pts.push_back(p);
    wts.push_back(w);
  }
}

}  // namespace

TriangleRule triangle_rule(int degree) {
  if (degree < 1) degree = 1;
  if (degree > 7) throw invalid_input("triangle_rule: degree > 7 unsupported");
  std::vector<std::array<double, 3>> pts;
  std::vector<double> wts;
  const double third = 1.0 / 3.0;
  switch (degree) {
    case 1:
      orbit(pts, wts, third, third, third, 1.0);
      break;
    case 2:
      orbit(pts, wts, 2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, third);
      break;
    case 3:
    case 4:
      // Dunavant degree-4, 6 points, all weights positive.
      orbit(pts, wts, 0.108103018168070, 0.445948490915965, 0.445948490915965,
            0.223381589678011);
      orbit(pts, wts, 0.816847572980459, 0.091576213509771, 0.091576213509771,
            0.109951743655322);
      break;
    case 5:
      orbit(pts, wts, third, third, third, 0.225);
      orbit(pts, wts, 0.059715871789770, 0.470142064105115, 0.470142064105115,
            0.132394152788506);
      orbit(pts, wts, 0.797426985353087, 0.101286507323456, 0.101286507323456,
            0.125939180544827);
      break;
    case 6:
      orbit(pts, wts, 0.501426509658179, 0.249286745170910, 0.249286745170910,
            0.116786275726379);
      orbit(pts, wts, 0.873821971016996, 0.063089014491502, 0.063089014491502,
            0.050844906370207);
      orbit(pts, wts, 0.053145049844817, 0.310352451033784, 0.636502499121399,
            0.082851075618374);
      break;
    case 7:
      // Dunavant degree-7, 13 points (centroid weight is negative).
      orbit(pts, wts, third, third, third, -0.149570044467682);
      orbit(pts, wts, 0.479308067841920, 0.260345966079040, 0.260345966079040,
            0.175615257433208);
      orbit(pts, wts, 0.869739794195568, 0.065130102902216, 0.065130102902216,
            0.053347235608838);
      orbit(pts, wts, 0.048690315425316, 0.312865496004874, 0.638444188569810,
            0.077113760890257);
      break;
    default:
      break;
  }
  TriangleRule rule;
  rule.points.resize(static_cast<int>(pts.size()), 2);
  rule.weights.resize(static_cast<int>(wts.size()));
  for (int i = 0; i < rule.points.rows(); ++i) {
    rule.points(i, 0) = pts[i][1];  // x = second barycentric coordinate
    rule.points(i, 1) = pts[i][2];  // y = third
    rule.weights[i] = wts[i] * 0.5; // weights normalized to unit-area; reference area 1/2
  }
  return rule;
}

}  // namespace kdg
