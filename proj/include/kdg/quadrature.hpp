#ifndef KDG_QUADRATURE_HPP
#define KDG_QUADRATURE_HPP

#include <utility>
#include <vector>

#include "kdg/common.hpp"

namespace kdg {

/// n-point Gauss-Legendre rule on [-1,1] (nodes, weights).
std::pair<VectorXd, VectorXd> gauss_legendre(int n);

/// Gauss-Legendre rule mapped to [a,b].
std::pair<VectorXd, VectorXd> gauss_legendre(int n, double a, double b);

/// Symmetric positive-weight quadrature on the reference triangle
/// {(0,0),(1,0),(0,1)}, exact for total degree <= degree.  Barycentric
/// points as (x, y), weights sum to the reference area 1/2.
/// Supported degrees 1..7; higher degrees throw.
struct TriangleRule {
  MatrixXd points;  // n x 2
  VectorXd weights; // n
};
TriangleRule triangle_rule(int degree);

}  // namespace kdg

#endif
