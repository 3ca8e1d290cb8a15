#ifndef KDG_COMMON_HPP
#define KDG_COMMON_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace kdg {

using Eigen::ArrayXd;
using Eigen::ArrayXXd;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

/// Thrown when the physical state degenerates (rho <= 0, T <= 0, blow-up).
struct numerical_error : std::runtime_error {
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown on malformed configs, meshes or incompatible arguments.
struct invalid_input : std::runtime_error {
  explicit invalid_input(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown on unreadable/corrupt files.
struct io_error : std::runtime_error {
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kdg

#endif
