#pragma once

#include <cmath>
#include <random>

#include <Eigen/Core>

#include "romvel/dataset.hpp"

namespace romvel::test {

inline double rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / b.norm();
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist;
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index k = 0; k < out.size(); ++k) out.data()[k] = dist(gen);
  return out;
}

/// Small heterogeneous model: an off-centre disk on a coarse grid.
inline VelocityModel small_model(int nx = 21, int nz = 25,
                                 BoundaryConditions bc = BoundaryConditions::all(Boundary::Dirichlet)) {
  const Grid2D g = Grid2D::covering(1000, 1200, nx, nz);
  CamembertSpec s;
  s.center_x = 450;
  s.center_z = 650;
  s.radius = 300;
  s.inside = 2600;
  s.outside = 2000;
  return make_camembert_model(g, bc, s);
}

}  // namespace romvel::test
