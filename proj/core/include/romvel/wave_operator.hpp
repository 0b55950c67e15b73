#pragma once

#include <Eigen/Core>

#include "romvel/velocity_model.hpp"

namespace romvel {

/// Discrete symmetrized wave operator A_h = -C L C, with C = diag(c) and L the
/// five-point Laplacian under the model's homogeneous boundary conditions.
///
/// The matrix is stored as a diagonal plus one weight per grid edge, so the
/// same weight couples i->j and j->i and symmetry holds to the last bit.
class WaveOperator {
 public:
  explicit WaveOperator(const VelocityModel& v);

  const VelocityModel& velocity() const { return velocity_; }
  const Grid2D& grid() const { return velocity_.grid(); }
  Eigen::Index dimension() const { return diag_.size(); }

  /// Y = A_h X, column by column.
  void apply(const Eigen::MatrixXd& x, Eigen::MatrixXd& y) const;
  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;

  /// Y = c^2 L X, the unsymmetrized operator acting on pressure.
  void apply_pressure(const Eigen::MatrixXd& x, Eigen::MatrixXd& y) const;

  /// Gershgorin upper bound on the spectrum (A_h is positive semidefinite).
  double spectral_upper_bound() const;

  Eigen::MatrixXd dense() const;

 private:
  VelocityModel velocity_;
  Eigen::ArrayXd diag_;
  Eigen::ArrayXd edge_x_;  // coupling of node i with i + nz
  Eigen::ArrayXd edge_z_;  // coupling of node i with i + 1 (zero across columns)
};

/// Full eigendecomposition A_h = V diag(lambda) V^T (ascending eigenvalues).
struct SpectralDecomposition {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;

  /// Throws EigUnavailable when the dimension exceeds `cap`.
  static SpectralDecomposition compute(const WaveOperator& op, Eigen::Index cap = 20000);
};

}  // namespace romvel
