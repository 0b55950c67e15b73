#pragma once

#include <filesystem>

#include <Eigen/Core>

#include "romvel/dataset.hpp"

namespace romvel {

/// Mass matrix, block (i, j) = (D_{i+j} + D_{|i-j|}) / 2 for i, j < n.
Eigen::MatrixXd assemble_mass(const DataSet& data);

/// Stiffness matrix, block (i, j) = -(Ddot_{i+j} + Ddot_{|i-j|}) / 2.
Eigen::MatrixXd assemble_stiffness(const DataSet& data);

struct CholeskyOptions {
  /// On breakdown retry once with M + eps I, eps = 1e-12 * ||M||_F.
  bool jitter = false;
};

/// Block upper-triangular R with m x m blocks and M = R^T R. Each diagonal
/// block is upper triangular with a positive diagonal. Throws MassNotSPD with
/// the index of the first block whose Schur complement is not positive definite.
Eigen::MatrixXd block_cholesky(const Eigen::MatrixXd& mass, int m,
                               const CholeskyOptions& opts = {});

/// Data-driven projection of the wave operator onto the snapshot space.
struct OperatorRom {
  Eigen::MatrixXd a_rom;  // nm x nm, R^{-T} S R^{-1}
  Eigen::MatrixXd r;      // block Cholesky factor of the mass matrix
  int m = 0;
  int n = 0;
};

OperatorRom build_rom(const DataSet& data, const CholeskyOptions& opts = {});

/// Upper-left k*m x k*m block.
Eigen::MatrixXd restrict_rom(const OperatorRom& rom, int k);

/// Length of rest_dk output: dm (km - (dm - 1)/2).
Eigen::Index rest_dk_length(int m, int k, int d);

/// Keeps the first d*m diagonals (main one included) of a km x km matrix and
/// stacks them row by row: row i contributes X(i, i), ..., X(i, min(i + dm - 1, km - 1)).
Eigen::VectorXd rest_dk(const Eigen::MatrixXd& x, int m, int d);

/// Upper triangle including the diagonal, stacked row by row (rest_dk with d = k).
Eigen::VectorXd triu_vec(const Eigen::MatrixXd& x);

/// 2-norm condition number of the mass matrix, from its eigenvalues.
double mass_condition_number(const Eigen::MatrixXd& mass);

/// JSON header `<stem>.json` {m, n} plus `<stem>.bin` with a_rom then r,
/// little-endian float64, column-major.
void write_rom(const OperatorRom& rom, const std::filesystem::path& stem);
OperatorRom read_rom(const std::filesystem::path& stem);

}  // namespace romvel
