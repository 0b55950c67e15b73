#include "romvel/wave_operator.hpp"

#include <sstream>

#include <lapacke.h>

#include "romvel/error.hpp"

namespace romvel {

WaveOperator::WaveOperator(const VelocityModel& v) : velocity_(v) {
  const Grid2D& g = v.grid();
  const Eigen::Index n = static_cast<Eigen::Index>(g.size());
  const Eigen::ArrayXd& c = v.values().array();
  const double ihx2 = 1.0 / (g.hx * g.hx);
  const double ihz2 = 1.0 / (g.hz * g.hz);
  const BoundaryConditions& bc = v.bc();

  diag_.resize(n);
  edge_x_ = Eigen::ArrayXd::Zero(n);
  edge_z_ = Eigen::ArrayXd::Zero(n);
  for (int ix = 0; ix < g.nx; ++ix) {
    for (int iz = 0; iz < g.nz; ++iz) {
      const Eigen::Index i = static_cast<Eigen::Index>(g.index(ix, iz));
      // Neumann walls drop the ghost coupling, Dirichlet walls keep the -2 stencil.
      double lx = 2.0;
      if (ix == 0 && bc.left == Boundary::Neumann) lx -= 1.0;
      if (ix == g.nx - 1 && bc.right == Boundary::Neumann) lx -= 1.0;
      double lz = 2.0;
      if (iz == 0 && bc.top == Boundary::Neumann) lz -= 1.0;
      if (iz == g.nz - 1 && bc.bottom == Boundary::Neumann) lz -= 1.0;
      diag_[i] = c[i] * c[i] * (lx * ihx2 + lz * ihz2);
      if (ix + 1 < g.nx) edge_x_[i] = c[i] * c[i + g.nz] * ihx2;
      if (iz + 1 < g.nz) edge_z_[i] = c[i] * c[i + 1] * ihz2;
    }
  }
}

void WaveOperator::apply(const Eigen::MatrixXd& x, Eigen::MatrixXd& y) const {
  const Eigen::Index n = dimension();
  const Eigen::Index nz = grid().nz;
  y.resize(n, x.cols());
  for (Eigen::Index col = 0; col < x.cols(); ++col) {
    auto xa = x.col(col).array();
    auto ya = y.col(col).array();
    ya = diag_ * xa;
    ya.head(n - nz) -= edge_x_.head(n - nz) * xa.tail(n - nz);
    ya.tail(n - nz) -= edge_x_.head(n - nz) * xa.head(n - nz);
    ya.head(n - 1) -= edge_z_.head(n - 1) * xa.tail(n - 1);
    ya.tail(n - 1) -= edge_z_.head(n - 1) * xa.head(n - 1);
  }
}

Eigen::MatrixXd WaveOperator::apply(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd y;
  apply(x, y);
  return y;
}

void WaveOperator::apply_pressure(const Eigen::MatrixXd& x, Eigen::MatrixXd& y) const {
  // c^2 L = -C A_h C^{-1}
  const Eigen::ArrayXd& c = velocity_.values().array();
  Eigen::MatrixXd scaled = (x.array().colwise() / c).matrix();
  apply(scaled, y);
  y.array().colwise() *= -c;
}

double WaveOperator::spectral_upper_bound() const {
  const Eigen::Index n = dimension();
  const Eigen::Index nz = grid().nz;
  Eigen::ArrayXd row = diag_ + edge_x_ + edge_z_;
  row.tail(n - nz) += edge_x_.head(n - nz);
  row.tail(n - 1) += edge_z_.head(n - 1);
  return row.maxCoeff();
}

Eigen::MatrixXd WaveOperator::dense() const {
  const Eigen::Index n = dimension();
  const Eigen::Index nz = grid().nz;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, i) = diag_[i];
    if (i + nz < n) a(i, i + nz) = a(i + nz, i) = -edge_x_[i];
    if (i + 1 < n && edge_z_[i] != 0.0) a(i, i + 1) = a(i + 1, i) = -edge_z_[i];
  }
  return a;
}

SpectralDecomposition SpectralDecomposition::compute(const WaveOperator& op, Eigen::Index cap) {
  const Eigen::Index n = op.dimension();
  if (n > cap) {
    std::ostringstream os;
    os << "operator dimension " << n << " exceeds the spectral path cap " << cap;
    throw EigUnavailable(os.str());
  }
  SpectralDecomposition out;
  out.vectors = op.dense();
  out.values.resize(n);
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', static_cast<lapack_int>(n), out.vectors.data(),
                     static_cast<lapack_int>(n), out.values.data());
  if (info != 0) {
    std::ostringstream os;
    os << "symmetric eigensolver failed (info " << info << ")";
    throw EigUnavailable(os.str());
  }
  return out;
}

}  // namespace romvel
