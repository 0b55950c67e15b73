#include "romvel/propagation.hpp"

#include <cmath>
#include <numbers>

#include "romvel/error.hpp"

namespace romvel {

Propagator::Propagator(WaveOperator op, const PropagationOptions& opts)
    : op_(std::move(op)), opts_(opts), path_(opts.path), upper_(op_.spectral_upper_bound()) {
  if (path_ == PropagationPath::Spectral) {
    if (op_.dimension() > opts.spectral_cap) {
      if (!opts.allow_chebyshev_fallback) {
        throw EigUnavailable("operator dimension exceeds the spectral cap and the Chebyshev path "
                             "is disabled");
      }
      path_ = PropagationPath::Chebyshev;
    } else {
      eig_ = std::make_unique<SpectralDecomposition>(
          SpectralDecomposition::compute(op_, opts.spectral_cap));
    }
  }
}

Eigen::MatrixXd Propagator::apply_function(const std::function<double(double)>& g,
                                           const Eigen::MatrixXd& x) const {
  if (eig_) {
    const Eigen::VectorXd& lam = eig_->values;
    Eigen::VectorXd w(lam.size());
    for (Eigen::Index k = 0; k < lam.size(); ++k) w[k] = g(std::max(lam[k], 0.0));
    Eigen::MatrixXd coeffs = eig_->vectors.transpose() * x;
    coeffs.array().colwise() *= w.array();
    return eig_->vectors * coeffs;
  }
  const ChebyshevSeries series = ChebyshevSeries::fit(
      [&g](double lam) { return g(std::max(lam, 0.0)); }, 0.0, upper_, opts_.chebyshev_tol);
  return series.apply(op_, x);
}

Eigen::MatrixXd Propagator::apply_cos(double t, const Eigen::MatrixXd& x) {
  if (eig_) {
    return apply_function([t](double lam) { return std::cos(t * std::sqrt(lam)); }, x);
  }
  auto it = cos_cache_.find(t);
  if (it == cos_cache_.end()) {
    ChebyshevSeries series = ChebyshevSeries::fit(
        [t](double lam) { return std::cos(t * std::sqrt(std::max(lam, 0.0))); }, 0.0, upper_,
        opts_.chebyshev_tol);
    it = cos_cache_.emplace(t, std::move(series)).first;
  }
  return it->second.apply(op_, x);
}

Eigen::MatrixXd initial_states(const Propagator& prop, const SensorArray& array,
                               const std::function<double(double)>& weight_of_omega) {
  const Grid2D& grid = prop.op().grid();
  Eigen::MatrixXd sources = sensor_windows(grid, array);
  const Eigen::VectorXd cs = sensor_velocities(prop.op().velocity(), array);
  for (int s = 0; s < array.size(); ++s) sources.col(s) /= cs[s];
  return prop.apply_function(
      [&weight_of_omega](double lam) { return weight_of_omega(std::sqrt(lam)); }, sources);
}

Eigen::MatrixXd initial_states(const Propagator& prop, const SensorArray& array,
                               const Pulse& pulse) {
  return initial_states(prop, array,
                        [&pulse](double omega) { return std::sqrt(pulse.spectrum(omega)); });
}

bool violates_nyquist(double tau, const Pulse& pulse) {
  return tau > std::numbers::pi / pulse.essential_frequency();
}

Snapshots propagate_snapshots(Propagator& prop, const Eigen::MatrixXd& u0, double tau, int count,
                              SnapshotMethod method) {
  if (!(tau > 0.0)) throw ConfigError("sampling interval tau must be positive");
  if (count < 1) throw ConfigError("snapshot count must be at least 1");
  const Eigen::Index m = u0.cols();
  Snapshots out;
  out.m = static_cast<int>(m);
  out.u.resize(u0.rows(), m * count);
  out.u.leftCols(m) = u0;
  if (count == 1) return out;

  if (method == SnapshotMethod::Direct) {
    for (int j = 1; j < count; ++j) out.u.middleCols(j * m, m) = prop.apply_cos(j * tau, u0);
    return out;
  }
  out.u.middleCols(m, m) = prop.apply_cos(tau, u0);
  for (int j = 2; j < count; ++j) {
    const Eigen::MatrixXd step = prop.apply_cos(tau, out.u.middleCols((j - 1) * m, m));
    out.u.middleCols(j * m, m) = 2.0 * step - out.u.middleCols((j - 2) * m, m);
  }
  return out;
}

}  // namespace romvel
