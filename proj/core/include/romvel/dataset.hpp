#pragma once

#include <filesystem>
#include <vector>

#include <Eigen/Core>

#include "romvel/propagation.hpp"
#include "romvel/pulse.hpp"
#include "romvel/sensors.hpp"
#include "romvel/velocity_model.hpp"

namespace romvel {

/// Even-time data samples D_j = D(j tau) and their second time derivatives,
/// j = 0..2n-2, each an m x m symmetric matrix.
struct DataSet {
  int m = 0;
  int n = 0;
  double tau = 0.0;
  std::vector<Eigen::MatrixXd> d;
  std::vector<Eigen::MatrixXd> ddot;
  bool nyquist_violation = false;

  int samples() const { return 2 * n - 1; }
  /// Checks list lengths and block shapes; throws ConfigError.
  void validate() const;
};

struct SynthesisOptions {
  PropagationOptions propagation;
  /// Average each sample with its transpose.
  bool symmetrize = true;
};

/// D_j = <u_0, u_j> and Ddot_j = -<u_0, A_h u_j>, inner products weighted by
/// hx*hz. The spectral path evaluates every sample directly from the
/// eigendecomposition. The Chebyshev path propagates u_0..u_{n-1} and folds the
/// remaining samples through the cosine product identity.
DataSet synthesize_dataset(const VelocityModel& v, const SensorArray& array, const Pulse& pulse,
                           double tau, int n, const SynthesisOptions& opts = {});

/// Same synthesis from an existing propagator and initial states.
DataSet synthesize_dataset(Propagator& prop, const Eigen::MatrixXd& u0, double tau, int n,
                           bool symmetrize = true);

/// JSON header `<stem>.json` {m, n, tau} plus `<stem>.bin` holding the D blocks
/// followed by the Ddot blocks, little-endian float64, column-major.
void write_dataset(const DataSet& data, const std::filesystem::path& stem);
DataSet read_dataset(const std::filesystem::path& stem);

}  // namespace romvel
