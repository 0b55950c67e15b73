#pragma once

#include <limits>

#include <Eigen/Core>

#include "romvel/dataset.hpp"
#include "romvel/rom.hpp"

namespace romvel {

/// Everything that must match between the measured and the modelled data.
struct Acquisition {
  SensorArray sensors;
  Pulse pulse = Pulse::standard();
  double tau = 0.0;
  int n = 0;
  SynthesisOptions synthesis;

  DataSet synthesize(const VelocityModel& v) const;
  /// Synthesizes only the first 2n'-1 samples.
  DataSet synthesize(const VelocityModel& v, int n_samples) const;
};

struct RomResidualSpec {
  int d = 1;
  int k = 1;
  OperatorRom reference;

  void validate() const;
};

/// Squared norm of a residual vector. An infeasible candidate (its mass
/// matrix is not positive definite) carries value = +inf and an empty residual.
struct Misfit {
  double value = std::numeric_limits<double>::infinity();
  Eigen::VectorXd residual;

  bool feasible() const { return value < std::numeric_limits<double>::infinity(); }
  static Misfit infeasible() { return {}; }
};

/// Rest_{d,k}([A_rom(candidate) - A_rom(reference)]_k). The candidate data may
/// hold any n >= k samples-worth; only its leading blocks are used.
Misfit rom_misfit(const DataSet& candidate, const RomResidualSpec& spec);

/// ROM misfit of a velocity model. Synthesizes 2k-1 samples, which is all the
/// k-th restriction depends on.
Misfit rom_objective(const VelocityModel& v, const RomResidualSpec& spec, const Acquisition& acq);

/// Concatenation of triu_vec(D_j(candidate) - D_j(reference)) for
/// j = 0..last_sample (default: every available sample, 2n-2).
Misfit fwi_misfit(const DataSet& candidate, const DataSet& reference, int last_sample = -1);

Misfit fwi_objective(const VelocityModel& v, const DataSet& reference, const Acquisition& acq,
                     int last_sample = -1);

/// Residual vector lengths.
Eigen::Index rom_residual_length(int m, int k, int d);
Eigen::Index fwi_residual_length(int m, int samples);

}  // namespace romvel
