#pragma once

#include <filesystem>
#include <vector>

#include <Eigen/Core>

#include "romvel/dataset.hpp"
#include "romvel/pulse.hpp"
#include "romvel/sensors.hpp"
#include "romvel/velocity_model.hpp"

namespace romvel {

/// Receiver traces M^(r,s)(t_k), t_k = t0 + k dt. samples[k](r, s) is the
/// reading of receiver r for source s.
struct Traces {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<Eigen::MatrixXd> samples;

  int m() const { return samples.empty() ? 0 : static_cast<int>(samples.front().rows()); }
  int count() const { return static_cast<int>(samples.size()); }
  double time(int k) const { return t0 + k * dt; }
  double t_end() const { return time(count() - 1); }
};

/// Leapfrog solution of p_tt - c^2 Lap p = f'(t) theta(x - x_s) from rest at
/// t <= -t_f. The time grid is t_k = (k - k_f) dt with k_f = ceil(t_f / dt),
/// so t = 0 is a grid point. Records receiver integrals on [-k_f dt, T].
/// Throws CflViolation when dt sqrt(lambda_max bound) >= 2.
Traces synthesize_measurements(const VelocityModel& v, const SensorArray& array,
                               const Pulse& pulse, double record_length, double dt);

struct SamplingOptions {
  /// Fraction of the even record tapered to zero before differentiation.
  double taper_fraction = 0.1;
};

/// D(t) = [M(t) + M(-t)] / (c(x_r) c(x_s)); the second derivative comes from a
/// cosine transform of the tapered even extension. tau must be an integer
/// multiple of the trace step. Throws InsufficientRecordLength when
/// (2n-2) tau falls inside the taper or beyond the record.
DataSet symmetrize_and_sample(const Traces& traces, const SensorArray& array,
                              const VelocityModel& v, double tau, int n,
                              const SamplingOptions& opts = {});

/// Second derivative of an even, uniformly sampled signal g(k dt), k = 0..K,
/// via the cosine transform of its even periodic extension, after the taper.
Eigen::VectorXd even_second_derivative(const Eigen::VectorXd& samples, double dt,
                                       double taper_fraction);

/// CSV with columns t,r,s,value (sensors numbered from 1).
void write_traces_csv(const Traces& traces, const std::filesystem::path& path);

}  // namespace romvel
