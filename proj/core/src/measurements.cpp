#include "romvel/measurements.hpp"

#include <cmath>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <sstream>

#include <fftw3.h>

#include "detail/binary_io.hpp"
#include "romvel/error.hpp"
#include "romvel/wave_operator.hpp"

namespace romvel {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Unnormalized DCT-I of length n (n >= 2), in place.
void dct1(std::vector<double>& x) {
  std::vector<double> out(x.size());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_r2r_1d(static_cast<int>(x.size()), x.data(), out.data(), FFTW_REDFT00,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  x.swap(out);
}
}  // namespace

Traces synthesize_measurements(const VelocityModel& v, const SensorArray& array,
                               const Pulse& pulse, double record_length, double dt) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  if (!(record_length >= 0.0)) throw ConfigError("record length must be non-negative");
  const WaveOperator op(v);
  const double bound = op.spectral_upper_bound();
  if (dt * std::sqrt(bound) >= 2.0) {
    std::ostringstream os;
    os << "time step " << dt << " s violates the leapfrog stability bound "
       << 2.0 / std::sqrt(bound) << " s";
    throw CflViolation(os.str());
  }
  const Grid2D& grid = v.grid();
  const Eigen::MatrixXd theta = sensor_windows(grid, array);
  const double weight = grid.cell_area();

  const int kf = static_cast<int>(std::ceil(pulse.tf() / dt - 1e-9));
  const int kt = static_cast<int>(std::ceil(record_length / dt - 1e-9));
  const int total = kf + kt + 1;

  Traces out;
  out.dt = dt;
  out.t0 = -kf * dt;
  out.samples.reserve(static_cast<std::size_t>(total));

  const Eigen::Index nd = theta.rows();
  const Eigen::Index m = theta.cols();
  Eigen::MatrixXd prev = Eigen::MatrixXd::Zero(nd, m);
  Eigen::MatrixXd cur = Eigen::MatrixXd::Zero(nd, m);
  Eigen::MatrixXd lap;
  const double dt2 = dt * dt;
  for (int k = 0; k < total; ++k) {
    out.samples.push_back(weight * (theta.transpose() * cur));
    if (k + 1 == total) break;
    op.apply_pressure(cur, lap);
    const double src = pulse.derivative(out.time(k));
    prev = 2.0 * cur - prev + dt2 * (lap + src * theta);
    std::swap(prev, cur);
  }
  return out;
}

Eigen::VectorXd even_second_derivative(const Eigen::VectorXd& samples, double dt,
                                       double taper_fraction) {
  const Eigen::Index len = samples.size();
  if (len < 3) throw InsufficientRecordLength("need at least three samples to differentiate");
  if (!(taper_fraction >= 0.0 && taper_fraction < 1.0))
    throw ConfigError("taper fraction must lie in [0, 1)");
  const Eigen::Index big_k = len - 1;
  const double start = (1.0 - taper_fraction) * static_cast<double>(big_k);

  std::vector<double> g(static_cast<std::size_t>(len));
  for (Eigen::Index k = 0; k < len; ++k) {
    double w = 1.0;
    if (taper_fraction > 0.0 && static_cast<double>(k) > start) {
      const double s = (static_cast<double>(k) - start) / (static_cast<double>(big_k) - start);
      w = 0.5 * (1.0 + std::cos(std::numbers::pi * s));
    }
    g[static_cast<std::size_t>(k)] = w * samples[k];
  }
  dct1(g);
  const double base = std::numbers::pi / (static_cast<double>(big_k) * dt);
  for (Eigen::Index q = 0; q < len; ++q) {
    const double w = base * static_cast<double>(q);
    g[static_cast<std::size_t>(q)] *= -w * w;
  }
  dct1(g);
  Eigen::VectorXd out(len);
  for (Eigen::Index k = 0; k < len; ++k)
    out[k] = g[static_cast<std::size_t>(k)] / (2.0 * static_cast<double>(big_k));
  return out;
}

DataSet symmetrize_and_sample(const Traces& traces, const SensorArray& array,
                              const VelocityModel& v, double tau, int n,
                              const SamplingOptions& opts) {
  if (n < 1) throw ConfigError("ROM size n must be at least 1");
  if (traces.count() == 0) throw InsufficientRecordLength("no trace samples");
  const double ratio = tau / traces.dt;
  const int stride = static_cast<int>(std::lround(ratio));
  if (stride < 1 || std::abs(ratio - stride) > 1e-9 * ratio)
    throw ConfigError("tau must be an integer multiple of the trace time step");
  const int k0 = static_cast<int>(std::lround(-traces.t0 / traces.dt));
  if (std::abs(traces.time(k0)) > 1e-9 * traces.dt)
    throw ConfigError("trace time grid does not contain t = 0");

  const int positive = traces.count() - 1 - k0;  // samples strictly after t = 0
  const int last_needed = (2 * n - 2) * stride;
  const double usable = (1.0 - opts.taper_fraction) * positive;
  if (positive < 2 || static_cast<double>(last_needed) > usable) {
    std::ostringstream os;
    os << "record reaches " << traces.t_end() << " s but sampling to " << (2 * n - 2) * tau
       << " s needs the untapered part of the record to cover it";
    throw InsufficientRecordLength(os.str());
  }

  const int m = traces.m();
  const Eigen::VectorXd cs = sensor_velocities(v, array);
  if (cs.size() != m) throw ConfigError("sensor array does not match the traces");

  DataSet out;
  out.m = m;
  out.n = n;
  out.tau = tau;
  out.d.assign(static_cast<std::size_t>(2 * n - 1), Eigen::MatrixXd::Zero(m, m));
  out.ddot.assign(static_cast<std::size_t>(2 * n - 1), Eigen::MatrixXd::Zero(m, m));

  Eigen::VectorXd even(positive + 1);
  for (int r = 0; r < m; ++r) {
    for (int s = 0; s < m; ++s) {
      const double scale = 1.0 / (cs[r] * cs[s]);
      for (int k = 0; k <= positive; ++k) {
        const double forward = traces.samples[static_cast<std::size_t>(k0 + k)](r, s);
        const double backward = k0 - k >= 0 ? traces.samples[static_cast<std::size_t>(k0 - k)](r, s) : 0.0;
        even[k] = (forward + backward) * scale;
      }
      const Eigen::VectorXd second = even_second_derivative(even, traces.dt, opts.taper_fraction);
      for (int j = 0; j <= 2 * n - 2; ++j) {
        out.d[static_cast<std::size_t>(j)](r, s) = even[j * stride];
        out.ddot[static_cast<std::size_t>(j)](r, s) = second[j * stride];
      }
    }
  }
  for (auto& x : out.d) x = 0.5 * (x + x.transpose()).eval();
  for (auto& x : out.ddot) x = 0.5 * (x + x.transpose()).eval();
  return out;
}

void write_traces_csv(const Traces& traces, const std::filesystem::path& path) {
  std::ofstream os = detail::open_out(path, false);
  os << "t,r,s,value\n" << std::setprecision(17);
  for (int k = 0; k < traces.count(); ++k) {
    const auto& x = traces.samples[static_cast<std::size_t>(k)];
    for (int r = 0; r < x.rows(); ++r)
      for (int s = 0; s < x.cols(); ++s)
        os << traces.time(k) << ',' << r + 1 << ',' << s + 1 << ',' << x(r, s) << '\n';
  }
  if (!os) throw IoError("failed writing traces CSV");
}

}  // namespace romvel
