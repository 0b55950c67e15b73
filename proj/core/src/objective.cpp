#include "romvel/objective.hpp"

#include <sstream>

#include "romvel/error.hpp"

namespace romvel {

DataSet Acquisition::synthesize(const VelocityModel& v) const { return synthesize(v, n); }

DataSet Acquisition::synthesize(const VelocityModel& v, int n_samples) const {
  return synthesize_dataset(v, sensors, pulse, tau, n_samples, synthesis);
}

void RomResidualSpec::validate() const {
  if (k < 1 || k > reference.n) {
    std::ostringstream os;
    os << "restriction size k = " << k << " outside [1, " << reference.n << "]";
    throw IndexOutOfRange(os.str());
  }
  if (d < 1 || d > k) {
    std::ostringstream os;
    os << "band depth d = " << d << " outside [1, k = " << k << "]";
    throw BandExceedsMatrix(os.str());
  }
}

namespace {
DataSet leading_samples(const DataSet& data, int n) {
  DataSet out;
  out.m = data.m;
  out.n = n;
  out.tau = data.tau;
  out.d.assign(data.d.begin(), data.d.begin() + (2 * n - 1));
  out.ddot.assign(data.ddot.begin(), data.ddot.begin() + (2 * n - 1));
  return out;
}
}  // namespace

Misfit rom_misfit(const DataSet& candidate, const RomResidualSpec& spec) {
  spec.validate();
  if (candidate.m != spec.reference.m) throw ConfigError("candidate and reference sensor counts differ");
  if (candidate.n < spec.k) throw ConfigError("candidate data too short for the restriction");
  OperatorRom rom;
  try {
    rom = build_rom(candidate.n == spec.k ? candidate : leading_samples(candidate, spec.k));
  } catch (const MassNotSPD&) {
    return Misfit::infeasible();
  }
  const Eigen::MatrixXd diff = rom.a_rom - restrict_rom(spec.reference, spec.k);
  Misfit out;
  out.residual = rest_dk(diff, spec.reference.m, spec.d);
  out.value = out.residual.squaredNorm();
  return out;
}

Misfit rom_objective(const VelocityModel& v, const RomResidualSpec& spec, const Acquisition& acq) {
  spec.validate();
  return rom_misfit(acq.synthesize(v, spec.k), spec);
}

Misfit fwi_misfit(const DataSet& candidate, const DataSet& reference, int last_sample) {
  if (candidate.m != reference.m) throw ConfigError("candidate and reference sensor counts differ");
  const int available = std::min(candidate.samples(), reference.samples());
  const int last = last_sample < 0 ? reference.samples() - 1 : last_sample;
  if (last >= available) throw ConfigError("FWI sample range exceeds the available data");
  const int m = reference.m;
  Misfit out;
  out.residual.resize(fwi_residual_length(m, last + 1));
  Eigen::Index pos = 0;
  for (int j = 0; j <= last; ++j) {
    const Eigen::VectorXd part = triu_vec(candidate.d[static_cast<std::size_t>(j)] -
                                          reference.d[static_cast<std::size_t>(j)]);
    out.residual.segment(pos, part.size()) = part;
    pos += part.size();
  }
  out.value = out.residual.squaredNorm();
  return out;
}

Misfit fwi_objective(const VelocityModel& v, const DataSet& reference, const Acquisition& acq,
                     int last_sample) {
  const int last = last_sample < 0 ? reference.samples() - 1 : last_sample;
  // Samples 0..last need n' with 2n' - 2 >= last.
  const int n_needed = last / 2 + 1;
  return fwi_misfit(acq.synthesize(v, n_needed), reference, last);
}

Eigen::Index rom_residual_length(int m, int k, int d) { return rest_dk_length(m, k, d); }

Eigen::Index fwi_residual_length(int m, int samples) {
  return static_cast<Eigen::Index>(samples) * m * (m + 1) / 2;
}

}  // namespace romvel
