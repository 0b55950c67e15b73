#include "romvel/dataset.hpp"

#include <cmath>
#include <sstream>

#include "detail/binary_io.hpp"
#include "romvel/error.hpp"

namespace romvel {

void DataSet::validate() const {
  if (m < 1 || n < 1) throw ConfigError("data set needs m >= 1 and n >= 1");
  if (!(tau > 0.0)) throw ConfigError("data set tau must be positive");
  const std::size_t expected = static_cast<std::size_t>(samples());
  if (d.size() != expected || ddot.size() != expected) {
    std::ostringstream os;
    os << "data set holds " << d.size() << "/" << ddot.size() << " samples, expected " << expected;
    throw ConfigError(os.str());
  }
  for (std::size_t j = 0; j < expected; ++j) {
    if (d[j].rows() != m || d[j].cols() != m || ddot[j].rows() != m || ddot[j].cols() != m)
      throw ConfigError("data sample has the wrong block shape");
  }
}

namespace {

Eigen::MatrixXd symmetric_part(const Eigen::MatrixXd& x) { return 0.5 * (x + x.transpose()); }

DataSet synthesize_spectral(const Propagator& prop, const Eigen::MatrixXd& u0, double tau, int n,
                            double weight) {
  const SpectralDecomposition& eig = *prop.spectral();
  const Eigen::MatrixXd b = eig.vectors.transpose() * u0;
  DataSet out;
  out.m = static_cast<int>(u0.cols());
  out.n = n;
  out.tau = tau;
  const Eigen::VectorXd omega = eig.values.cwiseMax(0.0).cwiseSqrt();
  for (int j = 0; j <= 2 * n - 2; ++j) {
    const Eigen::ArrayXd cosj = (j * tau * omega.array()).cos();
    const Eigen::MatrixXd wb = (b.array().colwise() * cosj).matrix();
    const Eigen::MatrixXd lwb = (wb.array().colwise() * eig.values.array()).matrix();
    out.d.push_back(weight * (b.transpose() * wb));
    out.ddot.push_back(-weight * (b.transpose() * lwb));
  }
  return out;
}

DataSet synthesize_recurrence(Propagator& prop, const Eigen::MatrixXd& u0, double tau, int n,
                              double weight) {
  // With s_j = <u_0, u_j>: <u_k, u_k> = (s_2k + s_0)/2 and <u_k, u_{k+1}> = (s_2k+1 + s_1)/2,
  // the same identities hold with A inserted since A commutes with cos(t sqrt(A)).
  const WaveOperator& op = prop.op();
  const int m = static_cast<int>(u0.cols());
  const int total = 2 * n - 1;
  DataSet out;
  out.m = m;
  out.n = n;
  out.tau = tau;
  out.d.resize(static_cast<std::size_t>(total));
  out.ddot.resize(static_cast<std::size_t>(total));

  Eigen::MatrixXd prev = u0;
  Eigen::MatrixXd aprev = op.apply(u0);
  const Eigen::MatrixXd d0 = weight * (u0.transpose() * u0);
  const Eigen::MatrixXd s0 = weight * (u0.transpose() * aprev);
  out.d[0] = d0;
  out.ddot[0] = -s0;
  if (total == 1) return out;

  Eigen::MatrixXd cur = prop.apply_cos(tau, u0);
  Eigen::MatrixXd acur = op.apply(cur);
  const Eigen::MatrixXd d1 = weight * (u0.transpose() * cur);
  const Eigen::MatrixXd s1 = weight * (u0.transpose() * acur);
  out.d[1] = d1;
  out.ddot[1] = -s1;
  // cur = u_k, prev = u_{k-1}
  for (int k = 1; k <= n - 1; ++k) {
    const std::size_t even = static_cast<std::size_t>(2 * k);
    out.d[even] = 2.0 * weight * (cur.transpose() * cur) - d0;
    out.ddot[even] = -(2.0 * weight * (cur.transpose() * acur) - s0);
    if (k == n - 1) break;
    Eigen::MatrixXd next = 2.0 * prop.apply_cos(tau, cur) - prev;
    Eigen::MatrixXd anext = op.apply(next);
    const std::size_t odd = even + 1;
    out.d[odd] = 2.0 * weight * (cur.transpose() * next) - d1;
    out.ddot[odd] = -(2.0 * weight * (cur.transpose() * anext) - s1);
    prev = std::move(cur);
    cur = std::move(next);
    acur = std::move(anext);
  }
  return out;
}

}  // namespace

DataSet synthesize_dataset(Propagator& prop, const Eigen::MatrixXd& u0, double tau, int n,
                           bool symmetrize) {
  if (!(tau > 0.0)) throw ConfigError("sampling interval tau must be positive");
  if (n < 1) throw ConfigError("ROM size n must be at least 1");
  const double weight = prop.op().grid().cell_area();
  DataSet out = prop.spectral() ? synthesize_spectral(prop, u0, tau, n, weight)
                                : synthesize_recurrence(prop, u0, tau, n, weight);
  if (symmetrize) {
    for (auto& x : out.d) x = symmetric_part(x);
    for (auto& x : out.ddot) x = symmetric_part(x);
  }
  return out;
}

DataSet synthesize_dataset(const VelocityModel& v, const SensorArray& array, const Pulse& pulse,
                           double tau, int n, const SynthesisOptions& opts) {
  const bool nyquist = violates_nyquist(tau, pulse);
  if (nyquist && opts.propagation.strict_nyquist) {
    std::ostringstream os;
    os << "tau = " << tau << " s exceeds the Nyquist interval for the essential frequency";
    throw NyquistViolation(os.str());
  }
  Propagator prop(WaveOperator(v), opts.propagation);
  const Eigen::MatrixXd u0 = initial_states(prop, array, pulse);
  DataSet out = synthesize_dataset(prop, u0, tau, n, opts.symmetrize);
  out.nyquist_violation = nyquist;
  return out;
}

void write_dataset(const DataSet& data, const std::filesystem::path& stem) {
  data.validate();
  nlohmann::json header = {{"format", "romvel.dataset/1"},
                           {"m", data.m},
                           {"n", data.n},
                           {"tau", data.tau},
                           {"samples", data.samples()},
                           {"layout", "D[0..2n-2] then Ddot[0..2n-2], m*m float64 LE each"}};
  detail::write_json(detail::with_ext(stem, ".json"), header);
  std::ofstream os = detail::open_out(detail::with_ext(stem, ".bin"), true);
  const std::size_t mm = static_cast<std::size_t>(data.m) * static_cast<std::size_t>(data.m);
  for (const auto& x : data.d) detail::write_f64(os, x.data(), mm);
  for (const auto& x : data.ddot) detail::write_f64(os, x.data(), mm);
  if (!os) throw IoError("failed writing data set payload");
}

DataSet read_dataset(const std::filesystem::path& stem) {
  const nlohmann::json header = detail::read_json(detail::with_ext(stem, ".json"));
  DataSet data;
  try {
    data.m = header.at("m").get<int>();
    data.n = header.at("n").get<int>();
    data.tau = header.at("tau").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("data set header: ") + e.what());
  }
  if (data.m < 1 || data.n < 1) throw IoError("data set header has invalid sizes");
  std::ifstream is = detail::open_in(detail::with_ext(stem, ".bin"), true);
  const int total = data.samples();
  const std::size_t mm = static_cast<std::size_t>(data.m) * static_cast<std::size_t>(data.m);
  for (int pass = 0; pass < 2; ++pass) {
    auto& list = pass == 0 ? data.d : data.ddot;
    for (int j = 0; j < total; ++j) {
      Eigen::MatrixXd x(data.m, data.m);
      detail::read_f64(is, x.data(), mm);
      list.push_back(std::move(x));
    }
  }
  data.validate();
  return data;
}

}  // namespace romvel
