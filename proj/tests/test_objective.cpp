#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "romvel/error.hpp"
#include "romvel/objective.hpp"
#include "support.hpp"

using namespace romvel;

namespace {

Acquisition acquisition(const Grid2D& g, int m, int n) {
  Acquisition a;
  a.sensors = make_line_array(g, m, 100, g.x0, g.x_max());
  a.tau = a.pulse.nyquist_tau();
  a.n = n;
  return a;
}

SensorArray permuted(const SensorArray& a, const std::vector<int>& order) {
  SensorArray out = a;
  for (std::size_t i = 0; i < order.size(); ++i) out.positions[i] = a.positions[static_cast<std::size_t>(order[i])];
  return out;
}

}  // namespace

TEST_CASE("misfits vanish at the data-generating model") {
  const VelocityModel truth = test::small_model(21, 25);
  const Acquisition acq = acquisition(truth.grid(), 3, 5);
  const DataSet ref = acq.synthesize(truth);
  RomResidualSpec spec{5, 5, build_rom(ref)};
  const Misfit rom = rom_objective(truth, spec, acq);
  CHECK(rom.value < 1e-10 * triu_vec(spec.reference.a_rom).squaredNorm());
  double scale = 0.0;
  for (const auto& d : ref.d) scale += triu_vec(d).squaredNorm();
  CHECK(fwi_objective(truth, ref, acq).value < 1e-10 * scale);
}

TEST_CASE("residual lengths") {
  CHECK(rom_residual_length(3, 4, 2) == 6 * 12 - 6 * 5 / 2);
  CHECK(fwi_residual_length(3, 9) == 9 * 6);
  const VelocityModel truth = test::small_model(21, 25);
  const Acquisition acq = acquisition(truth.grid(), 3, 5);
  const DataSet ref = acq.synthesize(truth);
  const VelocityModel other = VelocityModel::constant(truth.grid(), 2100.0, truth.bc());
  CHECK(rom_objective(other, {2, 4, build_rom(ref)}, acq).residual.size() == rom_residual_length(3, 4, 2));
  CHECK(fwi_objective(other, ref, acq).residual.size() == fwi_residual_length(3, 9));
}

TEST_CASE("a wider band never decreases the misfit") {
  const VelocityModel truth = test::small_model(21, 25);
  const Acquisition acq = acquisition(truth.grid(), 2, 5);
  const OperatorRom ref = build_rom(acq.synthesize(truth));
  const VelocityModel other = VelocityModel::constant(truth.grid(), 2100.0, truth.bc());
  const DataSet data = acq.synthesize(other);
  for (int k = 1; k <= 5; ++k) {
    double previous = 0.0;
    for (int d = 1; d <= k; ++d) {
      const double value = rom_misfit(data, {d, k, ref}).value;
      CHECK(value >= previous);
      previous = value;
    }
  }
}

TEST_CASE("full band and full restriction is the whole upper triangle") {
  const VelocityModel truth = test::small_model(21, 25);
  const Acquisition acq = acquisition(truth.grid(), 2, 4);
  const OperatorRom ref = build_rom(acq.synthesize(truth));
  const VelocityModel other = VelocityModel::constant(truth.grid(), 2100.0, truth.bc());
  const OperatorRom cand = build_rom(acq.synthesize(other));
  const double expected = triu_vec(cand.a_rom - ref.a_rom).squaredNorm();
  CHECK(rom_objective(other, {4, 4, ref}, acq).value == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("FWI misfit is invariant under sensor relabeling") {
  const VelocityModel truth = test::small_model(21, 25);
  Acquisition acq = acquisition(truth.grid(), 3, 4);
  const VelocityModel other = VelocityModel::constant(truth.grid(), 2100.0, truth.bc());
  const double base = fwi_objective(other, acq.synthesize(truth), acq).value;
  acq.sensors = permuted(acq.sensors, {2, 0, 1});
  const double relabeled = fwi_objective(other, acq.synthesize(truth), acq).value;
  CHECK(relabeled == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("ROM misfit under sensor relabeling") {
  // Relabeling acts on A_rom through a block-diagonal orthogonal similarity
  // that depends on the data, so the misfit is only approximately invariant.
  const VelocityModel truth = test::small_model(21, 25);
  Acquisition acq = acquisition(truth.grid(), 3, 4);
  const VelocityModel other = VelocityModel::constant(truth.grid(), 2050.0, truth.bc());
  const OperatorRom ref = build_rom(acq.synthesize(truth));
  const double base = rom_objective(other, {4, 4, ref}, acq).value;
  acq.sensors = permuted(acq.sensors, {2, 0, 1});
  const OperatorRom ref_relabeled = build_rom(acq.synthesize(truth));
  const double relabeled = rom_objective(other, {4, 4, ref_relabeled}, acq).value;
  MESSAGE("relative misfit change under relabeling: ", std::abs(relabeled - base) / base);
  CHECK(relabeled > 0.0);
  // The similarity is orthogonal: the ROM spectrum is unchanged.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> a(ref.a_rom, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> b(ref_relabeled.a_rom, Eigen::EigenvaluesOnly);
  CHECK(test::rel(b.eigenvalues(), a.eigenvalues()) < 1e-10);
}

TEST_CASE("FWI misfit varies smoothly under a velocity shift") {
  const Grid2D g = Grid2D::covering(3000, 2500, 61, 51);
  const VelocityModel truth = make_two_layer_model({}, g);
  Acquisition acq = acquisition(g, 4, 6);
  const DataSet ref = acq.synthesize(truth);
  auto at = [&](double s) {
    return fwi_objective(VelocityModel(g, truth.values() * (1.0 + s), truth.bc()), ref, acq).value;
  };
  // Quadratic growth near the minimum: doubling the shift scales the misfit by about four.
  const double ratio = at(0.01) / at(0.005);
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("objective preconditions") {
  const VelocityModel truth = test::small_model(21, 25);
  const Acquisition acq = acquisition(truth.grid(), 2, 3);
  const OperatorRom ref = build_rom(acq.synthesize(truth));
  CHECK_THROWS_AS(rom_objective(truth, {1, 4, ref}, acq), IndexOutOfRange);
  CHECK_THROWS_AS(rom_objective(truth, {3, 2, ref}, acq), BandExceedsMatrix);
}
