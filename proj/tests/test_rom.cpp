#include <doctest.h>

#include <filesystem>

#include <Eigen/Dense>

#include "romvel/error.hpp"
#include "romvel/rom.hpp"
#include "support.hpp"

using namespace romvel;

TEST_CASE("Cholesky of a 2x2 mass matrix") {
  Eigen::MatrixXd m(2, 2);
  m << 4, 2, 2, 5;
  Eigen::MatrixXd expected(2, 2);
  expected << 2, 1, 0, 2;
  CHECK(block_cholesky(m, 1) == expected);
  CHECK((block_cholesky(m, 2) - expected).norm() < 1e-15);
}

TEST_CASE("Cholesky reports the failing block") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(6, 6);
  m(4, 4) = -1.0;
  try {
    block_cholesky(m, 2);
    FAIL("expected MassNotSPD");
  } catch (const MassNotSPD& e) {
    CHECK(e.block() == 2);
  }
}

TEST_CASE("jitter rescues a semidefinite mass matrix") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(3, 3);
  m(2, 2) = 0.0;
  CHECK_THROWS_AS(block_cholesky(m, 1), MassNotSPD);
  CholeskyOptions o;
  o.jitter = true;
  const Eigen::MatrixXd r = block_cholesky(m, 1, o);
  CHECK(r(2, 2) > 0.0);
}

TEST_CASE("band extraction") {
  CHECK(rest_dk_length(3, 2, 1) == 15);
  CHECK(rest_dk_length(2, 3, 3) == 21);
  Eigen::MatrixXd x(4, 4);
  x << 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16;
  Eigen::VectorXd expected(7);
  expected << 1, 2, 6, 7, 11, 12, 16;
  CHECK(rest_dk(x, 2, 1) == expected);
  CHECK(rest_dk(x, 1, 1) == x.diagonal());
  CHECK(triu_vec(x).size() == 10);
  CHECK_THROWS_AS(rest_dk(x, 2, 3), BandExceedsMatrix);
}

namespace {

struct RomFixture {
  VelocityModel v = test::small_model(17, 21);
  SensorArray arr = make_line_array(v.grid(), 2, 100, 0, 1000);
  Pulse pulse = Pulse::standard();
  double tau = pulse.nyquist_tau();
  int n = 6;
  DataSet data;
  Propagator prop;
  Eigen::MatrixXd u0;

  RomFixture() : prop(WaveOperator(v), spectral()) {
    u0 = initial_states(prop, arr, pulse);
    data = synthesize_dataset(prop, u0, tau, n);
  }

  static PropagationOptions spectral() {
    PropagationOptions o;
    o.path = PropagationPath::Spectral;
    return o;
  }
};

}  // namespace

TEST_CASE("ROM factorization contract") {
  RomFixture f;
  const OperatorRom rom = build_rom(f.data);
  const Eigen::MatrixXd mass = assemble_mass(f.data);
  CHECK(test::rel(rom.r.transpose() * rom.r, mass) < 1e-12);
  CHECK(rom.r.isUpperTriangular(0.0));
  // Diagonal blocks carry positive diagonals.
  CHECK((rom.r.diagonal().array() > 0.0).all());
  CHECK(rom.a_rom.rows() == f.n * 2);
}

TEST_CASE("ROM is the Galerkin projection onto the snapshot space") {
  RomFixture f;
  const OperatorRom rom = build_rom(f.data);
  const auto snaps = propagate_snapshots(f.prop, f.u0, f.tau, f.n, SnapshotMethod::Direct);
  const double w = f.v.grid().cell_area();
  // V = U R^{-1} is orthonormal in the weighted inner product.
  const Eigen::MatrixXd vbasis =
      rom.r.transpose().triangularView<Eigen::Lower>().solve(snaps.u.transpose()).transpose();
  const Eigen::MatrixXd gram = w * vbasis.transpose() * vbasis;
  CHECK(test::rel(gram, Eigen::MatrixXd::Identity(gram.rows(), gram.cols())) < 1e-8);
  const Eigen::MatrixXd galerkin = w * vbasis.transpose() * f.prop.op().apply(vbasis);
  CHECK(test::rel(rom.a_rom, galerkin) < 1e-8);
}

TEST_CASE("ROM spectrum lies inside the operator spectrum") {
  RomFixture f;
  const OperatorRom rom = build_rom(f.data);
  const auto& lam = f.prop.spectral()->values;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rom.a_rom, Eigen::EigenvaluesOnly);
  const double slack = 1e-9 * lam.maxCoeff();
  CHECK(es.eigenvalues().minCoeff() >= lam.minCoeff() - slack);
  CHECK(es.eigenvalues().maxCoeff() <= lam.maxCoeff() + slack);
}

TEST_CASE("restriction depends only on the leading samples") {
  RomFixture f;
  const OperatorRom rom = build_rom(f.data);
  for (const int k : {1, 2, 4}) {
    // Samples past 2k-2 are dropped entirely; the leading blocks must not notice.
    DataSet leading = f.data;
    leading.n = k;
    leading.d.resize(leading.samples());
    leading.ddot.resize(leading.samples());
    const OperatorRom other = build_rom(leading);
    CHECK(test::rel(other.a_rom, restrict_rom(rom, k)) < 1e-10);
  }
  CHECK_THROWS_AS(restrict_rom(rom, 0), IndexOutOfRange);
  CHECK_THROWS_AS(restrict_rom(rom, f.n + 1), IndexOutOfRange);
}

TEST_CASE("ROM file round trip") {
  RomFixture f;
  const OperatorRom rom = build_rom(f.data);
  const auto stem = std::filesystem::temp_directory_path() / "romvel_test_rom";
  write_rom(rom, stem);
  const OperatorRom back = read_rom(stem);
  CHECK(back.m == rom.m);
  CHECK(back.n == rom.n);
  CHECK(back.a_rom == rom.a_rom);
  CHECK(back.r == rom.r);
}
