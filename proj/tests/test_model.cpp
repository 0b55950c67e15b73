#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "romvel/error.hpp"
#include "romvel/model_io.hpp"
#include "romvel/parametrization.hpp"
#include "support.hpp"

using namespace romvel;

TEST_CASE("camembert values at reference points") {
  const Grid2D g = Grid2D::covering(2000, 2500, 81, 101);
  const VelocityModel v = make_camembert_model(g);
  CHECK(v.nearest(1000, 1000) == 4000.0);
  CHECK(v.nearest(0, 0) == 3000.0);
  // (1 km, 1.6 km) lies exactly on the circle: the disk is closed.
  CHECK(v.nearest(1000, 1600) == 4000.0);
  CHECK(v.nearest(1000, 1625) == 3000.0);
}

TEST_CASE("camembert membership matches a direct distance test") {
  const Grid2D g = Grid2D::covering(2000, 2500, 41, 51);
  const VelocityModel v = make_camembert_model(g);
  for (int ix = 0; ix < g.nx; ++ix)
    for (int iz = 0; iz < g.nz; ++iz) {
      const double r = std::hypot(g.x(ix) - 1000.0, g.z(iz) - 1000.0);
      CHECK(v.at(ix, iz) == (r <= 600.0 ? 4000.0 : 3000.0));
    }
}

TEST_CASE("camembert needs room for the disk") {
  const Grid2D g = Grid2D::covering(1500, 1500, 31, 31);
  CHECK_THROWS_AS(make_camembert_model(g), DomainTooSmall);
}

TEST_CASE("two-layer model") {
  const Grid2D g = Grid2D::covering(3000, 2500, 61, 51);
  SUBCASE("default contrast gives 1500 over 3000") {
    const VelocityModel v = make_two_layer_model({}, g);
    CHECK(v.min() == 1500.0);
    CHECK(v.max() == 3000.0);
    CHECK(v.nearest(0, 0) == 1500.0);
    CHECK(v.nearest(0, 2500) == 3000.0);
  }
  SUBCASE("unit contrast is constant") {
    TwoLayerSpec s;
    s.contrast = 1.0;
    const VelocityModel v = make_two_layer_model(s, g);
    CHECK(v.min() == 1500.0);
    CHECK(v.max() == 1500.0);
  }
  SUBCASE("node-by-node half-space membership") {
    TwoLayerSpec s;
    s.depth_left = 1000.0;
    s.contrast = 1.5;
    const VelocityModel v = make_two_layer_model(s, g);
    for (int ix = 0; ix < g.nx; ++ix) {
      const double interface = 1000.0 + 400.0 * g.x(ix) / 3000.0;
      for (int iz = 0; iz < g.nz; ++iz)
        CHECK(v.at(ix, iz) == (g.z(iz) > interface ? 2250.0 : 1500.0));
    }
  }
}

TEST_CASE("layered model with a fault") {
  const Grid2D g = Grid2D::covering(1000, 600, 51, 31);
  LayeredSpec s;
  s.top_velocity = 1500;
  s.interfaces = {{200, 200, 2000}, {400, 400, 2500}};
  s.fault_x = 500;
  s.fault_throw = 100;
  const VelocityModel v = make_layered_model(s, g);
  CHECK(v.nearest(100, 300) == 2000.0);
  CHECK(v.nearest(800, 260) == 1500.0);
  CHECK(v.nearest(800, 320) == 2000.0);
  CHECK(v.nearest(100, 500) == 2500.0);
  CHECK(v.nearest(800, 480) == 2000.0);
}

TEST_CASE("velocity validation") {
  const Grid2D g = Grid2D::covering(100, 100, 5, 5);
  Eigen::VectorXd c = Eigen::VectorXd::Constant(25, 1000.0);
  c[7] = 0.0;
  CHECK_THROWS_AS(VelocityModel(g, c), NonPositiveVelocity);
  c[7] = std::nan("");
  CHECK_THROWS_AS(VelocityModel(g, c), NonPositiveVelocity);
}

TEST_CASE("parametrization evaluation") {
  const Grid2D g = Grid2D::covering(1000, 1000, 41, 41);
  const VelocityModel bg = VelocityModel::constant(g, 2000.0);

  SUBCASE("zero coefficients reproduce the background") {
    const Parametrization p(bg, make_bump_lattice(g, 4, 4));
    CHECK(p.evaluate(Eigen::VectorXd::Zero(16)).values() == bg.values());
  }
  SUBCASE("single bump at its centre") {
    const Parametrization p(bg, {{500, 500, 100, 1.0}});
    Eigen::VectorXd eta(1);
    eta << 100.0;
    CHECK(p.evaluate(eta).nearest(500, 500) == doctest::Approx(2100.0).epsilon(1e-14));
  }
  SUBCASE("linear in the coefficients above the floor") {
    const Parametrization p(bg, make_bump_lattice(g, 3, 3));
    const Eigen::VectorXd e1 = test::random_matrix(9, 1, 1) * 50.0;
    const Eigen::VectorXd e2 = test::random_matrix(9, 1, 2) * 50.0;
    const Eigen::VectorXd lhs = p.evaluate(2.0 * e1 - 0.5 * e2).values() - bg.values();
    const Eigen::VectorXd rhs =
        2.0 * (p.evaluate(e1).values() - bg.values()) - 0.5 * (p.evaluate(e2).values() - bg.values());
    CHECK((lhs - rhs).norm() <= 1e-10 * rhs.norm());
  }
  SUBCASE("clamp floor and strict mode") {
    const Parametrization p(bg, {{500, 500, 100, 1.0}});
    Eigen::VectorXd eta(1);
    eta << -5000.0;
    CHECK(p.evaluate(eta).min() == 300.0);
    EvaluateOptions strict;
    strict.clamp = false;
    CHECK_THROWS_AS(p.evaluate(eta, strict), NonPositiveVelocity);
  }
  SUBCASE("projection recovers in-space coefficients") {
    const Parametrization p(bg, make_bump_lattice(g, 3, 3));
    const Eigen::VectorXd eta = test::random_matrix(9, 1, 3) * 40.0;
    CHECK((p.project(p.evaluate(eta)) - eta).norm() <= 1e-8 * eta.norm());
  }
}

TEST_CASE("bump lattice") {
  const Grid2D g = Grid2D::covering(2000, 2500, 81, 101);
  const auto basis = make_bump_lattice(g, 20, 20);
  CHECK(basis.size() == 400);
  // Cell-centred, x-major ordering, width 1.5 x mean spacing.
  CHECK(basis[0].x == doctest::Approx(50.0));
  CHECK(basis[0].z == doctest::Approx(62.5));
  CHECK(basis[1].z == doctest::Approx(187.5));
  CHECK(basis[20].x == doctest::Approx(150.0));
  CHECK(basis[0].width == doctest::Approx(1.5 * 112.5));
}

TEST_CASE("bump decays within six widths") {
  const GaussianBump b{0.0, 0.0, 80.0, 3.0};
  CHECK(b(0.0, 0.0) == 3.0);
  CHECK(b(6.0 * 80.0, 0.0) < 1e-6 * 3.0);
  CHECK(b(0.0, -6.0 * 80.0) < 1e-6 * 3.0);
}

TEST_CASE("velocity file round trip") {
  const VelocityModel v = test::small_model(11, 13, {Boundary::Neumann, Boundary::Dirichlet,
                                                     Boundary::Dirichlet, Boundary::Neumann});
  const auto stem = std::filesystem::temp_directory_path() / "romvel_test_velocity";
  write_velocity(v, stem);
  const VelocityModel back = read_velocity(stem);
  CHECK(back.grid() == v.grid());
  CHECK(back.bc() == v.bc());
  CHECK(back.values() == v.values());
}
