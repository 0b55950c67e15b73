#include "romvel/velocity_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "romvel/error.hpp"

namespace romvel {

Grid2D Grid2D::covering(double width, double depth, int nx, int nz, double x0, double z0) {
  if (nx < 3 || nz < 3) throw ConfigError("grid needs at least 3 nodes per axis");
  Grid2D g;
  g.nx = nx;
  g.nz = nz;
  g.hx = width / (nx - 1);
  g.hz = depth / (nz - 1);
  g.x0 = x0;
  g.z0 = z0;
  g.validate();
  return g;
}

void Grid2D::validate() const {
  if (nx < 3 || nz < 3) {
    std::ostringstream os;
    os << "grid needs nx, nz >= 3 (got " << nx << "x" << nz << ")";
    throw ConfigError(os.str());
  }
  if (!(hx > 0.0) || !(hz > 0.0) || !std::isfinite(hx) || !std::isfinite(hz))
    throw ConfigError("grid spacings must be positive and finite");
  if (!std::isfinite(x0) || !std::isfinite(z0)) throw ConfigError("grid origin must be finite");
}

std::string to_string(Boundary b) { return b == Boundary::Dirichlet ? "dirichlet" : "neumann"; }

Boundary boundary_from_string(const std::string& s) {
  if (s == "dirichlet" || s == "Dirichlet" || s == "D") return Boundary::Dirichlet;
  if (s == "neumann" || s == "Neumann" || s == "N") return Boundary::Neumann;
  throw ConfigError("unknown boundary condition '" + s + "'");
}

VelocityModel::VelocityModel(Grid2D grid, Eigen::VectorXd c, BoundaryConditions bc)
    : grid_(grid), c_(std::move(c)), bc_(bc) {
  grid_.validate();
  if (static_cast<std::size_t>(c_.size()) != grid_.size())
    throw ConfigError("velocity vector length does not match grid size");
  for (Eigen::Index i = 0; i < c_.size(); ++i) {
    if (!std::isfinite(c_[i]) || c_[i] <= 0.0) {
      std::ostringstream os;
      os << "velocity at node " << i << " is not positive and finite (" << c_[i] << ")";
      throw NonPositiveVelocity(os.str());
    }
  }
}

VelocityModel VelocityModel::constant(const Grid2D& grid, double c, BoundaryConditions bc) {
  grid.validate();
  return VelocityModel(grid, Eigen::VectorXd::Constant(static_cast<Eigen::Index>(grid.size()), c), bc);
}

double VelocityModel::nearest(double x, double z) const {
  int ix = static_cast<int>(std::lround((x - grid_.x0) / grid_.hx));
  int iz = static_cast<int>(std::lround((z - grid_.z0) / grid_.hz));
  ix = std::clamp(ix, 0, grid_.nx - 1);
  iz = std::clamp(iz, 0, grid_.nz - 1);
  return at(ix, iz);
}

double two_layer_interface_depth(const TwoLayerSpec& spec, const Grid2D& grid, double x) {
  const double width = grid.x_max() - grid.x0;
  return spec.depth_left + spec.drop * (x - grid.x0) / width;
}

VelocityModel make_two_layer_model(const TwoLayerSpec& spec, const Grid2D& grid,
                                   BoundaryConditions bc) {
  grid.validate();
  if (!(spec.depth_left > grid.z0) || !(spec.depth_left < grid.z_max()))
    throw ConfigError("two-layer interface depth must lie strictly inside the domain");
  if (!(spec.contrast > 0.0)) throw ConfigError("two-layer contrast must be positive");
  if (!(spec.top_velocity > 0.0)) throw ConfigError("two-layer top velocity must be positive");

  Eigen::VectorXd c(static_cast<Eigen::Index>(grid.size()));
  const double bottom = spec.contrast * spec.top_velocity;
  for (int ix = 0; ix < grid.nx; ++ix) {
    const double interface = two_layer_interface_depth(spec, grid, grid.x(ix));
    for (int iz = 0; iz < grid.nz; ++iz) {
      c[static_cast<Eigen::Index>(grid.index(ix, iz))] =
          grid.z(iz) > interface ? bottom : spec.top_velocity;
    }
  }
  return VelocityModel(grid, std::move(c), bc);
}

VelocityModel make_camembert_model(const Grid2D& grid, BoundaryConditions bc,
                                   const CamembertSpec& spec) {
  grid.validate();
  if (spec.center_x - spec.radius < grid.x0 || spec.center_x + spec.radius > grid.x_max() ||
      spec.center_z - spec.radius < grid.z0 || spec.center_z + spec.radius > grid.z_max())
    throw DomainTooSmall("camembert inclusion does not fit inside the grid");

  Eigen::VectorXd c(static_cast<Eigen::Index>(grid.size()));
  const double r2 = spec.radius * spec.radius;
  for (int ix = 0; ix < grid.nx; ++ix) {
    const double dx = grid.x(ix) - spec.center_x;
    for (int iz = 0; iz < grid.nz; ++iz) {
      const double dz = grid.z(iz) - spec.center_z;
      c[static_cast<Eigen::Index>(grid.index(ix, iz))] =
          dx * dx + dz * dz <= r2 ? spec.inside : spec.outside;
    }
  }
  return VelocityModel(grid, std::move(c), bc);
}

VelocityModel make_layered_model(const LayeredSpec& spec, const Grid2D& grid,
                                 BoundaryConditions bc) {
  grid.validate();
  if (!(spec.top_velocity > 0.0)) throw NonPositiveVelocity("layered model top velocity must be positive");
  for (const auto& layer : spec.interfaces)
    if (!(layer.velocity > 0.0)) throw NonPositiveVelocity("layered model velocities must be positive");
  const double width = grid.x_max() - grid.x0;
  Eigen::VectorXd c(static_cast<Eigen::Index>(grid.size()));
  for (int ix = 0; ix < grid.nx; ++ix) {
    const double x = grid.x(ix);
    const double s = width > 0.0 ? (x - grid.x0) / width : 0.0;
    const double shift = spec.fault_throw != 0.0 && x > spec.fault_x ? spec.fault_throw : 0.0;
    for (int iz = 0; iz < grid.nz; ++iz) {
      const double z = grid.z(iz);
      double value = spec.top_velocity;
      for (const auto& layer : spec.interfaces) {
        const double depth = layer.depth_left + s * (layer.depth_right - layer.depth_left) + shift;
        if (z > depth) value = layer.velocity;
      }
      c[static_cast<Eigen::Index>(grid.index(ix, iz))] = value;
    }
  }
  return VelocityModel(grid, std::move(c), bc);
}

double relative_l2_error(const VelocityModel& estimate, const VelocityModel& truth) {
  if (!(estimate.grid() == truth.grid())) throw ConfigError("grid mismatch in velocity comparison");
  return (estimate.values() - truth.values()).norm() / truth.values().norm();
}

}  // namespace romvel
