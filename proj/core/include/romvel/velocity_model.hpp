#pragma once

#include <vector>

#include <Eigen/Core>

#include "romvel/grid.hpp"

namespace romvel {

/// Nodal velocity field (m/s) on a grid together with its boundary conditions.
/// Values are validated on construction: every node must be positive and finite.
class VelocityModel {
 public:
  VelocityModel(Grid2D grid, Eigen::VectorXd c, BoundaryConditions bc = {});

  static VelocityModel constant(const Grid2D& grid, double c, BoundaryConditions bc = {});

  const Grid2D& grid() const { return grid_; }
  const Eigen::VectorXd& values() const { return c_; }
  const BoundaryConditions& bc() const { return bc_; }

  double at(int ix, int iz) const { return c_[static_cast<Eigen::Index>(grid_.index(ix, iz))]; }
  /// Value at the node nearest to (x, z), clamped to the grid.
  double nearest(double x, double z) const;

  double min() const { return c_.minCoeff(); }
  double max() const { return c_.maxCoeff(); }

 private:
  Grid2D grid_;
  Eigen::VectorXd c_;
  BoundaryConditions bc_;
};

struct TwoLayerSpec {
  double depth_left = 1200.0;  // interface depth at the leftmost node (m)
  double contrast = 2.0;       // c_bottom / c_top
  double top_velocity = 1500.0;
  double drop = 400.0;  // interface descent across the full grid width (m)
};

/// Two regions separated by a straight slanted interface. A node is in the
/// bottom layer when its depth is strictly greater than the interface depth.
VelocityModel make_two_layer_model(const TwoLayerSpec& spec, const Grid2D& grid,
                                   BoundaryConditions bc = {});

/// Interface depth of the two-layer model at lateral position x.
double two_layer_interface_depth(const TwoLayerSpec& spec, const Grid2D& grid, double x);

struct CamembertSpec {
  double center_x = 1000.0;
  double center_z = 1000.0;
  double radius = 600.0;
  double inside = 4000.0;
  double outside = 3000.0;
};

/// Disk inclusion in a constant background (closed disk: distance <= radius is inside).
VelocityModel make_camembert_model(const Grid2D& grid, BoundaryConditions bc = {},
                                   const CamembertSpec& spec = {});

/// One straight interface of a layered model: depth at the left and right
/// grid edges, and the velocity of the layer below it.
struct LayerInterface {
  double depth_left = 0.0;
  double depth_right = 0.0;
  double velocity = 0.0;
};

struct LayeredSpec {
  double top_velocity = 1500.0;
  std::vector<LayerInterface> interfaces;  // ordered top to bottom
  // Vertical fault: interfaces right of fault_x are shifted down by fault_throw.
  double fault_x = 0.0;
  double fault_throw = 0.0;
};

/// Stack of dipping layers. A node takes the velocity of the deepest interface
/// lying strictly above it.
VelocityModel make_layered_model(const LayeredSpec& spec, const Grid2D& grid,
                                 BoundaryConditions bc = {});

/// Relative L2 distance ||a - b|| / ||b|| over grid nodes.
double relative_l2_error(const VelocityModel& estimate, const VelocityModel& truth);

}  // namespace romvel
