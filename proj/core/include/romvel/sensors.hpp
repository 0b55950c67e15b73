#pragma once

#include <vector>

#include <Eigen/Core>

#include "romvel/velocity_model.hpp"

namespace romvel {

struct SensorPosition {
  double x = 0.0;
  double z = 0.0;
};

/// Identical sensors: every sensor uses the same window theta, a Gaussian of
/// standard deviation `theta_width` truncated at four widths and normalized
/// to unit discrete integral.
struct SensorArray {
  std::vector<SensorPosition> positions;
  double theta_width = 0.0;  // metres; 0 means one grid spacing

  int size() const { return static_cast<int>(positions.size()); }
  void validate(const Grid2D& grid) const;
};

/// Evenly spaced horizontal line at depth `depth`, sensors at the centres of
/// m equal segments of [x_min, x_max], snapped to the nearest node.
SensorArray make_line_array(const Grid2D& grid, int m, double depth, double x_min,
                            double x_max, double theta_width = 0.0);

/// Columns theta(x - x_s) sampled on the grid (n_dof x m).
Eigen::MatrixXd sensor_windows(const Grid2D& grid, const SensorArray& array);

/// c(x_s) per sensor, read at the nearest node.
Eigen::VectorXd sensor_velocities(const VelocityModel& v, const SensorArray& array);

}  // namespace romvel
