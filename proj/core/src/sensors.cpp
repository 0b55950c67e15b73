#include "romvel/sensors.hpp"

#include <cmath>
#include <sstream>

#include "romvel/error.hpp"

namespace romvel {

void SensorArray::validate(const Grid2D& grid) const {
  if (positions.empty()) throw ConfigError("sensor array is empty");
  if (theta_width < 0.0) throw ConfigError("sensor window width must be non-negative");
  for (std::size_t s = 0; s < positions.size(); ++s) {
    if (!grid.contains(positions[s].x, positions[s].z)) {
      std::ostringstream os;
      os << "sensor " << s << " at (" << positions[s].x << ", " << positions[s].z
         << ") lies outside the grid";
      throw ConfigError(os.str());
    }
  }
}

SensorArray make_line_array(const Grid2D& grid, int m, double depth, double x_min, double x_max,
                            double theta_width) {
  if (m < 1) throw ConfigError("sensor line needs at least one sensor");
  SensorArray arr;
  arr.theta_width = theta_width;
  const double seg = (x_max - x_min) / m;
  const double zs = grid.z0 + std::round((depth - grid.z0) / grid.hz) * grid.hz;
  for (int s = 0; s < m; ++s) {
    const double x = x_min + (s + 0.5) * seg;
    arr.positions.push_back({grid.x0 + std::round((x - grid.x0) / grid.hx) * grid.hx, zs});
  }
  arr.validate(grid);
  return arr;
}

Eigen::MatrixXd sensor_windows(const Grid2D& grid, const SensorArray& array) {
  array.validate(grid);
  const double width = array.theta_width > 0.0 ? array.theta_width : std::sqrt(grid.hx * grid.hz);
  const double cutoff2 = 16.0 * width * width;
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(grid.size()), array.size());
  for (int s = 0; s < array.size(); ++s) {
    const SensorPosition& p = array.positions[static_cast<std::size_t>(s)];
    const int ix_lo = std::max(0, static_cast<int>(std::floor((p.x - 4 * width - grid.x0) / grid.hx)));
    const int ix_hi = std::min(grid.nx - 1, static_cast<int>(std::ceil((p.x + 4 * width - grid.x0) / grid.hx)));
    const int iz_lo = std::max(0, static_cast<int>(std::floor((p.z - 4 * width - grid.z0) / grid.hz)));
    const int iz_hi = std::min(grid.nz - 1, static_cast<int>(std::ceil((p.z + 4 * width - grid.z0) / grid.hz)));
    double mass = 0.0;
    for (int ix = ix_lo; ix <= ix_hi; ++ix) {
      for (int iz = iz_lo; iz <= iz_hi; ++iz) {
        const double dx = grid.x(ix) - p.x;
        const double dz = grid.z(iz) - p.z;
        const double r2 = dx * dx + dz * dz;
        if (r2 > cutoff2) continue;
        const double w = std::exp(-0.5 * r2 / (width * width));
        theta(static_cast<Eigen::Index>(grid.index(ix, iz)), s) = w;
        mass += w;
      }
    }
    theta.col(s) /= mass * grid.cell_area();
  }
  return theta;
}

Eigen::VectorXd sensor_velocities(const VelocityModel& v, const SensorArray& array) {
  Eigen::VectorXd c(array.size());
  for (int s = 0; s < array.size(); ++s) {
    const SensorPosition& p = array.positions[static_cast<std::size_t>(s)];
    c[s] = v.nearest(p.x, p.z);
  }
  return c;
}

}  // namespace romvel
