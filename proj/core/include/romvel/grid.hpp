#pragma once

#include <array>
#include <cstddef>
#include <string>

namespace romvel {

/// Uniform 2D node grid. Node (ix, iz) sits at (x0 + ix*hx, z0 + iz*hz);
/// z is depth. Storage everywhere is z-fastest: index = ix*nz + iz.
struct Grid2D {
  int nx = 0;
  int nz = 0;
  double hx = 0.0;
  double hz = 0.0;
  double x0 = 0.0;
  double z0 = 0.0;

  /// Grid with nodes at both ends of [x0, x0+width] x [z0, z0+depth].
  static Grid2D covering(double width, double depth, int nx, int nz, double x0 = 0.0,
                         double z0 = 0.0);

  void validate() const;

  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(nz); }
  std::size_t index(int ix, int iz) const {
    return static_cast<std::size_t>(ix) * static_cast<std::size_t>(nz) + static_cast<std::size_t>(iz);
  }
  double x(int ix) const { return x0 + ix * hx; }
  double z(int iz) const { return z0 + iz * hz; }
  double x_max() const { return x0 + (nx - 1) * hx; }
  double z_max() const { return z0 + (nz - 1) * hz; }
  /// Quadrature weight of one node.
  double cell_area() const { return hx * hz; }
  bool contains(double px, double pz) const {
    return px >= x0 && px <= x_max() && pz >= z0 && pz <= z_max();
  }

  bool operator==(const Grid2D&) const = default;
};

enum class Boundary { Dirichlet, Neumann };

/// Homogeneous boundary condition per side. The Dirichlet wall sits one
/// spacing outside the outermost node; the Neumann wall half a spacing out.
struct BoundaryConditions {
  Boundary left = Boundary::Dirichlet;
  Boundary right = Boundary::Dirichlet;
  Boundary top = Boundary::Dirichlet;
  Boundary bottom = Boundary::Dirichlet;

  static BoundaryConditions all(Boundary b) { return {b, b, b, b}; }

  bool operator==(const BoundaryConditions&) const = default;
};

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

}  // namespace romvel
