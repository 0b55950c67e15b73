#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "romvel/velocity_model.hpp"

namespace romvel {

/// Isotropic Gaussian bump amplitude * exp(-|x - center|^2 / width^2).
struct GaussianBump {
  double x = 0.0;
  double z = 0.0;
  double width = 1.0;
  double amplitude = 1.0;

  double operator()(double px, double pz) const;
};

struct EvaluateOptions {
  bool clamp = true;
  double floor = 300.0;  // c_min (m/s)
};

/// Search space v(x; eta) = c_o(x) + sum_l eta_l * phi_l(x).
class Parametrization {
 public:
  Parametrization(VelocityModel background, std::vector<GaussianBump> basis);

  const VelocityModel& background() const { return background_; }
  const std::vector<GaussianBump>& basis() const { return basis_; }
  int size() const { return static_cast<int>(basis_.size()); }

  /// Nodal values of phi_l on the background grid.
  const Eigen::VectorXd& basis_values(int l) const { return sampled_[static_cast<std::size_t>(l)]; }

  /// Perturbation sum_l eta_l * phi_l(x) on the background grid.
  Eigen::VectorXd perturbation(const Eigen::VectorXd& eta) const;

  VelocityModel evaluate(const Eigen::VectorXd& eta, const EvaluateOptions& opts = {}) const;

  /// Least-squares coefficients whose perturbation best matches `target - c_o`.
  /// Used for building in-space references and for diagnostics.
  Eigen::VectorXd project(const VelocityModel& target) const;

 private:
  VelocityModel background_;
  std::vector<GaussianBump> basis_;
  std::vector<Eigen::VectorXd> sampled_;
};

struct LatticeSpec {
  int nbx = 10;
  int nbz = 10;
  double x_min = 0.0;
  double x_max = 1.0;
  double z_min = 0.0;
  double z_max = 1.0;
  double width_factor = 1.5;  // width as a multiple of the mean lattice spacing
  double amplitude = 1.0;
  std::optional<double> width;  // explicit width overrides width_factor
};

/// Bumps centred on the cells of an nbx x nbz lattice over the given extent,
/// ordered x-major (l = ibx*nbz + ibz).
std::vector<GaussianBump> make_bump_lattice(const LatticeSpec& spec);

/// Convenience: a lattice spanning the grid's full extent.
std::vector<GaussianBump> make_bump_lattice(const Grid2D& grid, int nbx, int nbz,
                                            double width_factor = 1.5, double amplitude = 1.0);

}  // namespace romvel
