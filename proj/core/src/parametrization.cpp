#include "romvel/parametrization.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "romvel/error.hpp"

namespace romvel {

double GaussianBump::operator()(double px, double pz) const {
  const double dx = px - x;
  const double dz = pz - z;
  return amplitude * std::exp(-(dx * dx + dz * dz) / (width * width));
}

Parametrization::Parametrization(VelocityModel background, std::vector<GaussianBump> basis)
    : background_(std::move(background)), basis_(std::move(basis)) {
  if (basis_.empty()) throw ConfigError("parametrization needs at least one basis function");
  const Grid2D& g = background_.grid();
  sampled_.reserve(basis_.size());
  for (std::size_t l = 0; l < basis_.size(); ++l) {
    const GaussianBump& b = basis_[l];
    if (!g.contains(b.x, b.z)) {
      std::ostringstream os;
      os << "basis function " << l << " centred outside the domain at (" << b.x << ", " << b.z
         << ")";
      throw ConfigError(os.str());
    }
    if (!(b.width > 0.0)) throw ConfigError("basis width must be positive");
    Eigen::VectorXd phi(static_cast<Eigen::Index>(g.size()));
    for (int ix = 0; ix < g.nx; ++ix)
      for (int iz = 0; iz < g.nz; ++iz)
        phi[static_cast<Eigen::Index>(g.index(ix, iz))] = b(g.x(ix), g.z(iz));
    sampled_.push_back(std::move(phi));
  }
}

Eigen::VectorXd Parametrization::perturbation(const Eigen::VectorXd& eta) const {
  if (eta.size() != size()) {
    std::ostringstream os;
    os << "coefficient vector has length " << eta.size() << ", expected " << size();
    throw ConfigError(os.str());
  }
  Eigen::VectorXd dv = Eigen::VectorXd::Zero(background_.values().size());
  for (int l = 0; l < size(); ++l) {
    if (eta[l] != 0.0) dv.noalias() += eta[l] * sampled_[static_cast<std::size_t>(l)];
  }
  return dv;
}

VelocityModel Parametrization::evaluate(const Eigen::VectorXd& eta,
                                        const EvaluateOptions& opts) const {
  Eigen::VectorXd c = background_.values() + perturbation(eta);
  if (opts.clamp) {
    if (!(opts.floor > 0.0)) throw ConfigError("velocity clamp floor must be positive");
    c = c.cwiseMax(opts.floor);
  } else if (!(c.array() > 0.0).all()) {
    throw NonPositiveVelocity("parametrized velocity is non-positive and clamping is disabled");
  }
  return VelocityModel(background_.grid(), std::move(c), background_.bc());
}

Eigen::VectorXd Parametrization::project(const VelocityModel& target) const {
  if (!(target.grid() == background_.grid())) throw ConfigError("grid mismatch in projection");
  Eigen::MatrixXd basis(background_.values().size(), size());
  for (int l = 0; l < size(); ++l) basis.col(l) = sampled_[static_cast<std::size_t>(l)];
  const Eigen::VectorXd rhs = target.values() - background_.values();
  return basis.colPivHouseholderQr().solve(rhs);
}

std::vector<GaussianBump> make_bump_lattice(const LatticeSpec& spec) {
  if (spec.nbx < 1 || spec.nbz < 1) throw ConfigError("bump lattice needs at least one cell");
  const double dx = (spec.x_max - spec.x_min) / spec.nbx;
  const double dz = (spec.z_max - spec.z_min) / spec.nbz;
  if (!(dx > 0.0) || !(dz > 0.0)) throw ConfigError("bump lattice extent must be non-empty");
  const double width = spec.width.value_or(spec.width_factor * 0.5 * (dx + dz));
  std::vector<GaussianBump> bumps;
  bumps.reserve(static_cast<std::size_t>(spec.nbx * spec.nbz));
  for (int i = 0; i < spec.nbx; ++i)
    for (int k = 0; k < spec.nbz; ++k)
      bumps.push_back({spec.x_min + (i + 0.5) * dx, spec.z_min + (k + 0.5) * dz, width,
                       spec.amplitude});
  return bumps;
}

std::vector<GaussianBump> make_bump_lattice(const Grid2D& grid, int nbx, int nbz,
                                            double width_factor, double amplitude) {
  LatticeSpec spec;
  spec.nbx = nbx;
  spec.nbz = nbz;
  spec.x_min = grid.x0;
  spec.x_max = grid.x_max();
  spec.z_min = grid.z0;
  spec.z_max = grid.z_max();
  spec.width_factor = width_factor;
  spec.amplitude = amplitude;
  return make_bump_lattice(spec);
}

}  // namespace romvel
