#pragma once

#include <filesystem>

#include <nlohmann/json_fwd.hpp>

#include "romvel/parametrization.hpp"
#include "romvel/velocity_model.hpp"

namespace romvel {

/// `<stem>.bin` holds nx*nz little-endian float64 in storage order (z fastest);
/// `<stem>.json` holds {nx, nz, hx, hz, x0, z0, bc}.
void write_velocity(const VelocityModel& v, const std::filesystem::path& stem);
VelocityModel read_velocity(const std::filesystem::path& stem);

nlohmann::json grid_to_json(const Grid2D& g);
Grid2D grid_from_json(const nlohmann::json& j);
nlohmann::json bc_to_json(const BoundaryConditions& bc);
BoundaryConditions bc_from_json(const nlohmann::json& j);

/// Basis and coefficients only; the background is stored separately as a
/// velocity file referenced by `background` (relative to the JSON file).
nlohmann::json parametrization_to_json(const Parametrization& p, const Eigen::VectorXd& eta);
std::vector<GaussianBump> basis_from_json(const nlohmann::json& j);
Eigen::VectorXd eta_from_json(const nlohmann::json& j);

}  // namespace romvel
