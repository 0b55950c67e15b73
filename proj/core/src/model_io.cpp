#include "romvel/model_io.hpp"

#include "detail/binary_io.hpp"
#include "romvel/error.hpp"

namespace romvel {

nlohmann::json grid_to_json(const Grid2D& g) {
  return {{"nx", g.nx}, {"nz", g.nz}, {"hx", g.hx}, {"hz", g.hz}, {"x0", g.x0}, {"z0", g.z0}};
}

Grid2D grid_from_json(const nlohmann::json& j) {
  Grid2D g;
  try {
    g.nx = j.at("nx").get<int>();
    g.nz = j.at("nz").get<int>();
    g.hx = j.at("hx").get<double>();
    g.hz = j.at("hz").get<double>();
    g.x0 = j.value("x0", 0.0);
    g.z0 = j.value("z0", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
  g.validate();
  return g;
}

nlohmann::json bc_to_json(const BoundaryConditions& bc) {
  return {{"left", to_string(bc.left)},
          {"right", to_string(bc.right)},
          {"top", to_string(bc.top)},
          {"bottom", to_string(bc.bottom)}};
}

BoundaryConditions bc_from_json(const nlohmann::json& j) {
  if (j.is_string()) return BoundaryConditions::all(boundary_from_string(j.get<std::string>()));
  BoundaryConditions bc;
  auto side = [&j](const char* key, Boundary fallback) {
    return j.contains(key) ? boundary_from_string(j.at(key).get<std::string>()) : fallback;
  };
  bc.left = side("left", bc.left);
  bc.right = side("right", bc.right);
  bc.top = side("top", bc.top);
  bc.bottom = side("bottom", bc.bottom);
  return bc;
}

void write_velocity(const VelocityModel& v, const std::filesystem::path& stem) {
  nlohmann::json header = grid_to_json(v.grid());
  header["format"] = "romvel.velocity/1";
  header["bc"] = bc_to_json(v.bc());
  header["order"] = "row-major, z fastest";
  detail::write_json(detail::with_ext(stem, ".json"), header);
  std::ofstream os = detail::open_out(detail::with_ext(stem, ".bin"), true);
  detail::write_f64(os, v.values().data(), static_cast<std::size_t>(v.values().size()));
  if (!os) throw IoError("failed writing velocity payload");
}

VelocityModel read_velocity(const std::filesystem::path& stem) {
  const nlohmann::json header = detail::read_json(detail::with_ext(stem, ".json"));
  const Grid2D g = grid_from_json(header);
  const BoundaryConditions bc = header.contains("bc") ? bc_from_json(header.at("bc")) : BoundaryConditions{};
  Eigen::VectorXd c(static_cast<Eigen::Index>(g.size()));
  std::ifstream is = detail::open_in(detail::with_ext(stem, ".bin"), true);
  detail::read_f64(is, c.data(), g.size());
  return VelocityModel(g, std::move(c), bc);
}

nlohmann::json parametrization_to_json(const Parametrization& p, const Eigen::VectorXd& eta) {
  nlohmann::json basis = nlohmann::json::array();
  for (const auto& b : p.basis())
    basis.push_back({{"x", b.x}, {"z", b.z}, {"width", b.width}, {"amplitude", b.amplitude}});
  return {{"format", "romvel.parametrization/1"},
          {"grid", grid_to_json(p.background().grid())},
          {"basis", basis},
          {"eta", std::vector<double>(eta.data(), eta.data() + eta.size())}};
}

std::vector<GaussianBump> basis_from_json(const nlohmann::json& j) {
  std::vector<GaussianBump> out;
  try {
    for (const auto& b : j.at("basis"))
      out.push_back({b.at("x").get<double>(), b.at("z").get<double>(), b.at("width").get<double>(),
                     b.value("amplitude", 1.0)});
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("parametrization basis: ") + e.what());
  }
  return out;
}

Eigen::VectorXd eta_from_json(const nlohmann::json& j) {
  if (!j.contains("eta")) return {};
  const auto v = j.at("eta").get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace romvel
