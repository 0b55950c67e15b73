#include "romvel/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "romvel/error.hpp"
#include "romvel/model_io.hpp"

namespace romvel::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const json& require(const json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError(std::string(where) + ": missing field '" + key + "'");
  return j.at(key);
}

Grid2D parse_grid(const json& j) {
  Grid2D g;
  if (j.contains("hx") || j.contains("hz")) {
    g = grid_from_json(j);
  } else {
    g = Grid2D::covering(require(j, "width", "grid").get<double>(),
                         require(j, "depth", "grid").get<double>(),
                         require(j, "nx", "grid").get<int>(), require(j, "nz", "grid").get<int>(),
                         j.value("x0", 0.0), j.value("z0", 0.0));
  }
  g.validate();
  return g;
}

SensorArray parse_sensors(const json& j, const Grid2D& grid) {
  const double theta = j.value("theta_width", 0.0);
  SensorArray out;
  if (j.contains("positions")) {
    out.theta_width = theta;
    for (const auto& p : j.at("positions")) {
      if (!p.is_array() || p.size() != 2) throw ConfigError("sensor positions must be [x, z] pairs");
      out.positions.push_back({p[0].get<double>(), p[1].get<double>()});
    }
  } else {
    const std::string layout = j.value("layout", "line");
    if (layout != "line") throw ConfigError("unknown sensor layout '" + layout + "'");
    const double depth = j.value("depth", grid.z0 + 2.0 * grid.hz);
    out = make_line_array(grid, require(j, "m", "acquisition.sensors").get<int>(), depth,
                          j.value("x_min", grid.x0), j.value("x_max", grid.x_max()), theta);
  }
  out.validate(grid);
  return out;
}

Pulse parse_pulse(const json& j) {
  if (j.is_null()) return Pulse::standard();
  const double f0 = j.value("central_frequency_hz", 6.0);
  const double b = j.value("bandwidth_hz", 4.0);
  return Pulse(2.0 * std::numbers::pi * f0, b, j.value("support_threshold", 1e-8));
}

PropagationOptions parse_propagation(const json& j) {
  PropagationOptions o;
  if (j.is_null()) return o;
  const std::string path = j.value("path", "chebyshev");
  if (path == "chebyshev") {
    o.path = PropagationPath::Chebyshev;
  } else if (path == "spectral") {
    o.path = PropagationPath::Spectral;
  } else {
    throw ConfigError("unknown propagation path '" + path + "'");
  }
  o.spectral_cap = j.value("spectral_cap", o.spectral_cap);
  o.allow_chebyshev_fallback = j.value("allow_chebyshev_fallback", o.allow_chebyshev_fallback);
  o.chebyshev_tol = j.value("chebyshev_tol", o.chebyshev_tol);
  o.strict_nyquist = j.value("strict_nyquist", o.strict_nyquist);
  return o;
}

MeasurementConfig parse_measurement(const json& j) {
  MeasurementConfig m;
  if (j.is_null()) return m;
  const std::string source = j.value("source", "direct");
  if (source == "direct") {
    m.source = DataSource::Direct;
  } else if (source == "time_stepping") {
    m.source = DataSource::TimeStepping;
  } else {
    throw ConfigError("unknown data source '" + source + "'");
  }
  m.steps_per_tau = j.value("steps_per_tau", m.steps_per_tau);
  m.taper_fraction = j.value("taper_fraction", m.taper_fraction);
  if (j.contains("record_length")) m.record_length = j.at("record_length").get<double>();
  m.write_traces = j.value("write_traces", m.write_traces);
  if (m.steps_per_tau < 1) throw ConfigError("steps_per_tau must be positive");
  if (!(m.taper_fraction >= 0.0 && m.taper_fraction < 1.0))
    throw ConfigError("taper_fraction must lie in [0, 1)");
  return m;
}

GnConfig parse_gn(const json& j, FwiSamples& fwi) {
  GnConfig g;
  if (j.is_null()) return g;
  g.gamma = j.value("gamma", g.gamma);
  g.fd_step = j.value("fd_step", g.fd_step);
  g.rank_warning = j.value("rank_warning", g.rank_warning);
  g.line_search.alpha_max = j.value("alpha_max", g.line_search.alpha_max);
  g.line_search.ratio = j.value("ratio", g.line_search.ratio);
  g.line_search.grid_points = j.value("grid_points", g.line_search.grid_points);
  g.line_search.golden_steps = j.value("golden_steps", g.line_search.golden_steps);
  if (j.contains("penalty")) g.penalty = penalty_from_string(j.at("penalty").get<std::string>());
  const std::string samples = j.value("fwi_samples", "all");
  if (samples == "all") {
    fwi = FwiSamples::All;
  } else if (samples == "truncated") {
    fwi = FwiSamples::Truncated;
  } else {
    throw ConfigError("unknown fwi_samples '" + samples + "'");
  }
  g.validate();
  return g;
}

SweepConfig parse_sweep(const json& j) {
  SweepConfig s;
  if (j.is_null()) return s;
  for (const auto& a : j.value("parameters", json::array())) {
    SweepAxis axis;
    axis.name = require(a, "name", "sweep.parameters").get<std::string>();
    axis.min = require(a, "min", "sweep.parameters").get<double>();
    axis.max = a.value("max", axis.min);
    axis.count = a.value("count", 1);
    if (axis.count < 1) throw ConfigError("sweep axis count must be positive");
    s.axes.push_back(axis);
  }
  s.k = j.value("k", 0);
  s.d = j.value("d", 0);
  return s;
}

fs::path resolve(const ExperimentConfig& cfg, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() || cfg.base_dir.empty() ? path : cfg.base_dir / path;
}

}  // namespace

std::string to_string(DataSource s) { return s == DataSource::Direct ? "direct" : "time_stepping"; }

ExperimentConfig parse_config(const json& doc, const fs::path& base_dir) {
  try {
    const std::string schema = doc.value("schema", "");
    if (schema != kConfigSchema)
      throw ConfigError("unsupported config schema '" + schema + "' (expected " + kConfigSchema + ")");
    ExperimentConfig cfg;
    cfg.raw = doc;
    cfg.base_dir = base_dir;
    cfg.name = doc.value("name", "experiment");
    cfg.grid = parse_grid(require(doc, "grid", "config"));
    cfg.bc = doc.contains("boundary") ? bc_from_json(doc.at("boundary")) : BoundaryConditions{};
    cfg.model = doc.value("model", json());
    cfg.background = doc.value("background", json());

    const json& acq = require(doc, "acquisition", "config");
    cfg.sensors = parse_sensors(require(acq, "sensors", "acquisition"), cfg.grid);
    cfg.pulse = parse_pulse(acq.value("pulse", json()));

    const json& sampling = require(doc, "sampling", "config");
    cfg.n = require(sampling, "n", "sampling").get<int>();
    if (cfg.n < 1) throw ConfigError("sampling.n must be positive");
    if (sampling.contains("tau") && !sampling.at("tau").is_string()) {
      cfg.tau = sampling.at("tau").get<double>();
    } else {
      cfg.tau = cfg.pulse.nyquist_tau(sampling.value("nyquist_ratio", 0.9));
    }
    if (!(cfg.tau > 0.0)) throw ConfigError("sampling.tau must be positive");

    cfg.synthesis.propagation = parse_propagation(doc.value("propagation", json()));
    cfg.synthesis.symmetrize = doc.value("propagation", json::object()).value("symmetrize", true);
    cfg.measurement = parse_measurement(doc.value("measurement", json()));

    cfg.parametrization = doc.value("parametrization", json());
    if (cfg.parametrization.is_object()) {
      cfg.evaluate.clamp = cfg.parametrization.value("clamp", true);
      cfg.evaluate.floor = cfg.parametrization.value("floor", 300.0);
    }

    const json sched = doc.value("schedule", json::object());
    cfg.schedule.q = sched.value("q", 1);
    cfg.schedule.k = sched.value("k", std::vector<int>{cfg.n});
    cfg.schedule.d = sched.value("d", cfg.schedule.k.empty() ? 1 : cfg.schedule.k.front());
    cfg.gn = parse_gn(doc.value("gn", json()), cfg.fwi_samples);
    cfg.sweep = parse_sweep(doc.value("sweep", json()));
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const fs::path& path, std::optional<InversionMode>* mode) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  fs::path base = path.parent_path();
  if (doc.value("schema", "") == kManifestSchema) {
    if (mode && doc.contains("mode")) *mode = inversion_mode_from_string(doc.at("mode").get<std::string>());
    if (doc.contains("config_dir")) base = doc.at("config_dir").get<std::string>();
    doc = doc.at("config");
  }
  return parse_config(doc, base);
}

VelocityModel build_model(const ExperimentConfig& cfg, const json& spec) {
  try {
    const std::string kind = require(spec, "kind", "model").get<std::string>();
    if (kind == "constant") {
      return VelocityModel::constant(cfg.grid, require(spec, "velocity", "model").get<double>(), cfg.bc);
    }
    if (kind == "two_layer") {
      TwoLayerSpec s;
      s.depth_left = spec.value("depth_left", s.depth_left);
      s.contrast = spec.value("contrast", s.contrast);
      s.top_velocity = spec.value("top_velocity", s.top_velocity);
      s.drop = spec.value("drop", s.drop);
      return make_two_layer_model(s, cfg.grid, cfg.bc);
    }
    if (kind == "camembert") {
      CamembertSpec s;
      s.center_x = spec.value("center_x", s.center_x);
      s.center_z = spec.value("center_z", s.center_z);
      s.radius = spec.value("radius", s.radius);
      s.inside = spec.value("inside", s.inside);
      s.outside = spec.value("outside", s.outside);
      return make_camembert_model(cfg.grid, cfg.bc, s);
    }
    if (kind == "layered") {
      LayeredSpec s;
      s.top_velocity = spec.value("top_velocity", s.top_velocity);
      for (const auto& l : spec.value("interfaces", json::array())) {
        LayerInterface li;
        li.depth_left = require(l, "depth_left", "layered interface").get<double>();
        li.depth_right = l.value("depth_right", li.depth_left);
        li.velocity = require(l, "velocity", "layered interface").get<double>();
        s.interfaces.push_back(li);
      }
      s.fault_x = spec.value("fault_x", 0.0);
      s.fault_throw = spec.value("fault_throw", 0.0);
      return make_layered_model(s, cfg.grid, cfg.bc);
    }
    if (kind == "file") {
      VelocityModel v = read_velocity(resolve(cfg, require(spec, "path", "model").get<std::string>()));
      if (!(v.grid() == cfg.grid)) throw ConfigError("velocity file grid differs from the config grid");
      return VelocityModel(v.grid(), v.values(), cfg.bc);
    }
    if (kind == "parametrized") {
      const Parametrization p(build_model(cfg, require(spec, "background", "model")),
                              build_parametrization(cfg).basis());
      const auto eta = require(spec, "eta", "model").get<std::vector<double>>();
      if (static_cast<int>(eta.size()) != p.size())
        throw ConfigError("parametrized model eta length differs from the basis size");
      return p.evaluate(Eigen::Map<const Eigen::VectorXd>(eta.data(), static_cast<Eigen::Index>(eta.size())),
                        cfg.evaluate);
    }
    throw ConfigError("unknown model kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
}

VelocityModel true_model(const ExperimentConfig& cfg) {
  if (cfg.model.is_null()) throw ConfigError("config has no true model");
  return build_model(cfg, cfg.model);
}

VelocityModel background_model(const ExperimentConfig& cfg) {
  if (cfg.background.is_null()) throw ConfigError("config has no background model");
  return build_model(cfg, cfg.background);
}

Parametrization build_parametrization(const ExperimentConfig& cfg) {
  const json& j = cfg.parametrization;
  if (!j.is_object()) throw ConfigError("config has no parametrization");
  VelocityModel bg = cfg.background.is_null() ? VelocityModel::constant(cfg.grid, 1.0, cfg.bc)
                                              : background_model(cfg);
  try {
    if (j.contains("basis")) return Parametrization(std::move(bg), basis_from_json(j));
    const json& l = require(j, "lattice", "parametrization");
    LatticeSpec s;
    s.nbx = require(l, "nbx", "lattice").get<int>();
    s.nbz = require(l, "nbz", "lattice").get<int>();
    s.x_min = l.value("x_min", cfg.grid.x0);
    s.x_max = l.value("x_max", cfg.grid.x_max());
    s.z_min = l.value("z_min", cfg.grid.z0);
    s.z_max = l.value("z_max", cfg.grid.z_max());
    s.width_factor = l.value("width_factor", s.width_factor);
    s.amplitude = l.value("amplitude", s.amplitude);
    if (l.contains("width")) s.width = l.at("width").get<double>();
    return Parametrization(std::move(bg), make_bump_lattice(s));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("parametrization: ") + e.what());
  }
}

Acquisition build_acquisition(const ExperimentConfig& cfg) {
  Acquisition a;
  a.sensors = cfg.sensors;
  a.pulse = cfg.pulse;
  a.tau = cfg.tau;
  a.n = cfg.n;
  a.synthesis = cfg.synthesis;
  return a;
}

DataSet synthesize_reference(const ExperimentConfig& cfg, const VelocityModel& v, Traces* traces) {
  if (cfg.measurement.source == DataSource::Direct) return build_acquisition(cfg).synthesize(v);
  const MeasurementConfig& m = cfg.measurement;
  const double dt = cfg.tau / m.steps_per_tau;
  const double needed = (2 * cfg.n - 2) * cfg.tau / (1.0 - m.taper_fraction) + 2.0 * cfg.tau;
  const double record = m.record_length.value_or(needed);
  Traces tr = synthesize_measurements(v, cfg.sensors, cfg.pulse, record, dt);
  DataSet out = symmetrize_and_sample(tr, cfg.sensors, v, cfg.tau, cfg.n, {m.taper_fraction});
  if (traces) *traces = std::move(tr);
  return out;
}

}  // namespace romvel::cli
