#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "romvel/inversion.hpp"
#include "romvel/measurements.hpp"

namespace romvel::cli {

inline constexpr const char* kConfigSchema = "romvel.experiment/1";
inline constexpr const char* kManifestSchema = "romvel.manifest/1";

enum class DataSource {
  Direct,        // operator-function synthesis of the sampled data
  TimeStepping,  // leapfrog traces, symmetrized and resampled
};

struct MeasurementConfig {
  DataSource source = DataSource::Direct;
  int steps_per_tau = 50;
  double taper_fraction = 0.1;
  std::optional<double> record_length;  // seconds; derived from n and tau when absent
  bool write_traces = false;
};

struct SweepAxis {
  std::string name;  // model field overridden at each grid point
  double min = 0.0;
  double max = 0.0;
  int count = 1;

  double value(int i) const { return count == 1 ? min : min + (max - min) * i / (count - 1); }
  double step() const { return count == 1 ? 0.0 : (max - min) / (count - 1); }
};

struct SweepConfig {
  std::vector<SweepAxis> axes;
  int k = 0;  // 0 means n
  int d = 0;  // 0 means k
};

/// Parsed experiment description. `raw` keeps the source document so runs can
/// embed it verbatim in their manifests.
struct ExperimentConfig {
  std::string name;
  Grid2D grid;
  BoundaryConditions bc;
  nlohmann::json model;       // true model
  nlohmann::json background;  // initial guess c_o
  SensorArray sensors;
  Pulse pulse = Pulse::standard();
  double tau = 0.0;
  int n = 0;
  SynthesisOptions synthesis;
  MeasurementConfig measurement;
  nlohmann::json parametrization;
  EvaluateOptions evaluate;
  LayerSchedule schedule;
  GnConfig gn;
  FwiSamples fwi_samples = FwiSamples::All;
  SweepConfig sweep;
  std::filesystem::path base_dir;  // relative paths resolve against this
  nlohmann::json raw;
};

ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

/// Reads an experiment config, or the config embedded in a run manifest.
/// `mode` receives the manifest's inversion mode when one is recorded.
ExperimentConfig load_config(const std::filesystem::path& path,
                             std::optional<InversionMode>* mode = nullptr);

/// Velocity model from a model spec: constant, two_layer, camembert, layered,
/// file or parametrized.
VelocityModel build_model(const ExperimentConfig& cfg, const nlohmann::json& spec);
VelocityModel true_model(const ExperimentConfig& cfg);
VelocityModel background_model(const ExperimentConfig& cfg);

Parametrization build_parametrization(const ExperimentConfig& cfg);
Acquisition build_acquisition(const ExperimentConfig& cfg);

/// Reference data for a velocity model, through the configured data source.
/// `traces` receives the raw recordings on the time-stepping path.
DataSet synthesize_reference(const ExperimentConfig& cfg, const VelocityModel& v,
                             Traces* traces = nullptr);

std::string to_string(DataSource s);

}  // namespace romvel::cli
