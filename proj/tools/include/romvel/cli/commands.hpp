#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "romvel/cli/census.hpp"
#include "romvel/cli/config.hpp"
#include "romvel/error.hpp"

namespace romvel::cli {

struct CommandOptions {
  std::filesystem::path out = "out";
  int threads = 0;
  std::uint64_t seed = 0;  // recorded in manifests; no command draws random numbers
  std::optional<InversionMode> mode;
  std::filesystem::path data;  // dataset stem overriding synthesis
  std::ostream* log = nullptr;
};

struct SynthesizeOutput {
  VelocityModel truth;
  DataSet data;
};

/// Writes `data` (dataset), `true_velocity`, optionally `traces.csv`, and
/// `manifest.json` into the output directory.
SynthesizeOutput cmd_synthesize(const ExperimentConfig& cfg, const CommandOptions& opts);

struct RomOutput {
  OperatorRom rom;
  double mass_condition = 0.0;
};

/// Writes `rom` and `rom_report.json`. MassNotSPD propagates.
RomOutput cmd_rom(const DataSet& data, const CommandOptions& opts);

struct SweepOutput {
  SweepAxis p1;
  SweepAxis p2;
  Eigen::MatrixXd rom;  // (p1 index, p2 index), +inf where the candidate ROM is infeasible
  Eigen::MatrixXd fwi;
  Census rom_census;
  Census fwi_census;
};

/// Two-parameter landscape of both objectives. Each grid point synthesizes one
/// candidate dataset shared by the two misfits. Writes `sweep.csv` and
/// `census.json`.
SweepOutput cmd_sweep(const ExperimentConfig& cfg, const CommandOptions& opts);

struct InvertOutput {
  InversionMode mode = InversionMode::Rom;
  InversionResult result;
  std::optional<double> initial_error;  // relative L2 against the true model
  std::optional<double> final_error;
};

/// Writes `estimate` (velocity), `state.csv` and `manifest.json`.
InvertOutput cmd_invert(const ExperimentConfig& cfg, const CommandOptions& opts);

struct RunSummary {
  std::string label;
  std::string mode;
  double error = 0.0;
  double initial_error = 0.0;
  std::vector<double> objective;  // per iteration
};

struct CompareOutput {
  RunSummary a;
  RunSummary b;
  std::string winner;  // label of the run with the smaller error, or "tie"
};

/// Compares two run manifests over the same true model. A manifest without an
/// estimate contributes its initial guess. Writes `compare.json` and
/// `compare.csv`.
CompareOutput cmd_compare(const std::filesystem::path& manifest_a,
                          const std::filesystem::path& manifest_b, const CommandOptions& opts);

/// Entry point of the executable; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// 0 ok, 2 config, 3 numerical, 4 io.
int exit_code(const Error& e);

}  // namespace romvel::cli
