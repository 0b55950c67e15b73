#include <iostream>

#include <CLI11.hpp>

#include "romvel/cli/commands.hpp"
#include "romvel/error.hpp"

namespace romvel::cli {

namespace {

struct Args {
  std::string config;
  std::string out = "out";
  std::string mode;
  std::string data;
  int threads = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> runs;
};

void add_common(CLI::App* sub, Args& a) {
  sub->add_option("--out", a.out, "Output directory")->capture_default_str();
  sub->add_option("--threads", a.threads, "Worker threads (0 = hardware concurrency)")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--seed", a.seed, "Recorded in the manifest");
}

CommandOptions options(const Args& a, std::ostream& log) {
  CommandOptions o;
  o.out = a.out;
  o.threads = a.threads;
  o.seed = a.seed;
  o.data = a.data;
  o.log = &log;
  if (!a.mode.empty()) o.mode = inversion_mode_from_string(a.mode);
  return o;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Velocity estimation from array data via reduced order models"};
  app.require_subcommand(1);
  Args a;

  auto* synth = app.add_subcommand("synthesize", "Synthesize the sampled data of the true model");
  synth->add_option("--config", a.config, "Experiment config")->required();
  add_common(synth, a);

  auto* rom = app.add_subcommand("rom", "Build the data-driven ROM");
  rom->add_option("--data", a.data, "Dataset stem (synthesized from --config when absent)");
  rom->add_option("--config", a.config, "Experiment config");
  add_common(rom, a);

  auto* sweep = app.add_subcommand("sweep", "Two-parameter objective landscape");
  sweep->add_option("--config", a.config, "Experiment config")->required();
  add_common(sweep, a);

  auto* invert = app.add_subcommand("invert", "Gauss-Newton velocity estimation");
  invert->add_option("--config", a.config, "Experiment config or run manifest")->required();
  invert->add_option("--mode", a.mode, "rom or fwi")->check(CLI::IsMember({"rom", "fwi"}));
  invert->add_option("--data", a.data, "Dataset stem used instead of synthesizing");
  add_common(invert, a);

  auto* compare = app.add_subcommand("compare", "Compare two inversion runs");
  compare->add_option("runs", a.runs, "Two run manifests")->required()->expected(2);
  add_common(compare, a);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    CommandOptions opts = options(a, out);
    if (synth->parsed()) {
      cmd_synthesize(load_config(a.config), opts);
    } else if (rom->parsed()) {
      if (a.data.empty()) {
        if (a.config.empty()) throw ConfigError("rom needs --data or --config");
        const ExperimentConfig cfg = load_config(a.config);
        cmd_rom(synthesize_reference(cfg, true_model(cfg)), opts);
      } else {
        cmd_rom(read_dataset(a.data), opts);
      }
    } else if (sweep->parsed()) {
      cmd_sweep(load_config(a.config), opts);
    } else if (invert->parsed()) {
      std::optional<InversionMode> recorded;
      const ExperimentConfig cfg = load_config(a.config, &recorded);
      if (!opts.mode) opts.mode = recorded;
      cmd_invert(cfg, opts);
    } else if (compare->parsed()) {
      cmd_compare(a.runs.at(0), a.runs.at(1), opts);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace romvel::cli
