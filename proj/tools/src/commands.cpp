#include "romvel/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>

#include "romvel/error.hpp"
#include "romvel/model_io.hpp"
#include "romvel/work_pool.hpp"

#ifndef ROMVEL_VERSION
#define ROMVEL_VERSION "unknown"
#endif

namespace romvel::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

std::ofstream open_text(const fs::path& path) {
  ensure_dir(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  os << std::setprecision(17);
  return os;
}

void save_json(const fs::path& path, const json& j) {
  std::ofstream os = open_text(path);
  os << j.dump(2) << '\n';
  if (!os) throw IoError("failed writing " + path.string());
}

json load_json(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

json manifest(const std::string& command, const ExperimentConfig* cfg, const CommandOptions& opts) {
  json m = {{"schema", kManifestSchema},
            {"command", command},
            {"version", ROMVEL_VERSION},
            {"threads", opts.threads},
            {"seed", opts.seed},
            {"created_utc", utc_now()}};
  if (cfg) {
    m["config"] = cfg->raw;
    m["config_dir"] = cfg->base_dir.empty() ? fs::current_path().string()
                                            : fs::absolute(cfg->base_dir).string();
  }
  if (!opts.data.empty()) m["data"] = fs::absolute(opts.data).string();
  return m;
}

std::ostream* logger(const CommandOptions& opts) { return opts.log; }

template <class... Args>
void note(const CommandOptions& opts, const Args&... args) {
  if (std::ostream* os = logger(opts)) {
    ((*os) << ... << args) << '\n';
  }
}

std::string number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

json census_json(const Census& c, const SweepAxis& p1, const SweepAxis& p2) {
  json minima = json::array();
  for (const auto& m : c.minima) {
    minima.push_back({{"i", m.i},
                      {"j", m.j},
                      {p1.name, p1.value(m.i)},
                      {p2.name, p2.value(m.j)},
                      {"value", m.value},
                      {"interior", m.interior},
                      {"cells", m.cells.size()}});
  }
  return {{"count", c.count()}, {"interior_count", c.interior_count()}, {"minima", minima}};
}

void check_compatible(const DataSet& data, const ExperimentConfig& cfg) {
  if (data.m != cfg.sensors.size()) throw ConfigError("dataset sensor count differs from the config");
  if (data.n != cfg.n) throw ConfigError("dataset n differs from the config");
  if (std::abs(data.tau - cfg.tau) > 1e-12 * cfg.tau) throw ConfigError("dataset tau differs from the config");
}

json history_json(const InversionState& s) {
  json out = json::array();
  for (const auto& r : s.history) {
    out.push_back({{"iteration", r.iteration},
                   {"layer", r.layer},
                   {"k", r.k},
                   {"objective_before", r.objective_before},
                   {"objective", r.objective},
                   {"functional_before", r.functional_before},
                   {"functional", r.functional},
                   {"mu", r.mu},
                   {"alpha", r.alpha},
                   {"accepted", r.accepted},
                   {"rank_warning", r.rank_warning}});
  }
  return out;
}

}  // namespace

int exit_code(const Error& e) {
  switch (e.kind()) {
    case Error::Kind::Config: return 2;
    case Error::Kind::Numerical: return 3;
    case Error::Kind::Io: return 4;
  }
  return 3;
}

SynthesizeOutput cmd_synthesize(const ExperimentConfig& cfg, const CommandOptions& opts) {
  VelocityModel truth = true_model(cfg);
  Traces traces;
  DataSet data = synthesize_reference(cfg, truth, &traces);
  ensure_dir(opts.out);
  write_dataset(data, opts.out / "data");
  write_velocity(truth, opts.out / "true_velocity");
  json m = manifest("synthesize", &cfg, opts);
  m["outputs"] = {{"data", "data"}, {"true_velocity", "true_velocity"}};
  if (cfg.measurement.source == DataSource::TimeStepping && cfg.measurement.write_traces) {
    write_traces_csv(traces, opts.out / "traces.csv");
    m["outputs"]["traces"] = "traces.csv";
  }
  m["summary"] = {{"m", data.m},
                  {"n", data.n},
                  {"tau", data.tau},
                  {"source", to_string(cfg.measurement.source)},
                  {"nyquist_violation", data.nyquist_violation}};
  save_json(opts.out / "manifest.json", m);
  note(opts, "synthesized ", data.samples(), " samples for m = ", data.m, " sensors");
  return {std::move(truth), std::move(data)};
}

RomOutput cmd_rom(const DataSet& data, const CommandOptions& opts) {
  RomOutput out;
  out.mass_condition = mass_condition_number(assemble_mass(data));
  out.rom = build_rom(data);
  ensure_dir(opts.out);
  write_rom(out.rom, opts.out / "rom");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.rom.a_rom, Eigen::EigenvaluesOnly);
  json report = {{"m", out.rom.m},
                 {"n", out.rom.n},
                 {"tau", data.tau},
                 {"mass_condition_number", out.mass_condition},
                 {"rom_eigenvalue_min", es.eigenvalues().minCoeff()},
                 {"rom_eigenvalue_max", es.eigenvalues().maxCoeff()}};
  save_json(opts.out / "rom_report.json", report);
  note(opts, "ROM of size ", out.rom.a_rom.rows(), ", cond(M) = ", out.mass_condition);
  return out;
}

SweepOutput cmd_sweep(const ExperimentConfig& cfg, const CommandOptions& opts) {
  if (cfg.sweep.axes.size() != 2) throw ConfigError("sweep needs exactly two parameters");
  if (!cfg.model.is_object()) throw ConfigError("sweep needs a true model");
  for (const auto& axis : cfg.sweep.axes)
    if (!cfg.model.contains(axis.name))
      throw ConfigError("sweep parameter '" + axis.name + "' is not a field of the model spec");

  SweepOutput out;
  out.p1 = cfg.sweep.axes[0];
  out.p2 = cfg.sweep.axes[1];
  const VelocityModel truth = true_model(cfg);
  const DataSet reference = synthesize_reference(cfg, truth);
  RomResidualSpec spec;
  spec.k = cfg.sweep.k > 0 ? cfg.sweep.k : cfg.n;
  spec.d = cfg.sweep.d > 0 ? cfg.sweep.d : spec.k;
  spec.reference = build_rom(reference);
  spec.validate();
  const Acquisition acq = build_acquisition(cfg);

  const int n1 = out.p1.count;
  const int n2 = out.p2.count;
  out.rom.resize(n1, n2);
  out.fwi.resize(n1, n2);
  parallel_for(static_cast<std::size_t>(n1) * n2, opts.threads, [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / n2;
    const int j = static_cast<int>(idx) % n2;
    json model = cfg.model;
    model[out.p1.name] = out.p1.value(i);
    model[out.p2.name] = out.p2.value(j);
    const DataSet data = acq.synthesize(build_model(cfg, model));
    out.rom(i, j) = rom_misfit(data, spec).value;
    out.fwi(i, j) = fwi_misfit(data, reference).value;
  });
  out.rom_census = local_minima(out.rom);
  out.fwi_census = local_minima(out.fwi);

  {
    std::ofstream csv = open_text(opts.out / "sweep.csv");
    csv << out.p1.name << ',' << out.p2.name << ",obj_rom,obj_fwi\n";
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j)
        csv << number(out.p1.value(i)) << ',' << number(out.p2.value(j)) << ','
            << number(out.rom(i, j)) << ',' << number(out.fwi(i, j)) << '\n';
    if (!csv) throw IoError("failed writing sweep.csv");
  }
  save_json(opts.out / "census.json", {{"rom", census_json(out.rom_census, out.p1, out.p2)},
                                       {"fwi", census_json(out.fwi_census, out.p1, out.p2)}});
  json m = manifest("sweep", &cfg, opts);
  m["outputs"] = {{"surface", "sweep.csv"}, {"census", "census.json"}};
  save_json(opts.out / "manifest.json", m);
  note(opts, "sweep ", n1, " x ", n2, ": ROM minima ", out.rom_census.count(), " (interior ",
       out.rom_census.interior_count(), "), FWI minima ", out.fwi_census.count(), " (interior ",
       out.fwi_census.interior_count(), ")");
  return out;
}

InvertOutput cmd_invert(const ExperimentConfig& cfg, const CommandOptions& opts) {
  const InversionMode mode = opts.mode.value_or(InversionMode::Rom);
  std::optional<VelocityModel> truth;
  if (cfg.model.is_object()) truth = true_model(cfg);

  DataSet data;
  if (!opts.data.empty()) {
    data = read_dataset(opts.data);
    check_compatible(data, cfg);
  } else {
    if (!truth) throw ConfigError("invert needs a true model or a dataset");
    data = synthesize_reference(cfg, *truth);
  }

  InversionProblem problem{build_parametrization(cfg), build_acquisition(cfg)};
  problem.mode = mode;
  problem.fwi_samples = cfg.fwi_samples;
  problem.evaluate = cfg.evaluate;
  if (mode == InversionMode::Rom) {
    problem.reference_rom = build_rom(data);
  } else {
    problem.reference_data = data;
  }
  GnConfig gn = cfg.gn;
  gn.threads = opts.threads;

  std::optional<double> initial_error;
  if (truth) initial_error = relative_l2_error(problem.param.background(), *truth);
  InvertOutput out{mode, run_inversion(problem, cfg.schedule, gn, [&](const IterationRecord& r, const InversionState&) {
    note(opts, "iteration ", r.iteration, " layer ", r.layer, " k ", r.k, " objective ", r.objective,
         " mu ", r.mu, " alpha ", r.alpha, r.accepted ? "" : " (rejected)");
  })};
  out.initial_error = initial_error;
  if (truth) out.final_error = relative_l2_error(out.result.estimate, *truth);

  ensure_dir(opts.out);
  write_velocity(out.result.estimate, opts.out / "estimate");
  {
    std::ofstream csv = open_text(opts.out / "state.csv");
    csv << "iteration,layer,k_l,objective_before,objective,functional_before,functional,mu,alpha,"
           "accepted,rank_warning,evaluations\n";
    for (const auto& r : out.result.state.history)
      csv << r.iteration << ',' << r.layer << ',' << r.k << ',' << number(r.objective_before) << ','
          << number(r.objective) << ',' << number(r.functional_before) << ','
          << number(r.functional) << ',' << number(r.mu) << ',' << number(r.alpha) << ','
          << (r.accepted ? 1 : 0) << ',' << (r.rank_warning ? 1 : 0) << ',' << r.evaluations << '\n';
    if (!csv) throw IoError("failed writing state.csv");
  }
  json m = manifest("invert", &cfg, opts);
  m["mode"] = to_string(out.mode);
  m["outputs"] = {{"estimate", "estimate"}, {"state", "state.csv"}};
  const auto& eta = out.result.state.eta;
  m["eta"] = std::vector<double>(eta.data(), eta.data() + eta.size());
  m["history"] = history_json(out.result.state);
  json summary = {{"initial_objective", out.result.state.initial_objective},
                  {"iterations", out.result.state.iteration}};
  if (out.initial_error) summary["initial_error"] = *out.initial_error;
  if (out.final_error) summary["final_error"] = *out.final_error;
  m["summary"] = summary;
  save_json(opts.out / "manifest.json", m);
  if (out.final_error)
    note(opts, to_string(out.mode), " inversion: relative error ", *out.initial_error, " -> ",
         *out.final_error);
  return out;
}

namespace {

struct LoadedRun {
  RunSummary summary;
  VelocityModel truth;
};

LoadedRun load_run(const fs::path& path, const std::string& label) {
  const json m = load_json(path);
  if (m.value("schema", "") != kManifestSchema) throw ConfigError(path.string() + " is not a run manifest");
  fs::path base = m.contains("config_dir") ? fs::path(m.at("config_dir").get<std::string>()) : path.parent_path();
  const ExperimentConfig cfg = parse_config(m.at("config"), base);
  VelocityModel truth = true_model(cfg);
  const fs::path dir = path.parent_path();
  const bool has_estimate = m.contains("outputs") && m.at("outputs").contains("estimate");
  const VelocityModel estimate =
      has_estimate ? read_velocity(dir / m.at("outputs").at("estimate").get<std::string>())
                   : background_model(cfg);
  LoadedRun run{{}, truth};
  run.summary.label = label;
  run.summary.mode = m.value("mode", "initial");
  run.summary.error = relative_l2_error(estimate, truth);
  run.summary.initial_error = relative_l2_error(background_model(cfg), truth);
  for (const auto& r : m.value("history", json::array()))
    run.summary.objective.push_back(r.at("objective").get<double>());
  return run;
}

json summary_json(const RunSummary& s) {
  return {{"label", s.label},
          {"mode", s.mode},
          {"error", s.error},
          {"initial_error", s.initial_error},
          {"objective", s.objective}};
}

}  // namespace

CompareOutput cmd_compare(const fs::path& manifest_a, const fs::path& manifest_b,
                          const CommandOptions& opts) {
  LoadedRun a = load_run(manifest_a, "a");
  LoadedRun b = load_run(manifest_b, "b");
  if (!(a.truth.grid() == b.truth.grid())) throw ConfigError("runs use different grids");
  if (a.truth.values() != b.truth.values()) throw ConfigError("runs use different true models");
  CompareOutput out{a.summary, b.summary, "tie"};
  if (out.a.error < out.b.error) out.winner = "a";
  if (out.b.error < out.a.error) out.winner = "b";

  save_json(opts.out / "compare.json", {{"a", summary_json(out.a)},
                                        {"b", summary_json(out.b)},
                                        {"error_difference", out.a.error - out.b.error},
                                        {"winner", out.winner}});
  std::ofstream csv = open_text(opts.out / "compare.csv");
  csv << "run,iteration,objective\n";
  for (const RunSummary* s : {&out.a, &out.b})
    for (std::size_t i = 0; i < s->objective.size(); ++i)
      csv << s->label << ',' << i + 1 << ',' << number(s->objective[i]) << '\n';
  if (!csv) throw IoError("failed writing compare.csv");
  note(opts, "relative errors: a = ", out.a.error, ", b = ", out.b.error, "; winner ", out.winner);
  return out;
}

}  // namespace romvel::cli
