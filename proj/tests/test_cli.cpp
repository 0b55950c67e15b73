#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "romvel/cli/commands.hpp"
#include "romvel/model_io.hpp"

using namespace romvel;
using namespace romvel::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("romvel_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

nlohmann::json tiny_config() {
  return nlohmann::json::parse(R"({
    "schema": "romvel.experiment/1",
    "grid": {"width": 600, "depth": 600, "nx": 19, "nz": 19},
    "model": {"kind": "two_layer", "depth_left": 300, "contrast": 1.5, "top_velocity": 1500, "drop": 60},
    "background": {"kind": "constant", "velocity": 1500},
    "acquisition": {"sensors": {"layout": "line", "m": 2, "depth": 60}},
    "sampling": {"n": 3},
    "parametrization": {"lattice": {"nbx": 2, "nbz": 1, "z_min": 300, "z_max": 600}},
    "schedule": {"q": 2, "k": [3], "d": 1},
    "sweep": {"parameters": [{"name": "depth_left", "min": 240, "max": 360, "count": 3},
                             {"name": "contrast", "min": 1.3, "max": 1.7, "count": 3}]}
  })");
}

int run(std::vector<std::string> args, std::string* err_text = nullptr) {
  args.insert(args.begin(), "romvel");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (err_text) *err_text = err.str();
  return code;
}

fs::path write_config(const fs::path& dir, const nlohmann::json& j) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << j.dump(2);
  return p;
}

}  // namespace

TEST_CASE("census of simple surfaces") {
  SUBCASE("single cell") {
    Eigen::MatrixXd v(1, 1);
    v << 3.0;
    CHECK(local_minima(v).count() == 1);
  }
  SUBCASE("bowl") {
    Eigen::MatrixXd v(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) v(i, j) = (i - 2) * (i - 2) + (j - 3) * (j - 3);
    const Census c = local_minima(v);
    REQUIRE(c.count() == 1);
    CHECK(c.minima[0].i == 2);
    CHECK(c.minima[0].j == 3);
    CHECK(c.minima[0].interior);
  }
  SUBCASE("plateau counts once") {
    Eigen::MatrixXd v = Eigen::MatrixXd::Constant(5, 5, 2.0);
    v(2, 1) = 1.0;
    v(2, 2) = 1.0;
    v(3, 3) = 1.0;
    const Census c = local_minima(v);
    REQUIRE(c.count() == 1);
    CHECK(c.minima[0].cells.size() == 3);
    CHECK(c.interior_count() == 1);
  }
  SUBCASE("edge minimum is not interior") {
    Eigen::MatrixXd v = Eigen::MatrixXd::Constant(4, 4, 5.0);
    v(0, 2) = 1.0;
    v(2, 2) = 2.0;
    const Census c = local_minima(v);
    CHECK(c.count() == 2);
    CHECK(c.interior_count() == 1);
  }
  SUBCASE("a plateau touching a lower cell is not a minimum") {
    Eigen::MatrixXd v = Eigen::MatrixXd::Constant(3, 4, 1.0);
    v(1, 3) = 0.5;
    const Census c = local_minima(v);
    REQUIRE(c.count() == 1);
    CHECK(c.minima[0].value == 0.5);
  }
  SUBCASE("infeasible cells never count") {
    Eigen::MatrixXd v = Eigen::MatrixXd::Constant(3, 3, std::numeric_limits<double>::infinity());
    v(0, 0) = std::nan("");
    CHECK(local_minima(v).count() == 0);
  }
}

TEST_CASE("config parsing") {
  const ExperimentConfig cfg = parse_config(tiny_config());
  CHECK(cfg.grid.nx == 19);
  CHECK(cfg.sensors.size() == 2);
  CHECK(cfg.tau == doctest::Approx(0.045));
  CHECK(cfg.schedule.k == std::vector<int>{3});
  CHECK(cfg.gn.penalty == LineSearchPenalty::Increment);
  CHECK(build_parametrization(cfg).size() == 2);

  nlohmann::json bad = tiny_config();
  bad["schema"] = "romvel.experiment/0";
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  bad = tiny_config();
  bad["model"]["kind"] = "banana";
  CHECK_THROWS_AS(true_model(parse_config(bad)), ConfigError);
  bad = tiny_config();
  bad["gn"] = {{"gamma", 0.5}};
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  bad = tiny_config();
  bad.erase("grid");
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("exit");
  CHECK(run({"synthesize", "--config", (dir / "missing.json").string()}) == 4);
  nlohmann::json bad = tiny_config();
  bad["schema"] = "other";
  CHECK(run({"synthesize", "--config", write_config(dir, bad).string()}) == 2);
  CHECK(run({"nonsense"}) == 2);
  CHECK(run({"invert", "--config", write_config(dir, tiny_config()).string(), "--mode", "xyz"}) == 2);

  // A dataset whose mass matrix is indefinite surfaces as a numerical failure.
  DataSet d;
  d.m = 1;
  d.n = 2;
  d.tau = 0.045;
  d.d = {Eigen::MatrixXd::Constant(1, 1, 1.0), Eigen::MatrixXd::Constant(1, 1, 2.0),
         Eigen::MatrixXd::Constant(1, 1, 1.0)};
  d.ddot = d.d;
  write_dataset(d, dir / "indefinite");
  std::string err;
  CHECK(run({"rom", "--data", (dir / "indefinite").string(), "--out", dir.string()}, &err) == 3);
  CHECK(err.find("block 1") != std::string::npos);
}

TEST_CASE("synthesize, rom and invert through the command line") {
  const fs::path dir = scratch("pipeline");
  const std::string cfg = write_config(dir, tiny_config()).string();
  CHECK(run({"synthesize", "--config", cfg, "--out", (dir / "syn").string()}) == 0);
  CHECK(fs::exists(dir / "syn" / "data.bin"));
  CHECK(fs::exists(dir / "syn" / "true_velocity.json"));
  CHECK(run({"rom", "--data", (dir / "syn" / "data").string(), "--out", (dir / "rom").string()}) == 0);
  CHECK(fs::exists(dir / "rom" / "rom_report.json"));

  CHECK(run({"invert", "--config", cfg, "--out", (dir / "a").string(), "--threads", "1"}) == 0);
  CHECK(run({"invert", "--config", cfg, "--data", (dir / "syn" / "data").string(), "--out",
             (dir / "b").string(), "--threads", "2"}) == 0);
  CHECK(slurp(dir / "a" / "estimate.bin") == slurp(dir / "b" / "estimate.bin"));
  CHECK(slurp(dir / "a" / "state.csv") == slurp(dir / "b" / "state.csv"));

  // The manifest alone reruns the experiment.
  CHECK(run({"invert", "--config", (dir / "a" / "manifest.json").string(), "--out", (dir / "c").string()}) == 0);
  CHECK(slurp(dir / "a" / "estimate.bin") == slurp(dir / "c" / "estimate.bin"));

  CHECK(run({"invert", "--config", cfg, "--mode", "fwi", "--out", (dir / "f").string()}) == 0);
  const auto manifest = nlohmann::json::parse(slurp(dir / "f" / "manifest.json"));
  CHECK(manifest.at("mode") == "fwi");
  CHECK(manifest.at("history").size() == 2);
}

TEST_CASE("compare runs") {
  const fs::path dir = scratch("compare");
  const ExperimentConfig cfg = parse_config(tiny_config(), dir);
  CommandOptions o;
  o.out = dir / "rom";
  const InvertOutput r = cmd_invert(cfg, o);
  o.out = dir / "rom2";
  cmd_invert(cfg, o);
  o.out = dir / "syn";
  cmd_synthesize(cfg, o);

  o.out = dir / "same";
  const CompareOutput same = cmd_compare(dir / "rom" / "manifest.json", dir / "rom2" / "manifest.json", o);
  CHECK(same.a.error == same.b.error);
  CHECK(same.winner == "tie");

  o.out = dir / "baseline";
  const CompareOutput base = cmd_compare(dir / "rom" / "manifest.json", dir / "syn" / "manifest.json", o);
  CHECK(base.b.error == doctest::Approx(*r.initial_error));
  CHECK(base.a.error == doctest::Approx(*r.final_error));
  CHECK(fs::exists(dir / "baseline" / "compare.csv"));

  nlohmann::json other = tiny_config();
  other["model"]["contrast"] = 1.6;
  o.out = dir / "other";
  cmd_synthesize(parse_config(other, dir), o);
  CHECK_THROWS_AS(cmd_compare(dir / "rom" / "manifest.json", dir / "other" / "manifest.json", o), ConfigError);
}

TEST_CASE("sweep is reproducible and finds the true model") {
  const fs::path dir = scratch("sweep");
  const ExperimentConfig cfg = parse_config(tiny_config(), dir);
  CommandOptions o;
  o.out = dir / "a";
  o.threads = 1;
  const SweepOutput a = cmd_sweep(cfg, o);
  o.out = dir / "b";
  o.threads = 3;
  cmd_sweep(cfg, o);
  CHECK(slurp(dir / "a" / "sweep.csv") == slurp(dir / "b" / "sweep.csv"));
  CHECK(a.rom.rows() == 3);
  CHECK(a.rom.cols() == 3);
  // The grid centre is the true model, where the reference data are reproduced exactly.
  Eigen::Index i = 0;
  Eigen::Index j = 0;
  CHECK(a.rom.minCoeff(&i, &j) < 1e-20);
  CHECK(i == 1);
  CHECK(j == 1);

  nlohmann::json one = tiny_config();
  one["sweep"]["parameters"] = nlohmann::json::array(
      {{{"name", "depth_left"}, {"min", 300}, {"count", 1}}, {{"name", "contrast"}, {"min", 1.5}, {"count", 1}}});
  o.out = dir / "one";
  const SweepOutput single = cmd_sweep(parse_config(one, dir), o);
  CHECK(single.rom_census.count() == 1);

  nlohmann::json wrong = tiny_config();
  wrong["sweep"]["parameters"][0]["name"] = "radius";
  CHECK_THROWS_AS(cmd_sweep(parse_config(wrong, dir), o), ConfigError);
}

TEST_CASE("shipped configs parse and build") {
  for (const auto& entry : fs::directory_iterator(ROMVEL_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().filename().string());
    const ExperimentConfig cfg = load_config(entry.path());
    CHECK(true_model(cfg).grid() == cfg.grid);
    CHECK_NOTHROW(build_acquisition(cfg));
    if (!cfg.parametrization.is_null()) CHECK(build_parametrization(cfg).size() > 0);
  }
}
