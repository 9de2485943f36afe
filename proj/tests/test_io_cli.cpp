#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "bracketlab/golden.hpp"
#include "bracketlab/io.hpp"
#include "bracketlab/runner.hpp"

using namespace bracketlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("bracketlab_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config json sets every field") {
  ExperimentConfig cfg;
  cfg.experiment = "bracket";
  apply_config_json(cfg, R"({
    "entry": "cylinder_heisenberg",
    "n_set": [1, 4],
    "s": 0.25,
    "N": 3,
    "map": "shear",
    "case": "disjoint",
    "family": "remark2",
    "violate_c2": true,
    "slack": 2.0,
    "atol": 1e-3,
    "flow_tol": 1e-9,
    "seed": 7,
    "out_dir": "artifacts",
    "chi_radius": 2.0,
    "golden_check": true,
    "golden_path": "elsewhere.json"
  })");
  CHECK(cfg.entry == "cylinder_heisenberg");
  CHECK(cfg.n_set == std::vector<int>{1, 4});
  CHECK(cfg.s.value() == 0.25);
  CHECK(cfg.N.value() == 3);
  CHECK(cfg.map == "shear");
  CHECK(cfg.case_name == "disjoint");
  CHECK(cfg.family == "remark2");
  CHECK(cfg.violate_c2);
  CHECK(cfg.slack == 2.0);
  CHECK(cfg.atol == 1e-3);
  CHECK(cfg.flow_tol == 1e-9);
  CHECK(cfg.seed == 7u);
  CHECK(cfg.out_dir == "artifacts");
  CHECK(cfg.chi_radius == 2.0);
  CHECK(cfg.golden_check);
  CHECK(cfg.golden_path == "elsewhere.json");
}

TEST_CASE("config json parses a grid block") {
  ExperimentConfig cfg;
  cfg.experiment = "sympcheck";
  apply_config_json(cfg, R"({"grid": {"axes": [
    {"lo": -2.0, "hi": 2.0, "points": 33},
    {"lo": -1.0, "hi": 1.0, "points": 17, "periodic": true}
  ]}})");
  REQUIRE(cfg.grid.has_value());
  REQUIRE(cfg.grid->axes.size() == 2);
  CHECK(cfg.grid->axes[0].lo == -2.0);
  CHECK(cfg.grid->axes[0].points == 33);
  CHECK_FALSE(cfg.grid->axes[0].periodic);
  CHECK(cfg.grid->axes[1].periodic);
}

TEST_CASE("config json rejects bad input") {
  ExperimentConfig cfg;
  cfg.experiment = "bracket";
  CHECK_THROWS_AS(apply_config_json(cfg, R"({"entyr": "x"})"), config_error);
  CHECK_THROWS_AS(apply_config_json(cfg, R"({"n_set": [4, 1]})"),
                  config_error);
  CHECK_THROWS_AS(apply_config_json(cfg, R"({"slack": -1.0})"), config_error);
  CHECK_THROWS_AS(apply_config_json(cfg, R"({"family": "bogus"})"),
                  config_error);
  CHECK_THROWS_AS(apply_config_json(cfg, "{not json"), config_error);
  CHECK_THROWS_AS(
      apply_config_json(cfg, R"({"grid": {"axes": [{"lo": 0, "hi": 1,
        "points": 8, "wrap": true}]}})"),
      config_error);
}

TEST_CASE("config file fields override earlier flags") {
  const fs::path dir = fresh_dir("cfgmerge");
  const fs::path file = dir / "run.json";
  write_text_file(file.string(), R"({"entry": "remark2_cartesian"})");
  ExperimentConfig base;
  base.experiment = "defect";
  base.entry = "polterovich_polar";
  base.slack = 1.9;
  const auto merged = load_config_file(base, file.string());
  CHECK(merged.entry == "remark2_cartesian");  // file wins
  CHECK(merged.slack == 1.9);                  // untouched fields survive
  CHECK_THROWS_AS(load_config_file(base, (dir / "absent.json").string()),
                  config_error);
  fs::remove_all(dir);
}

TEST_CASE("csv numbers round trip exactly") {
  CHECK(csv_number(1.0) == "1");
  CHECK(csv_number(0.1) == "0.10000000000000001");
  CHECK(csv_number(-2.5) == "-2.5");
}

TEST_CASE("csv writer emits the exact layout") {
  const fs::path dir = fresh_dir("csv");
  const fs::path file = dir / "t.csv";
  CsvTable table;
  table.comments = {"alpha"};
  table.columns = {"a", "b"};
  table.rows = {{1.0, 0.5}};
  write_csv(file.string(), table);
  CHECK(slurp(file) == "# alpha\na,b\n1,0.5\n");
  fs::remove_all(dir);
}

TEST_CASE("grid field csv carries a chart header") {
  const fs::path dir = fresh_dir("gridcsv");
  const fs::path file = dir / "f.csv";
  const Chart cart = make_chart(ChartKind::cartesian);
  const GridSpec grid{{Axis{0.0, 1.0, 4}, Axis{0.0, 1.0, 5}}};
  const auto field = sample_field(cart, grid, smooth_constant(2.0));
  write_grid_field_csv(file.string(), field);
  const std::string text = slurp(file);
  CHECK(text.rfind("# chart=cartesian axes=q,p dims=4x5\n", 0) == 0);
  int lines = 0;
  for (const char c : text) lines += c == '\n';
  CHECK(lines == 1 + 1 + 20);  // header comment, column row, samples
  fs::remove_all(dir);
}

TEST_CASE("axis names follow the chart") {
  CHECK(chart_axis_names(ChartKind::cartesian, 2) ==
        std::vector<std::string>{"q", "p"});
  CHECK(chart_axis_names(ChartKind::cartesian, 4) ==
        std::vector<std::string>{"q1", "p1", "q2", "p2"});
  CHECK(chart_axis_names(ChartKind::polar_r2, 2) ==
        std::vector<std::string>{"r", "theta"});
  CHECK(chart_axis_names(ChartKind::cylinder_s1, 2) ==
        std::vector<std::string>{"s", "theta"});
}

TEST_CASE("output directory resolution order") {
  ExperimentConfig cfg;
  cfg.experiment = "sympcheck";
  cfg.out_dir = "chosen";
  CHECK(resolve_output_dir(cfg) == "chosen");
  cfg.out_dir.clear();
  setenv("BRACKETLAB_OUT", "from_env", 1);
  CHECK(resolve_output_dir(cfg) == "from_env");
  unsetenv("BRACKETLAB_OUT");
  CHECK(resolve_output_dir(cfg) == ".");
}

TEST_CASE("identical configs produce identical artifacts") {
  const fs::path d1 = fresh_dir("det1");
  const fs::path d2 = fresh_dir("det2");
  ExperimentConfig cfg;
  cfg.experiment = "sympcheck";
  cfg.map = "identity";
  cfg.out_dir = d1.string();
  const auto r1 = run_experiment(cfg);
  cfg.out_dir = d2.string();
  const auto r2 = run_experiment(cfg);
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  CHECK(slurp(d1 / "sympcheck_identity.json") ==
        slurp(d2 / "sympcheck_identity.json"));
  CHECK(slurp(d1 / "sympcheck_identity.csv") ==
        slurp(d2 / "sympcheck_identity.csv"));
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("configuration problems exit with status 2") {
  const fs::path dir = fresh_dir("exit2");
  ExperimentConfig cfg;
  cfg.out_dir = dir.string();

  cfg.experiment = "mystery";
  CHECK(safe_run(cfg).exit_code == 2);

  cfg.experiment = "bracket";
  cfg.entry = "no_such_entry";
  CHECK(safe_run(cfg).exit_code == 2);

  cfg = ExperimentConfig{};
  cfg.out_dir = dir.string();
  cfg.experiment = "sympcheck";
  cfg.map = "no_such_map";
  CHECK(safe_run(cfg).exit_code == 2);
  fs::remove_all(dir);
}

TEST_CASE("numeric blowups exit with status 3") {
  const fs::path dir = fresh_dir("exit3");
  ExperimentConfig cfg;
  cfg.experiment = "flow";
  cfg.entry = "polterovich_polar";
  cfg.n_set = {1};
  cfg.s = 100.0;  // the index-1 image drives points out of the chart
  cfg.out_dir = dir.string();
  const auto res = safe_run(cfg);
  CHECK(res.exit_code == 3);
  fs::remove_all(dir);
}

TEST_CASE("golden file round trip") {
  const fs::path dir = fresh_dir("golden_rt");
  const fs::path file = dir / "g.json";
  const GoldenTable& t = builtin_golden();
  save_golden(t, file.string());
  const auto back = load_golden(file.string());
  CHECK(compare_golden(t, back).empty());
  CHECK(back.chi_chiprime_max == t.chi_chiprime_max);
  CHECK(back.pairing_constant == t.pairing_constant);

  write_text_file(file.string(), "{corrupt");
  CHECK_THROWS(load_golden(file.string()));
  fs::remove_all(dir);
}

TEST_CASE("golden comparison flags a tampered entry") {
  GoldenTable tampered = builtin_golden();
  tampered.kappa_cylinder += 1e-6;
  const auto diffs = compare_golden(builtin_golden(), tampered);
  REQUIRE(diffs.size() == 1);
  CHECK(diffs[0].name == "kappa_cylinder");
  CHECK(diffs[0].diff > 1e-9);
}

TEST_CASE("golden runner write and check cycle") {
  const fs::path dir = fresh_dir("golden_run");
  const fs::path file = dir / "golden.json";
  ExperimentConfig cfg;
  cfg.experiment = "golden";
  cfg.out_dir = dir.string();
  cfg.golden_path = file.string();

  cfg.golden_write = true;
  CHECK(run_experiment(cfg).exit_code == 0);
  REQUIRE(fs::exists(file));

  cfg.golden_write = false;
  cfg.golden_check = true;
  CHECK(run_experiment(cfg).exit_code == 0);

  // tamper with one stored value: checks fail, a plain write refuses
  auto t = load_golden(file.string());
  t.pairing_constant += 1e-5;
  save_golden(t, file.string());
  CHECK(run_experiment(cfg).exit_code == 1);

  cfg.golden_check = false;
  cfg.golden_write = true;
  CHECK(run_experiment(cfg).exit_code == 1);
  CHECK(load_golden(file.string()).pairing_constant == t.pairing_constant);

  cfg.golden_force = true;
  CHECK(run_experiment(cfg).exit_code == 0);
  CHECK(load_golden(file.string()).pairing_constant != t.pairing_constant);
  fs::remove_all(dir);
}
