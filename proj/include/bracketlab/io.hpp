#pragma once
// Experiment configuration (flags + JSON file merge) and deterministic
// artifact writers. Numbers render as %.17g so reruns are byte-identical.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bracketlab/geometry.hpp"

namespace bracketlab {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string experiment;
  std::string entry = "polterovich_polar";
  std::vector<int> n_set;  // empty: use the per-experiment default
  std::optional<double> s;
  std::optional<int> N;
  std::string map = "identity";
  std::string case_name = "translation";
  std::string family;  // empty or "conforming" | "remark2"
  bool violate_c2 = false;
  double slack = 1.5;
  double atol = 1e-4;
  double flow_tol = 1e-10;
  unsigned seed = 20260816u;
  std::string out_dir;  // empty: BRACKETLAB_OUT, then cwd
  std::optional<GridSpec> grid;  // settable from the config file only
  double chi_radius = 1.0;
  bool golden_check = false;
  bool golden_write = false;
  bool golden_force = false;
  std::string golden_path = "data/golden.json";

  void validate() const;  // throws config_error
};

// merges JSON text into cfg; file fields win. Unknown keys are rejected.
void apply_config_json(ExperimentConfig& cfg, const std::string& text);
ExperimentConfig load_config_file(ExperimentConfig base,
                                  const std::string& path);

struct CsvTable {
  std::vector<std::string> comments;  // emitted as leading "# ..." lines
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;  // row length == columns size
};

std::string csv_number(double v);
void write_csv(const std::string& path, const CsvTable& table);

// header line "# chart=<kind> axes=<names> dims=<points>", then one row per
// grid point in flat order: coordinates followed by the sample
void write_grid_field_csv(const std::string& path, const GridField& field);

void write_text_file(const std::string& path, const std::string& content);

std::vector<std::string> chart_axis_names(ChartKind kind, int dim);

}  // namespace bracketlab
