#include "bracketlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace bracketlab {

namespace {

using nlohmann::json;

void check_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw config_error(std::string(name) + " must be positive");
  }
}

GridSpec grid_from_json(const json& j) {
  if (!j.is_object() || !j.contains("axes") || !j["axes"].is_array()) {
    throw config_error("grid must be an object with an axes array");
  }
  GridSpec grid;
  for (const auto& a : j["axes"]) {
    if (!a.is_object() || !a.contains("lo") || !a.contains("hi") ||
        !a.contains("points")) {
      throw config_error("each axis needs lo, hi, points");
    }
    Axis axis;
    axis.lo = a["lo"].get<double>();
    axis.hi = a["hi"].get<double>();
    axis.points = a["points"].get<int>();
    axis.periodic = a.value("periodic", false);
    for (const auto& [key, unused] : a.items()) {
      (void)unused;
      if (key != "lo" && key != "hi" && key != "points" && key != "periodic") {
        throw config_error("unknown axis field: " + key);
      }
    }
    grid.axes.push_back(axis);
  }
  return grid;
}

}  // namespace

void ExperimentConfig::validate() const {
  check_positive(slack, "slack");
  check_positive(atol, "atol");
  check_positive(flow_tol, "flow_tol");
  check_positive(chi_radius, "chi_radius");
  for (std::size_t i = 0; i < n_set.size(); ++i) {
    if (n_set[i] < 1) throw config_error("n values must be >= 1");
    if (i > 0 && n_set[i] <= n_set[i - 1]) {
      throw config_error("n_set must be strictly increasing");
    }
  }
  if (N && *N < 0) throw config_error("N must be >= 0");
  if (s && !std::isfinite(*s)) throw config_error("s must be finite");
  if (!family.empty() && family != "conforming" && family != "remark2") {
    throw config_error("unknown family: " + family);
  }
}

void apply_config_json(ExperimentConfig& cfg, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw config_error(std::string("config is not valid json: ") + e.what());
  }
  if (!j.is_object()) throw config_error("config root must be an object");

  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "experiment") cfg.experiment = value.get<std::string>();
      else if (key == "entry") cfg.entry = value.get<std::string>();
      else if (key == "n_set") cfg.n_set = value.get<std::vector<int>>();
      else if (key == "s") cfg.s = value.get<double>();
      else if (key == "N") cfg.N = value.get<int>();
      else if (key == "map") cfg.map = value.get<std::string>();
      else if (key == "case") cfg.case_name = value.get<std::string>();
      else if (key == "family") cfg.family = value.get<std::string>();
      else if (key == "violate_c2") cfg.violate_c2 = value.get<bool>();
      else if (key == "slack") cfg.slack = value.get<double>();
      else if (key == "atol") cfg.atol = value.get<double>();
      else if (key == "flow_tol") cfg.flow_tol = value.get<double>();
      else if (key == "seed") cfg.seed = value.get<unsigned>();
      else if (key == "out_dir") cfg.out_dir = value.get<std::string>();
      else if (key == "grid") cfg.grid = grid_from_json(value);
      else if (key == "chi_radius") cfg.chi_radius = value.get<double>();
      else if (key == "golden_check") cfg.golden_check = value.get<bool>();
      else if (key == "golden_write") cfg.golden_write = value.get<bool>();
      else if (key == "golden_force") cfg.golden_force = value.get<bool>();
      else if (key == "golden_path") cfg.golden_path = value.get<std::string>();
      else throw config_error("unknown config field: " + key);
    } catch (const config_error&) {
      throw;
    } catch (const std::exception& e) {
      throw config_error("bad value for " + key + ": " + e.what());
    }
  }
  cfg.validate();
}

ExperimentConfig load_config_file(ExperimentConfig base,
                                  const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  apply_config_json(base, text.str());
  return base;
}

std::string csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void open_for_write(std::ofstream& out, const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  out.open(path, std::ios::binary);  // keep \n exact on every platform
  if (!out) throw std::runtime_error("cannot write file: " + path);
}

}  // namespace

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out;
  open_for_write(out, path);
  for (const auto& c : table.comments) out << "# " << c << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << csv_number(row[i]);
    }
    out << "\n";
  }
}

void write_grid_field_csv(const std::string& path, const GridField& field) {
  const auto names = chart_axis_names(field.chart.kind, field.chart.dim);
  std::ofstream out;
  open_for_write(out, path);
  out << "# chart=" << to_string(field.chart.kind) << " axes=";
  for (std::size_t i = 0; i < names.size(); ++i) {
    out << (i ? "," : "") << names[i];
  }
  out << " dims=";
  for (std::size_t i = 0; i < field.grid.axes.size(); ++i) {
    out << (i ? "x" : "") << field.grid.axes[i].points;
  }
  out << "\n";
  for (const auto& n : names) out << n << ",";
  out << "value\n";
  const std::size_t dim = field.grid.axes.size();
  double pt[kMaxDim];
  for (std::size_t flat = 0; flat < field.samples.size(); ++flat) {
    field.grid.point_at(flat, std::span(pt, dim));
    for (std::size_t i = 0; i < dim; ++i) out << csv_number(pt[i]) << ",";
    out << csv_number(field.samples[flat]) << "\n";
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out;
  open_for_write(out, path);
  out << content;
}

std::vector<std::string> chart_axis_names(ChartKind kind, int dim) {
  std::vector<std::string> names;
  switch (kind) {
    case ChartKind::cartesian:
      for (int k = 0; 2 * k < dim; ++k) {
        const std::string suffix = dim > 2 ? std::to_string(k + 1) : "";
        names.push_back("q" + suffix);
        names.push_back("p" + suffix);
      }
      break;
    case ChartKind::polar_r2:
      names = {"r", "theta"};
      break;
    case ChartKind::cylinder_s1:
      names = {"s", "theta"};
      break;
    case ChartKind::symplectization_s1xU:
      names = {"s", "theta"};
      for (int i = 2; i < dim; ++i) {
        names.push_back("x" + std::to_string(i));
      }
      break;
  }
  return names;
}

}  // namespace bracketlab
