#pragma once

// Experiment configuration: a flat key-value file with dotted keys, plus
// programmatic overrides (CLI flags override file values). Unknown keys are
// rejected so typos cannot silently change a run.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "isogeo/bodies.hpp"
#include "isogeo/csv.hpp"
#include "isogeo/errors.hpp"
#include "isogeo/marginals.hpp"

namespace isogeo {

enum class ExperimentKind {
  mean_width,
  supergaussian,
  subgaussian,
  clt,
  orlicz_verify,
  classify,
  sample
};

inline const char* experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::mean_width: return "mean-width";
    case ExperimentKind::supergaussian: return "supergaussian";
    case ExperimentKind::subgaussian: return "subgaussian";
    case ExperimentKind::clt: return "clt";
    case ExperimentKind::orlicz_verify: return "orlicz-verify";
    case ExperimentKind::classify: return "classify";
    case ExperimentKind::sample: return "sample";
  }
  return "?";
}

inline ExperimentKind experiment_from_name(const std::string& name) {
  for (ExperimentKind kind :
       {ExperimentKind::mean_width, ExperimentKind::supergaussian,
        ExperimentKind::subgaussian, ExperimentKind::clt, ExperimentKind::orlicz_verify,
        ExperimentKind::classify, ExperimentKind::sample}) {
    if (name == experiment_name(kind)) return kind;
  }
  throw config_error("unknown experiment: " + name);
}

inline BodyKind body_kind_from_name(const std::string& name) {
  for (BodyKind kind : {BodyKind::cube, BodyKind::ball, BodyKind::cross_polytope,
                        BodyKind::simplex, BodyKind::lp_ball}) {
    if (name == body_kind_name(kind)) return kind;
  }
  throw config_error("unknown body kind: " + name);
}

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::mean_width;
  BodyKind body_kind = BodyKind::cube;
  int dim = 20;
  double p = 2.0;  // lp_ball only
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = hardware default

  // budgets
  std::size_t samples = 1000000;
  std::size_t trials = 32;
  std::size_t directions = 64;
  std::size_t m_directions = 2048;  // sphere directions per mean-width estimate
  std::size_t samples_per_direction = 20000;
  std::size_t bins = 24;

  // grids
  std::vector<std::size_t> n_grid = {20, 80, 320, 1280, 5120};
  std::vector<double> t_grid;  // explicit; empty = build geometric grid below
  double t_min = 1.0;
  double t_max = 4.0;
  double t_ratio = 1.15;

  // thresholds
  double epsilon = 0.2;          // CLT sup-ratio acceptance
  double r_constant = 3.0;       // sub/supergaussian constant r
  double q_band = 4.0;           // max allowed q_max/q_min
  double width_band = 2.0;       // max allowed ratio max/min
  double clt_fraction_min = 0.9;
  double sub_fraction_min = 0.95;
  double small_diameter_cap = 2.0;
  double t_window = 1.2;  // histogram window for clt
  ClassifyMode classify_mode = ClassifyMode::both;
  std::vector<double> s_levels = {0.5, 1.0, 2.0};  // multiples of lk

  std::string output_dir = "run";
};

namespace detail {

inline std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

template <typename T>
inline std::vector<T> parse_list(const std::string& text) {
  std::vector<T> values;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    token = trim(token);
    if (token.empty()) continue;
    if constexpr (std::is_same_v<T, double>) {
      values.push_back(std::stod(token));
    } else {
      values.push_back(static_cast<T>(std::stoull(token)));
    }
  }
  if (values.empty()) throw config_error("empty list value: " + text);
  return values;
}

}  // namespace detail

inline void apply_config_entry(ExperimentConfig& config, const std::string& key,
                               const std::string& value) {
  try {
    if (key == "experiment") config.experiment = experiment_from_name(value);
    else if (key == "body.kind") config.body_kind = body_kind_from_name(value);
    else if (key == "body.dim") config.dim = std::stoi(value);
    else if (key == "body.p") config.p = std::stod(value);
    else if (key == "seed") config.seed = std::stoull(value);
    else if (key == "threads") config.threads = std::stoi(value);
    else if (key == "budgets.samples") config.samples = std::stoull(value);
    else if (key == "budgets.trials") config.trials = std::stoull(value);
    else if (key == "budgets.directions") config.directions = std::stoull(value);
    else if (key == "budgets.m") config.m_directions = std::stoull(value);
    else if (key == "budgets.samples_per_direction")
      config.samples_per_direction = std::stoull(value);
    else if (key == "budgets.bins") config.bins = std::stoull(value);
    else if (key == "grid.n") config.n_grid = detail::parse_list<std::size_t>(value);
    else if (key == "grid.t") config.t_grid = detail::parse_list<double>(value);
    else if (key == "grid.t_min") config.t_min = std::stod(value);
    else if (key == "grid.t_max") config.t_max = std::stod(value);
    else if (key == "grid.t_ratio") config.t_ratio = std::stod(value);
    else if (key == "thresholds.epsilon") config.epsilon = std::stod(value);
    else if (key == "thresholds.r") config.r_constant = std::stod(value);
    else if (key == "thresholds.q_band") config.q_band = std::stod(value);
    else if (key == "thresholds.width_band") config.width_band = std::stod(value);
    else if (key == "thresholds.clt_fraction") config.clt_fraction_min = std::stod(value);
    else if (key == "thresholds.sub_fraction") config.sub_fraction_min = std::stod(value);
    else if (key == "thresholds.small_diameter_cap")
      config.small_diameter_cap = std::stod(value);
    else if (key == "thresholds.t_window") config.t_window = std::stod(value);
    else if (key == "classify.mode") {
      if (value == "subgaussian") config.classify_mode = ClassifyMode::subgaussian;
      else if (value == "supergaussian") config.classify_mode = ClassifyMode::supergaussian;
      else if (value == "both") config.classify_mode = ClassifyMode::both;
      else throw config_error("classify.mode must be subgaussian|supergaussian|both");
    } else if (key == "orlicz.s_levels") {
      config.s_levels = detail::parse_list<double>(value);
    } else if (key == "output_dir") {
      config.output_dir = value;
    } else {
      throw config_error("unknown config key: " + key);
    }
  } catch (const config_error&) {
    throw;
  } catch (const std::exception&) {
    throw config_error("bad value for " + key + ": " + value);
  }
}

inline void load_config_file(ExperimentConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error(path + ":" + std::to_string(line_number) +
                         ": expected key = value");
    }
    apply_config_entry(config, detail::trim(line.substr(0, eq)),
                       detail::trim(line.substr(eq + 1)));
  }
}

// Effective configuration as sorted key=value pairs (the manifest echo).
inline std::map<std::string, std::string> config_to_entries(const ExperimentConfig& c) {
  std::map<std::string, std::string> entries;
  entries["experiment"] = experiment_name(c.experiment);
  entries["body.kind"] = body_kind_name(c.body_kind);
  entries["body.dim"] = std::to_string(c.dim);
  if (c.body_kind == BodyKind::lp_ball) entries["body.p"] = format_double(c.p);
  entries["seed"] = std::to_string(c.seed);
  entries["threads"] = std::to_string(c.threads);
  entries["budgets.samples"] = std::to_string(c.samples);
  entries["budgets.trials"] = std::to_string(c.trials);
  entries["budgets.directions"] = std::to_string(c.directions);
  entries["budgets.m"] = std::to_string(c.m_directions);
  entries["budgets.samples_per_direction"] = std::to_string(c.samples_per_direction);
  entries["budgets.bins"] = std::to_string(c.bins);
  auto join_sizes = [](const std::vector<std::size_t>& values) {
    std::string text;
    for (std::size_t v : values) {
      if (!text.empty()) text += ",";
      text += std::to_string(v);
    }
    return text;
  };
  auto join_doubles = [](const std::vector<double>& values) {
    std::string text;
    for (double v : values) {
      if (!text.empty()) text += ",";
      text += format_double(v);
    }
    return text;
  };
  entries["grid.n"] = join_sizes(c.n_grid);
  if (!c.t_grid.empty()) entries["grid.t"] = join_doubles(c.t_grid);
  entries["grid.t_min"] = format_double(c.t_min);
  entries["grid.t_max"] = format_double(c.t_max);
  entries["grid.t_ratio"] = format_double(c.t_ratio);
  entries["thresholds.epsilon"] = format_double(c.epsilon);
  entries["thresholds.r"] = format_double(c.r_constant);
  entries["thresholds.q_band"] = format_double(c.q_band);
  entries["thresholds.width_band"] = format_double(c.width_band);
  entries["thresholds.clt_fraction"] = format_double(c.clt_fraction_min);
  entries["thresholds.sub_fraction"] = format_double(c.sub_fraction_min);
  entries["thresholds.small_diameter_cap"] = format_double(c.small_diameter_cap);
  entries["thresholds.t_window"] = format_double(c.t_window);
  entries["classify.mode"] = c.classify_mode == ClassifyMode::both ? "both"
                             : c.classify_mode == ClassifyMode::subgaussian
                                 ? "subgaussian"
                                 : "supergaussian";
  entries["orlicz.s_levels"] = join_doubles(c.s_levels);
  entries["output_dir"] = c.output_dir;
  return entries;
}

// Geometric grid t_min * ratio^k, truncated and capped at t_max (the cap is
// included as a final point when the last step overshoots).
inline std::vector<double> make_geometric_grid(double t_min, double t_max, double ratio) {
  if (!(t_min > 0.0) || !(t_max >= t_min) || !(ratio > 1.0)) {
    throw config_error("geometric grid requires 0 < t_min <= t_max and ratio > 1");
  }
  std::vector<double> grid;
  for (double t = t_min; t < t_max * (1.0 - 1e-12); t *= ratio) grid.push_back(t);
  grid.push_back(t_max);
  return grid;
}

inline std::vector<double> effective_t_grid(const ExperimentConfig& config) {
  if (!config.t_grid.empty()) return config.t_grid;
  return make_geometric_grid(config.t_min, config.t_max, config.t_ratio);
}

inline Body body_from_config(const ExperimentConfig& config) {
  return make_body(config.body_kind, config.dim, config.p);
}

}  // namespace isogeo
