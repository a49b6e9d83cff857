#pragma once

// Experiment runners: each executes one configured experiment, writes its
// CSV outputs plus gnuplot-style .dat files into the run directory, checks
// the configured assertions and records everything in a manifest.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "isogeo/bodies.hpp"
#include "isogeo/config.hpp"
#include "isogeo/csv.hpp"
#include "isogeo/errors.hpp"
#include "isogeo/gaussref.hpp"
#include "isogeo/manifest.hpp"
#include "isogeo/marginals.hpp"
#include "isogeo/orlicz.hpp"
#include "isogeo/parallel.hpp"
#include "isogeo/polytope.hpp"
#include "isogeo/quadrature.hpp"
#include "isogeo/sampling.hpp"

namespace isogeo {

namespace detail {

struct RunContext {
  const ExperimentConfig& config;
  Body body;
  std::string dir;
  RunManifest manifest;

  std::string path(const std::string& filename) const { return dir + "/" + filename; }

  void record_output(const std::string& filename) {
    OutputRecord record;
    record.filename = filename;
    record.checksum = fnv1a64_file(path(filename));
    record.bytes = std::filesystem::file_size(path(filename));
    manifest.outputs.push_back(record);
  }

  void criterion(const std::string& name, bool pass, const std::string& detail) {
    manifest.criteria.push_back({name, pass, detail});
    if (!pass) manifest.pass = false;
  }
};

// Deterministic radial-quadrature oracle for F(t) on the ball body.
inline double ball_tail_oracle(const Body& ball, double t) {
  const int n = ball.dim;
  const double r = ball.scale;
  const double level = t * ball.lk;
  if (level >= r) return 0.0;
  return integrate(
      [&](double rho) {
        return n * std::pow(rho / r, n - 1) / r * sphere_tail(n, level / rho);
      },
      level, r, 1e-9);
}

inline void write_tail_outputs(RunContext& ctx, const TailCurve& curve) {
  {
    TableWriter csv(ctx.path("tail_curve.csv"));
    csv.header({"t", "value", "se", "kind"});
    for (std::size_t k = 0; k < curve.t_grid.size(); ++k) {
      csv.cell(curve.t_grid[k]);
      csv.cell(curve.values[k]);
      csv.cell(curve.std_errors[k]);
      csv.cell(std::string(curve.kind == TailKind::sphere_averaged ? "sphere_averaged"
                                                                   : "directional"));
      csv.end_row();
    }
  }
  {
    TableWriter dat(ctx.path("tail_curve.dat"), " ");
    for (std::size_t k = 0; k < curve.t_grid.size(); ++k) {
      dat.cell(curve.t_grid[k]);
      dat.cell(curve.values[k]);
      dat.cell(curve.std_errors[k]);
      dat.end_row();
    }
  }
  ctx.record_output("tail_curve.csv");
  ctx.record_output("tail_curve.dat");
}

inline void write_rate_output(RunContext& ctx, const GaussianRateFit& fit) {
  TableWriter csv(ctx.path("rate.csv"));
  csv.header({"t", "q"});
  for (std::size_t k = 0; k < fit.t_used.size(); ++k) {
    csv.cell(fit.t_used[k]);
    csv.cell(fit.q_values[k]);
    csv.end_row();
  }
  ctx.record_output("rate.csv");
}

inline void check_tail_monotone(RunContext& ctx, const TailCurve& curve) {
  bool monotone = true;
  double worst = 0.0;
  for (std::size_t k = 1; k < curve.values.size(); ++k) {
    const double slack = 3.0 * std::sqrt(curve.std_errors[k] * curve.std_errors[k] +
                                         curve.std_errors[k - 1] * curve.std_errors[k - 1]);
    const double rise = curve.values[k] - curve.values[k - 1];
    worst = std::max(worst, rise - slack);
    if (rise > slack) monotone = false;
  }
  ctx.criterion("tail-monotone", monotone,
                "max_rise_beyond_3se=" + format_double(worst));
}

inline std::vector<double> validated_tail_grid(const ExperimentConfig& config,
                                               const Body& body) {
  const std::vector<double> grid = effective_t_grid(config);
  const double sqrt_n = std::sqrt(static_cast<double>(body.dim));
  for (double t : grid) {
    if (!(t > 0.0) || t > sqrt_n) {
      throw config_error("t grid point " + format_double(t) +
                         " outside (0, sqrt(n)] for n=" + std::to_string(body.dim));
    }
  }
  return grid;
}

inline void run_mean_width(RunContext& ctx) {
  const ExperimentConfig& config = ctx.config;
  const WidthCurve curve = width_scaling_curve(
      ctx.body, config.n_grid, config.trials, config.m_directions, {config.seed, 0});
  {
    TableWriter csv(ctx.path("width_curve.csv"));
    csv.header({"N", "width", "width_se", "ratio"});
    for (const auto& row : curve.rows) {
      csv.cell(row.n_vertices);
      csv.cell(row.width.value);
      csv.cell(row.width.std_error);
      csv.cell(row.ratio);
      csv.end_row();
    }
  }
  {
    TableWriter dat(ctx.path("width_curve.dat"), " ");
    for (const auto& row : curve.rows) {
      dat.cell(row.n_vertices);
      dat.cell(row.ratio);
      dat.cell(row.width.std_error);
      dat.end_row();
    }
  }
  ctx.record_output("width_curve.csv");
  ctx.record_output("width_curve.dat");

  double ratio_min = curve.rows.front().ratio;
  double ratio_max = ratio_min;
  for (const auto& row : curve.rows) {
    ratio_min = std::min(ratio_min, row.ratio);
    ratio_max = std::max(ratio_max, row.ratio);
  }
  const double band = ratio_max / ratio_min;
  ctx.criterion("ratio-band", band <= config.width_band,
                "max/min=" + format_double(band) +
                    " band=" + format_double(config.width_band));
  bool monotone = true;
  double worst = 0.0;
  for (std::size_t k = 1; k < curve.rows.size(); ++k) {
    const auto& prev = curve.rows[k - 1].width;
    const auto& cur = curve.rows[k].width;
    const double drop = prev.value - cur.value - 3.0 * combined_se(prev, cur);
    worst = std::max(worst, drop);
    if (drop > 0.0) monotone = false;
  }
  ctx.criterion("width-monotone", monotone,
                "max_drop_beyond_3se=" + format_double(worst));
}

inline void run_supergaussian(RunContext& ctx) {
  const ExperimentConfig& config = ctx.config;
  const std::vector<double> grid = validated_tail_grid(config, ctx.body);
  const SampleBatch samples = sample_uniform(ctx.body, config.samples, {config.seed, 0});
  const TailCurve curve = averaged_tail(ctx.body, grid, samples);
  write_tail_outputs(ctx, curve);
  check_tail_monotone(ctx, curve);

  if (ctx.body.kind == BodyKind::ball) {
    bool agree = true;
    double worst_z = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double oracle = ball_tail_oracle(ctx.body, grid[k]);
      const double se = std::max(curve.std_errors[k], 1e-300);
      const double z = std::fabs(curve.values[k] - oracle) / se;
      worst_z = std::max(worst_z, z);
      if (z > 3.0) agree = false;
    }
    ctx.criterion("oracle-agreement", agree, "worst_z=" + format_double(worst_z));
  }

  const GaussianRateFit fit = gaussian_rate(curve, grid.front(), grid.back());
  write_rate_output(ctx, fit);
  const bool band_ok = fit.q_min > 0.0 && fit.q_max / fit.q_min <= config.q_band &&
                       std::isfinite(fit.q_max);
  ctx.criterion("q-band", band_ok,
                "q_min=" + format_double(fit.q_min) + " q_max=" + format_double(fit.q_max) +
                    " band=" + format_double(config.q_band));
}

inline void run_subgaussian(RunContext& ctx) {
  const ExperimentConfig& config = ctx.config;
  const std::vector<double> grid = validated_tail_grid(config, ctx.body);
  const double quarter_power = std::pow(static_cast<double>(ctx.body.dim), 0.25);
  if (grid.back() > quarter_power &&
      !is_small_diameter(ctx.body, config.small_diameter_cap)) {
    throw config_error(
        "subgaussian grid extends beyond n^(1/4) but the body is not small-diameter "
        "(cap " +
        format_double(config.small_diameter_cap) + ")");
  }
  const SampleBatch samples = sample_uniform(ctx.body, config.samples, {config.seed, 0});
  const TailCurve curve = averaged_tail(ctx.body, grid, samples);
  write_tail_outputs(ctx, curve);
  check_tail_monotone(ctx, curve);

  const GaussianRateFit fit = gaussian_rate(curve, grid.front(), grid.back());
  write_rate_output(ctx, fit);
  ctx.criterion("positive-rate", fit.q_min > 0.0,
                "q_min=" + format_double(fit.q_min) +
                    " dropped_zeros=" + std::to_string(fit.dropped_zeros));
}

inline void run_clt(RunContext& ctx) {
  const ExperimentConfig& config = ctx.config;
  const CltReport report =
      clt_fraction(ctx.body, config.directions, config.epsilon, config.t_window,
                   config.samples, {config.seed, 0}, config.bins);
  {
    TableWriter csv(ctx.path("clt.csv"));
    csv.header({"direction_index", "sup_ratio", "pass"});
    for (std::size_t d = 0; d < report.sup_ratios.size(); ++d) {
      csv.cell(d);
      csv.cell(report.sup_ratios[d]);
      csv.cell(report.sup_ratios[d] <= config.epsilon);
      csv.end_row();
    }
  }
  ctx.record_output("clt.csv");
  ctx.criterion("clt-fraction", report.passing_fraction >= config.clt_fraction_min,
                "fraction=" + format_double(report.passing_fraction) +
                    " min=" + format_double(config.clt_fraction_min));
}

inline void run_orlicz_verify(RunContext& ctx) {
  const ExperimentConfig& config = ctx.config;
  const SampleBatch xs = sample_uniform(ctx.body, config.samples, {config.seed, 0});
  const std::vector<double> thetas =
      sample_sphere(ctx.body.dim, config.directions,
                    {derive_seed(config.seed, streams::kSphere, 1, 0), 0});
  bool all_pass = true;
  double worst_z = 0.0;
  {
    TableWriter csv(ctx.path("verify.csv"));
    csv.header({"s", "lhs", "lhs_se", "rhs", "rhs_se", "pass"});
    for (double multiple : config.s_levels) {
      const double s = multiple * ctx.body.lk;
      const RepresentationCheck check =
          verify_representation(ctx.body, s, xs, thetas, config.directions);
      const double se = std::max(combined_se(check.lhs, check.rhs), 1e-300);
      const double z = std::fabs(check.lhs.value - check.rhs.value) / se;
      const bool pass = z <= 3.0;
      worst_z = std::max(worst_z, z);
      all_pass = all_pass && pass;
      csv.cell(s);
      csv.cell(check.lhs.value);
      csv.cell(check.lhs.std_error);
      csv.cell(check.rhs.value);
      csv.cell(check.rhs.std_error);
      csv.cell(pass);
      csv.end_row();
    }
  }
  ctx.record_output("verify.csv");
  ctx.criterion("representation-identity", all_pass,
                "worst_z=" + format_double(worst_z));
}

inline void run_classify(RunContext& ctx) {
  const ExperimentConfig& config = ctx.config;
  const std::vector<double> grid = effective_t_grid(config);
  const std::vector<double> dirs =
      sample_sphere(ctx.body.dim, config.directions,
                    {derive_seed(config.seed, streams::kSphere, 2, 0), 0});
  const ClassificationResult result = classify_directions(
      ctx.body, dirs, config.directions, config.r_constant, grid,
      config.samples_per_direction, {config.seed, 1}, config.classify_mode);
  {
    TableWriter csv(ctx.path("classify.csv"));
    csv.header({"direction_index", "subgaussian", "supergaussian", "worst_t"});
    for (std::size_t d = 0; d < result.per_direction.size(); ++d) {
      const auto& cls = result.per_direction[d];
      csv.cell(d);
      csv.cell(cls.subgaussian);
      csv.cell(cls.supergaussian);
      csv.cell(cls.worst_t);
      csv.end_row();
    }
  }
  ctx.record_output("classify.csv");
  ctx.criterion("classified", true,
                "sub_fraction=" + format_double(result.subgaussian_fraction) +
                    " super_fraction=" + format_double(result.supergaussian_fraction));
  if (config.classify_mode != ClassifyMode::supergaussian) {
    ctx.criterion("subgaussian-fraction",
                  result.subgaussian_fraction >= config.sub_fraction_min,
                  "fraction=" + format_double(result.subgaussian_fraction) +
                      " min=" + format_double(config.sub_fraction_min));
  }
  if (ctx.body.kind == BodyKind::ball) {
    bool uniform = true;
    for (const auto& cls : result.per_direction) {
      if (cls.subgaussian != result.per_direction[0].subgaussian ||
          cls.supergaussian != result.per_direction[0].supergaussian) {
        uniform = false;
      }
    }
    ctx.criterion("ball-uniformity", uniform,
                  uniform ? "all directions classified identically"
                          : "classifications differ across directions");
  }
}

inline void run_sample(RunContext& ctx) {
  const ExperimentConfig& config = ctx.config;
  const SampleBatch batch = sample_uniform(ctx.body, config.samples, {config.seed, 0});
  write_batch(batch, ctx.path("batch.bin"));
  ctx.record_output("batch.bin");
  bool inside = true;
  for (std::size_t i = 0; i < batch.count && inside; ++i) {
    inside = membership(ctx.body, batch.row(i));
  }
  ctx.criterion("membership", inside,
                inside ? "all points inside" : "a point escaped the body");
  bool isotropic = true;
  {
    TableWriter csv(ctx.path("moments.csv"));
    csv.header({"coordinate", "mean", "mean_se", "second_moment", "second_moment_se"});
    const double lk_sq = ctx.body.lk * ctx.body.lk;
    for (int c = 0; c < ctx.body.dim; ++c) {
      RunningStat mean_stat, sq_stat;
      for (std::size_t i = 0; i < batch.count; ++i) {
        const double v = batch.row(i)[c];
        mean_stat.add(v);
        sq_stat.add(v * v);
      }
      if (std::fabs(sq_stat.mean() - lk_sq) > 5.0 * sq_stat.se()) isotropic = false;
      if (std::fabs(mean_stat.mean()) > 5.0 * mean_stat.se()) isotropic = false;
      csv.cell(c);
      csv.cell(mean_stat.mean());
      csv.cell(mean_stat.se());
      csv.cell(sq_stat.mean());
      csv.cell(sq_stat.se());
      csv.end_row();
    }
  }
  ctx.record_output("moments.csv");
  ctx.criterion("isotropy", isotropic, "per-coordinate moments vs lk^2 at 5 se");
}

}  // namespace detail

// Executes the configured experiment. Returns the manifest (also written to
// the run directory); overall pass/fail is manifest.pass. Configuration and
// precondition problems throw config_error/usage_error instead.
inline RunManifest run_experiment(const ExperimentConfig& config) {
  namespace fs = std::filesystem;
  if (config.threads > 0) par::set_thread_count(config.threads);
  detail::RunContext ctx{config, body_from_config(config), config.output_dir, {}};
  fs::create_directories(config.output_dir);
  ctx.manifest.experiment = experiment_name(config.experiment);
  ctx.manifest.config = config_to_entries(config);
  ctx.manifest.config["body.descriptor"] = body_descriptor(ctx.body);
  const auto start = std::chrono::steady_clock::now();
  switch (config.experiment) {
    case ExperimentKind::mean_width: detail::run_mean_width(ctx); break;
    case ExperimentKind::supergaussian: detail::run_supergaussian(ctx); break;
    case ExperimentKind::subgaussian: detail::run_subgaussian(ctx); break;
    case ExperimentKind::clt: detail::run_clt(ctx); break;
    case ExperimentKind::orlicz_verify: detail::run_orlicz_verify(ctx); break;
    case ExperimentKind::classify: detail::run_classify(ctx); break;
    case ExperimentKind::sample: detail::run_sample(ctx); break;
  }
  const auto end = std::chrono::steady_clock::now();
  ctx.manifest.wall_clock_seconds = std::chrono::duration<double>(end - start).count();
  write_manifest(ctx.dir, ctx.manifest);
  return ctx.manifest;
}

// Human-readable summary of a finished run. Throws config_error when the
// directory has no manifest.
inline void emit_report(const std::string& run_dir, std::ostream& out) {
  const RunManifest manifest = read_manifest(run_dir);
  out << "experiment: " << manifest.experiment << "\n";
  out << "status:     " << (manifest.pass ? "pass" : "FAIL") << "\n";
  out << "wall clock: " << manifest.wall_clock_seconds << " s\n";
  out << "criteria:\n";
  for (const auto& criterion : manifest.criteria) {
    out << "  " << (criterion.pass ? "[pass] " : "[FAIL] ") << criterion.name << "  "
        << criterion.detail << "\n";
  }
  out << "outputs:\n";
  for (const auto& record : manifest.outputs) {
    char checksum[32];
    std::snprintf(checksum, sizeof(checksum), "%016llx",
                  static_cast<unsigned long long>(record.checksum));
    out << "  " << record.filename << "  fnv1a64=" << checksum
        << "  bytes=" << record.bytes << "\n";
  }
  out << "config:\n";
  for (const auto& [key, value] : manifest.config) {
    out << "  " << key << " = " << value << "\n";
  }
}

}  // namespace isogeo
