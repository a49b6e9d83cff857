#pragma once

// Directional and sphere-averaged marginal tail functions. t is always in
// units of L_K: the directional tail at t is the measure of
// {x in K : |<x,theta>| >= t L_K}, and the averaged tail F(t) is its mean
// over uniform directions.
//
// F(t) is estimated by Rao-Blackwellization: conditionally on |x|, the
// direction average of the indicator is the exact sphere marginal tail at
// t L_K / |x|, a smooth value per sample point. That is what lets tails of
// size e^{-t^2} be resolved at desk-scale sample counts; the naive
// point-direction pair estimator survives only as a cross-check.

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "isogeo/bodies.hpp"
#include "isogeo/errors.hpp"
#include "isogeo/estimate.hpp"
#include "isogeo/parallel.hpp"
#include "isogeo/sampling.hpp"
#include "isogeo/special.hpp"

namespace isogeo {

// P(|<theta, e1>| >= u) for theta uniform on S^{n-1}; exact (regularized
// incomplete beta, I_{1-u^2}((n-1)/2, 1/2)).
inline double sphere_tail(int n, double u) {
  if (n < 2) throw usage_error("sphere_tail: dimension must be >= 2");
  if (!(u >= 0.0)) throw usage_error("sphere_tail: u must be >= 0");
  if (u >= 1.0) return 0.0;
  if (u == 0.0) return 1.0;
  return regularized_incomplete_beta(0.5 * (n - 1), 0.5, 1.0 - u * u);
}

// Fraction of sample points with |<x,theta>| >= t * lk, binomial SE.
inline EstimateWithError directional_tail(const SampleBatch& samples,
                                          std::span<const double> theta, double t,
                                          double lk) {
  if (samples.count == 0) throw usage_error("directional_tail: empty sample");
  if (!(t > 0.0)) throw usage_error("directional_tail: t must be positive");
  const double threshold = t * lk;
  const int n = samples.dim;
  std::size_t hits = 0;
  const double* row = samples.points.data();
  for (std::size_t i = 0; i < samples.count; ++i, row += n) {
    double dot = 0.0;
    for (int j = 0; j < n; ++j) dot += row[j] * theta[j];
    if (std::fabs(dot) >= threshold) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(samples.count);
  return {p, binomial_se(p, static_cast<std::int64_t>(samples.count)),
          static_cast<std::int64_t>(samples.count)};
}

enum class TailKind { directional, sphere_averaged };

struct TailCurve {
  std::vector<double> t_grid;  // increasing, units of L_K
  std::vector<double> values;
  std::vector<double> std_errors;
  TailKind kind = TailKind::sphere_averaged;
};

// Rao-Blackwellized estimate of F(t) on a grid. Only the Euclidean norms of
// the sample points enter.
inline TailCurve averaged_tail(const Body& body, std::span<const double> t_grid,
                               const SampleBatch& x_samples) {
  if (t_grid.empty()) throw usage_error("averaged_tail: empty t grid");
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    if (!(t_grid[k] > 0.0) || (k > 0 && t_grid[k] <= t_grid[k - 1])) {
      throw usage_error("averaged_tail: t grid must be positive and increasing");
    }
  }
  const std::vector<double> norms = row_norms(x_samples);
  TailCurve curve;
  curve.kind = TailKind::sphere_averaged;
  curve.t_grid.assign(t_grid.begin(), t_grid.end());
  curve.values.resize(t_grid.size());
  curve.std_errors.resize(t_grid.size());
  const int n = body.dim;
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    const double level = t_grid[k] * body.lk;
    auto partials = par::map_chunks<RunningStat>(
        norms.size(), kSampleChunk, [&](const par::ChunkRange& range) {
          RunningStat stat;
          for (std::size_t i = range.begin; i < range.begin + range.count; ++i) {
            const double u = level / norms[i];
            stat.add(u >= 1.0 ? 0.0 : sphere_tail(n, u));
          }
          return stat;
        });
    RunningStat total;
    for (const auto& part : partials) total.merge(part);
    curve.values[k] = total.mean();
    curve.std_errors[k] = total.se();
  }
  return curve;
}

// Tail curve of a single fixed direction on a grid.
inline TailCurve directional_curve(const SampleBatch& samples,
                                   std::span<const double> theta,
                                   std::span<const double> t_grid, double lk) {
  TailCurve curve;
  curve.kind = TailKind::directional;
  curve.t_grid.assign(t_grid.begin(), t_grid.end());
  for (double t : t_grid) {
    const EstimateWithError est = directional_tail(samples, theta, t, lk);
    curve.values.push_back(est.value);
    curve.std_errors.push_back(est.std_error);
  }
  return curve;
}

// Cross-check estimator: draw one direction per point and average the plain
// indicator. Kept only as an oracle for the Rao-Blackwellized path.
inline EstimateWithError naive_pair_tail(const SampleBatch& x_samples, double t,
                                         double lk, const StreamSpec& stream) {
  const int n = x_samples.dim;
  const double threshold = t * lk;
  auto partials = par::map_chunks<RunningStat>(
      x_samples.count, kSampleChunk, [&](const par::ChunkRange& range) {
        Rng rng(derive_seed(stream.master_seed, streams::kDirection,
                            stream.chunk_index, range.index));
        std::vector<double> theta(n);
        RunningStat stat;
        for (std::size_t i = range.begin; i < range.begin + range.count; ++i) {
          detail::sample_sphere_point(rng, theta);
          double dot = 0.0;
          const auto row = x_samples.row(i);
          for (int j = 0; j < n; ++j) dot += row[j] * theta[j];
          stat.add(std::fabs(dot) >= threshold ? 1.0 : 0.0);
        }
        return stat;
      });
  RunningStat total;
  for (const auto& part : partials) total.merge(part);
  return total.estimate();
}

struct GaussianRateFit {
  std::vector<double> t_used;    // grid points that entered the fit
  std::vector<double> q_values;  // q(t) = -ln(value) / t^2
  double q_min = 0.0;
  double q_max = 0.0;
  std::size_t dropped_zeros = 0;  // points below MC resolution, flagged not fitted
};

// Per-point Gaussian decay rates over the subgrid [t_min, t_max]. Exact
// zeros are below Monte-Carlo resolution: they are dropped and counted, never
// fed to the logarithm. If nothing in the subgrid is resolvable the request
// cannot be answered.
inline GaussianRateFit gaussian_rate(const TailCurve& curve, double t_min,
                                     double t_max) {
  GaussianRateFit fit;
  std::size_t in_window = 0;
  for (std::size_t k = 0; k < curve.t_grid.size(); ++k) {
    const double t = curve.t_grid[k];
    if (t < t_min || t > t_max) continue;
    ++in_window;
    const double value = curve.values[k];
    if (value < 0.0 || value > 1.0) throw usage_error("gaussian_rate: curve value outside [0,1]");
    if (value == 0.0) {
      ++fit.dropped_zeros;
      continue;
    }
    fit.t_used.push_back(t);
    fit.q_values.push_back(value >= 1.0 ? 0.0 : -std::log(value) / (t * t));
  }
  if (in_window == 0) throw usage_error("gaussian_rate: empty subgrid");
  if (fit.q_values.empty()) {
    throw insufficient_samples_error(
        "gaussian_rate: every tail estimate in the subgrid is below MC resolution");
  }
  fit.q_min = fit.q_values[0];
  fit.q_max = fit.q_values[0];
  for (double q : fit.q_values) {
    fit.q_min = std::min(fit.q_min, q);
    fit.q_max = std::max(fit.q_max, q);
  }
  return fit;
}

enum class ClassifyMode { subgaussian, supergaussian, both };

struct DirectionClass {
  bool subgaussian = false;
  bool supergaussian = false;
  double worst_t = 0.0;  // grid point with the smallest bound margin
};

struct ClassificationResult {
  std::vector<DirectionClass> per_direction;
  double subgaussian_fraction = 0.0;    // over the direction set (if tested)
  double supergaussian_fraction = 0.0;  // over the direction set (if tested)
  ClassifyMode mode = ClassifyMode::both;
};

// Classify each direction against the Gaussian-type bounds with +-3 SE slack:
// subgaussian   iff tail <= e^{-t^2/r^2} + 3 SE at every grid point,
// supergaussian iff tail >= e^{-r^2 t^2} - 3 SE at every grid point.
// The definitional t ranges are enforced per requested test: [1, r sqrt(n)]
// for the subgaussian bound and [1, sqrt(n)/r] for the supergaussian one.
inline ClassificationResult classify_directions(
    const Body& body, std::span<const double> directions, std::size_t direction_count,
    double r, std::span<const double> t_grid, std::size_t samples_per_direction,
    const StreamSpec& stream, ClassifyMode mode = ClassifyMode::both,
    double slack_sigma = 3.0) {
  if (direction_count == 0) throw usage_error("classify_directions: empty direction set");
  if (!(r > 0.0)) throw usage_error("classify_directions: r must be positive");
  if (t_grid.empty()) throw usage_error("classify_directions: empty t grid");
  const double sqrt_n = std::sqrt(static_cast<double>(body.dim));
  const bool test_sub = mode != ClassifyMode::supergaussian;
  const bool test_super = mode != ClassifyMode::subgaussian;
  for (double t : t_grid) {
    if (test_sub && (t < 1.0 || t > r * sqrt_n)) {
      throw usage_error("classify_directions: t grid outside [1, r sqrt(n)] for the subgaussian test");
    }
    if (test_super && (t < 1.0 || t > sqrt_n / r)) {
      throw usage_error("classify_directions: t grid outside [1, sqrt(n)/r] for the supergaussian test");
    }
  }
  ClassificationResult result;
  result.mode = mode;
  result.per_direction.resize(direction_count);
  par::for_chunks(direction_count, 1, [&](const par::ChunkRange& range) {
    const std::size_t d = range.begin;
    std::span<const double> theta{
        directions.data() + d * static_cast<std::size_t>(body.dim),
        static_cast<std::size_t>(body.dim)};
    const StreamSpec per_dir{derive_seed(stream.master_seed, streams::kDirection,
                                         stream.chunk_index, d),
                             0};
    const SampleBatch samples = sample_uniform(body, samples_per_direction, per_dir);
    DirectionClass cls;
    cls.subgaussian = test_sub;
    cls.supergaussian = test_super;
    double worst_margin = std::numeric_limits<double>::infinity();
    cls.worst_t = t_grid[0];
    for (double t : t_grid) {
      const EstimateWithError tail = directional_tail(samples, theta, t, body.lk);
      const double slack = slack_sigma * tail.std_error;
      if (test_sub) {
        const double bound = std::exp(-t * t / (r * r));
        const double margin = bound + slack - tail.value;
        if (margin < 0.0) cls.subgaussian = false;
        if (margin < worst_margin) {
          worst_margin = margin;
          cls.worst_t = t;
        }
      }
      if (test_super) {
        const double bound = std::exp(-r * r * t * t);
        const double margin = tail.value + slack - bound;
        if (margin < 0.0) cls.supergaussian = false;
        if (margin < worst_margin) {
          worst_margin = margin;
          cls.worst_t = t;
        }
      }
    }
    result.per_direction[d] = cls;
  });
  std::size_t sub_hits = 0, super_hits = 0;
  for (const auto& cls : result.per_direction) {
    if (cls.subgaussian) ++sub_hits;
    if (cls.supergaussian) ++super_hits;
  }
  const double denom = static_cast<double>(direction_count);
  result.subgaussian_fraction = test_sub ? sub_hits / denom : 0.0;
  result.supergaussian_fraction = test_super ? super_hits / denom : 0.0;
  return result;
}

}  // namespace isogeo
