#pragma once

// The Orlicz function M_theta built from truncated first moments of
// Y = <X,theta>, in three routes:
//
//   1. sample closed form   M_theta(1/s) = E[ (|Y|/s - 1) 1{|Y| >= s} ]
//      (exact on the sample measure; integrating the defining double
//      integral's indicator in t collapses it to this one-pass form),
//   2. definition quadrature (test oracle; the literal double integral),
//   3. the sphere marginal closed form
//      M_{<theta,e1>}(|x|/s) = (2 w_{n-1} / (n w_n)) *
//          int_0^{acos(s/|x|)} sin^n y / cos^2 y dy,  0 when s >= |x|.
//
// The level s at which M_theta(1/s) crosses 1/N governs the expected support
// function of a random N-vertex polytope in direction theta.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "isogeo/bodies.hpp"
#include "isogeo/errors.hpp"
#include "isogeo/estimate.hpp"
#include "isogeo/parallel.hpp"
#include "isogeo/quadrature.hpp"
#include "isogeo/sampling.hpp"
#include "isogeo/special.hpp"

namespace isogeo {

enum class OrliczMethod { definition_quadrature, sample_closed_form, sphere_closed_form };

struct OrliczEvaluation {
  double s = 0.0;      // level, body units
  double value = 0.0;  // M_theta(1/s)
  OrliczMethod method = OrliczMethod::sample_closed_form;
  double error = 0.0;  // SE for sample estimates, tolerance for quadrature
};

inline std::vector<double> project_samples(const SampleBatch& samples,
                                           std::span<const double> theta) {
  const int n = samples.dim;
  std::vector<double> projections(samples.count);
  par::for_chunks(samples.count, kSampleChunk, [&](const par::ChunkRange& range) {
    for (std::size_t i = range.begin; i < range.begin + range.count; ++i) {
      double dot = 0.0;
      const auto row = samples.row(i);
      for (int j = 0; j < n; ++j) dot += row[j] * theta[j];
      projections[i] = dot;
    }
  });
  return projections;
}

// M_theta(1/s) on the sample measure of the projections Y_i.
inline OrliczEvaluation orlicz_sample_from_projections(std::span<const double> projections,
                                                       double s) {
  if (!(s > 0.0)) throw usage_error("orlicz_sample: s must be positive");
  auto partials = par::map_chunks<RunningStat>(
      projections.size(), kSampleChunk, [&](const par::ChunkRange& range) {
        RunningStat stat;
        for (std::size_t i = range.begin; i < range.begin + range.count; ++i) {
          const double mag = std::fabs(projections[i]);
          stat.add(mag >= s ? mag / s - 1.0 : 0.0);
        }
        return stat;
      });
  RunningStat total;
  for (const auto& part : partials) total.merge(part);
  return {s, total.mean(), OrliczMethod::sample_closed_form, total.se()};
}

inline OrliczEvaluation orlicz_sample(const SampleBatch& samples,
                                      std::span<const double> theta, double s) {
  const std::vector<double> projections = project_samples(samples, theta);
  return orlicz_sample_from_projections(projections, s);
}

// The sphere marginal's Orlicz value M_{<theta,e1>}(norm_x / s); zero when
// the level is at or beyond the norm. The acos upper limit is strictly below
// pi/2 for s > 0, so the integrand stays finite.
inline double orlicz_sphere_formula(int n, double norm_x, double s,
                                    double rel_tol = 1e-8) {
  if (n < 2) throw usage_error("orlicz_sphere_formula: dimension must be >= 2");
  if (!(norm_x > 0.0) || !(s > 0.0)) {
    throw usage_error("orlicz_sphere_formula: norm_x and s must be positive");
  }
  if (s >= norm_x) return 0.0;
  const double upper = std::acos(s / norm_x);
  const double log_constant = std::log(2.0) + log_ball_volume_ratio(n) - std::log(static_cast<double>(n));
  const double constant = std::exp(log_constant);
  const double integral = integrate(
      [n](double y) {
        const double sin_y = std::sin(y);
        const double cos_y = std::cos(y);
        return std::exp(n * std::log(sin_y)) / (cos_y * cos_y);
      },
      1e-300, upper, rel_tol, 1e-300);
  return constant * integral;
}

// Both sides of the representation identity
//   avg_theta M_theta(1/s)  =  avg_x M_{<theta,e1>}(|x|/s),
// the left from the sample closed form over a direction set, the right from
// the sphere closed form over the same x sample.
struct RepresentationCheck {
  EstimateWithError lhs;
  EstimateWithError rhs;
};

inline RepresentationCheck verify_representation(const Body& body, double s,
                                                 const SampleBatch& x_samples,
                                                 std::span<const double> theta_samples,
                                                 std::size_t theta_count) {
  if (!(s > 0.0)) throw usage_error("verify_representation: s must be positive");
  if (theta_count == 0) throw usage_error("verify_representation: empty direction set");
  const int n = body.dim;
  const std::size_t sample_count = x_samples.count;

  // lhs: per-theta sample means, plus per-x means across thetas so the SE can
  // account for both the direction noise and the shared-sample noise. Chunked
  // over x; each chunk owns its row range and a private per-theta partial sum.
  const std::size_t chunks = par::num_chunks(sample_count, kSampleChunk);
  std::vector<std::vector<double>> theta_partial(chunks);
  std::vector<double> per_x_mean(sample_count);
  par::for_chunks(sample_count, kSampleChunk, [&](const par::ChunkRange& range) {
    std::vector<double>& partial = theta_partial[range.index];
    partial.assign(theta_count, 0.0);
    for (std::size_t i = range.begin; i < range.begin + range.count; ++i) {
      const auto row = x_samples.row(i);
      double row_sum = 0.0;
      for (std::size_t d = 0; d < theta_count; ++d) {
        const double* theta = theta_samples.data() + d * static_cast<std::size_t>(n);
        double dot = 0.0;
        for (int j = 0; j < n; ++j) dot += row[j] * theta[j];
        const double mag = std::fabs(dot);
        const double value = mag >= s ? mag / s - 1.0 : 0.0;
        partial[d] += value;
        row_sum += value;
      }
      per_x_mean[i] = row_sum / static_cast<double>(theta_count);
    }
  });
  std::vector<double> per_theta_mean(theta_count, 0.0);
  for (const auto& partial : theta_partial) {
    for (std::size_t d = 0; d < theta_count; ++d) per_theta_mean[d] += partial[d];
  }
  RunningStat theta_stat;
  for (double sum : per_theta_mean) theta_stat.add(sum / static_cast<double>(sample_count));
  RunningStat x_stat;
  for (double v : per_x_mean) x_stat.add(v);
  EstimateWithError lhs;
  lhs.value = theta_stat.mean();
  lhs.samples = static_cast<std::int64_t>(theta_count);
  lhs.std_error = std::sqrt(theta_stat.se() * theta_stat.se() + x_stat.se() * x_stat.se());

  // rhs: deterministic function of |x| only.
  const std::vector<double> norms = row_norms(x_samples);
  auto partials = par::map_chunks<RunningStat>(
      sample_count, kSampleChunk, [&](const par::ChunkRange& range) {
        RunningStat stat;
        for (std::size_t i = range.begin; i < range.begin + range.count; ++i) {
          stat.add(s >= norms[i] ? 0.0 : orlicz_sphere_formula(n, norms[i], s));
        }
        return stat;
      });
  RunningStat rhs_stat;
  for (const auto& part : partials) rhs_stat.merge(part);
  return {lhs, rhs_stat.estimate()};
}

struct SupportLevel {
  double level = 0.0;
  bool clipped_at_bracket = false;  // M already below 1/N at the lower bracket
};

// Smallest s with M_theta(1/s) <= 1/N on the sample measure. The sample
// functional is strictly decreasing until it hits zero at max|Y|, so
// bisection brackets the unique crossing.
inline SupportLevel implied_support_level(std::span<const double> projections,
                                          std::size_t n_vertices,
                                          double rel_tol = 1e-8) {
  if (n_vertices < 2) throw usage_error("implied_support_level: N must be >= 2");
  if (projections.empty()) throw usage_error("implied_support_level: empty sample");
  double max_mag = 0.0;
  for (double y : projections) max_mag = std::max(max_mag, std::fabs(y));
  if (max_mag == 0.0) return {0.0, true};
  const double target = 1.0 / static_cast<double>(n_vertices);
  auto value_at = [&](double s) {
    double sum = 0.0;
    for (double y : projections) {
      const double mag = std::fabs(y);
      if (mag >= s) sum += mag / s - 1.0;
    }
    return sum / static_cast<double>(projections.size());
  };
  double lo = max_mag * 1e-12;
  double hi = max_mag;
  if (value_at(lo) <= target) return {lo, true};
  for (int iter = 0; iter < 200 && (hi - lo) > rel_tol * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (value_at(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), false};
}

inline SupportLevel implied_support_level(const SampleBatch& samples,
                                          std::span<const double> theta,
                                          std::size_t n_vertices) {
  const std::vector<double> projections = project_samples(samples, theta);
  return implied_support_level(projections, n_vertices);
}

// The mechanism inequality M_theta(1/s) >= (1/2) |{ |<x,theta>| >= 2s }|:
// returns both sides as estimates; the caller asserts with SE slack.
struct TailBoundCheck {
  EstimateWithError m_value;
  EstimateWithError half_tail;
};

inline TailBoundCheck tail_bound_check(const SampleBatch& samples,
                                       std::span<const double> theta, double s) {
  if (!(s > 0.0)) throw usage_error("tail_bound_check: s must be positive");
  const std::vector<double> projections = project_samples(samples, theta);
  const OrliczEvaluation m = orlicz_sample_from_projections(projections, s);
  RunningStat tail;
  const double threshold = 2.0 * s;
  for (double y : projections) tail.add(std::fabs(y) >= threshold ? 0.5 : 0.0);
  const EstimateWithError m_est{m.value, m.error,
                                static_cast<std::int64_t>(projections.size())};
  return {m_est, tail.estimate()};
}

}  // namespace isogeo
