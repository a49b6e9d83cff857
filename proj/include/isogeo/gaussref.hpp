#pragma once

// Gaussian reference checks: the elementary two-sided Mills bounds on the
// upper tail, and histogram comparisons of body marginals against the
// standard Gaussian density (the empirical face of the central limit
// behaviour of isotropic marginals).

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "isogeo/bodies.hpp"
#include "isogeo/errors.hpp"
#include "isogeo/estimate.hpp"
#include "isogeo/parallel.hpp"
#include "isogeo/sampling.hpp"
#include "isogeo/special.hpp"

namespace isogeo {

// Comparison window exponent for marginal-vs-Gaussian checks in the
// symmetric case; the window n^kappa is ~1.2 around n = 100.
inline constexpr double kCltWindowExponent = 1.0 / 24.0;

inline double default_clt_window(int n) {
  return std::pow(static_cast<double>(n), kCltWindowExponent);
}

// gamma(t)/(2t) <= tail(t) <= 2 gamma(t)/t, valid for t >= 1.
inline std::vector<bool> mills_check(std::span<const double> t_grid) {
  std::vector<bool> pass(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    if (t < 1.0) throw usage_error("mills_check: every t must be >= 1");
    const double density = gaussian_density(t);
    const double tail = gaussian_tail(t);
    pass[i] = (density / (2.0 * t) <= tail) && (tail <= 2.0 * density / t);
  }
  return pass;
}

struct DensityRatioReport {
  double sup_ratio = 0.0;            // sup over bins of |f_hat/gamma - 1|
  double max_bin_uncertainty = 0.0;  // largest binomial SE of f_hat/gamma
  std::vector<double> bin_centers;
  std::vector<double> bin_ratios;    // f_hat/gamma - 1 per bin
};

// Histogram density of Y = <X,theta>/L_K on [-t_max, t_max] against the
// Gaussian density at the bin centers. Bins are fixed-width so the error
// bars stay transparent.
inline DensityRatioReport marginal_density_ratio(const Body& body,
                                                 std::span<const double> theta,
                                                 double t_max, std::size_t bins,
                                                 std::size_t samples,
                                                 const StreamSpec& stream) {
  if (!(t_max > 0.0)) throw usage_error("marginal_density_ratio: t_max must be positive");
  if (bins < 8) throw usage_error("marginal_density_ratio: need at least 8 bins");
  if (samples < 100000) throw usage_error("marginal_density_ratio: need at least 1e5 samples");
  const double width = 2.0 * t_max / static_cast<double>(bins);
  // Guard against bins the requested budget cannot populate under gamma.
  for (std::size_t b = 0; b < bins; ++b) {
    const double center = -t_max + (b + 0.5) * width;
    if (static_cast<double>(samples) * gaussian_density(center) * width < 1.0) {
      throw insufficient_samples_error(
          "marginal_density_ratio: a bin has vanishing expected count at this t_max");
    }
  }
  const int n = body.dim;
  const double inv_lk = 1.0 / body.lk;
  const std::size_t chunks = par::num_chunks(samples, kSampleChunk);
  std::vector<std::vector<std::size_t>> partial(chunks);
  par::for_chunks(samples, kSampleChunk, [&](const par::ChunkRange& range) {
    Rng rng(derive_seed(stream.master_seed, streams::kHistogram, stream.chunk_index,
                        range.index));
    std::vector<double> point(n);
    std::vector<double> scratch;
    std::vector<std::size_t>& counts = partial[range.index];
    counts.assign(bins, 0);
    for (std::size_t i = 0; i < range.count; ++i) {
      detail::sample_body_point(body, rng, point, scratch);
      double dot = 0.0;
      for (int j = 0; j < n; ++j) dot += point[j] * theta[j];
      const double y = dot * inv_lk;
      if (y < -t_max || y >= t_max) continue;
      const auto bin = static_cast<std::size_t>((y + t_max) / width);
      if (bin < bins) ++counts[bin];
    }
  });
  std::vector<std::size_t> counts(bins, 0);
  for (const auto& slice : partial) {
    for (std::size_t b = 0; b < bins; ++b) counts[b] += slice[b];
  }
  DensityRatioReport report;
  report.bin_centers.resize(bins);
  report.bin_ratios.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    const double center = -t_max + (b + 0.5) * width;
    const double p_hat = static_cast<double>(counts[b]) / static_cast<double>(samples);
    const double density = p_hat / width;
    const double reference = gaussian_density(center);
    const double ratio = density / reference - 1.0;
    const double uncertainty =
        binomial_se(p_hat, static_cast<std::int64_t>(samples)) / (width * reference);
    report.bin_centers[b] = center;
    report.bin_ratios[b] = ratio;
    report.sup_ratio = std::max(report.sup_ratio, std::fabs(ratio));
    report.max_bin_uncertainty = std::max(report.max_bin_uncertainty, uncertainty);
  }
  return report;
}

struct CltReport {
  std::vector<double> sup_ratios;  // one per direction
  double passing_fraction = 0.0;   // share with sup_ratio <= epsilon
  double epsilon = 0.0;
  double t_max = 0.0;
};

// Fraction of uniformly sampled directions whose marginal is within epsilon
// of Gaussian in the sup-ratio sense over [-t_max, t_max].
inline CltReport clt_fraction(const Body& body, std::size_t direction_count,
                              double epsilon, double t_max, std::size_t samples,
                              const StreamSpec& stream, std::size_t bins = 24) {
  if (direction_count < 1) throw usage_error("clt_fraction: need at least one direction");
  const std::vector<double> directions =
      sample_sphere(body.dim, direction_count,
                    StreamSpec{derive_seed(stream.master_seed, streams::kSphere,
                                           stream.chunk_index, 0),
                               0});
  CltReport report;
  report.epsilon = epsilon;
  report.t_max = t_max;
  report.sup_ratios.resize(direction_count);
  par::for_chunks(direction_count, 1, [&](const par::ChunkRange& range) {
    const std::size_t d = range.begin;
    std::span<const double> theta{
        directions.data() + d * static_cast<std::size_t>(body.dim),
        static_cast<std::size_t>(body.dim)};
    const StreamSpec per_dir{derive_seed(stream.master_seed, streams::kDirection,
                                         stream.chunk_index, d),
                             0};
    report.sup_ratios[d] =
        marginal_density_ratio(body, theta, t_max, bins, samples, per_dir).sup_ratio;
  });
  std::size_t passing = 0;
  for (double ratio : report.sup_ratios) {
    if (ratio <= epsilon) ++passing;
  }
  report.passing_fraction =
      static_cast<double>(passing) / static_cast<double>(direction_count);
  return report;
}

}  // namespace isogeo
