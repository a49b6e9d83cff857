#pragma once

// Random symmetric polytopes K_N = conv{±X_1,...,±X_N} and their mean width.
// The support function of the symmetric vertex hull is evaluated exactly as
// max_i |<X_i, theta>|; no hull construction anywhere.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "isogeo/bodies.hpp"
#include "isogeo/errors.hpp"
#include "isogeo/estimate.hpp"
#include "isogeo/parallel.hpp"
#include "isogeo/rng.hpp"
#include "isogeo/sampling.hpp"

namespace isogeo {

struct RandomPolytope {
  Body body;           // generating body
  std::uint64_t seed = 0;
  std::size_t vertex_count = 0;
  int dim = 0;
  std::vector<double> vertices;  // row-major vertex_count x dim

  std::span<const double> vertex(std::size_t i) const {
    return {vertices.data() + i * static_cast<std::size_t>(dim),
            static_cast<std::size_t>(dim)};
  }
};

inline RandomPolytope make_random_polytope(const Body& body, std::size_t n_vertices,
                                           const StreamSpec& stream) {
  SampleBatch batch = sample_uniform(body, n_vertices, stream);
  RandomPolytope poly;
  poly.body = body;
  poly.seed = stream.master_seed;
  poly.vertex_count = n_vertices;
  poly.dim = body.dim;
  poly.vertices = std::move(batch.points);
  return poly;
}

// h_{K_N}(theta) = max_i |<X_i, theta>|
inline double support(const RandomPolytope& poly, std::span<const double> theta) {
  if (poly.vertex_count == 0) throw usage_error("support: empty vertex set");
  if (static_cast<int>(theta.size()) != poly.dim) {
    throw usage_error("support: direction dimension does not match polytope");
  }
  const int n = poly.dim;
  double best = 0.0;
  const double* row = poly.vertices.data();
  for (std::size_t i = 0; i < poly.vertex_count; ++i, row += n) {
    double dot = 0.0;
    for (int j = 0; j < n; ++j) dot += row[j] * theta[j];
    const double mag = std::fabs(dot);
    if (mag > best) best = mag;
  }
  return best;
}

inline constexpr std::size_t kDirectionChunk = 1024;

// Spherical average of the support function over directions_count uniform
// directions, with standard error.
inline EstimateWithError mean_width(const RandomPolytope& poly,
                                    std::size_t directions_count,
                                    const StreamSpec& stream) {
  if (directions_count < 1) throw usage_error("mean_width: need at least one direction");
  const int n = poly.dim;
  auto partials = par::map_chunks<RunningStat>(
      directions_count, kDirectionChunk, [&](const par::ChunkRange& range) {
        Rng rng(derive_seed(stream.master_seed, streams::kDirection,
                            stream.chunk_index, range.index));
        std::vector<double> theta(n);
        RunningStat stat;
        for (std::size_t i = 0; i < range.count; ++i) {
          detail::sample_sphere_point(rng, theta);
          stat.add(support(poly, theta));
        }
        return stat;
      });
  RunningStat total;
  for (const auto& part : partials) total.merge(part);
  return total.estimate();
}

// Two-layer Monte Carlo: `trials` independent polytopes, each averaged over
// `directions_count` directions. With a single trial the inner standard error
// is reported instead of the (undefined) between-trial one.
inline EstimateWithError expected_mean_width(const Body& body, std::size_t n_vertices,
                                             std::size_t trials,
                                             std::size_t directions_count,
                                             const StreamSpec& stream) {
  if (trials < 1) throw usage_error("expected_mean_width: trials must be >= 1");
  if (n_vertices < 1) throw usage_error("expected_mean_width: N must be >= 1");
  std::vector<EstimateWithError> per_trial(trials);
  par::for_chunks(trials, 1, [&](const par::ChunkRange& range) {
    const std::size_t t = range.begin;
    const StreamSpec vertex_stream{
        derive_seed(stream.master_seed, streams::kTrial, stream.chunk_index, 2 * t),
        0};
    const StreamSpec direction_stream{
        derive_seed(stream.master_seed, streams::kTrial, stream.chunk_index, 2 * t + 1),
        0};
    RandomPolytope poly = make_random_polytope(body, n_vertices, vertex_stream);
    per_trial[t] = mean_width(poly, directions_count, direction_stream);
  });
  if (trials == 1) return per_trial[0];
  RunningStat across;
  for (const auto& est : per_trial) across.add(est.value);
  return across.estimate();
}

struct WidthCurveRow {
  std::size_t n_vertices = 0;
  EstimateWithError width;
  double ratio = 0.0;  // width / (sqrt(ln N) * L_K)
};

struct WidthCurve {
  std::vector<WidthCurveRow> rows;
};

// One expected-mean-width estimate per N, with the sqrt(ln N) L_K ratio.
// Requires a symmetric body: the polytope construction conv{±X_i} only
// tracks the generating body when K = -K.
inline WidthCurve width_scaling_curve(const Body& body,
                                      std::span<const std::size_t> n_grid,
                                      std::size_t trials, std::size_t directions_count,
                                      const StreamSpec& stream) {
  if (!body.symmetric) {
    throw usage_error("width_scaling_curve: body must be origin-symmetric");
  }
  WidthCurve curve;
  std::size_t previous = 0;
  for (std::size_t k = 0; k < n_grid.size(); ++k) {
    const std::size_t n_vertices = n_grid[k];
    if (n_vertices < 3) throw usage_error("width_scaling_curve: every N must be >= 3");
    if (n_vertices <= previous) {
      throw usage_error("width_scaling_curve: N grid must be strictly increasing");
    }
    previous = n_vertices;
    const StreamSpec row_stream{stream.master_seed, stream.chunk_index + 1000 + k};
    WidthCurveRow row;
    row.n_vertices = n_vertices;
    row.width = expected_mean_width(body, n_vertices, trials, directions_count, row_stream);
    row.ratio = row.width.value /
                (std::sqrt(std::log(static_cast<double>(n_vertices))) * body.lk);
    curve.rows.push_back(row);
  }
  return curve;
}

}  // namespace isogeo
