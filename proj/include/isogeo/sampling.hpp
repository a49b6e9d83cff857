#pragma once

// Uniform samplers for the body catalog and the unit sphere, plus a
// hit-and-run MCMC fallback. Points are produced in fixed-size chunks whose
// random streams are derived from (master_seed, chunk identity) alone, so a
// batch is bit-reproducible no matter how many workers execute it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "isogeo/bodies.hpp"
#include "isogeo/errors.hpp"
#include "isogeo/parallel.hpp"
#include "isogeo/rng.hpp"

namespace isogeo {

enum class SamplerKind { direct, hit_and_run };

// Number of points per RNG chunk; part of the reproducibility contract.
inline constexpr std::size_t kSampleChunk = 8192;

struct SampleBatch {
  Body body;
  std::uint64_t seed = 0;
  std::uint64_t chunk_index = 0;  // stream namespace the batch was drawn from
  SamplerKind sampler = SamplerKind::direct;
  std::size_t count = 0;
  int dim = 0;
  std::vector<double> points;  // row-major count x dim

  std::span<const double> row(std::size_t i) const {
    return {points.data() + i * static_cast<std::size_t>(dim),
            static_cast<std::size_t>(dim)};
  }
  std::span<double> row(std::size_t i) {
    return {points.data() + i * static_cast<std::size_t>(dim),
            static_cast<std::size_t>(dim)};
  }
};

namespace detail {

inline void fill_normals(Rng& rng, std::span<double> out) {
  std::size_t i = 0;
  double z0, z1;
  for (; i + 1 < out.size(); i += 2) {
    rng.normal_pair(&z0, &z1);
    out[i] = z0;
    out[i + 1] = z1;
  }
  if (i < out.size()) out[i] = rng.normal();
}

inline void sample_sphere_point(Rng& rng, std::span<double> out) {
  double norm_sq = 0.0;
  do {
    fill_normals(rng, out);
    norm_sq = 0.0;
    for (double v : out) norm_sq += v * v;
  } while (norm_sq == 0.0);
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (double& v : out) v *= inv;
}

inline void sample_body_point(const Body& body, Rng& rng, std::span<double> out,
                              std::vector<double>& scratch) {
  const int n = body.dim;
  switch (body.kind) {
    case BodyKind::cube: {
      for (int i = 0; i < n; ++i) out[i] = body.scale * (rng.uniform() - 0.5);
      return;
    }
    case BodyKind::ball: {
      sample_sphere_point(rng, out);
      const double radius = body.scale * std::pow(rng.uniform_pos(), 1.0 / n);
      for (int i = 0; i < n; ++i) out[i] *= radius;
      return;
    }
    case BodyKind::cross_polytope:
    case BodyKind::lp_ball: {
      // Barthe-Guedon-Mendelson-Naor: signed Gamma(1/p)^{1/p} coordinates
      // normalized by (sum + an independent exponential)^{1/p} are uniform
      // in the lp ball.
      const double p = body.p;
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        const double g = rng.gamma(1.0 / p);
        total += g;
        const double sign = (rng.next_u64() & 1ull) ? 1.0 : -1.0;
        out[i] = sign * std::pow(g, 1.0 / p);
      }
      total += rng.exponential();
      const double inv = body.scale / std::pow(total, 1.0 / p);
      for (int i = 0; i < n; ++i) out[i] *= inv;
      return;
    }
    case BodyKind::simplex: {
      // sorted-uniform spacings give Dirichlet(1,...,1) barycentric weights;
      // subtracting 1/(n+1) re-centers at the barycenter
      scratch.resize(2 * (n + 1));
      std::span<double> sorted(scratch.data(), static_cast<std::size_t>(n));
      std::span<double> centered(scratch.data() + n + 1,
                                 static_cast<std::size_t>(n + 1));
      for (int i = 0; i < n; ++i) sorted[i] = rng.uniform();
      std::sort(sorted.begin(), sorted.end());
      const double offset = 1.0 / (n + 1.0);
      double last = 0.0;
      for (int i = 0; i < n; ++i) {
        centered[i] = sorted[i] - last - offset;
        last = sorted[i];
      }
      centered[n] = 1.0 - last - offset;
      thread_local std::vector<double> projected;
      helmert_project(centered, projected);
      for (int i = 0; i < n; ++i) out[i] = body.scale * projected[i];
      return;
    }
  }
}

}  // namespace detail

// count independent uniform points in the body. Chunk c of the batch draws
// from the stream (master_seed, kPoints, chunk_index, c).
inline SampleBatch sample_uniform(const Body& body, std::size_t count,
                                  const StreamSpec& stream) {
  if (count < 1) throw usage_error("sample_uniform: count must be >= 1");
  SampleBatch batch;
  batch.body = body;
  batch.seed = stream.master_seed;
  batch.chunk_index = stream.chunk_index;
  batch.sampler = SamplerKind::direct;
  batch.count = count;
  batch.dim = body.dim;
  batch.points.resize(count * static_cast<std::size_t>(body.dim));
  par::for_chunks(count, kSampleChunk, [&](const par::ChunkRange& range) {
    Rng rng(derive_seed(stream.master_seed, streams::kPoints, stream.chunk_index,
                        range.index));
    std::vector<double> scratch;
    for (std::size_t i = range.begin; i < range.begin + range.count; ++i) {
      detail::sample_body_point(body, rng, batch.row(i), scratch);
    }
  });
  return batch;
}

// count uniform directions on S^{n-1}, row-major count x n.
inline std::vector<double> sample_sphere(int n, std::size_t count,
                                         const StreamSpec& stream) {
  if (n < 2) throw usage_error("sample_sphere: dimension must be >= 2");
  std::vector<double> rows(count * static_cast<std::size_t>(n));
  par::for_chunks(count, kSampleChunk, [&](const par::ChunkRange& range) {
    Rng rng(derive_seed(stream.master_seed, streams::kSphere, stream.chunk_index,
                        range.index));
    for (std::size_t i = range.begin; i < range.begin + range.count; ++i) {
      detail::sample_sphere_point(
          rng, {rows.data() + i * static_cast<std::size_t>(n),
                static_cast<std::size_t>(n)});
    }
  });
  return rows;
}

namespace detail {

// Signed distance along direction d from x to the body boundary, found by
// bisection on the membership predicate. The bracket [0, 2R+1] always
// straddles the boundary because the body is contained in the R-ball.
inline double chord_extent(const Body& body, std::span<const double> x,
                           std::span<const double> d, double direction_sign,
                           std::vector<double>& probe) {
  const int n = body.dim;
  probe.resize(n);
  double lo = 0.0;
  double hi = 2.0 * body.circumradius + 1.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-10; ++iter) {
    const double mid = 0.5 * (lo + hi);
    for (int i = 0; i < n; ++i) probe[i] = x[i] + direction_sign * mid * d[i];
    if (membership(body, probe)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace detail

// Hit-and-run chain with uniform stationary law. Sequential by nature; the
// whole chain draws from one derived stream.
inline SampleBatch hit_and_run(const Body& body, std::span<const double> start,
                               std::size_t burn_in, std::size_t thin,
                               std::size_t count, const StreamSpec& stream) {
  if (burn_in < 1 || thin < 1) throw usage_error("hit_and_run: burn_in and thin must be >= 1");
  if (!membership(body, start)) throw usage_error("hit_and_run: start point outside body");
  const int n = body.dim;
  SampleBatch batch;
  batch.body = body;
  batch.seed = stream.master_seed;
  batch.chunk_index = stream.chunk_index;
  batch.sampler = SamplerKind::hit_and_run;
  batch.count = count;
  batch.dim = n;
  batch.points.resize(count * static_cast<std::size_t>(n));
  Rng rng(derive_seed(stream.master_seed, streams::kChain, stream.chunk_index, 0));
  std::vector<double> current(start.begin(), start.end());
  std::vector<double> direction(n);
  std::vector<double> probe;
  auto step = [&]() {
    detail::sample_sphere_point(rng, direction);
    const double forward = detail::chord_extent(body, current, direction, 1.0, probe);
    const double backward = detail::chord_extent(body, current, direction, -1.0, probe);
    const double jump = rng.uniform(-backward, forward);
    for (int i = 0; i < n; ++i) current[i] += jump * direction[i];
  };
  for (std::size_t i = 0; i < burn_in; ++i) step();
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t i = 0; i < thin; ++i) step();
    std::copy(current.begin(), current.end(), batch.row(k).begin());
  }
  return batch;
}

// Default hit-and-run schedule: burn_in = 50 n, thin = n.
inline std::size_t default_burn_in(const Body& body) { return 50u * body.dim; }
inline std::size_t default_thin(const Body& body) { return body.dim; }

// Euclidean norm of every row, chunked. A fixed left-to-right accumulation
// per row keeps the values independent of the worker count.
inline std::vector<double> row_norms(const SampleBatch& samples) {
  std::vector<double> norms(samples.count);
  par::for_chunks(samples.count, kSampleChunk, [&](const par::ChunkRange& range) {
    for (std::size_t i = range.begin; i < range.begin + range.count; ++i) {
      double sq = 0.0;
      for (double v : samples.row(i)) sq += v * v;
      norms[i] = std::sqrt(sq);
    }
  });
  return norms;
}

// --- binary dump -----------------------------------------------------------
// 32-byte header (magic "ISOGEOSB", u64 n, u64 count, u64 seed), then
// row-major little-endian doubles.

inline constexpr char kBatchMagic[8] = {'I', 'S', 'O', 'G', 'E', 'O', 'S', 'B'};

inline void write_batch(const SampleBatch& batch, const std::string& path) {
  static_assert(sizeof(double) == 8);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw config_error("write_batch: cannot open " + path);
  out.write(kBatchMagic, 8);
  const std::uint64_t header[3] = {static_cast<std::uint64_t>(batch.dim),
                                   static_cast<std::uint64_t>(batch.count),
                                   batch.seed};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  out.write(reinterpret_cast<const char*>(batch.points.data()),
            static_cast<std::streamsize>(batch.points.size() * sizeof(double)));
  if (!out) throw config_error("write_batch: write failed for " + path);
}

inline SampleBatch read_batch(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("read_batch: cannot open " + path);
  char magic[8];
  std::uint64_t header[3];
  in.read(magic, 8);
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!in || std::memcmp(magic, kBatchMagic, 8) != 0) {
    throw config_error("read_batch: bad header in " + path);
  }
  SampleBatch batch;
  batch.dim = static_cast<int>(header[0]);
  batch.count = static_cast<std::size_t>(header[1]);
  batch.seed = header[2];
  batch.points.resize(batch.count * static_cast<std::size_t>(batch.dim));
  in.read(reinterpret_cast<char*>(batch.points.data()),
          static_cast<std::streamsize>(batch.points.size() * sizeof(double)));
  if (!in) throw config_error("read_batch: truncated payload in " + path);
  return batch;
}

}  // namespace isogeo
