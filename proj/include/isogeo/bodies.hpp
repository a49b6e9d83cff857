#pragma once

// Catalog of volume-one centered convex bodies with exact geometry data.
// Every catalog kind has a closed-form volume, so the homothety factor, the
// isotropic constant and the circumradius are all computed deterministically
// (log-Gamma arithmetic, no Monte Carlo, no factorial overflow).
//
// Conventions:
//   cube            [-1/2, 1/2]^n scaled by `scale` (scale = 1: already volume 1)
//   ball            Euclidean ball of radius `scale`
//   cross_polytope  l1 ball { ||x||_1 <= scale }
//   lp_ball         { ||x||_p <= scale }, p >= 1
//   simplex         regular simplex, barycenter at the origin (not symmetric;
//                   kept for sampler validation only)

#include <cmath>
#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "isogeo/errors.hpp"
#include "isogeo/special.hpp"

namespace isogeo {

enum class BodyKind { cube, ball, cross_polytope, simplex, lp_ball };

inline const char* body_kind_name(BodyKind kind) {
  switch (kind) {
    case BodyKind::cube: return "cube";
    case BodyKind::ball: return "ball";
    case BodyKind::cross_polytope: return "cross_polytope";
    case BodyKind::simplex: return "simplex";
    case BodyKind::lp_ball: return "lp_ball";
  }
  return "?";
}

struct Body {
  BodyKind kind = BodyKind::cube;
  int dim = 0;
  double p = 0.0;      // only meaningful for lp_ball
  double scale = 1.0;  // homothety factor making the volume exactly 1
  double lk = 0.0;     // isotropic constant L_K
  double circumradius = 0.0;
  bool symmetric = true;
};

namespace detail {

// E x_1^2 over the *unit* lp ball, from the Dirichlet integral
//   int_{B_p^n} |x_1|^2 dx = 2^n p^{-n} G(3/p) G(1/p)^{n-1} / G(1+(n+2)/p).
inline double lp_unit_second_moment(int n, double p) {
  const double log_m = std::lgamma(3.0 / p) + std::lgamma(1.0 + n / p) -
                       std::lgamma(1.0 / p) - std::lgamma(1.0 + (n + 2.0) / p);
  return std::exp(log_m);
}

inline double lp_unit_log_volume(int n, double p) {
  return n * std::log(2.0) + n * std::lgamma(1.0 + 1.0 / p) - std::lgamma(1.0 + n / p);
}

// Edge factor of the regular simplex construction below: vertices are
// t * (e_i - barycenter) lifted through the Helmert basis, giving volume
// t^n sqrt(n+1)/n!. Solve for volume one.
inline double simplex_scale(int n) {
  return std::exp((std::lgamma(n + 1.0) - 0.5 * std::log(n + 1.0)) / n);
}

// y = H x where the columns of H^T are the Helmert basis of the hyperplane
// {sum = 0} in R^{n+1}; computed in O(n) with suffix sums.
inline void helmert_lift(std::span<const double> x, std::vector<double>& y) {
  const std::size_t n = x.size();
  y.assign(n + 1, 0.0);
  double suffix = 0.0;  // sum_{k >= j} x_k / sqrt(k(k+1)), built backwards
  for (std::size_t j = n; j >= 1; --j) {
    const double k = static_cast<double>(j);
    const double inv = 1.0 / std::sqrt(k * (k + 1.0));
    // contribution of -k x_k at position k+1 uses the previous suffix
    y[j] = suffix - x[j - 1] * k * inv;
    suffix += x[j - 1] * inv;
  }
  y[0] = suffix;
}

// x = H^T z for z in R^{n+1}; prefix sums, O(n).
inline void helmert_project(std::span<const double> z, std::vector<double>& x) {
  const std::size_t n = z.size() - 1;
  x.assign(n, 0.0);
  double prefix = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    prefix += z[k - 1];
    x[k - 1] = (prefix - static_cast<double>(k) * z[k]) /
               std::sqrt(static_cast<double>(k) * (k + 1.0));
  }
}

}  // namespace detail

inline Body make_body(BodyKind kind, int n, double p = 0.0) {
  if (n < 2) throw config_error("make_body: dimension must be >= 2");
  Body body;
  body.kind = kind;
  body.dim = n;
  switch (kind) {
    case BodyKind::cube: {
      body.scale = 1.0;
      body.lk = 1.0 / std::sqrt(12.0);
      body.circumradius = 0.5 * std::sqrt(static_cast<double>(n));
      break;
    }
    case BodyKind::ball: {
      const double r = std::exp(-log_ball_volume(n) / n);
      body.scale = r;
      body.circumradius = r;
      body.lk = r / std::sqrt(n + 2.0);
      break;
    }
    case BodyKind::cross_polytope:
    case BodyKind::lp_ball: {
      const double pp = (kind == BodyKind::cross_polytope) ? 1.0 : p;
      if (!(pp >= 1.0)) throw config_error("make_body: lp_ball requires p >= 1");
      body.p = pp;
      const double r = std::exp(-detail::lp_unit_log_volume(n, pp) / n);
      body.scale = r;
      body.lk = r * std::sqrt(detail::lp_unit_second_moment(n, pp));
      body.circumradius = r * std::max(1.0, std::pow(n, 0.5 - 1.0 / pp));
      break;
    }
    case BodyKind::simplex: {
      const double t = detail::simplex_scale(n);
      body.scale = t;
      body.circumradius = t * std::sqrt(n / (n + 1.0));
      // covariance of the uniform measure is R^2/(n(n+2)) I for the regular simplex
      body.lk = body.circumradius / std::sqrt(n * (n + 2.0));
      body.symmetric = false;
      break;
    }
  }
  return body;
}

inline bool membership(const Body& body, std::span<const double> x) {
  if (static_cast<int>(x.size()) != body.dim) {
    throw usage_error("membership: point dimension does not match body");
  }
  switch (body.kind) {
    case BodyKind::cube: {
      const double half = 0.5 * body.scale;
      for (double xi : x) {
        if (std::fabs(xi) > half) return false;
      }
      return true;
    }
    case BodyKind::ball: {
      double sq = 0.0;
      for (double xi : x) sq += xi * xi;
      return sq <= body.scale * body.scale;
    }
    case BodyKind::cross_polytope: {
      double sum = 0.0;
      for (double xi : x) sum += std::fabs(xi);
      return sum <= body.scale;
    }
    case BodyKind::lp_ball: {
      double sum = 0.0;
      for (double xi : x) sum += std::pow(std::fabs(xi) / body.scale, body.p);
      return sum <= 1.0;
    }
    case BodyKind::simplex: {
      thread_local std::vector<double> lifted;
      detail::helmert_lift(x, lifted);
      const double offset = 1.0 / (body.dim + 1.0);
      for (double yj : lifted) {
        if (yj / body.scale + offset < -1e-12) return false;
      }
      return true;
    }
  }
  return false;
}

// Small-diameter test: R(K) <= cap * sqrt(n) * L_K.
inline bool is_small_diameter(const Body& body, double cap) {
  if (!(cap > 0.0)) throw usage_error("is_small_diameter: cap must be positive");
  return body.circumradius <= cap * std::sqrt(static_cast<double>(body.dim)) * body.lk;
}

// Plain-text key-value descriptor used in run manifests.
inline std::string body_descriptor(const Body& body) {
  std::ostringstream out;
  out.precision(17);
  out << "kind=" << body_kind_name(body.kind) << " n=" << body.dim;
  if (body.kind == BodyKind::lp_ball) out << " p=" << body.p;
  out << " scale=" << body.scale << " lk=" << body.lk
      << " circumradius=" << body.circumradius;
  return out.str();
}

}  // namespace isogeo
