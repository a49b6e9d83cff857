#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "isogeo/marginals.hpp"
#include "isogeo/quadrature.hpp"

using namespace isogeo;

namespace {

// Quadrature oracle for the sphere marginal tail, independent of the
// incomplete-beta route: P(|theta_1| >= u) through the angle substitution.
double sphere_tail_by_quadrature(int n, double u) {
  if (u >= 1.0) return 0.0;
  auto integrand = [n](double phi) {
    return std::exp((n - 2) * std::log(std::cos(phi)));
  };
  const double numerator = integrate(integrand, std::asin(u), 0.5 * kPi, 1e-12);
  const double denominator = integrate(integrand, 0.0, 0.5 * kPi, 1e-12);
  return numerator / denominator;
}

// Deterministic oracle for F(t) on the ball: radial density n rho^{n-1}/r^n.
double ball_averaged_tail_oracle(const Body& ball, double t) {
  const int n = ball.dim;
  const double r = ball.scale;
  const double level = t * ball.lk;
  if (level >= r) return 0.0;
  return integrate(
      [&](double rho) {
        return n * std::pow(rho / r, n - 1) / r * sphere_tail_by_quadrature(n, level / rho);
      },
      level, r, 1e-9);
}

std::vector<double> first_axis(int n) {
  std::vector<double> theta(n, 0.0);
  theta[0] = 1.0;
  return theta;
}

}  // namespace

TEST_CASE("sphere tail closed forms", "[marginals]") {
  CHECK(sphere_tail(3, 0.5) == Catch::Approx(0.5).epsilon(1e-12));
  for (int n : {2, 3, 8, 50}) CHECK(sphere_tail(n, 0.0) == 1.0);
  CHECK(sphere_tail(2, 1.0 / std::sqrt(2.0)) == Catch::Approx(0.5).epsilon(1e-12));
  CHECK(sphere_tail(5, 1.0) == 0.0);
  CHECK(sphere_tail(5, 2.0) == 0.0);
}

TEST_CASE("sphere tail against quadrature and MC", "[marginals]") {
  for (int n : {2, 4, 7, 24}) {
    for (double u : {0.1, 0.45, 0.9}) {
      INFO("n=" << n << " u=" << u);
      CHECK(sphere_tail(n, u) ==
            Catch::Approx(sphere_tail_by_quadrature(n, u)).epsilon(1e-9));
    }
  }
  // brute-force arc fraction in dimension 2
  const std::vector<double> dirs = sample_sphere(2, 200000, {3, 0});
  RunningStat hits;
  const double u = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < 200000; ++i) {
    hits.add(std::fabs(dirs[2 * i]) >= u ? 1.0 : 0.0);
  }
  CHECK(std::fabs(hits.mean() - 0.5) < 3.0 * hits.se());
}

TEST_CASE("directional tail of the cube marginal", "[marginals]") {
  const Body cube2 = make_body(BodyKind::cube, 2);
  const SampleBatch samples = sample_uniform(cube2, 200000, {5, 0});
  const auto theta = first_axis(2);
  // |X_1| >= 1/4 has probability 1/2 for the uniform marginal on [-1/2, 1/2]
  const double t_quarter = 0.25 / cube2.lk;
  const EstimateWithError est = directional_tail(samples, theta, t_quarter, cube2.lk);
  CHECK(std::fabs(est.value - 0.5) < 3.0 * est.std_error);
  // beyond the circumradius the tail vanishes identically
  const double t_big = (cube2.circumradius * 1.01) / cube2.lk;
  CHECK(directional_tail(samples, theta, t_big, cube2.lk).value == 0.0);
  // near zero the tail saturates
  CHECK(directional_tail(samples, theta, 1e-9, cube2.lk).value >= 0.9999);

  SampleBatch empty;
  empty.dim = 2;
  CHECK_THROWS_AS(directional_tail(empty, theta, 1.0, cube2.lk), usage_error);
}

TEST_CASE("averaged tail matches the ball quadrature oracle", "[marginals]") {
  const Body ball16 = make_body(BodyKind::ball, 16);
  const SampleBatch samples = sample_uniform(ball16, 200000, {7, 0});
  const std::vector<double> grid{1.0, 1.5, 2.0, 3.0};
  const TailCurve curve = averaged_tail(ball16, grid, samples);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double oracle = ball_averaged_tail_oracle(ball16, grid[k]);
    INFO("t=" << grid[k] << " value=" << curve.values[k] << " oracle=" << oracle);
    CHECK(std::fabs(curve.values[k] - oracle) < 3.0 * curve.std_errors[k]);
  }
}

TEST_CASE("averaged tail basics and bounds", "[marginals]") {
  const Body cube16 = make_body(BodyKind::cube, 16);
  const SampleBatch samples = sample_uniform(cube16, 100000, {9, 0});
  std::vector<double> grid;
  for (double t = 1.0; t <= 3.0; t *= 1.15) grid.push_back(t);
  const TailCurve curve = averaged_tail(cube16, grid, samples);
  CHECK(curve.values.front() <= 1.0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(curve.values[k] >= 0.0);
    CHECK(curve.values[k] <= 1.0);
    // Chebyshev: the marginal has variance L_K^2
    CHECK(curve.values[k] <=
          1.0 / (grid[k] * grid[k]) + 3.0 * curve.std_errors[k]);
    if (k > 0) {
      const double slack =
          3.0 * std::sqrt(curve.std_errors[k] * curve.std_errors[k] +
                          curve.std_errors[k - 1] * curve.std_errors[k - 1]);
      CHECK(curve.values[k] <= curve.values[k - 1] + slack);
    }
  }
  // beyond the circumradius the estimator is exactly zero
  const double t_big = cube16.circumradius / cube16.lk * 1.01;
  const std::vector<double> big_grid{t_big};
  CHECK(averaged_tail(cube16, big_grid, samples).values[0] == 0.0);
}

TEST_CASE("averaged tail agrees with the naive pair estimator", "[marginals]") {
  const Body cube16 = make_body(BodyKind::cube, 16);
  const SampleBatch samples = sample_uniform(cube16, 300000, {11, 0});
  const std::vector<double> grid{1.0, 2.0};
  const TailCurve rb = averaged_tail(cube16, grid, samples);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const EstimateWithError naive = naive_pair_tail(samples, grid[k], cube16.lk, {13, 0});
    INFO("t=" << grid[k]);
    const double gap = std::fabs(rb.values[k] - naive.value);
    CHECK(gap < 4.0 * std::sqrt(rb.std_errors[k] * rb.std_errors[k] +
                                naive.std_error * naive.std_error));
    // Rao-Blackwell dominance at equal sample count
    CHECK(rb.std_errors[k] <= naive.std_error);
  }
}

TEST_CASE("averaged tail depends on samples only through norms", "[marginals]") {
  const Body ball8 = make_body(BodyKind::ball, 8);
  const SampleBatch samples = sample_uniform(ball8, 50000, {15, 0});
  const std::vector<double> grid{1.0, 2.0};
  const TailCurve base = averaged_tail(ball8, grid, samples);

  // sign flips are exact isometries in floating point: bitwise equality
  SampleBatch flipped = samples;
  Rng rng(99);
  std::vector<double> signs(8);
  for (auto& s : signs) s = (rng.next_u64() & 1ull) ? 1.0 : -1.0;
  for (std::size_t i = 0; i < flipped.count; ++i) {
    auto row = flipped.row(i);
    for (int j = 0; j < 8; ++j) row[j] *= signs[j];
  }
  const TailCurve flipped_curve = averaged_tail(ball8, grid, flipped);
  REQUIRE(flipped_curve.values == base.values);
  REQUIRE(flipped_curve.std_errors == base.std_errors);

  // a generic rotation only moves norms at ulp level
  std::vector<double> v = sample_sphere(8, 1, {16, 0});  // Householder direction
  SampleBatch rotated = samples;
  for (std::size_t i = 0; i < rotated.count; ++i) {
    auto row = rotated.row(i);
    double proj = 0.0;
    for (int j = 0; j < 8; ++j) proj += row[j] * v[j];
    for (int j = 0; j < 8; ++j) row[j] -= 2.0 * proj * v[j];
  }
  const TailCurve rotated_curve = averaged_tail(ball8, grid, rotated);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(rotated_curve.values[k] ==
          Catch::Approx(base.values[k]).margin(1e-13 + 1e-10 * base.values[k]));
  }
}

TEST_CASE("norm concentration stand-ins on the cube", "[marginals]") {
  const Body cube16 = make_body(BodyKind::cube, 16);
  const SampleBatch s16 = sample_uniform(cube16, 100000, {17, 0});
  const std::vector<double> norms16 = row_norms(s16);
  const double small_ball_level = 0.5 * std::sqrt(16.0) * cube16.lk;
  RunningStat above;
  for (double norm : norms16) above.add(norm > small_ball_level ? 1.0 : 0.0);
  CHECK(above.mean() >= 0.5 - 3.0 * above.se());

  const Body cube64 = make_body(BodyKind::cube, 64);
  const SampleBatch s64 = sample_uniform(cube64, 100000, {18, 0});
  const std::vector<double> norms64 = row_norms(s64);
  const double concentration_level = 2.0 * std::sqrt(64.0) * cube64.lk;
  RunningStat beyond;
  for (double norm : norms64) beyond.add(norm > concentration_level ? 1.0 : 0.0);
  CHECK(beyond.mean() < 1e-3);
}

TEST_CASE("gaussian rate fit", "[marginals]") {
  // exact standard Gaussian two-sided tails
  TailCurve gauss;
  gauss.t_grid = {1.0, 1.5, 2.0, 3.0};
  for (double t : gauss.t_grid) {
    gauss.values.push_back(2.0 * gaussian_tail(t));
    gauss.std_errors.push_back(0.0);
  }
  const GaussianRateFit fit = gaussian_rate(gauss, 1.0, 3.0);
  REQUIRE(fit.q_values.size() == 4);
  // q(2) = -ln(2 Q(2))/4
  CHECK(fit.q_values[2] == Catch::Approx(0.7725092882805218).epsilon(1e-10));
  CHECK(fit.q_min >= 0.5);
  CHECK(fit.dropped_zeros == 0);

  TailCurve ones;
  ones.t_grid = {1.0, 2.0};
  ones.values = {1.0, 1.0};
  ones.std_errors = {0.0, 0.0};
  const GaussianRateFit flat = gaussian_rate(ones, 1.0, 2.0);
  CHECK(flat.q_min == 0.0);
  CHECK(flat.q_max == 0.0);

  TailCurve exact;
  exact.t_grid = {1.0, 1.7, 2.9};
  for (double t : exact.t_grid) {
    exact.values.push_back(std::exp(-t * t));
    exact.std_errors.push_back(0.0);
  }
  const GaussianRateFit unit = gaussian_rate(exact, 1.0, 3.0);
  CHECK(unit.q_min == Catch::Approx(1.0).epsilon(1e-14));
  CHECK(unit.q_max == Catch::Approx(1.0).epsilon(1e-14));

  TailCurve with_zero;
  with_zero.t_grid = {1.0, 2.0, 3.0};
  with_zero.values = {0.5, 0.0, 0.0};
  with_zero.std_errors = {0.0, 0.0, 0.0};
  const GaussianRateFit partial = gaussian_rate(with_zero, 1.0, 3.0);
  CHECK(partial.dropped_zeros == 2);
  REQUIRE(partial.q_values.size() == 1);

  TailCurve all_zero;
  all_zero.t_grid = {2.0, 3.0};
  all_zero.values = {0.0, 0.0};
  all_zero.std_errors = {0.0, 0.0};
  CHECK_THROWS_AS(gaussian_rate(all_zero, 1.0, 3.0), insufficient_samples_error);
  CHECK_THROWS_AS(gaussian_rate(all_zero, 5.0, 7.0), usage_error);
}

TEST_CASE("direction classification on the ball is rotation invariant", "[marginals]") {
  const Body ball16 = make_body(BodyKind::ball, 16);
  const double r = 3.0;
  const std::vector<double> grid{1.0, 1.2};  // inside [1, sqrt(16)/3]
  const std::vector<double> dirs = sample_sphere(16, 8, {19, 0});
  const ClassificationResult result = classify_directions(
      ball16, dirs, 8, r, grid, 20000, {20, 0}, ClassifyMode::both);
  CHECK((result.subgaussian_fraction == 0.0 || result.subgaussian_fraction == 1.0));
  CHECK((result.supergaussian_fraction == 0.0 || result.supergaussian_fraction == 1.0));

  // exact single-direction oracle from the ball marginal tail
  // P(|X_1| >= u) = int over the section density ~ (1 - (u/r)^2)^{(n-1)/2}
  auto exact_tail = [&](double t) {
    const double u = t * ball16.lk;
    const double radius = ball16.scale;
    auto density = [&](double v) {
      return std::exp(0.5 * (16 - 1) * std::log1p(-(v / radius) * (v / radius)));
    };
    const double numerator = integrate(density, u, radius, 1e-11);
    const double denominator = integrate(density, 0.0, radius, 1e-11);
    return numerator / denominator;
  };
  bool oracle_sub = true, oracle_super = true;
  for (double t : grid) {
    const double tail = exact_tail(t);
    if (tail > std::exp(-t * t / (r * r))) oracle_sub = false;
    if (tail < std::exp(-r * r * t * t)) oracle_super = false;
  }
  CHECK(result.subgaussian_fraction == (oracle_sub ? 1.0 : 0.0));
  CHECK(result.supergaussian_fraction == (oracle_super ? 1.0 : 0.0));
}

TEST_CASE("directional curve mirrors pointwise tails", "[marginals]") {
  const Body cube8 = make_body(BodyKind::cube, 8);
  const SampleBatch samples = sample_uniform(cube8, 50000, {91, 0});
  const std::vector<double> dirs = sample_sphere(8, 1, {92, 0});
  std::vector<double> theta(dirs.begin(), dirs.begin() + 8);
  const std::vector<double> grid{1.0, 1.5, 2.0};
  const TailCurve curve = directional_curve(samples, theta, grid, cube8.lk);
  CHECK(curve.kind == TailKind::directional);
  REQUIRE(curve.values.size() == 3);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const EstimateWithError est = directional_tail(samples, theta, grid[k], cube8.lk);
    CHECK(curve.values[k] == est.value);
    CHECK(curve.std_errors[k] == est.std_error);
  }
  // a directional curve feeds the same rate fit as the averaged one
  const GaussianRateFit fit = gaussian_rate(curve, 1.0, 2.0);
  CHECK(fit.q_min > 0.0);
}

TEST_CASE("huge r makes every direction subgaussian at t = 1", "[marginals]") {
  const Body cube16 = make_body(BodyKind::cube, 16);
  const std::vector<double> grid{1.0};
  const std::vector<double> dirs = sample_sphere(16, 16, {23, 0});
  const ClassificationResult result =
      classify_directions(cube16, dirs, 16, 1000.0, grid, 20000, {24, 0},
                          ClassifyMode::subgaussian);
  CHECK(result.subgaussian_fraction == 1.0);
  // the bound at t=1 is ~1; directional tails are genuinely below it
  const SampleBatch samples = sample_uniform(cube16, 50000, {25, 0});
  std::vector<double> theta(dirs.begin(), dirs.begin() + 16);
  CHECK(directional_tail(samples, theta, 1.0, cube16.lk).value < 0.999);
}

TEST_CASE("classification validates inputs", "[marginals]") {
  const Body cube16 = make_body(BodyKind::cube, 16);
  const std::vector<double> dirs = sample_sphere(16, 2, {27, 0});
  const std::vector<double> ok_grid{1.0};
  CHECK_THROWS_AS(classify_directions(cube16, dirs, 0, 3.0, ok_grid, 100, StreamSpec{1, 0}),
                  usage_error);
  const std::vector<double> below{0.5};
  CHECK_THROWS_AS(
      classify_directions(cube16, dirs, 2, 3.0, below, 100, StreamSpec{1, 0}),
      usage_error);
  const std::vector<double> beyond_super{2.0};  // sqrt(16)/3 = 1.333
  CHECK_THROWS_AS(classify_directions(cube16, dirs, 2, 3.0, beyond_super, 100,
                                      StreamSpec{1, 0}, ClassifyMode::supergaussian),
                  usage_error);
  // the same grid is fine for the subgaussian test (range [1, 12])
  CHECK_NOTHROW(classify_directions(cube16, dirs, 2, 3.0, beyond_super, 100,
                                    StreamSpec{1, 0}, ClassifyMode::subgaussian));
}
