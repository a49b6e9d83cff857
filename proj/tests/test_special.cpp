#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "isogeo/quadrature.hpp"
#include "isogeo/special.hpp"

using namespace isogeo;

namespace {

// Independent oracle for I_x(a,b): direct quadrature of the beta integrand.
double ibeta_by_quadrature(double a, double b, double x) {
  const double log_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  const double integral = integrate(
      [&](double v) {
        return std::exp(log_norm + (a - 1.0) * std::log(v) + (b - 1.0) * std::log1p(-v));
      },
      1e-300, x, 1e-12, 1e-300);
  return integral;
}

}  // namespace

TEST_CASE("quadrature reproduces elementary integrals", "[special]") {
  CHECK(integrate([](double x) { return x * x * x; }, 0.0, 1.0, 1e-12) ==
        Catch::Approx(0.25).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, kPi, 1e-12) ==
        Catch::Approx(2.0).epsilon(1e-12));
  // oscillatory + smooth; antiderivative e^{-x}(10 sin(10x) - cos(10x))/101
  auto primitive = [](double x) {
    return std::exp(-x) * (10.0 * std::sin(10.0 * x) - std::cos(10.0 * x)) / 101.0;
  };
  CHECK(integrate([](double x) { return std::exp(-x) * std::cos(10.0 * x); }, 0.0,
                  20.0, 1e-12) ==
        Catch::Approx(primitive(20.0) - primitive(0.0)).epsilon(1e-10));
}

TEST_CASE("gaussian density integrates to one", "[special]") {
  const double mass =
      2.0 * integrate([](double t) { return gaussian_density(t); }, 0.0, 40.0, 1e-12);
  CHECK(mass == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gaussian tail matches quadrature oracle", "[special]") {
  CHECK(gaussian_tail(0.0) == 0.5);
  for (double t : {0.3, 1.0, 2.0, 3.5, 6.0, 9.0, 12.0}) {
    const double oracle =
        integrate([](double s) { return gaussian_density(s); }, t, t + 40.0, 1e-13,
                  1e-320);
    CHECK(gaussian_tail(t) == Catch::Approx(oracle).epsilon(1e-10));
  }
  // frozen oracle values
  CHECK(gaussian_tail(1.0) == Catch::Approx(0.15865525393145705).epsilon(1e-10));
  CHECK(gaussian_tail(2.0) == Catch::Approx(0.02275013194817921).epsilon(1e-10));
}

TEST_CASE("gaussian tail symmetry and monotonicity", "[special]") {
  double prev = 1.0;
  for (double t = -6.0; t <= 6.0; t += 0.25) {
    CHECK(gaussian_tail(t) + gaussian_tail(-t) == Catch::Approx(1.0).margin(1e-12));
    const double cur = gaussian_tail(t);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("log ball volume closed forms", "[special]") {
  CHECK(std::exp(log_ball_volume(2)) == Catch::Approx(kPi).epsilon(1e-14));
  CHECK(std::exp(log_ball_volume(3)) == Catch::Approx(4.0 * kPi / 3.0).epsilon(1e-14));
  CHECK(std::exp(log_ball_volume(4)) == Catch::Approx(kPi * kPi / 2.0).epsilon(1e-14));
  // ratio stays finite far beyond factorial overflow
  CHECK(std::isfinite(log_ball_volume_ratio(2000)));
}

TEST_CASE("incomplete beta against quadrature oracle", "[special]") {
  const double cases[][3] = {
      {0.5, 0.5, 0.3},  {0.5, 9.5, 0.2},   {1.0, 4.0, 0.6},  {2.5, 2.5, 0.5},
      {24.5, 0.5, 0.9}, {24.5, 0.5, 0.99}, {49.5, 0.5, 0.7}, {3.0, 7.0, 0.15},
  };
  for (const auto& c : cases) {
    const double value = regularized_incomplete_beta(c[0], c[1], c[2]);
    const double oracle = ibeta_by_quadrature(c[0], c[1], c[2]);
    INFO("a=" << c[0] << " b=" << c[1] << " x=" << c[2]);
    CHECK(value == Catch::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("incomplete beta closed forms and symmetry", "[special]") {
  CHECK(regularized_incomplete_beta(1.0, 3.0, 0.25) ==
        Catch::Approx(1.0 - std::pow(0.75, 3.0)).epsilon(1e-13));
  CHECK(regularized_incomplete_beta(0.5, 0.5, 0.4) ==
        Catch::Approx(2.0 / kPi * std::asin(std::sqrt(0.4))).epsilon(1e-13));
  for (double x : {0.05, 0.35, 0.65, 0.95}) {
    CHECK(regularized_incomplete_beta(3.5, 1.5, x) +
              regularized_incomplete_beta(1.5, 3.5, 1.0 - x) ==
          Catch::Approx(1.0).margin(1e-13));
  }
  CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
  CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
}
