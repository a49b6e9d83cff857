#pragma once

// Globally adaptive 1-D quadrature on a finite interval, built on the
// 7-point Gauss / 15-point Kronrod pair. The interval with the largest
// error estimate is bisected until the requested tolerance is met.

#include <cmath>
#include <cstddef>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

namespace isogeo {

namespace detail {

// Kronrod-15 abscissae (positive half) and weights; Gauss-7 weights sit at
// the odd-index abscissae.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <typename F>
inline void gauss_kronrod_15(const F& f, double a, double b, double* integral,
                             double* error) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double result_gauss = fc * kWg[3];
  double result_kronrod = fc * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double fsum = f(center - dx) + f(center + dx);
    result_kronrod += kWgk[j] * fsum;
    if (j % 2 == 1) result_gauss += kWg[j / 2] * fsum;
  }
  *integral = result_kronrod * half;
  // conservative estimate: the raw Gauss/Kronrod difference
  *error = std::fabs(result_kronrod - result_gauss) * std::fabs(half);
}

struct QuadInterval {
  double a, b, integral, error;
  bool operator<(const QuadInterval& other) const { return error < other.error; }
};

}  // namespace detail

// Integrate f over [a, b] to the requested relative tolerance (with an
// absolute floor). Throws if the subdivision budget is exhausted before the
// estimate converges.
template <typename F>
inline double integrate(const F& f, double a, double b, double rel_tol = 1e-10,
                        double abs_tol = 0.0, int max_intervals = 4000) {
  if (a == b) return 0.0;
  detail::QuadInterval whole{};
  whole.a = a;
  whole.b = b;
  detail::gauss_kronrod_15(f, a, b, &whole.integral, &whole.error);
  std::priority_queue<detail::QuadInterval> heap;
  heap.push(whole);
  double total = whole.integral;
  double total_error = whole.error;
  int intervals = 1;
  while (total_error > std::max(abs_tol, rel_tol * std::fabs(total))) {
    if (intervals >= max_intervals || heap.empty()) {
      throw std::runtime_error("integrate: failed to converge to requested tolerance");
    }
    const detail::QuadInterval worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    detail::QuadInterval left{}, right{};
    left.a = worst.a;
    left.b = mid;
    right.a = mid;
    right.b = worst.b;
    detail::gauss_kronrod_15(f, left.a, left.b, &left.integral, &left.error);
    detail::gauss_kronrod_15(f, right.a, right.b, &right.integral, &right.error);
    total += left.integral + right.integral - worst.integral;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }
  return total;
}

}  // namespace isogeo
