#pragma once

#include <array>
#include <cmath>
#include <utility>

namespace hmap {

namespace detail {

// 16-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<double, 16> kGaussNodes = {
    -9.89400934991649938510e-01, -9.44575023073232600268e-01,
    -8.65631202387831755196e-01, -7.55404408355002998654e-01,
    -6.17876244402643770570e-01, -4.58016777657227369680e-01,
    -2.81603550779258915426e-01, -9.50125098376374543907e-02,
    9.50125098376374543907e-02,  2.81603550779258915426e-01,
    4.58016777657227369680e-01,  6.17876244402643770570e-01,
    7.55404408355002998654e-01,  8.65631202387831755196e-01,
    9.44575023073232600268e-01,  9.89400934991649938510e-01};

inline constexpr std::array<double, 16> kGaussWeights = {
    2.71524594117540374327e-02, 6.22535239386477062817e-02,
    9.51585116824925913992e-02, 1.24628971255534029550e-01,
    1.49595988816576763725e-01, 1.69156519395002619133e-01,
    1.82603415044923611532e-01, 1.89450610455068585436e-01,
    1.89450610455068585436e-01, 1.82603415044923611532e-01,
    1.69156519395002619133e-01, 1.49595988816576763725e-01,
    1.24628971255534029550e-01, 9.51585116824925913992e-02,
    6.22535239386477062817e-02, 2.71524594117540374327e-02};

}  // namespace detail

// Composite 16-point Gauss-Legendre quadrature on [a, b].
template <class F>
double integrate(F&& f, double a, double b, int panels = 8) {
  if (a == b) return 0.0;
  const double dx = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * dx;
    const double mid = lo + 0.5 * dx;
    const double half = 0.5 * dx;
    double acc = 0.0;
    for (int q = 0; q < 16; ++q)
      acc += detail::kGaussWeights[q] * f(mid + half * detail::kGaussNodes[q]);
    total += acc * half;
  }
  return total;
}

// 5-point central first derivative, step h.
template <class F>
double central_deriv1(F&& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) /
         (12 * h);
}

// 5-point central second derivative, step h.
template <class F>
double central_deriv2(F&& f, double x, double h) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) -
          f(x - 2 * h)) /
         (12 * h * h);
}

// Step used for numerical differentiation of scalar profiles.
inline double fd_step(double t) { return 1e-5 * std::max(1.0, std::abs(t)); }

}  // namespace hmap
