#include "hmap/mollifier.hpp"

#include <cmath>

#include "hmap/numeric.hpp"

namespace hmap::mollifier {

double bump(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return std::exp(-1.0 / (x * (1.0 - x)));
}

double bump_deriv(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double d = x * (1.0 - x);
  return bump(x) * (1.0 - 2.0 * x) / (d * d);
}

double bump_mass() {
  static const double mass = integrate([](double s) { return bump(s); }, 0.0, 1.0, 16);
  return mass;
}

double step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return integrate([](double s) { return bump(s); }, 0.0, x, 16) / bump_mass();
}

double step_tail(double x) {
  if (x <= 0.0) return 1.0;
  if (x >= 1.0) return 0.0;
  return integrate([](double s) { return bump(s); }, x, 1.0, 16) / bump_mass();
}

double step_deriv(double x) { return bump(x) / bump_mass(); }

double step_deriv2(double x) { return bump_deriv(x) / bump_mass(); }

}  // namespace hmap::mollifier
