#pragma once

namespace hmap::mollifier {

// C^inf bump exp(-1/(x(1-x))) on (0,1), identically zero outside.
double bump(double x);
double bump_deriv(double x);

// Integral of the bump over [0,1].
double bump_mass();

// Mollified step: m(x) = int_0^x bump / bump_mass. Rises 0 -> 1 on [0,1],
// all derivatives vanish at both endpoints.
double step(double x);

// 1 - step(x), evaluated as a tail integral so the result is nonnegative
// even when step(x) rounds to 1.
double step_tail(double x);

double step_deriv(double x);
double step_deriv2(double x);

}  // namespace hmap::mollifier
