#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "hmap/numeric.hpp"
#include "hmap/warping.hpp"

using namespace hmap;

namespace {
const double kPi = std::acos(-1.0);
}

TEST_CASE("preset values and admissibility invariants") {
  const WarpingFunction lin = linear_warping();
  const WarpingFunction sin_w = sine_warping();
  const WarpingFunction hyp = hyperbolic_warping(4.0);
  const WarpingFunction spl = spliced_warping();

  for (const WarpingFunction* w : {&lin, &sin_w, &hyp, &spl}) {
    CHECK(w->eval(0.0) == doctest::Approx(0.0).epsilon(1e-14));
    // |sigma(d)/d - 1| -> 0
    double prev = 1.0;
    for (double d : {1e-2, 1e-4, 1e-6}) {
      const double err = std::abs(w->eval(d) / d - 1.0);
      CHECK(err <= prev + 1e-12);
      prev = err;
    }
    CHECK(prev < 1e-8);
    CHECK(verify_admissible(*w).pass);
  }
}

TEST_CASE("derivatives agree with central differences") {
  for (const WarpingFunction& w :
       {sine_warping(), hyperbolic_warping(2.0), spliced_warping()}) {
    const double hi = std::isfinite(w.domain_radius) ? 0.9 * w.domain_radius : 3.0;
    for (int i = 1; i <= 7; ++i) {
      const double t = hi * i / 8.0;
      const double h = 1e-4 * std::max(1.0, t);
      const double d1 = central_deriv1(w.eval, t, h);
      const double d2 = central_deriv2(w.eval, t, h);
      CHECK(w.deriv1(t) == doctest::Approx(d1).epsilon(1e-6));
      CHECK(w.deriv2(t) == doctest::Approx(d2).epsilon(1e-5).scale(1.0));
    }
  }
}

TEST_CASE("sectional curvatures of the standard models") {
  const WarpingFunction lin = linear_warping();
  const WarpingFunction sin_w = sine_warping();

  SUBCASE("round sphere at pi/4") {
    const auto s = sectional_curvatures(sin_w, kPi / 4);
    CHECK(s.radial == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.tangential == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("euclidean everywhere") {
    const auto s = sectional_curvatures(lin, 1.7);
    CHECK(s.radial == 0.0);
    CHECK(std::abs(s.tangential) < 1e-14);
  }
  SUBCASE("curvature -k for the hyperbolic preset") {
    const auto s = sectional_curvatures(hyperbolic_warping(4.0), 1.0);
    CHECK(s.radial == doctest::Approx(-4.0).epsilon(1e-12));
    CHECK(s.tangential == doctest::Approx(-4.0).epsilon(1e-12));
  }
  SUBCASE("constant-curvature oracle on a grid") {
    const WarpingFunction hyp1 = hyperbolic_warping(1.0);
    for (int i = 1; i <= 100; ++i) {
      const double t = 2.5 * i / 100.0;
      const auto se = sectional_curvatures(lin, t);
      CHECK(std::abs(se.radial) < 1e-10);
      CHECK(std::abs(se.tangential) < 1e-10);
      const auto sh = sectional_curvatures(hyp1, t);
      CHECK(std::abs(sh.radial + 1.0) < 1e-10);
      CHECK(std::abs(sh.tangential + 1.0) < 1e-10);
      if (t < kPi) {
        const auto ss = sectional_curvatures(sin_w, t);
        CHECK(std::abs(ss.radial - 1.0) < 1e-10);
        CHECK(std::abs(ss.tangential - 1.0) < 1e-10);
      }
    }
  }
  SUBCASE("singularity error") {
    CHECK_THROWS_AS(sectional_curvatures(sin_w, 0.0), std::domain_error);
  }
}

TEST_CASE("Hess(r^2) coefficients") {
  CHECK(hessian_r_squared(linear_warping(), 1.0).radial_coeff == 2.0);
  CHECK(hessian_r_squared(linear_warping(), 1.0).tangential_coeff ==
        doctest::Approx(2.0).epsilon(1e-14));
  // convexity degenerates at the equator of the sphere
  CHECK(std::abs(hessian_r_squared(sine_warping(), kPi / 2).tangential_coeff) <
        1e-12);
  CHECK(hessian_r_squared(hyperbolic_warping(1.0), 1.0).tangential_coeff ==
        doctest::Approx(2.0 * std::cosh(1.0) * std::sinh(1.0)).epsilon(1e-14));
}

TEST_CASE("verify_admissible rejects sigma''(0) != 0") {
  const WarpingFunction bad =
      custom_warping([](double t) { return t + t * t; }, 10.0, "t+t^2");
  const auto rep = verify_admissible(bad);
  CHECK_FALSE(rep.pass);
  CHECK(rep.deriv2_at_zero == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(verify_admissible(hyperbolic_warping(1.0)).pass);
  CHECK(verify_admissible(linear_warping()).pass);
}

TEST_CASE("spliced preset: sin below r0, affine past r1, monotone concave") {
  const WarpingFunction w = spliced_warping();
  const double r0 = w.params[0].second;
  const double r1 = w.params[1].second;
  const double a = w.params[2].second;
  const double b = w.params[3].second;
  CHECK(r0 == doctest::Approx(kPi / 4));
  CHECK(a == doctest::Approx(std::cos(r1)).epsilon(1e-15));
  CHECK(b > 0);

  CHECK(w.eval(0.5) == std::sin(0.5));
  CHECK(w.eval(2.0) == doctest::Approx(a * 2.0 + b).epsilon(1e-15));
  CHECK(w.eval(9.0) == doctest::Approx(a * 9.0 + b).epsilon(1e-15));

  double prev = 0.0;
  for (int i = 1; i <= 400; ++i) {
    const double t = 3.0 * i / 400.0;
    const double v = w.eval(t);
    CHECK(v > prev);
    prev = v;
    CHECK(w.deriv1(t) >= a - 1e-12);
    CHECK(w.deriv2(t) <= 1e-12);
  }
}

TEST_CASE("warping catalog") {
  CHECK(warping_from_name("sine").kind == WarpKind::Sine);
  CHECK(warping_from_name("linear").kind == WarpKind::Linear);
  const WarpingFunction h4 = warping_from_name("hyperbolic:k=4");
  CHECK(h4.eval(1.0) == doctest::Approx(std::sinh(2.0) / 2.0).epsilon(1e-15));
  CHECK_THROWS_AS(warping_from_name("noodle"), std::invalid_argument);
  CHECK_THROWS_AS(warping_from_name("sine:k=2"), std::invalid_argument);

  const WarpingFunction spl = warping_from_name("spliced:r0=0.7,r1=1.1");
  CHECK(spl.eval(0.5) == std::sin(0.5));
  // round trip through the printed name
  const WarpingFunction again = warping_from_name(warping_to_name(spl));
  CHECK(again.eval(2.5) == spl.eval(2.5));
  // a stale intercept is rejected
  CHECK_THROWS_AS(warping_from_name("spliced:r0=0.7,r1=1.1,b=99"),
                  std::invalid_argument);
}
