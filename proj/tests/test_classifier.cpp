#include <doctest.h>

#include <cmath>
#include <random>

#include "hmap/classifier.hpp"

using namespace hmap;

namespace {
const double kPi = std::acos(-1.0);
}

TEST_CASE("classify_ball on the preset catalog") {
  SUBCASE("round sphere inside the regular range") {
    const BallReport rep = classify_ball(sine_warping(), kPi / 3);
    CHECK(rep.curvature_upper == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.regular);
    CHECK(rep.convex);
  }
  SUBCASE("spliced target separates convexity from regularity") {
    const BallReport rep = classify_ball(spliced_warping(), 10.0);
    CHECK(rep.curvature_upper >= 1.0 - 1e-9);
    CHECK_FALSE(rep.regular);
    CHECK(rep.convex);
    CHECK(rep.min_sigma_prime > 0);
    CHECK(rep.cut_locus_note == "satisfied");
  }
  SUBCASE("euclidean target") {
    const BallReport rep = classify_ball(linear_warping(), 123.0);
    CHECK(std::abs(rep.curvature_upper) < 1e-12);
    CHECK(rep.regular);
    CHECK(rep.convex);
  }
  SUBCASE("flags are monotone in R") {
    for (const WarpingFunction& w :
         {sine_warping(), spliced_warping(), hyperbolic_warping(2.0)}) {
      bool prev_regular = true, prev_convex = true;
      for (double R = 0.2; R < 0.95 * std::min(w.domain_radius, 12.0); R += 0.2) {
        const BallReport rep = classify_ball(w, R);
        CHECK((prev_regular || !rep.regular));  // true -> false only
        CHECK((prev_convex || !rep.convex));
        // regularity implies convexity across the catalog
        if (rep.regular) CHECK(rep.convex);
        prev_regular = rep.regular;
        prev_convex = rep.convex;
      }
    }
  }
}

TEST_CASE("hkw quadratic form") {
  SUBCASE("flat chart reduces to the squared norms") {
    const NormalChart flat = euclidean_chart(3);
    std::vector<Eigen::VectorXd> vs = {Eigen::Vector3d(1, 2, 0.5).eval(),
                                       Eigen::Vector3d(-0.3, 0, 1).eval()};
    const auto w = hkw_quadratic_form(flat, Eigen::Vector3d(0.4, -0.2, 0.9), vs);
    CHECK(w.value ==
          doctest::Approx(vs[0].squaredNorm() + vs[1].squaredNorm())
              .epsilon(1e-14));
  }
  SUBCASE("at the pole the Christoffel term vanishes") {
    const NormalChart cap = to_normal_chart(model_metric(sine_warping(), 2));
    std::vector<Eigen::VectorXd> vs = {Eigen::Vector2d(0.7, -0.2).eval()};
    const auto w = hkw_quadratic_form(cap, Eigen::Vector2d::Zero(), vs);
    CHECK(w.value == doctest::Approx(vs[0].squaredNorm()).epsilon(1e-13));
  }
  SUBCASE("quadratic scaling") {
    const NormalChart cap = to_normal_chart(model_metric(sine_warping(), 3));
    std::vector<Eigen::VectorXd> vs = {Eigen::Vector3d(0.3, 1.0, -0.4).eval()};
    const Eigen::Vector3d y(0.5, 0.1, 0.6);
    const double q1 = hkw_quadratic_form(cap, y, vs).value;
    for (auto& v : vs) v *= 3.0;
    CHECK(hkw_quadratic_form(cap, y, vs).value ==
          doctest::Approx(9.0 * q1).epsilon(1e-12));
  }
  SUBCASE("nonnegative on 200 random samples inside |y| <= 1 < pi/2") {
    const NormalChart cap = to_normal_chart(model_metric(sine_warping(), 2));
    std::mt19937_64 rng(55);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> rad(0.05, 1.0);
    for (int i = 0; i < 200; ++i) {
      Eigen::Vector2d y(gauss(rng), gauss(rng));
      y *= rad(rng) / y.norm();
      std::vector<Eigen::VectorXd> vs;
      for (int a = 0; a < 2; ++a)
        vs.push_back(Eigen::Vector2d(gauss(rng), gauss(rng)).eval());
      CHECK(hkw_quadratic_form(cap, y, vs).value >= -1e-12);
    }
  }
}

TEST_CASE("sampled sectional curvature") {
  std::mt19937_64 rng(66);
  std::normal_distribution<double> gauss;
  SUBCASE("round sphere via the analytic chart") {
    const NormalChart cap = to_normal_chart(model_metric(sine_warping(), 3));
    for (int i = 0; i < 5; ++i) {
      Eigen::Vector3d x(gauss(rng), gauss(rng), gauss(rng));
      x *= (0.4 + 0.1 * i) / x.norm();
      Eigen::Vector3d X(gauss(rng), gauss(rng), gauss(rng));
      Eigen::Vector3d Y(gauss(rng), gauss(rng), gauss(rng));
      CHECK(sampled_sectional_curvature(cap, x, X, Y) ==
            doctest::Approx(1.0).epsilon(1e-5));
    }
  }
  SUBCASE("hyperbolic k = 2") {
    const NormalChart c = to_normal_chart(model_metric(hyperbolic_warping(2.0), 2));
    Eigen::Vector2d x(0.3, 0.4);
    CHECK(sampled_sectional_curvature(c, x, Eigen::Vector2d(1, 0.2),
                                      Eigen::Vector2d(-0.1, 1)) ==
          doctest::Approx(-2.0).epsilon(1e-5));
  }
}

TEST_CASE("classify_ball on a general polar metric") {
  PolarMetric disguised = model_metric(sine_warping(), 2);
  disguised.warping.reset();  // forces the sampled path
  const BallReport rep = classify_ball(disguised, 1.0, 8, 3);
  CHECK(rep.curvature_upper == doctest::Approx(1.1).epsilon(5e-2));
  CHECK(rep.regular);  // 1 * sqrt(1.1) < pi/2
  CHECK(rep.convex);
  REQUIRE(rep.certificate.has_value());
  CHECK(rep.certificate->pass);
}
