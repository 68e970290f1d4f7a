#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>
#include <sstream>

#include "hmap/errors.hpp"
#include "hmap/metric_gluing.hpp"
#include "hmap/mollifier.hpp"

using namespace hmap;

namespace {
const double kPi = std::acos(-1.0);

// Independent mollified-step oracle: Simpson's rule on 200k panels.
double step_oracle(double x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  auto bump = [](double s) {
    return s <= 0 || s >= 1 ? 0.0 : std::exp(-1.0 / (s * (1 - s)));
  };
  auto simpson = [&](double a, double b) {
    const int n = 200000;
    double acc = bump(a) + bump(b);
    for (int i = 1; i < n; ++i)
      acc += bump(a + (b - a) * i / n) * (i % 2 ? 4.0 : 2.0);
    return acc * (b - a) / (3.0 * n);
  };
  return simpson(0, x) / simpson(0, 1);
}
}  // namespace

TEST_CASE("transition pair") {
  const TransitionPair tp = make_transition(1.0, 1.5);
  CHECK(tp.phi_sigma(1.0) == 1.0);
  CHECK(tp.phi_sigma(0.2) == 1.0);
  CHECK(tp.phi_sigma(1.5) == 0.0);
  CHECK(tp.phi_sigma(4.0) == 0.0);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> dist(0.1, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double t = dist(rng);
    CHECK(std::abs(tp.phi_sigma(t) + tp.phi_h(t) - 1.0) < 1e-14);
    CHECK(tp.dphi_sigma(t) <= 0.0);
  }

  // value of the documented closed form against an independent quadrature
  CHECK(tp.phi_sigma(1.25) == doctest::Approx(0.5).epsilon(1e-12));
  for (double x : {0.2, 0.35, 0.7, 0.9}) {
    CHECK(tp.phi_h(1.0 + 0.5 * x) ==
          doctest::Approx(step_oracle(x)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(make_transition(2.0, 1.0), std::invalid_argument);
}

TEST_CASE("estimate_c2") {
  SUBCASE("hyperbolic metric against itself") {
    const PolarMetric m = model_metric(hyperbolic_warping(1.0), 2);
    CHECK(estimate_c2(m, 1.0, 2.0, 16, 8, 1.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("euclidean annulus [1,2]") {
    const PolarMetric m = model_metric(linear_warping(), 2);
    CHECK(estimate_c2(m, 1.0, 2.0, 64, 8, 1.0) ==
          doctest::Approx(1.3810978455418155).epsilon(1e-12));
  }
  SUBCASE("sphere annulus [1,1.4] with a brute-force oracle") {
    const PolarMetric m = model_metric(sine_warping(), 3);
    const double c2 = estimate_c2(m, 1.0, 1.4, 64, 8, 1.0);
    CHECK(c2 == doctest::Approx(1.95050090837927).epsilon(1e-10));
    double oracle = 1e300;
    for (int i = 0; i <= 4000; ++i) {
      const double t = 1.0 + 0.4 * i / 4000.0;
      oracle = std::min(oracle, std::pow(std::sinh(t) / std::sin(t), 2));
    }
    CHECK(c2 == doctest::Approx(oracle).epsilon(1e-6));
  }
  SUBCASE("safety factor divides") {
    const PolarMetric m = model_metric(linear_warping(), 2);
    CHECK(estimate_c2(m, 1.0, 2.0, 64, 8, 1.1) ==
          doctest::Approx(1.3810978455418155 / 1.1).epsilon(1e-12));
  }
}

TEST_CASE("choose_k") {
  CHECK(choose_k(1.0, 0.7) == 1.0);
  CHECK(choose_k(2.0, 0.7) == 1.0);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> c2d(0.05, 5.0), r1d(0.2, 3.0);
  for (int i = 0; i < 20; ++i) {
    const double c2 = c2d(rng), R1 = r1d(rng);
    const double k = choose_k(c2, R1);
    CHECK(k_inequality(k, c2, R1));
    if (k > 1) CHECK_FALSE(k_inequality(k / 2, c2, R1));
  }
}

TEST_CASE("sigma_tilde splice") {
  SUBCASE("seams and monotonicity certificate") {
    const auto [tilde, cert] = build_sigma_tilde(1.0, 2.0, 3.0, 12.0);
    CHECK(cert.pass);
    CHECK(cert.min_deriv > 0.0);
    CHECK(cert.widenings == 0);
    CHECK(tilde.value(3.0) == doctest::Approx(std::sinh(3.0)).epsilon(1e-15));
    CHECK(tilde.value(13.0) == 13.0);
    CHECK(tilde.value(2.5) == doctest::Approx(std::sinh(2.5)).epsilon(1e-15));
    // seam values and first derivatives from the two sides
    CHECK(tilde.value(12.0) == doctest::Approx(12.0).epsilon(1e-12));
    CHECK(tilde.deriv(3.0) == doctest::Approx(std::cosh(3.0)).epsilon(1e-14));
    CHECK(tilde.deriv(12.0 - 1e-13) == doctest::Approx(1.0).epsilon(1e-10));
    // dense monotonicity of the values themselves
    double prev = tilde.value(3.0);
    for (int i = 1; i <= 3000; ++i) {
      const double t = 3.0 + 9.0 * i / 3000.0;
      const double v = tilde.value(t);
      CHECK(v >= prev - 1e-13);
      prev = v;
    }
  }
  SUBCASE("k = 4") {
    const auto [tilde, cert] = build_sigma_tilde(4.0, 1.0, 1.5, 6.0);
    CHECK(cert.pass);
    CHECK(tilde.value(1.5) ==
          doctest::Approx(std::sinh(2.0 * 1.5) / 2.0).epsilon(1e-15));
    CHECK(tilde.value(7.0) == 7.0);
  }
  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(build_sigma_tilde(1.0, 2.0, 3.0, 2.5), std::invalid_argument);
    // R4 below sinh(R3) is outside the admissible range
    CHECK_THROWS_AS(build_sigma_tilde(1.0, 2.0, 3.0, 9.0), std::invalid_argument);
  }
}

TEST_CASE("hat metric blend") {
  const PolarMetric sphere = model_metric(sine_warping(), 2);
  const GluedMetric hat = build_hat_metric(sphere, 1.0, 1.2);
  CHECK(hat.params.k == 1.0);  // c2 ~ 1.77 > 1
  CHECK(hat.params.c2 > 1.0);

  std::mt19937_64 rng(21);
  const AngularPoint th = random_angular_point(2, rng);
  SUBCASE("item (i): untouched below R1") {
    const double t = 0.85;
    CHECK((hat.tangential(t, th) - sphere.tangential(t, th)).norm() == 0.0);
  }
  SUBCASE("item (ii): hyperbolic past R2") {
    const double t = 1.31;
    const Eigen::MatrixXd expected =
        std::pow(std::sinh(t), 2) * round_sphere_metric(th.chart_coords());
    CHECK((hat.tangential(t, th) - expected).norm() < 1e-14);
  }
  SUBCASE("item (iii): certified convexity on (0, 2 R2]") {
    const auto cert = certify_convexity(hat.as_polar(), 0.0, 2.4, 64, 16, 1);
    CHECK(cert.pass);
    CHECK(cert.min_value > 0);
  }
  SUBCASE("refusal when the original ball is not convex-supporting") {
    CHECK_THROWS_AS(build_hat_metric(sphere, 1.6, 1.92), CertifiedFailure);
  }
}

TEST_CASE("hess-mix decomposition and dominance on the blend annulus") {
  const PolarMetric sphere = model_metric(sine_warping(), 3);
  const GluedMetric hat = build_hat_metric(sphere, 1.0, 1.2);
  std::mt19937_64 rng(31);
  std::normal_distribution<double> gauss;
  for (int i = 0; i <= 40; ++i) {
    const double t = 1.0 + 0.2 * i / 40.0;
    const AngularPoint th = random_angular_point(3, rng);
    Eigen::VectorXd X(2);
    X << gauss(rng), gauss(rng);
    const HessMixTerms terms = hess_mix_terms(hat, t, th, X);
    CHECK(terms.original_term >= -1e-12);
    CHECK(terms.hyperbolic_term >= -1e-12);
    CHECK(terms.comparison_term >= -1e-12);

    // dominance: X h^(k) X >= X sigma X
    const Eigen::MatrixXd G = round_sphere_metric(th.chart_coords());
    const double hk = std::pow(std::sinh(std::sqrt(hat.params.k) * t), 2) /
                      hat.params.k;
    CHECK(X.dot((hk * G - sphere.tangential(t, th)) * X) >= -1e-12);
  }
}

TEST_CASE("full euclidean end for the sphere cap") {
  const PolarMetric sphere = model_metric(sine_warping(), 2);
  const GluedMetric g = build_euclidean_end(sphere, 1.0);
  REQUIRE(g.certificate.has_value());
  CHECK(g.certificate->pass);
  CHECK(g.params.R2 == doctest::Approx(1.2));
  CHECK(g.params.R3 == doctest::Approx(1.8));
  CHECK(g.params.R4 > std::sinh(1.8));

  std::mt19937_64 rng(41);
  const AngularPoint th = random_angular_point(2, rng);
  SUBCASE("matches the input below R1") {
    CHECK((g.tangential(0.5, th) - sphere.tangential(0.5, th)).norm() == 0.0);
  }
  SUBCASE("exactly euclidean past R4") {
    const double t = 2 * g.params.R4;
    const Eigen::MatrixXd expected =
        t * t * round_sphere_metric(th.chart_coords());
    CHECK((g.tangential(t, th) - expected).norm() == 0.0);
  }
  SUBCASE("radial factor seams are C^1 to 1e-10") {
    const GluingParams& p = g.params;
    auto seam = [&](double R) {
      const double below = g.radial_factor(R - 1e-9);
      const double above = g.radial_factor(R + 1e-9);
      CHECK(std::abs(above - below) <
            1e-10 + 2e-9 * std::abs(g.radial_factor_dt(R)));
      const double dbelow = g.radial_factor_dt(R - 1e-9);
      const double dabove = g.radial_factor_dt(R + 1e-9);
      CHECK(std::abs(dabove - dbelow) <
            1e-8 * std::max(1.0, std::abs(dabove)));
    };
    seam(p.R1);
    seam(p.R2);
    seam(p.R3);
    seam(p.R4);
  }
  SUBCASE("effective warping is admissible and euclidean at infinity") {
    const WarpingFunction eff = g.effective_warping();
    CHECK(verify_admissible(eff).pass);
    CHECK(eff.eval(2 * g.params.R4 + 1) ==
          doctest::Approx(2 * g.params.R4 + 1).epsilon(1e-14));
  }
}

TEST_CASE("certificates") {
  SUBCASE("euclidean is exactly 2") {
    const PolarMetric m = model_metric(linear_warping(), 2);
    const auto cert = certify_convexity(m, 0.0, 3.0, 32, 8, 7);
    CHECK(cert.pass);
    CHECK(cert.min_value == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("sphere fails past the equator with a witness") {
    const PolarMetric m = model_metric(sine_warping(), 2);
    const auto cert = certify_convexity(m, 0.0, 1.8, 64, 8, 7);
    CHECK_FALSE(cert.pass);
    CHECK(cert.min_value < 0);
    CHECK(cert.argmin.t > kPi / 2 - 0.05);
    CHECK_FALSE(cert.failures.empty());
  }
  SUBCASE("determinism under a fixed seed") {
    const PolarMetric m = model_metric(sine_warping(), 3);
    const auto a = certify_convexity(m, 0.0, 1.3, 16, 16, 123);
    const auto b = certify_convexity(m, 0.0, 1.3, 16, 16, 123);
    CHECK(a.min_value == b.min_value);
    CHECK(a.argmin.t == b.argmin.t);
    CHECK((a.argmin.direction - b.argmin.direction).norm() == 0.0);
  }
}

TEST_CASE("parameter file round trip is bit-exact") {
  const GluedMetric g =
      build_euclidean_end(model_metric(sine_warping(), 2), 1.0);
  std::stringstream file;
  save_glued_metric(g, file);
  const GluedMetric loaded = load_glued_metric(file);

  CHECK(loaded.params.R4 == g.params.R4);
  CHECK(loaded.params.k == g.params.k);
  CHECK(loaded.params.c2 == g.params.c2);
  for (int i = 1; i <= 50; ++i) {
    const double t = 2.0 * g.params.R4 * i / 50.0;
    CHECK(loaded.radial_factor(t) == g.radial_factor(t));
    CHECK(loaded.radial_factor_dt(t) == g.radial_factor_dt(t));
  }
  // and the serialized text itself round-trips
  std::stringstream again;
  save_glued_metric(loaded, again);
  std::stringstream first;
  save_glued_metric(g, first);
  CHECK(again.str() == first.str());
}
