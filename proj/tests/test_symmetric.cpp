#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "hmap/symmetric.hpp"

using namespace hmap;

namespace {
const double kPi = std::acos(-1.0);
}

TEST_CASE("symmetric energy closed cases") {
  SUBCASE("constant profile") {
    const std::vector<double> rho(65, 0.7);
    const double expected = std::pow(std::sin(0.7), 2);
    CHECK(symmetric_energy(rho, sine_warping(), 3) ==
          doctest::Approx(expected).epsilon(1e-14));
  }
  SUBCASE("identity profile into the euclidean model") {
    const int K = 4096;
    std::vector<double> rho(K + 1);
    for (int k = 0; k <= K; ++k) rho[k] = static_cast<double>(k) / K;
    CHECK(symmetric_energy(rho, linear_warping(), 3) ==
          doctest::Approx(0.5).epsilon(1e-6));
  }
  SUBCASE("n < 3 is rejected") {
    const std::vector<double> rho(9, 0.3);
    CHECK_THROWS_AS(symmetric_energy(rho, sine_warping(), 2),
                    std::domain_error);
  }
}

TEST_CASE("reduced gradient is exact") {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> val(0.2, 1.2);
  const int K = 16;
  std::vector<double> rho(K + 1);
  for (double& r : rho) r = val(rng);
  const auto grad = symmetric_energy_gradient(rho, sine_warping(), 3);
  for (int k = 0; k <= K; ++k) {
    const double h = 1e-6;
    auto up = rho, dn = rho;
    up[k] += h;
    dn[k] -= h;
    const double fd = (symmetric_energy(up, sine_warping(), 3) -
                       symmetric_energy(dn, sine_warping(), 3)) /
                      (2 * h);
    CHECK(grad[k] == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("equator profile is a critical point") {
  const double a0 = first_critical_radius(sine_warping());
  CHECK(a0 == doctest::Approx(kPi / 2).epsilon(1e-12));
  const std::vector<double> equator(257, a0);
  const auto grad = symmetric_energy_gradient(equator, sine_warping(), 3);
  double norm = 0;
  for (int k = 0; k < 256; ++k) norm += grad[k] * grad[k];
  CHECK(std::sqrt(norm) < 1e-10);
}

TEST_CASE("equator experiment: sphere is above the threshold") {
  const EquatorReport rep = equator_experiment(sine_warping(), 3, 256);
  CHECK(rep.threshold == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(rep.tachikawa == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(rep.below_threshold);
  CHECK(rep.equator_grad_norm < 1e-10);
  // unstable equator: the minimizer does strictly better
  CHECK(rep.minimized_energy < rep.equator_energy - 1e-3);
  CHECK(rep.minimized_energy <= rep.initial_energy);
}

TEST_CASE("equator experiment: mild critical point sits below the threshold") {
  // sigma = t - c t^m with m c a0^{m-1} = 1 puts -sigma(a0) sigma''(a0)
  // = (m-1)^2/m at a0; m = 1.25 gives exactly 0.05.
  const double m = 1.25, c = 1.0 / m;
  const WarpingFunction mild = custom_warping(
      [m, c](double t) { return t - c * std::pow(t, m); }, 1.05, "mild");
  const EquatorReport rep = equator_experiment(mild, 3, 4096);
  CHECK(rep.a0 == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(rep.tachikawa == doctest::Approx(0.05).epsilon(2e-3));
  CHECK(rep.below_threshold);
  // in the minimizing regime the descent cannot do better than the equator
  // profile (up to discretization error)
  CHECK(rep.minimized_energy >= rep.equator_energy - 1e-4);
  CHECK(rep.minimized_energy <= rep.initial_energy);
}
