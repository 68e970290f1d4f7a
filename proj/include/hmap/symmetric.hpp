#pragma once

#include <vector>

#include "hmap/warping.hpp"

namespace hmap {

// Reduced energy of the equivariant map u(x) = (rho(|x|), x/|x|) from the
// unit n-ball into the model with warping sigma:
//   (1/p) int_0^1 (rho'^2 + (n-1) sigma^2(rho)/r^2)^{p/2} r^{n-1} dr.
// For p = 2 the gradient term uses exact r^{n-1} segment weights and the
// angular term the trapezoid rule; profiles live on the uniform grid
// r_k = k/K. Requires n >= 3.
double symmetric_energy(const std::vector<double>& rho,
                        const WarpingFunction& sigma, int n, double p = 2.0);

// Analytic gradient of the p = 2 discretization in the profile values.
std::vector<double> symmetric_energy_gradient(const std::vector<double>& rho,
                                              const WarpingFunction& sigma,
                                              int n);

// First radius with sigma'(a0) = 0, by scan and bisection.
double first_critical_radius(const WarpingFunction& sigma);

struct EquatorReport {
  int n = 0;
  int K = 0;
  double a0 = 0;
  double tachikawa = 0;       // -sigma(a0) sigma''(a0)
  double threshold = 0;       // (n-2)^2 / (4(n-1))
  bool below_threshold = false;
  double equator_energy = 0;  // energy of the constant profile rho = a0
  double equator_grad_norm = 0;
  double minimized_energy = 0;
  double initial_energy = 0;
  double profile_at_zero = 0;
  bool stays_away_from_equator = false;  // min |rho - a0| near r = 0 is large
  int iterations = 0;
  double grad_norm = 0;
  std::vector<double> profile;
};

// Minimizes the reduced functional over profiles with rho(1) = a0 starting
// from rho(r) = a0 r, and reports the Tachikawa quantities.
EquatorReport equator_experiment(const WarpingFunction& sigma, int n, int K,
                                 int max_iterations = 20000,
                                 double grad_tolerance = 1e-10);

}  // namespace hmap
