#include "hmap/symmetric.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace hmap {

namespace {

void check_profile(const std::vector<double>& rho, int n) {
  if (n < 3)
    throw std::domain_error("symmetric_energy: n >= 3 required for the angular term");
  if (rho.size() < 2)
    throw std::invalid_argument("symmetric_energy: profile needs at least 2 values");
}

// r^{n-3} with the r = 0 limit (finite only because n >= 3).
double radial_power(double r, int n) {
  if (r == 0.0) return n == 3 ? 1.0 : 0.0;
  return std::pow(r, n - 3);
}

}  // namespace

double symmetric_energy(const std::vector<double>& rho,
                        const WarpingFunction& sigma, int n, double p) {
  check_profile(rho, n);
  const int K = static_cast<int>(rho.size()) - 1;
  const double dr = 1.0 / K;

  if (p == 2.0) {
    double grad_term = 0.0, angular_term = 0.0;
    for (int k = 0; k < K; ++k) {
      const double r0 = static_cast<double>(k) / K;
      const double r1 = static_cast<double>(k + 1) / K;
      const double slope = (rho[k + 1] - rho[k]) / dr;
      // exact int r^{n-1} over the segment
      grad_term += slope * slope * (std::pow(r1, n) - std::pow(r0, n)) / n;
    }
    for (int k = 0; k <= K; ++k) {
      const double r = static_cast<double>(k) / K;
      const double w = (k == 0 || k == K) ? dr / 2 : dr;
      const double s = sigma.eval(rho[k]);
      angular_term += (n - 1) * s * s * radial_power(r, n) * w;
    }
    return 0.5 * (grad_term + angular_term);
  }

  if (!(p > 2)) throw std::invalid_argument("symmetric_energy: p must be >= 2");
  double total = 0.0;
  for (int k = 0; k < K; ++k) {
    const double rm = (k + 0.5) / K;
    const double slope = (rho[k + 1] - rho[k]) / dr;
    const double s = sigma.eval(0.5 * (rho[k] + rho[k + 1]));
    const double density = slope * slope + (n - 1) * s * s / (rm * rm);
    total += std::pow(density, p / 2) * std::pow(rm, n - 1) * dr;
  }
  return total / p;
}

std::vector<double> symmetric_energy_gradient(const std::vector<double>& rho,
                                              const WarpingFunction& sigma,
                                              int n) {
  check_profile(rho, n);
  const int K = static_cast<int>(rho.size()) - 1;
  const double dr = 1.0 / K;
  std::vector<double> grad(rho.size(), 0.0);
  for (int k = 0; k < K; ++k) {
    const double r0 = static_cast<double>(k) / K;
    const double r1 = static_cast<double>(k + 1) / K;
    const double slope = (rho[k + 1] - rho[k]) / dr;
    const double w = (std::pow(r1, n) - std::pow(r0, n)) / n;
    grad[k] -= slope * w / dr;
    grad[k + 1] += slope * w / dr;
  }
  for (int k = 0; k <= K; ++k) {
    const double r = static_cast<double>(k) / K;
    const double w = (k == 0 || k == K) ? dr / 2 : dr;
    grad[k] += (n - 1) * sigma.eval(rho[k]) * sigma.deriv1(rho[k]) *
               radial_power(r, n) * w;
  }
  return grad;
}

double first_critical_radius(const WarpingFunction& sigma) {
  const double hi =
      std::isfinite(sigma.domain_radius) ? sigma.domain_radius * (1 - 1e-9) : 10.0;
  const int samples = 4096;
  double prev_t = hi / samples;
  double prev = sigma.deriv1(prev_t);
  for (int i = 2; i <= samples; ++i) {
    const double t = hi * i / samples;
    const double d = sigma.deriv1(t);
    if (prev > 0 && d <= 0) {
      double lo = prev_t, up = t;
      for (int b = 0; b < 200; ++b) {
        const double mid = 0.5 * (lo + up);
        (sigma.deriv1(mid) > 0 ? lo : up) = mid;
      }
      return 0.5 * (lo + up);
    }
    prev_t = t;
    prev = d;
  }
  throw std::domain_error("first_critical_radius: sigma' has no zero on the domain");
}

EquatorReport equator_experiment(const WarpingFunction& sigma, int n, int K,
                                 int max_iterations, double grad_tolerance) {
  EquatorReport rep;
  rep.n = n;
  rep.K = K;
  rep.a0 = first_critical_radius(sigma);
  rep.tachikawa = -sigma.eval(rep.a0) * sigma.deriv2(rep.a0);
  rep.threshold = (n - 2.0) * (n - 2.0) / (4.0 * (n - 1.0));
  rep.below_threshold = rep.tachikawa > 0 && rep.tachikawa < rep.threshold;

  const std::vector<double> equator(K + 1, rep.a0);
  rep.equator_energy = symmetric_energy(equator, sigma, n);
  {
    const auto g = symmetric_energy_gradient(equator, sigma, n);
    double s2 = 0;
    for (int k = 0; k < K; ++k) s2 += g[k] * g[k];  // rho(1) is fixed
    rep.equator_grad_norm = std::sqrt(s2);
  }

  std::vector<double> rho(K + 1);
  for (int k = 0; k <= K; ++k) rho[k] = rep.a0 * k / K;
  rep.initial_energy = symmetric_energy(rho, sigma, n);

  auto masked_grad = [&](const std::vector<double>& r) {
    auto g = symmetric_energy_gradient(r, sigma, n);
    g[K] = 0.0;  // fixed boundary value
    return g;
  };
  auto norm_of = [](const std::vector<double>& g) {
    double s2 = 0;
    for (double v : g) s2 += v * v;
    return std::sqrt(s2);
  };

  double energy = rep.initial_energy;
  std::vector<double> grad = masked_grad(rho);
  double gnorm = norm_of(grad);
  std::vector<double> prev_rho, prev_grad;
  double alpha = 1.0 / std::max(1.0, gnorm);
  int iter = 0;
  while (iter < max_iterations && gnorm > grad_tolerance) {
    if (iter > 0) {
      double sy = 0, ss = 0;
      for (size_t i = 0; i < rho.size(); ++i) {
        const double s = rho[i] - prev_rho[i];
        sy += s * (grad[i] - prev_grad[i]);
        ss += s * s;
      }
      if (sy > 1e-300) alpha = ss / sy;
    }
    alpha = std::min(std::max(alpha, 1e-12), 1e8);
    bool accepted = false;
    std::vector<double> trial(rho.size());
    double trial_energy = 0;
    while (alpha >= 1e-16) {
      for (size_t i = 0; i < rho.size(); ++i) trial[i] = rho[i] - alpha * grad[i];
      trial_energy = symmetric_energy(trial, sigma, n);
      if (trial_energy <= energy - 1e-4 * alpha * gnorm * gnorm) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    prev_rho = std::move(rho);
    prev_grad = std::move(grad);
    rho = std::move(trial);
    energy = trial_energy;
    grad = masked_grad(rho);
    gnorm = norm_of(grad);
    ++iter;
  }

  rep.minimized_energy = energy;
  rep.iterations = iter;
  rep.grad_norm = gnorm;
  rep.profile_at_zero = rho[0];
  double min_gap = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= K; ++k) {
    if (static_cast<double>(k) / K > 0.125) break;
    min_gap = std::min(min_gap, std::abs(rho[k] - rep.a0));
  }
  rep.stays_away_from_equator = min_gap > 0.1 * std::abs(rep.a0);
  rep.profile = rho;
  return rep;
}

}  // namespace hmap
