#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "hmap/metric_gluing.hpp"
#include "hmap/polar_metric.hpp"

namespace hmap {

struct BallReport {
  double R = 0;
  double curvature_upper = 0;  // Lambda over B_R
  double worst_curvature_at = 0;
  bool regular = false;        // R sqrt(max(Lambda,0)) < pi/2, inside the domain
  bool convex = false;         // min sigma' > 0 (models) / certified Hess(t^2) > 0
  std::string cut_locus_note;  // condition (a): "satisfied" or "not evaluated"
  double min_sigma_prime = 0;
  double min_sigma_prime_at = 0;
  std::optional<ConvexityCertificate> certificate;
};

BallReport classify_ball(const WarpingFunction& sigma, double R);

// General polar metrics: Lambda from sampled sectional curvatures of the
// normal chart (129 radii, 10% safety margin), convexity from the sampled
// Hessian certificate.
BallReport classify_ball(const PolarMetric& m, double R, int grid_theta = 16,
                         uint64_t seed = 0);

struct QuadraticFormWitness {
  Eigen::VectorXd y;
  std::vector<Eigen::VectorXd> vectors;
  double value = 0;
};

// Q_y(v, v) = sum_a h_ij(y) v_a^i v_a^j - sum_k y^k Gamma^k_ij(y) sum_a v_a^i v_a^j.
QuadraticFormWitness hkw_quadratic_form(const NormalChart& chart,
                                        const Eigen::VectorXd& y,
                                        const std::vector<Eigen::VectorXd>& vs);

// Sectional curvature of the 2-plane span(X, Y) at x, from finite
// differences of the chart Christoffel symbols.
double sampled_sectional_curvature(const NormalChart& chart,
                                   const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& X,
                                   const Eigen::VectorXd& Y);

}  // namespace hmap
