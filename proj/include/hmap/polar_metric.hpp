#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "hmap/sphere_chart.hpp"
#include "hmap/warping.hpp"

namespace hmap {

// Target metric in polar form h = dt (x) dt + sigma_il(t, theta) dthéta^i dtheta^l
// on the ball {t < domain_radius} of R^n. The tangential block is reported in
// the graph chart of the angular point's hemisphere.
struct PolarMetric {
  int dimension = 2;
  double domain_radius = std::numeric_limits<double>::infinity();
  std::function<Eigen::MatrixXd(double, const AngularPoint&)> tangential;
  std::function<Eigen::MatrixXd(double, const AngularPoint&)> tangential_dt;
  // Present when the metric is a warped model sigma^2(t) g_{S^{n-1}};
  // enables closed-form charts and curvatures downstream.
  std::optional<WarpingFunction> warping;
};

// The model metric dt^2 + sigma^2(t) g_{S^{n-1}}.
PolarMetric model_metric(const WarpingFunction& sigma, int dimension);

// Full n x n metric diag(1, sigma_il) in the polar frame (d/dt, d/dw_i).
Eigen::MatrixXd eval_metric(const PolarMetric& m, double t,
                            const AngularPoint& theta);

// Hess t (X, X) = 1/2 sum_{i,l} X^i X^l d_t sigma_il; X = (X^0, X^2..X^n)
// in the polar frame. The radial component never contributes.
double hessian_radial(const PolarMetric& m, double t, const AngularPoint& theta,
                      const Eigen::VectorXd& X);

// Global Cartesian normal chart centered at the pole: h_ij(0) = identity and
// radial lines are unit-speed geodesics.
struct NormalChart {
  int dimension = 2;
  double domain_radius = std::numeric_limits<double>::infinity();
  bool flat = false;  // identity metric everywhere
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> metric_at;
  // deriv[k](i,j) = d h_ij / d x^k
  std::function<std::vector<Eigen::MatrixXd>(const Eigen::VectorXd&)> metric_deriv_at;
  // christoffel[k](i,j) = Gamma^k_ij
  std::function<std::vector<Eigen::MatrixXd>(const Eigen::VectorXd&)> christoffel_at;
  // Geodesic distance d_N in chart coordinates; set where a computation is
  // available (flat charts, rotationally symmetric targets).
  std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)> distance;
};

NormalChart euclidean_chart(int n);

// Chart of a rotationally symmetric metric dt^2 + F(t) g_{S^{n-1}} with
// F(t) ~ t^2 at the pole: h_ij(x) = y_i y_j + (F(t)/t^2)(delta_ij - y_i y_j).
NormalChart radial_normal_chart(std::function<double(double)> F,
                                std::function<double(double)> dF, int n,
                                double domain_radius,
                                std::function<double(double)> sigma_eff = {},
                                std::function<double(double)> dsigma_eff = {});

// Polar -> Cartesian change of variables. Model-backed metrics get the
// closed-form radial chart (plus a geodesic distance oracle); general
// tangential fields fall back to finite-difference metric derivatives.
NormalChart to_normal_chart(const PolarMetric& m);

// Christoffel symbols 1/2 h^{kl}(d_i h_jl + d_j h_il - d_l h_ij) from a
// metric and its coordinate derivatives.
std::vector<Eigen::MatrixXd> christoffel_from_metric(
    const Eigen::MatrixXd& h, const std::vector<Eigen::MatrixXd>& dh);

}  // namespace hmap
