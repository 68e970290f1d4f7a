#pragma once

#include <Eigen/Dense>
#include <random>

namespace hmap {

// Point on S^{n-1} with graph-chart coordinates over one of the two
// hemispheres {+-y_n > 0}: y = (w, s*sqrt(1-|w|^2)) with |w| < 1.
// Angular sampling stays clear of the equator (the shared chart boundary)
// by a small margin.
struct AngularPoint {
  Eigen::VectorXd unit;  // y, |y| = 1, in R^n

  int dimension() const { return static_cast<int>(unit.size()); }
  int hemisphere() const { return unit[unit.size() - 1] >= 0 ? 1 : -1; }
  Eigen::VectorXd chart_coords() const { return unit.head(unit.size() - 1); }
};

AngularPoint angular_from_unit(const Eigen::VectorXd& y);

// Chart center of the + hemisphere (w = 0); useful where the round metric
// components should reduce to the identity.
AngularPoint angular_chart_center(int n);

// Uniform on the sphere, rejecting points within `margin` radians of the
// equator. Deterministic under a fixed generator state.
AngularPoint random_angular_point(int n, std::mt19937_64& rng,
                                  double margin = 1e-3);

// Components of the round metric g_{S^{n-1}} in the graph chart:
// G_il(w) = delta_il + w_i w_l / (1 - |w|^2). Size (n-1)x(n-1).
Eigen::MatrixXd round_sphere_metric(const Eigen::VectorXd& w);

}  // namespace hmap
