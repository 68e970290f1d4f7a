#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "hmap/polar_metric.hpp"

namespace hmap {

using PlanarMap = std::function<Eigen::VectorXd(const Eigen::Vector2d&)>;

// Circle-averaged squared-distance quotient
//   e_eps(u)(x) = m * avg_{y in dB_eps(x)} d^2(u(x), u(y)) / eps^2,  m = 2.
// The chart must carry a target distance oracle. The domain metric is flat;
// x must be at least eps away from the boundary of the unit disk.
double ks_density(const PlanarMap& u, const NormalChart& chart,
                  const Eigen::Vector2d& x, double eps, int circle_points = 64);

struct EpsilonEnergyEstimate {
  double epsilon = 0;
  double value = 0;      // integral of e_eps over the offset disk
  double reference = 0;  // int ||du||^2_HS over the same region (FD differential)
  int quadrature_nodes = 0;
  std::vector<double> densities;  // per quadrature node, reduction order
};

// Integral of ks_density over the disk of radius 1 - margin (Gauss-Legendre
// radially, uniform in angle), with the Dirichlet-density reference integral
// on the same nodes. Requires margin >= eps.
EpsilonEnergyEstimate ks_energy(const PlanarMap& u, const NormalChart& chart,
                                double eps, double margin,
                                int circle_points = 64, int radial_nodes = 24,
                                int angular_nodes = 48);

}  // namespace hmap
