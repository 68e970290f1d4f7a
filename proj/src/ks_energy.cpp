#include "hmap/ks_energy.hpp"

#include <cmath>
#include <stdexcept>

#include "hmap/numeric.hpp"

namespace hmap {

double ks_density(const PlanarMap& u, const NormalChart& chart,
                  const Eigen::Vector2d& x, double eps, int circle_points) {
  if (!(eps > 0)) throw std::invalid_argument("ks_density: eps must be > 0");
  if (!(x.norm() + eps < 1.0))
    throw std::domain_error("ks_density: sampling circle leaves the unit disk");
  if (!chart.distance)
    throw std::invalid_argument("ks_density: chart has no distance oracle");

  const Eigen::VectorXd ux = u(x);
  const double two_pi = 2.0 * std::acos(-1.0);
  double acc = 0.0;
  for (int q = 0; q < circle_points; ++q) {
    const double tau = two_pi * q / circle_points;
    const Eigen::Vector2d y = x + eps * Eigen::Vector2d(std::cos(tau), std::sin(tau));
    const double d = chart.distance(ux, u(y));
    acc += d * d;
  }
  return 2.0 * acc / (circle_points * eps * eps);
}

EpsilonEnergyEstimate ks_energy(const PlanarMap& u, const NormalChart& chart,
                                double eps, double margin, int circle_points,
                                int radial_nodes, int angular_nodes) {
  if (!(margin >= eps))
    throw std::invalid_argument("ks_energy: margin must be >= eps");
  if (!(margin < 1.0)) throw std::invalid_argument("ks_energy: margin must be < 1");

  EpsilonEnergyEstimate est;
  est.epsilon = eps;
  est.densities.reserve(radial_nodes * angular_nodes);

  const double rmax = 1.0 - margin;
  const double two_pi = 2.0 * std::acos(-1.0);
  const double fd = 1e-6;
  double value = 0.0, reference = 0.0;
  // radial Gauss-Legendre panels x uniform angles
  const int panels = (radial_nodes + 15) / 16;
  for (int p = 0; p < panels; ++p) {
    const double lo = rmax * p / panels;
    const double half = rmax / (2.0 * panels);
    const double mid = lo + half;
    for (int q = 0; q < 16; ++q) {
      const double r = mid + half * detail::kGaussNodes[q];
      const double wr = half * detail::kGaussWeights[q];
      for (int aidx = 0; aidx < angular_nodes; ++aidx) {
        const double tau = two_pi * aidx / angular_nodes;
        const Eigen::Vector2d x(r * std::cos(tau), r * std::sin(tau));
        const double wq = wr * (two_pi / angular_nodes) * r;

        const double e = ks_density(u, chart, x, eps, circle_points);
        est.densities.push_back(e);
        value += wq * e;

        // ||du||^2_HS from central differences of u
        const Eigen::VectorXd d1 =
            (u(x + Eigen::Vector2d(fd, 0)) - u(x - Eigen::Vector2d(fd, 0))) / (2 * fd);
        const Eigen::VectorXd d2 =
            (u(x + Eigen::Vector2d(0, fd)) - u(x - Eigen::Vector2d(0, fd))) / (2 * fd);
        if (chart.flat) {
          reference += wq * (d1.squaredNorm() + d2.squaredNorm());
        } else {
          const Eigen::MatrixXd h = chart.metric_at(u(x));
          reference += wq * (d1.dot(h * d1) + d2.dot(h * d2));
        }
      }
    }
  }
  est.value = value;
  est.reference = reference;
  est.quadrature_nodes = static_cast<int>(est.densities.size());
  return est;
}

}  // namespace hmap
