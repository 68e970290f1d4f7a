#include "hmap/sphere_chart.hpp"

#include <cmath>
#include <stdexcept>

namespace hmap {

AngularPoint angular_from_unit(const Eigen::VectorXd& y) {
  const double norm = y.norm();
  if (norm == 0.0) throw std::invalid_argument("angular_from_unit: zero vector");
  return AngularPoint{y / norm};
}

AngularPoint angular_chart_center(int n) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  y[n - 1] = 1.0;
  return AngularPoint{y};
}

AngularPoint random_angular_point(int n, std::mt19937_64& rng, double margin) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double min_last = std::sin(margin);
  for (;;) {
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y[i] = gauss(rng);
    const double norm = y.norm();
    if (norm < 1e-12) continue;
    y /= norm;
    if (std::abs(y[n - 1]) >= min_last) return AngularPoint{y};
  }
}

Eigen::MatrixXd round_sphere_metric(const Eigen::VectorXd& w) {
  const double r2 = w.squaredNorm();
  if (r2 >= 1.0) throw std::domain_error("round_sphere_metric: |w| must be < 1");
  const int m = static_cast<int>(w.size());
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(m, m);
  g += w * w.transpose() / (1.0 - r2);
  return g;
}

}  // namespace hmap
