#include "hmap/classifier.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "hmap/numeric.hpp"

namespace hmap {

BallReport classify_ball(const WarpingFunction& sigma, double R) {
  if (!(R > 0)) throw std::invalid_argument("classify_ball: R must be > 0");
  if (!(R <= sigma.domain_radius))
    throw std::domain_error("classify_ball: R exceeds the metric domain");

  BallReport rep;
  rep.R = R;
  rep.curvature_upper = -std::numeric_limits<double>::infinity();
  rep.min_sigma_prime = std::numeric_limits<double>::infinity();
  const int samples = 1001;
  for (int i = 1; i <= samples; ++i) {
    const double t = R * i / samples * (i == samples ? 1 - 1e-12 : 1);
    const SectionalCurvatures sect = sectional_curvatures(sigma, t);
    const double worst = std::max(sect.radial, sect.tangential);
    if (worst > rep.curvature_upper) {
      rep.curvature_upper = worst;
      rep.worst_curvature_at = t;
    }
    const double d1 = sigma.deriv1(t);
    if (d1 < rep.min_sigma_prime) {
      rep.min_sigma_prime = d1;
      rep.min_sigma_prime_at = t;
    }
  }
  rep.regular =
      R * std::sqrt(std::max(rep.curvature_upper, 0.0)) < std::acos(-1.0) / 2 &&
      R < sigma.domain_radius;
  rep.convex = rep.min_sigma_prime > 0;
  // Condition (a): a model pole sees no cut locus while sigma > 0, which the
  // admissibility of the preset guarantees on an infinite domain.
  rep.cut_locus_note =
      std::isfinite(sigma.domain_radius) ? "not evaluated" : "satisfied";
  return rep;
}

double sampled_sectional_curvature(const NormalChart& chart,
                                   const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& X,
                                   const Eigen::VectorXd& Y) {
  const int n = chart.dimension;
  const double h = 1e-4 * std::max(1.0, x.norm());
  // dGamma[i][k](j,l) = d_i Gamma^k_jl
  std::vector<std::vector<Eigen::MatrixXd>> dgamma(n);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[i] = h;
    const auto gp = chart.christoffel_at(x + e);
    const auto gm = chart.christoffel_at(x - e);
    dgamma[i].resize(n);
    for (int k = 0; k < n; ++k) dgamma[i][k] = (gp[k] - gm[k]) / (2 * h);
  }
  const auto gamma = chart.christoffel_at(x);
  const Eigen::MatrixXd hm = chart.metric_at(x);

  // R(X,Y)Y with R^k_{lij} = d_i Gamma^k_jl - d_j Gamma^k_il
  //                         + Gamma^k_im Gamma^m_jl - Gamma^k_jm Gamma^m_il.
  Eigen::VectorXd RXYY = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < n; ++k) {
    double acc = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          double rk = dgamma[i][k](j, l) - dgamma[j][k](i, l);
          for (int m = 0; m < n; ++m)
            rk += gamma[k](i, m) * gamma[m](j, l) -
                  gamma[k](j, m) * gamma[m](i, l);
          acc += rk * X[i] * Y[j] * Y[l];
        }
    RXYY[k] = acc;
  }
  const double numer = X.dot(hm * RXYY);
  const double xx = X.dot(hm * X), yy = Y.dot(hm * Y), xy = X.dot(hm * Y);
  const double denom = xx * yy - xy * xy;
  if (std::abs(denom) < 1e-12)
    throw std::invalid_argument("sampled_sectional_curvature: degenerate 2-plane");
  return numer / denom;
}

BallReport classify_ball(const PolarMetric& m, double R, int grid_theta,
                         uint64_t seed) {
  if (m.warping) return classify_ball(*m.warping, R);
  if (!(R > 0) || !(R < m.domain_radius))
    throw std::domain_error("classify_ball: R outside the metric domain");

  const NormalChart chart = to_normal_chart(m);
  const int n = m.dimension;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  BallReport rep;
  rep.R = R;
  rep.curvature_upper = -std::numeric_limits<double>::infinity();
  const int radii = 129;
  for (int i = 1; i <= radii; ++i) {
    const double t = R * i / (radii + 1);
    for (int a = 0; a < grid_theta; ++a) {
      const AngularPoint theta = random_angular_point(n, rng);
      const Eigen::VectorXd x = t * theta.unit;
      for (int plane = 0; plane < 3; ++plane) {
        Eigen::VectorXd X(n), Y(n);
        for (int j = 0; j < n; ++j) {
          X[j] = gauss(rng);
          Y[j] = gauss(rng);
        }
        const double sect = sampled_sectional_curvature(chart, x, X, Y);
        if (sect > rep.curvature_upper) {
          rep.curvature_upper = sect;
          rep.worst_curvature_at = t;
        }
      }
    }
  }
  // 10% safety margin on the sampled bound.
  rep.curvature_upper *= rep.curvature_upper > 0 ? 1.1 : 0.9;
  rep.regular =
      R * std::sqrt(std::max(rep.curvature_upper, 0.0)) < std::acos(-1.0) / 2;
  const ConvexityCertificate cert = certify_convexity(m, 0.0, R, 64, 16, seed);
  rep.certificate = cert;
  rep.convex = cert.pass;
  rep.min_sigma_prime = std::numeric_limits<double>::quiet_NaN();
  rep.cut_locus_note = "not evaluated";
  return rep;
}

QuadraticFormWitness hkw_quadratic_form(const NormalChart& chart,
                                        const Eigen::VectorXd& y,
                                        const std::vector<Eigen::VectorXd>& vs) {
  QuadraticFormWitness w;
  w.y = y;
  w.vectors = vs;
  const Eigen::MatrixXd h = chart.metric_at(y);
  const auto gamma = chart.christoffel_at(y);
  const int n = chart.dimension;
  double value = 0;
  for (const Eigen::VectorXd& v : vs) {
    value += v.dot(h * v);
    for (int k = 0; k < n; ++k) value -= y[k] * v.dot(gamma[k] * v);
  }
  w.value = value;
  return w;
}

}  // namespace hmap
