#include "hmap/polar_metric.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "hmap/geodesic.hpp"
#include "hmap/numeric.hpp"

namespace hmap {

PolarMetric model_metric(const WarpingFunction& sigma, int dimension) {
  if (dimension < 2) throw std::invalid_argument("model_metric: dimension must be >= 2");
  PolarMetric m;
  m.dimension = dimension;
  m.domain_radius = sigma.domain_radius;
  m.warping = sigma;
  const WarpingFunction s = sigma;
  m.tangential = [s](double t, const AngularPoint& theta) {
    const double v = s.eval(t);
    return Eigen::MatrixXd(v * v * round_sphere_metric(theta.chart_coords()));
  };
  m.tangential_dt = [s](double t, const AngularPoint& theta) {
    const double v = 2.0 * s.eval(t) * s.deriv1(t);
    return Eigen::MatrixXd(v * round_sphere_metric(theta.chart_coords()));
  };
  return m;
}

Eigen::MatrixXd eval_metric(const PolarMetric& m, double t,
                            const AngularPoint& theta) {
  if (!(t > 0) || !(t < m.domain_radius))
    throw std::domain_error("eval_metric: t outside (0, domain_radius)");
  const int n = m.dimension;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  h(0, 0) = 1.0;
  h.block(1, 1, n - 1, n - 1) = m.tangential(t, theta);
  return h;
}

double hessian_radial(const PolarMetric& m, double t, const AngularPoint& theta,
                      const Eigen::VectorXd& X) {
  if (!(t > 0) || !(t < m.domain_radius))
    throw std::domain_error("hessian_radial: t outside (0, domain_radius)");
  const int n = m.dimension;
  if (X.size() != n) throw std::invalid_argument("hessian_radial: bad vector size");
  const Eigen::VectorXd xt = X.tail(n - 1);
  return 0.5 * xt.dot(m.tangential_dt(t, theta) * xt);
}

NormalChart euclidean_chart(int n) {
  NormalChart c;
  c.dimension = n;
  c.flat = true;
  c.metric_at = [n](const Eigen::VectorXd&) {
    return Eigen::MatrixXd(Eigen::MatrixXd::Identity(n, n));
  };
  c.metric_deriv_at = [n](const Eigen::VectorXd&) {
    return std::vector<Eigen::MatrixXd>(n, Eigen::MatrixXd::Zero(n, n));
  };
  c.christoffel_at = c.metric_deriv_at;
  c.distance = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a - b).norm();
  };
  return c;
}

std::vector<Eigen::MatrixXd> christoffel_from_metric(
    const Eigen::MatrixXd& h, const std::vector<Eigen::MatrixXd>& dh) {
  const int n = static_cast<int>(h.rows());
  const Eigen::MatrixXd hinv = h.inverse();
  std::vector<Eigen::MatrixXd> gamma(n, Eigen::MatrixXd::Zero(n, n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double acc = 0.0;
        for (int l = 0; l < n; ++l)
          acc += hinv(k, l) * (dh[i](j, l) + dh[j](i, l) - dh[l](i, j));
        gamma[k](i, j) = 0.5 * acc;
        gamma[k](j, i) = gamma[k](i, j);
      }
  return gamma;
}

NormalChart radial_normal_chart(std::function<double(double)> F,
                                std::function<double(double)> dF, int n,
                                double domain_radius,
                                std::function<double(double)> sigma_eff,
                                std::function<double(double)> dsigma_eff) {
  NormalChart c;
  c.dimension = n;
  c.domain_radius = domain_radius;

  auto metric = [F, n](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
    const double t = x.norm();
    if (t < 1e-9) return Eigen::MatrixXd::Identity(n, n);
    const Eigen::VectorXd y = x / t;
    const double f = F(t) / (t * t);
    return f * Eigen::MatrixXd::Identity(n, n) + (1.0 - f) * y * y.transpose();
  };
  auto deriv = [F, dF, n](const Eigen::VectorXd& x) {
    std::vector<Eigen::MatrixXd> out(n, Eigen::MatrixXd::Zero(n, n));
    const double t = x.norm();
    if (t < 1e-8) return out;
    const Eigen::VectorXd y = x / t;
    const double f = F(t) / (t * t);
    const double fp = (dF(t) * t - 2.0 * F(t)) / (t * t * t);
    const Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n) - y * y.transpose();
    for (int k = 0; k < n; ++k) {
      out[k] = fp * y[k] * P;
      out[k] += (1.0 - f) / t *
                (P.col(k) * y.transpose() + y * P.col(k).transpose());
    }
    return out;
  };
  c.metric_at = metric;
  c.metric_deriv_at = deriv;
  c.christoffel_at = [metric, deriv](const Eigen::VectorXd& x) {
    return christoffel_from_metric(metric(x), deriv(x));
  };
  if (sigma_eff && dsigma_eff) {
    SliceMetric slice{sigma_eff, dsigma_eff};
    c.distance = [slice](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
      const double t1 = a.norm(), t2 = b.norm();
      if (t1 < 1e-12 || t2 < 1e-12) return std::max(t1, t2);
      double cosg = a.dot(b) / (t1 * t2);
      cosg = std::min(1.0, std::max(-1.0, cosg));
      return slice_distance(slice, t1, t2, std::acos(cosg));
    };
  }
  return c;
}

NormalChart to_normal_chart(const PolarMetric& m) {
  const int n = m.dimension;
  if (m.warping) {
    const AdmissibilityReport adm = verify_admissible(*m.warping);
    if (!adm.pass)
      throw std::invalid_argument("to_normal_chart: warping not admissible at the pole: " +
                                  adm.failures.front());
    const WarpingFunction s = *m.warping;
    auto F = [s](double t) { const double v = s.eval(t); return v * v; };
    auto dF = [s](double t) { return 2.0 * s.eval(t) * s.deriv1(t); };
    return radial_normal_chart(F, dF, n, m.domain_radius,
                               [s](double t) { return s.eval(t); },
                               [s](double t) { return s.deriv1(t); });
  }

  // General tangential field: chart transformation at x, derivatives by
  // central differences.
  NormalChart c;
  c.dimension = n;
  c.domain_radius = m.domain_radius;
  auto metric = [m, n](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
    const double t = x.norm();
    if (t < 1e-9) return Eigen::MatrixXd::Identity(n, n);
    if (t >= m.domain_radius)
      throw std::domain_error("to_normal_chart: point outside metric domain");
    const Eigen::VectorXd y = x / t;
    if (std::abs(y[n - 1]) < 1e-9)
      throw std::domain_error("to_normal_chart: point on the angular chart boundary");
    const AngularPoint theta{y};
    // dw_k/dx_i = (delta_ki - y_k y_i)/t, k < n-1
    Eigen::MatrixXd J(n - 1, n);
    for (int k = 0; k < n - 1; ++k)
      for (int i = 0; i < n; ++i)
        J(k, i) = ((k == i ? 1.0 : 0.0) - y[k] * y[i]) / t;
    const Eigen::MatrixXd sig = m.tangential(t, theta);
    return y * y.transpose() + J.transpose() * sig * J;
  };
  auto deriv = [metric, n](const Eigen::VectorXd& x) {
    std::vector<Eigen::MatrixXd> out;
    out.reserve(n);
    const double h = fd_step(x.norm());
    for (int k = 0; k < n; ++k) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
      e[k] = 1.0;
      out.push_back(((metric(x + 2 * h * e) * -1.0 + 8.0 * metric(x + h * e) -
                      8.0 * metric(x - h * e) + metric(x - 2 * h * e)) /
                     (12.0 * h))
                        .eval());
    }
    return out;
  };
  c.metric_at = metric;
  c.metric_deriv_at = deriv;
  c.christoffel_at = [metric, deriv](const Eigen::VectorXd& x) {
    return christoffel_from_metric(metric(x), deriv(x));
  };
  return c;
}

}  // namespace hmap
