#include "hmap/metric_gluing.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <random>
#include <sstream>

#include "hmap/errors.hpp"
#include "hmap/mollifier.hpp"
#include "hmap/numeric.hpp"

namespace hmap {

namespace {
double clamp01(double x) { return x < 0 ? 0 : (x > 1 ? 1 : x); }
}  // namespace

double TransitionPair::phi_h(double t) const {
  return mollifier::step((t - R1) / (R2 - R1));
}
double TransitionPair::phi_sigma(double t) const {
  return mollifier::step_tail((t - R1) / (R2 - R1));
}
double TransitionPair::dphi_h(double t) const {
  return mollifier::step_deriv(clamp01((t - R1) / (R2 - R1))) / (R2 - R1);
}
double TransitionPair::dphi_sigma(double t) const { return -dphi_h(t); }
double TransitionPair::d2phi_h(double t) const {
  return mollifier::step_deriv2(clamp01((t - R1) / (R2 - R1))) /
         ((R2 - R1) * (R2 - R1));
}

TransitionPair make_transition(double R1, double R2) {
  if (!(0 < R1 && R1 < R2))
    throw std::invalid_argument("make_transition: need 0 < R1 < R2");
  return TransitionPair{R1, R2};
}

double estimate_c2(const PolarMetric& m, double R1, double R2, int grid_t,
                   int grid_theta, double safety, uint64_t seed) {
  if (!(0 < R1 && R1 < R2))
    throw std::invalid_argument("estimate_c2: need 0 < R1 < R2");
  if (!(R2 < m.domain_radius))
    throw std::invalid_argument("estimate_c2: annulus exceeds the metric domain");
  if (!(safety >= 1.0))
    throw std::invalid_argument("estimate_c2: safety factor must be >= 1");

  std::mt19937_64 rng(seed);
  std::vector<AngularPoint> thetas;
  thetas.reserve(grid_theta);
  for (int i = 0; i < grid_theta; ++i)
    thetas.push_back(random_angular_point(m.dimension, rng));

  double min_eig = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_t; ++i) {
    const double t =
        grid_t == 1 ? R1 : R1 + (R2 - R1) * i / static_cast<double>(grid_t - 1);
    const double sh = std::sinh(t);
    for (const AngularPoint& theta : thetas) {
      const Eigen::MatrixXd sig = m.tangential(t, theta);
      const Eigen::MatrixXd h1 =
          sh * sh * round_sphere_metric(theta.chart_coords());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> spd(sig);
      if (spd.eigenvalues()(0) <= 0)
        throw std::domain_error("estimate_c2: tangential block not positive definite");
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(h1, sig);
      min_eig = std::min(min_eig, ges.eigenvalues()(0));
    }
  }
  return min_eig / safety;
}

bool k_inequality(double k, double c2, double R1) {
  const double lhs = std::sinh(std::sqrt(k) * R1);
  const double rhs = std::sinh(R1);
  return lhs * lhs >= k * rhs * rhs / c2;
}

double choose_k(double c2, double R1) {
  if (!(c2 > 0) || !(R1 > 0))
    throw std::invalid_argument("choose_k: need c2 > 0 and R1 > 0");
  double k = 1.0;
  while (!k_inequality(k, c2, R1)) {
    k *= 2.0;
    if (k > 1e15)
      throw std::runtime_error("choose_k: search failed (inputs degenerate)");
  }
  return k;
}

SigmaTilde::SigmaTilde(double k, double R3, double R4, double window,
                       double bump_coeff)
    : k_(k), R3_(R3), R4_(R4), window_(window), bump_coeff_(bump_coeff) {
  panels_ = 256;
  cumulative_.resize(panels_ + 1);
  cumulative_[0] = 0.0;
  const double dx = (R4_ - R3_) / panels_;
  for (int p = 0; p < panels_; ++p) {
    const double lo = R3_ + p * dx;
    cumulative_[p + 1] =
        cumulative_[p] +
        integrate([this](double s) { return deriv(s); }, lo, lo + dx, 1);
  }
}

double SigmaTilde::hat(double t) const {
  const double sk = std::sqrt(k_);
  return std::sinh(sk * t) / sk;
}
double SigmaTilde::dhat(double t) const { return std::cosh(std::sqrt(k_) * t); }
double SigmaTilde::d2hat(double t) const {
  const double sk = std::sqrt(k_);
  return sk * std::sinh(sk * t);
}

double SigmaTilde::deriv(double t) const {
  if (t <= R3_) return dhat(t);
  if (t >= R4_) return 1.0;
  // Three nonnegative pieces; no cancellation, so the sampled positivity
  // certificate is trustworthy.
  const double out = mollifier::step_tail((t - R3_) / window_) * dhat(t);
  const double in = mollifier::step((t - (R4_ - window_)) / window_);
  const double lift = bump_coeff_ * mollifier::bump((t - R3_) / (R4_ - R3_));
  return out + in + lift;
}

double SigmaTilde::deriv2(double t) const {
  if (t <= R3_) return d2hat(t);
  if (t >= R4_) return 0.0;
  const double xl = (t - R3_) / window_;
  const double xr = (t - (R4_ - window_)) / window_;
  const double xb = (t - R3_) / (R4_ - R3_);
  double out = mollifier::step_tail(xl) * d2hat(t);
  if (xl > 0 && xl < 1) out -= mollifier::step_deriv(xl) / window_ * dhat(t);
  double in = 0.0;
  if (xr > 0 && xr < 1) in = mollifier::step_deriv(xr) / window_;
  const double lift = bump_coeff_ * mollifier::bump_deriv(xb) / (R4_ - R3_);
  return out + in + lift;
}

double SigmaTilde::value(double t) const {
  if (t <= R3_) return hat(t);
  if (t >= R4_) return t;
  const double dx = (R4_ - R3_) / panels_;
  int p = static_cast<int>((t - R3_) / dx);
  if (p >= panels_) p = panels_ - 1;
  const double lo = R3_ + p * dx;
  return hat(R3_) + cumulative_[p] +
         integrate([this](double s) { return deriv(s); }, lo, t, 1);
}

std::pair<SigmaTilde, MonotonicityCertificate> build_sigma_tilde(double k,
                                                                 double R2,
                                                                 double R3,
                                                                 double R4) {
  if (!(0 < R2 && R2 < R3 && R3 < R4))
    throw std::invalid_argument("build_sigma_tilde: need 0 < R2 < R3 < R4");
  const double sk = std::sqrt(k);
  auto hat = [sk](double t) { return std::sinh(sk * t) / sk; };
  if (!(R4 > hat(R3)))
    throw std::invalid_argument(
        "build_sigma_tilde: need R4 > k^{-1/2} sinh(sqrt(k) R3)");

  MonotonicityCertificate cert;
  for (int attempt = 0; attempt <= 4; ++attempt) {
    const double L = R4 - R3;
    const double budget = R4 - hat(R3);
    // Shrink the seam windows until the interior bump coefficient that hits
    // the endpoint value turns positive.
    double window = L / 4;
    double coeff = -1.0;
    while (window >= 2e-3 * L) {
      const double a_left = integrate(
          [&](double t) {
            return mollifier::step_tail((t - R3) / window) * std::cosh(sk * t);
          },
          R3, R3 + window, 8);
      const double a_right = integrate(
          [&](double t) {
            return mollifier::step((t - (R4 - window)) / window);
          },
          R4 - window, R4, 8);
      const double a_bump = L * mollifier::bump_mass();
      coeff = (budget - a_left - a_right) / a_bump;
      if (coeff > 1e-8) break;
      window /= 2;
    }
    if (coeff > 1e-8) {
      SigmaTilde tilde(k, R3, R4, window, coeff);
      cert.samples = 10000;
      cert.min_deriv = std::numeric_limits<double>::infinity();
      for (int i = 0; i <= cert.samples; ++i) {
        const double t = R3 + L * i / cert.samples;
        const double d = tilde.deriv(t);
        if (d < cert.min_deriv) {
          cert.min_deriv = d;
          cert.min_deriv_at = t;
        }
      }
      cert.pass = cert.min_deriv > 0;
      cert.widenings = attempt;
      if (cert.pass) return {tilde, cert};
    }
    R4 *= 2.0;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "build_sigma_tilde: monotonicity certificate failed after 4 "
                "widenings; sigma_tilde'(%.6g) = %.3e",
                cert.min_deriv_at, cert.min_deriv);
  throw CertifiedFailure(buf);
}

ConvexityCertificate certify_convexity(const PolarMetric& m, double t_min,
                                       double t_max, int grid_t, int grid_theta,
                                       uint64_t seed) {
  if (!(t_min >= 0 && t_min < t_max && t_max <= m.domain_radius))
    throw std::invalid_argument("certify_convexity: bad t-range");
  const int n = m.dimension;

  ConvexityCertificate cert;
  cert.t_min = t_min;
  cert.t_max = t_max;
  cert.grid_t = grid_t;
  cert.grid_theta = grid_theta;
  cert.directions_per_point = 2 * n;
  cert.seed = seed;
  cert.min_value = std::numeric_limits<double>::infinity();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<AngularPoint> thetas;
  thetas.reserve(grid_theta);
  for (int i = 0; i < grid_theta; ++i)
    thetas.push_back(random_angular_point(n, rng));

  for (int i = 0; i < grid_t; ++i) {
    // Left-open grid: (t_min, t_max].
    const double t = t_min + (t_max - t_min) * (i + 1) / grid_t;
    for (const AngularPoint& theta : thetas) {
      const Eigen::MatrixXd sig = m.tangential(t, theta);
      const Eigen::MatrixXd dsig = m.tangential_dt(t, theta);
      for (int d = 0; d < 2 * n; ++d) {
        Eigen::VectorXd X(n);
        if (d < n)
          X = Eigen::VectorXd::Unit(n, d);
        else
          for (int j = 0; j < n; ++j) X[j] = gauss(rng);
        const Eigen::VectorXd xt = X.tail(n - 1);
        const double hnorm2 = X[0] * X[0] + xt.dot(sig * xt);
        X /= std::sqrt(hnorm2);
        const Eigen::VectorXd xtn = X.tail(n - 1);
        const double value =
            2.0 * X[0] * X[0] + t * xtn.dot(dsig * xtn);
        if (value < cert.min_value) {
          cert.min_value = value;
          cert.argmin = {t, theta.unit, X, value};
        }
        if (value <= 0 && cert.failures.size() < 16)
          cert.failures.push_back({t, theta.unit, X, value});
      }
    }
  }
  cert.pass = cert.min_value > 0;
  return cert;
}

Eigen::MatrixXd GluedMetric::tangential(double t, const AngularPoint& theta) const {
  const GluingParams& p = params;
  if (t < p.R1) return original.tangential(t, theta);
  if (t < p.R2) {
    const double hk = std::pow(std::sinh(std::sqrt(p.k) * t), 2) / p.k;
    return transition.phi_sigma(t) * original.tangential(t, theta) +
           transition.phi_h(t) * hk *
               round_sphere_metric(theta.chart_coords());
  }
  const double s = euclidean_end
                       ? tilde.value(t)
                       : std::sinh(std::sqrt(p.k) * t) / std::sqrt(p.k);
  return s * s * round_sphere_metric(theta.chart_coords());
}

Eigen::MatrixXd GluedMetric::tangential_dt(double t,
                                           const AngularPoint& theta) const {
  const GluingParams& p = params;
  if (t < p.R1) return original.tangential_dt(t, theta);
  const Eigen::MatrixXd G = round_sphere_metric(theta.chart_coords());
  if (t < p.R2) {
    const double sk = std::sqrt(p.k);
    const double hk = std::pow(std::sinh(sk * t), 2) / p.k;
    const double dhk = 2.0 / sk * std::sinh(sk * t) * std::cosh(sk * t);
    return transition.dphi_sigma(t) * original.tangential(t, theta) +
           transition.phi_sigma(t) * original.tangential_dt(t, theta) +
           (transition.dphi_h(t) * hk + transition.phi_h(t) * dhk) * G;
  }
  double s, ds;
  if (euclidean_end) {
    s = tilde.value(t);
    ds = tilde.deriv(t);
  } else {
    const double sk = std::sqrt(p.k);
    s = std::sinh(sk * t) / sk;
    ds = std::cosh(sk * t);
  }
  return 2.0 * s * ds * G;
}

PolarMetric GluedMetric::as_polar() const {
  auto self = std::make_shared<GluedMetric>(*this);
  PolarMetric pm;
  pm.dimension = dimension();
  pm.domain_radius = std::numeric_limits<double>::infinity();
  pm.tangential = [self](double t, const AngularPoint& theta) {
    return self->tangential(t, theta);
  };
  pm.tangential_dt = [self](double t, const AngularPoint& theta) {
    return self->tangential_dt(t, theta);
  };
  return pm;
}

double GluedMetric::radial_factor(double t) const {
  if (!rotationally_symmetric())
    throw std::logic_error("radial_factor: original metric is not a model");
  const GluingParams& p = params;
  const WarpingFunction& s = *original.warping;
  if (t < p.R1) {
    const double v = s.eval(t);
    return v * v;
  }
  if (t < p.R2) {
    const double v = s.eval(t);
    const double hk = std::pow(std::sinh(std::sqrt(p.k) * t), 2) / p.k;
    return transition.phi_sigma(t) * v * v + transition.phi_h(t) * hk;
  }
  const double v = euclidean_end
                       ? tilde.value(t)
                       : std::sinh(std::sqrt(p.k) * t) / std::sqrt(p.k);
  return v * v;
}

double GluedMetric::radial_factor_dt(double t) const {
  if (!rotationally_symmetric())
    throw std::logic_error("radial_factor_dt: original metric is not a model");
  const GluingParams& p = params;
  const WarpingFunction& s = *original.warping;
  const double sk = std::sqrt(p.k);
  if (t < p.R1) return 2.0 * s.eval(t) * s.deriv1(t);
  if (t < p.R2) {
    const double v = s.eval(t), dv = s.deriv1(t);
    const double hk = std::pow(std::sinh(sk * t), 2) / p.k;
    const double dhk = 2.0 / sk * std::sinh(sk * t) * std::cosh(sk * t);
    return transition.dphi_sigma(t) * v * v +
           transition.phi_sigma(t) * 2.0 * v * dv +
           transition.dphi_h(t) * hk + transition.phi_h(t) * dhk;
  }
  if (euclidean_end) return 2.0 * tilde.value(t) * tilde.deriv(t);
  return 2.0 / sk * std::sinh(sk * t) * std::cosh(sk * t);
}

double GluedMetric::radial_factor_dtt(double t) const {
  if (!rotationally_symmetric())
    throw std::logic_error("radial_factor_dtt: original metric is not a model");
  const GluingParams& p = params;
  const WarpingFunction& s = *original.warping;
  const double sk = std::sqrt(p.k);
  const double sh = std::sinh(sk * t), ch = std::cosh(sk * t);
  const double hk = sh * sh / p.k;
  const double dhk = 2.0 / sk * sh * ch;
  const double d2hk = 2.0 * (ch * ch + sh * sh);
  if (t < p.R1) {
    const double v = s.eval(t), dv = s.deriv1(t);
    return 2.0 * (dv * dv + v * s.deriv2(t));
  }
  if (t < p.R2) {
    const double v = s.eval(t), dv = s.deriv1(t), d2v = s.deriv2(t);
    const double F0 = v * v, dF0 = 2 * v * dv, d2F0 = 2 * (dv * dv + v * d2v);
    // phi_sigma'' = -phi_h''
    const double d2phi_h = transition.d2phi_h(t);
    return -d2phi_h * F0 + 2.0 * transition.dphi_sigma(t) * dF0 +
           transition.phi_sigma(t) * d2F0 + d2phi_h * hk +
           2.0 * transition.dphi_h(t) * dhk + transition.phi_h(t) * d2hk;
  }
  if (euclidean_end) {
    const double v = tilde.value(t), dv = tilde.deriv(t);
    return 2.0 * (dv * dv + v * tilde.deriv2(t));
  }
  return d2hk;
}

WarpingFunction GluedMetric::effective_warping() const {
  auto self = std::make_shared<GluedMetric>(*this);
  WarpingFunction w;
  w.kind = WarpKind::Custom;
  w.name = "glued";
  w.eval = [self](double t) { return std::sqrt(self->radial_factor(t)); };
  w.deriv1 = [self](double t) {
    return self->radial_factor_dt(t) / (2.0 * std::sqrt(self->radial_factor(t)));
  };
  w.deriv2 = [self](double t) {
    const double F = self->radial_factor(t);
    const double dF = self->radial_factor_dt(t);
    return (2.0 * self->radial_factor_dtt(t) * F - dF * dF) /
           (4.0 * std::pow(F, 1.5));
  };
  return w;
}

NormalChart GluedMetric::normal_chart() const {
  if (rotationally_symmetric()) {
    auto self = std::make_shared<GluedMetric>(*this);
    const WarpingFunction eff = effective_warping();
    return radial_normal_chart(
        [self](double t) { return self->radial_factor(t); },
        [self](double t) { return self->radial_factor_dt(t); }, dimension(),
        std::numeric_limits<double>::infinity(), eff.eval, eff.deriv1);
  }
  return to_normal_chart(as_polar());
}

GluedMetric build_hat_metric(const PolarMetric& m, double R1, double R2,
                             const GlueOptions& opts) {
  if (!(0 < R1 && R1 < R2))
    throw std::invalid_argument("build_hat_metric: need 0 < R1 < R2");
  if (!(R2 < m.domain_radius))
    throw std::invalid_argument("build_hat_metric: R2 exceeds the metric domain");

  const ConvexityCertificate pre = certify_convexity(
      m, 0.0, R2, opts.grid_t, opts.grid_theta, opts.seed);
  if (!pre.pass) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "build_hat_metric: t^2 is not certifiably convex on the "
                  "original metric up to R2 = %.6g (Hess(t^2) = %.3e at t = %.6g)",
                  R2, pre.min_value, pre.argmin.t);
    throw CertifiedFailure(buf);
  }

  GluedMetric g;
  g.original = m;
  g.params.R1 = R1;
  g.params.R2 = R2;
  g.params.safety = opts.safety;
  g.params.c2 = estimate_c2(m, R1, R2, opts.grid_t, opts.grid_theta,
                            opts.safety, opts.seed);
  g.params.k = choose_k(g.params.c2, R1);
  g.transition = make_transition(R1, R2);
  g.euclidean_end = false;
  return g;
}

GluedMetric build_euclidean_end(const PolarMetric& m, double R1,
                                const GlueOptions& opts) {
  const double R2 = opts.R2 > 0 ? opts.R2 : 1.2 * R1;
  GluedMetric g = build_hat_metric(m, R1, R2, opts);
  const double R3 = opts.R3 > 0 ? opts.R3 : 1.5 * R2;
  if (!(R3 > R2))
    throw std::invalid_argument("build_euclidean_end: need R3 > R2");
  const double sk = std::sqrt(g.params.k);
  const double hat_R3 = std::sinh(sk * R3) / sk;
  const double R4 = opts.R4 > 0 ? opts.R4 : 1.1 * hat_R3;

  auto [tilde, cert] = build_sigma_tilde(g.params.k, R2, R3, R4);
  g.params.R3 = R3;
  g.params.R4 = tilde.R4();  // may have been widened
  g.tilde = tilde;
  g.tilde_certificate = cert;
  g.euclidean_end = true;

  const ConvexityCertificate full =
      certify_convexity(g.as_polar(), 0.0, 2.0 * g.params.R4, opts.grid_t,
                        opts.grid_theta, opts.seed);
  g.certificate = full;
  if (!full.pass) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "build_euclidean_end: convexity certificate failed "
                  "(Hess(t^2) = %.3e at t = %.6g)",
                  full.min_value, full.argmin.t);
    throw CertifiedFailure(buf);
  }
  return g;
}

HessMixTerms hess_mix_terms(const GluedMetric& g, double t,
                            const AngularPoint& theta,
                            const Eigen::VectorXd& tangential_X) {
  const GluingParams& p = g.params;
  const Eigen::MatrixXd G = round_sphere_metric(theta.chart_coords());
  const double sk = std::sqrt(p.k);
  const double hk = std::pow(std::sinh(sk * t), 2) / p.k;
  const double dhk = 2.0 / sk * std::sinh(sk * t) * std::cosh(sk * t);
  const Eigen::VectorXd& X = tangential_X;

  HessMixTerms terms;
  terms.original_term =
      g.transition.phi_sigma(t) * 0.5 *
      X.dot(g.original.tangential_dt(t, theta) * X);
  terms.hyperbolic_term = g.transition.phi_h(t) * 0.5 * dhk * X.dot(G * X);
  terms.comparison_term =
      0.5 * g.transition.dphi_h(t) *
      X.dot((hk * G - g.original.tangential(t, theta)) * X);
  return terms;
}

void save_glued_metric(const GluedMetric& g, std::ostream& os) {
  if (!g.original.warping)
    throw std::invalid_argument(
        "save_glued_metric: only model-backed metrics have a parameter file form");
  char buf[128];
  os << "hmap_glued_metric v1\n";
  os << "target = " << warping_to_name(*g.original.warping) << "\n";
  os << "dimension = " << g.dimension() << "\n";
  os << "euclidean_end = " << (g.euclidean_end ? 1 : 0) << "\n";
  auto put = [&](const char* key, double v) {
    std::snprintf(buf, sizeof buf, "%s = %.17g\n", key, v);
    os << buf;
  };
  put("R1", g.params.R1);
  put("R2", g.params.R2);
  put("k", g.params.k);
  put("c2", g.params.c2);
  put("safety", g.params.safety);
  if (g.euclidean_end) {
    put("R3", g.params.R3);
    put("R4", g.params.R4);
    put("tilde_window", g.tilde.window());
    put("tilde_bump_coeff", g.tilde.bump_coeff());
  }
}

GluedMetric load_glued_metric(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header != "hmap_glued_metric v1")
    throw ConfigError("load_glued_metric: bad header");
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("load_glued_metric: malformed line '" + line + "'");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  auto need = [&kv](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end())
      throw ConfigError("load_glued_metric: missing key '" + key + "'");
    return it->second;
  };
  auto num = [&need](const std::string& key) { return std::stod(need(key)); };

  GluedMetric g;
  g.original = model_metric(warping_from_name(need("target")),
                            static_cast<int>(num("dimension")));
  g.params.R1 = num("R1");
  g.params.R2 = num("R2");
  g.params.k = num("k");
  g.params.c2 = num("c2");
  g.params.safety = num("safety");
  g.transition = make_transition(g.params.R1, g.params.R2);
  g.euclidean_end = num("euclidean_end") != 0;
  if (g.euclidean_end) {
    g.params.R3 = num("R3");
    g.params.R4 = num("R4");
    g.tilde = SigmaTilde(g.params.k, g.params.R3, g.params.R4,
                         num("tilde_window"), num("tilde_bump_coeff"));
  }
  return g;
}

}  // namespace hmap
