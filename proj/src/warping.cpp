#include "hmap/warping.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "hmap/mollifier.hpp"
#include "hmap/numeric.hpp"

namespace hmap {

WarpingFunction linear_warping() {
  WarpingFunction w;
  w.kind = WarpKind::Linear;
  w.name = "linear";
  w.eval = [](double t) { return t; };
  w.deriv1 = [](double) { return 1.0; };
  w.deriv2 = [](double) { return 0.0; };
  return w;
}

WarpingFunction sine_warping() {
  WarpingFunction w;
  w.kind = WarpKind::Sine;
  w.name = "sine";
  w.eval = [](double t) { return std::sin(t); };
  w.deriv1 = [](double t) { return std::cos(t); };
  w.deriv2 = [](double t) { return -std::sin(t); };
  w.domain_radius = std::acos(-1.0);
  return w;
}

WarpingFunction hyperbolic_warping(double k) {
  if (!(k > 0)) throw std::invalid_argument("hyperbolic_warping: k must be > 0");
  WarpingFunction w;
  w.kind = WarpKind::Hyperbolic;
  w.name = "hyperbolic";
  w.params = {{"k", k}};
  const double sk = std::sqrt(k);
  w.eval = [sk](double t) { return std::sinh(sk * t) / sk; };
  w.deriv1 = [sk](double t) { return std::cosh(sk * t); };
  w.deriv2 = [sk](double t) { return sk * std::sinh(sk * t); };
  return w;
}

WarpingFunction spliced_warping(double r0, double r1, double a) {
  if (!(0 < r0 && r0 < r1)) throw std::invalid_argument("spliced_warping: need 0 < r0 < r1");
  if (r1 >= std::acos(-1.0) / 2)
    throw std::invalid_argument("spliced_warping: r1 must be < pi/2 so the affine slope stays positive");
  if (a == 0.0) a = std::cos(r1);
  if (!(a > 0 && a <= std::cos(r1)))
    throw std::invalid_argument("spliced_warping: need 0 < a <= cos(r1) for a monotone concave blend");

  const double width = r1 - r0;
  auto dsigma = [=](double t) {
    if (t <= r0) return std::cos(t);
    if (t >= r1) return a;
    const double x = (t - r0) / width;
    return mollifier::step_tail(x) * std::cos(t) + mollifier::step(x) * a;
  };
  // sigma(r1) by quadrature of the blended derivative; affine beyond.
  const double sigma_r1 =
      std::sin(r0) + integrate(dsigma, r0, r1, 8);
  const double b = sigma_r1 - a * r1;

  WarpingFunction w;
  w.kind = WarpKind::Spliced;
  w.name = "spliced";
  w.params = {{"r0", r0}, {"r1", r1}, {"a", a}, {"b", b}};
  w.eval = [=](double t) {
    if (t <= r0) return std::sin(t);
    if (t >= r1) return a * t + b;
    return std::sin(r0) + integrate(dsigma, r0, t, 8);
  };
  w.deriv1 = dsigma;
  w.deriv2 = [=](double t) {
    if (t <= r0) return -std::sin(t);
    if (t >= r1) return 0.0;
    const double x = (t - r0) / width;
    return mollifier::step_tail(x) * (-std::sin(t)) +
           mollifier::step_deriv(x) / width * (a - std::cos(t));
  };
  return w;
}

WarpingFunction custom_warping(std::function<double(double)> f,
                               double domain_radius, std::string name) {
  WarpingFunction w;
  w.kind = WarpKind::Custom;
  w.name = std::move(name);
  w.domain_radius = domain_radius;
  auto fn = std::make_shared<std::function<double(double)>>(std::move(f));
  w.eval = [fn](double t) { return (*fn)(t); };
  w.deriv1 = [fn](double t) {
    return central_deriv1([&](double s) { return (*fn)(s); }, t, fd_step(t));
  };
  w.deriv2 = [fn](double t) {
    return central_deriv2([&](double s) { return (*fn)(s); }, t, fd_step(t));
  };
  return w;
}

namespace {

std::map<std::string, double> parse_kv(const std::string& text) {
  std::map<std::string, double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("warping_from_name: expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    size_t used = 0;
    const double val = std::stod(item.substr(eq + 1), &used);
    out[key] = val;
  }
  return out;
}

}  // namespace

WarpingFunction warping_from_name(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  std::map<std::string, double> kv;
  if (colon != std::string::npos) kv = parse_kv(spec.substr(colon + 1));

  auto take = [&kv](const std::string& key, double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    const double v = it->second;
    kv.erase(it);
    return v;
  };
  auto finish = [&kv, &head](WarpingFunction w) {
    if (!kv.empty())
      throw std::invalid_argument("warping_from_name: unknown key '" + kv.begin()->first +
                                  "' for preset '" + head + "'");
    return w;
  };

  if (head == "linear" || head == "euclidean") return finish(linear_warping());
  if (head == "sine") return finish(sine_warping());
  if (head == "hyperbolic") return finish(hyperbolic_warping(take("k", 1.0)));
  if (head == "spliced") {
    const double r0 = take("r0", 0.78539816339744831);
    const double r1 = take("r1", 1.2);
    const double a = take("a", 0.0);
    const double b = take("b", std::numeric_limits<double>::quiet_NaN());
    WarpingFunction w = spliced_warping(r0, r1, a);
    if (!std::isnan(b)) {
      // b is determined by the construction; a stale value means the caller
      // holds parameters from a different build.
      const double built = w.params[3].second;
      if (std::abs(b - built) > 1e-9)
        throw std::invalid_argument("warping_from_name: spliced intercept b=" + std::to_string(b) +
                                    " does not match the construction (" + std::to_string(built) + ")");
    }
    return finish(w);
  }
  throw std::invalid_argument("warping_from_name: unknown preset '" + head + "'");
}

std::string warping_to_name(const WarpingFunction& w) {
  std::string out = w.name;
  char buf[64];
  for (size_t i = 0; i < w.params.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%s=%.17g", i == 0 ? ":" : ",",
                  w.params[i].first.c_str(), w.params[i].second);
    out += buf;
  }
  return out;
}

SectionalCurvatures sectional_curvatures(const WarpingFunction& s, double t) {
  if (!(t > 0)) throw std::domain_error("sectional_curvatures: t must be > 0");
  const double sigma = s.eval(t);
  if (sigma == 0.0) throw std::domain_error("sectional_curvatures: sigma(t) = 0");
  const double d1 = s.deriv1(t);
  return {-s.deriv2(t) / sigma, (1.0 - d1 * d1) / (sigma * sigma)};
}

HessRSquared hessian_r_squared(const WarpingFunction& s, double t) {
  if (!(t > 0)) throw std::domain_error("hessian_r_squared: t must be > 0");
  return {2.0, 2.0 * t * s.deriv1(t) * s.eval(t)};
}

AdmissibilityReport verify_admissible(const WarpingFunction& s) {
  AdmissibilityReport rep;
  const double tol = 1e-6;
  rep.sigma_at_zero = s.eval(0.0);
  // sigma'(0) probed from values so a bogus analytic derivative cannot hide
  // a bad evaluator: |sigma(d)/d - 1| -> 0.
  const double d = 1e-6;
  rep.deriv1_at_zero = s.eval(d) / d;
  // Richardson extrapolation of sigma'' toward 0 kills the sigma'''(0) t term,
  // so steep-but-admissible warpings (large k) are not flagged.
  rep.deriv2_at_zero = 2 * s.deriv2(1e-3) - s.deriv2(2e-3);

  const double hi = std::isfinite(s.domain_radius) ? s.domain_radius * (1 - 1e-9) : 10.0;
  rep.min_sigma = std::numeric_limits<double>::infinity();
  const int samples = 1000;
  for (int i = 1; i <= samples; ++i) {
    const double t = hi * i / samples;
    const double v = s.eval(t);
    if (v < rep.min_sigma) {
      rep.min_sigma = v;
      rep.min_sigma_at = t;
    }
  }

  char buf[128];
  if (std::abs(rep.sigma_at_zero) > tol) {
    std::snprintf(buf, sizeof buf, "sigma(0) = %.3e, expected 0", rep.sigma_at_zero);
    rep.failures.emplace_back(buf);
  }
  if (std::abs(rep.deriv1_at_zero - 1.0) > 1e-4) {
    std::snprintf(buf, sizeof buf, "sigma(d)/d = %.8f at d=1e-6, expected 1", rep.deriv1_at_zero);
    rep.failures.emplace_back(buf);
  }
  if (std::abs(rep.deriv2_at_zero) > 1e-4) {
    std::snprintf(buf, sizeof buf, "sigma''(0) = %.3e, expected 0", rep.deriv2_at_zero);
    rep.failures.emplace_back(buf);
  }
  if (!(rep.min_sigma > 0)) {
    std::snprintf(buf, sizeof buf, "sigma(%.6f) = %.3e <= 0", rep.min_sigma_at, rep.min_sigma);
    rep.failures.emplace_back(buf);
  }
  rep.pass = rep.failures.empty();
  return rep;
}

}  // namespace hmap
