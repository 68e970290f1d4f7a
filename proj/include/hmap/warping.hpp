#pragma once

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace hmap {

enum class WarpKind { Linear, Sine, Hyperbolic, Spliced, Custom };

// Warping function sigma(t) of a rotationally symmetric target metric
// dt (x) dt + sigma^2(t) g_{S^{n-1}}. Admissible warpings satisfy
// sigma(0) = 0, sigma'(0) = 1 and sigma > 0 on (0, domain_radius).
struct WarpingFunction {
  WarpKind kind = WarpKind::Custom;
  std::string name = "custom";
  std::function<double(double)> eval;
  std::function<double(double)> deriv1;
  std::function<double(double)> deriv2;
  double domain_radius = std::numeric_limits<double>::infinity();
  // Named parameters of the preset (k for hyperbolic; r0, r1, a, b for the
  // spliced family). Round-tripped by warping_to_name.
  std::vector<std::pair<std::string, double>> params;

  double operator()(double t) const { return eval(t); }
};

WarpingFunction linear_warping();               // sigma = t
WarpingFunction sine_warping();                 // sigma = sin t, domain (0, pi)
WarpingFunction hyperbolic_warping(double k);   // sigma = k^{-1/2} sinh(sqrt(k) t)

// sigma = sin t on [0, r0], affine a t + b past r1, joined on [r0, r1] by a
// smooth blend of the derivatives cos(t) and a. The blend keeps sigma
// increasing and concave provided 0 < a <= cos(r1); b is determined by
// continuity and reported through params.
WarpingFunction spliced_warping(double r0 = 0.78539816339744831,
                                double r1 = 1.2, double a = 0.0);

// Wrap a plain evaluator; derivatives come from 5-point central differences
// with step 1e-5 * max(1, t).
WarpingFunction custom_warping(
    std::function<double(double)> f,
    double domain_radius = std::numeric_limits<double>::infinity(),
    std::string name = "custom");

// Catalog lookup for names like "linear", "sine", "hyperbolic:k=4",
// "spliced:r0=0.785,r1=1.2". Throws std::invalid_argument on unknown
// names or keys.
WarpingFunction warping_from_name(const std::string& spec);
std::string warping_to_name(const WarpingFunction& w);

struct SectionalCurvatures {
  double radial;      // -sigma''/sigma
  double tangential;  // (1 - sigma'^2)/sigma^2
};
SectionalCurvatures sectional_curvatures(const WarpingFunction& s, double t);

// Coefficients of Hess(r^2) = c_rad dr(x)dr + c_tan g_{S^{n-1}}.
struct HessRSquared {
  double radial_coeff;      // always 2
  double tangential_coeff;  // 2 t sigma'(t) sigma(t)
};
HessRSquared hessian_r_squared(const WarpingFunction& s, double t);

struct AdmissibilityReport {
  bool pass = true;
  double sigma_at_zero = 0;
  double deriv1_at_zero = 0;
  double deriv2_at_zero = 0;
  double min_sigma = 0;
  double min_sigma_at = 0;
  std::vector<std::string> failures;
};

// Checks sigma(0)=0, sigma'(0)=1, sigma''(0)~0 and sigma>0 on a sample grid.
AdmissibilityReport verify_admissible(const WarpingFunction& s);

}  // namespace hmap
