#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "hmap/polar_metric.hpp"

namespace hmap {

// Smooth partition of unity {phi_sigma, phi_h} on (0, inf):
// phi_sigma = 1 on (0, R1], 0 on [R2, inf), phi_sigma' <= 0, sum = 1.
// Built from the normalized integral of the C^inf bump.
struct TransitionPair {
  double R1 = 0, R2 = 0;
  double phi_sigma(double t) const;
  double phi_h(double t) const;
  double dphi_sigma(double t) const;
  double dphi_h(double t) const;
  double d2phi_h(double t) const;
};

TransitionPair make_transition(double R1, double R2);

struct GluingParams {
  double R1 = 0, R2 = 0, R3 = 0, R4 = 0;
  double k = 1;       // curvature scale of the hyperbolic piece
  double c2 = 1;      // comparison constant on the blend annulus
  double safety = 1.1;
};

// c2 such that X h^(1) X >= c2 X sigma X on the closed annulus [R1, R2],
// h^(1) = sinh^2(t) g_S. Sampled smallest generalized eigenvalue of the
// pencil, divided by the safety factor.
double estimate_c2(const PolarMetric& m, double R1, double R2, int grid_t = 64,
                   int grid_theta = 64, double safety = 1.1, uint64_t seed = 0);

// Smallest k in {1, 2, 4, ...} with sinh^2(sqrt(k) R1) >= k sinh^2(R1)/c2.
double choose_k(double c2, double R1);
bool k_inequality(double k, double c2, double R1);

// Smooth increasing splice sigma_tilde on [R2, inf):
//   sigma_tilde = k^{-1/2} sinh(sqrt(k) t) on [R2, R3],
//   sigma_tilde(t) = t for t >= R4.
// The joining piece is built in derivative space,
//   sigma_tilde' = (window out of the hyperbolic slope) + (window into slope 1)
//                  + c * bump,
// with c >= 0 fixed by the endpoint value R4; this stays positive whenever
// R4 > k^{-1/2} sinh(sqrt(k) R3), which is exactly the admissible range.
class SigmaTilde {
 public:
  SigmaTilde() = default;
  SigmaTilde(double k, double R3, double R4, double window, double bump_coeff);

  double value(double t) const;
  double deriv(double t) const;
  double deriv2(double t) const;

  double k() const { return k_; }
  double R3() const { return R3_; }
  double R4() const { return R4_; }
  double window() const { return window_; }
  double bump_coeff() const { return bump_coeff_; }

 private:
  double hat(double t) const;    // k^{-1/2} sinh(sqrt(k) t)
  double dhat(double t) const;   // cosh(sqrt(k) t)
  double d2hat(double t) const;  // sqrt(k) sinh(sqrt(k) t)

  double k_ = 1, R3_ = 0, R4_ = 0;
  double window_ = 0, bump_coeff_ = 0;
  std::vector<double> cumulative_;  // integral of deriv at panel boundaries
  int panels_ = 0;
};

struct MonotonicityCertificate {
  bool pass = false;
  int samples = 0;
  double min_deriv = 0;
  double min_deriv_at = 0;
  int widenings = 0;  // times R4 was doubled before the certificate passed
};

// Builds the splice and certifies sigma_tilde' > 0 on 10^4 sample points,
// doubling R4 up to 4 times on failure. Throws CertifiedFailure if the
// retries are exhausted.
std::pair<SigmaTilde, MonotonicityCertificate> build_sigma_tilde(double k,
                                                                 double R2,
                                                                 double R3,
                                                                 double R4);

struct CertificateSample {
  double t = 0;
  Eigen::VectorXd theta;      // unit vector on S^{n-1}
  Eigen::VectorXd direction;  // polar-frame components, h-unit
  double value = 0;
};

// Sampled lower bound for the quadratic form
//   Hess(t^2)(X, X) = 2 (X^0)^2 + 2 t Hess t(X, X)
// over h-unit directions (coordinate frame plus random unit vectors).
struct ConvexityCertificate {
  double t_min = 0, t_max = 0;
  int grid_t = 0, grid_theta = 0, directions_per_point = 0;
  uint64_t seed = 0;
  double min_value = 0;
  bool pass = false;
  CertificateSample argmin;
  std::vector<CertificateSample> failures;  // capped at 16
};

ConvexityCertificate certify_convexity(const PolarMetric& m, double t_min,
                                       double t_max, int grid_t = 64,
                                       int grid_theta = 64, uint64_t seed = 0);

// Options for the gluing pipeline. Zero means "derive the default":
// R2 = 1.2 R1, R3 = 1.5 R2, R4 = 1.1 * k^{-1/2} sinh(sqrt(k) R3).
struct GlueOptions {
  double R2 = 0, R3 = 0, R4 = 0;
  double safety = 1.1;
  int grid_t = 64, grid_theta = 64;
  uint64_t seed = 0;
};

// Metric of Theorem-style gluing: original sigma_il for t < R1, the blended
// annulus on [R1, R2), constant-curvature -k piece past R2 and, when the
// Euclidean end is attached, the splice to sigma_tilde(t) = t past R4.
struct GluedMetric {
  PolarMetric original;
  GluingParams params;
  TransitionPair transition;
  SigmaTilde tilde;            // meaningful only when euclidean_end
  bool euclidean_end = false;
  std::optional<ConvexityCertificate> certificate;
  std::optional<MonotonicityCertificate> tilde_certificate;

  int dimension() const { return original.dimension; }

  Eigen::MatrixXd tangential(double t, const AngularPoint& theta) const;
  Eigen::MatrixXd tangential_dt(double t, const AngularPoint& theta) const;

  // View as a PolarMetric on all of R^n (shares this object by copy).
  PolarMetric as_polar() const;

  // Radial tangential factor F(t) with sigma_il = F(t) G_il; available when
  // the original metric is a warped model.
  bool rotationally_symmetric() const { return original.warping.has_value(); }
  double radial_factor(double t) const;
  double radial_factor_dt(double t) const;
  double radial_factor_dtt(double t) const;
  // Effective warping sqrt(F(t)); admissible, Euclidean past R4.
  WarpingFunction effective_warping() const;
  NormalChart normal_chart() const;
};

// Theorem-style hyperbolic blend. Certifies convexity of the original metric
// on (0, R2] first and refuses (CertifiedFailure) when that precondition
// cannot be certified.
GluedMetric build_hat_metric(const PolarMetric& m, double R1, double R2,
                             const GlueOptions& opts = {});

// Full pipeline: hyperbolic blend, splice to a Euclidean end, convexity
// certificate on (0, 2 R4].
GluedMetric build_euclidean_end(const PolarMetric& m, double R1,
                                const GlueOptions& opts = {});

// The three terms of the Hess t decomposition on the blend annulus:
//   phi_sigma * (original Hess t) + phi_h * (hyperbolic Hess t)
//   + 1/2 phi_h' X [h^(k) - sigma] X.
// Each is nonnegative for the chosen k.
struct HessMixTerms {
  double original_term = 0;
  double hyperbolic_term = 0;
  double comparison_term = 0;
  double total() const { return original_term + hyperbolic_term + comparison_term; }
};

HessMixTerms hess_mix_terms(const GluedMetric& g, double t,
                            const AngularPoint& theta,
                            const Eigen::VectorXd& tangential_X);

// Parameter-file serialization (text, 17 significant digits). Loading
// requires the original metric to be a named preset model.
void save_glued_metric(const GluedMetric& g, std::ostream& os);
GluedMetric load_glued_metric(std::istream& is);

}  // namespace hmap
