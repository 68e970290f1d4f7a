#include "hmap/geodesic.hpp"

#include <cmath>
#include <stdexcept>

namespace hmap {

namespace {

struct Derivs {
  double dt, dphi, dvt, dvphi;
};

Derivs rhs(const SliceMetric& m, const SliceState& s) {
  const double S = m.S(s.t);
  const double dS = m.dS(s.t);
  return {s.vt, s.vphi, S * dS * s.vphi * s.vphi, -2.0 * dS / S * s.vt * s.vphi};
}

SliceState advance(const SliceMetric& m, SliceState s, double h) {
  auto add = [](const SliceState& a, const Derivs& d, double f) {
    return SliceState{a.t + f * d.dt, a.phi + f * d.dphi, a.vt + f * d.dvt,
                      a.vphi + f * d.dvphi};
  };
  const Derivs k1 = rhs(m, s);
  const Derivs k2 = rhs(m, add(s, k1, 0.5 * h));
  const Derivs k3 = rhs(m, add(s, k2, 0.5 * h));
  const Derivs k4 = rhs(m, add(s, k3, h));
  s.t += h / 6.0 * (k1.dt + 2 * k2.dt + 2 * k3.dt + k4.dt);
  s.phi += h / 6.0 * (k1.dphi + 2 * k2.dphi + 2 * k3.dphi + k4.dphi);
  s.vt += h / 6.0 * (k1.dvt + 2 * k2.dvt + 2 * k3.dvt + k4.dvt);
  s.vphi += h / 6.0 * (k1.dvphi + 2 * k2.dvphi + 2 * k3.dvphi + k4.dvphi);
  return s;
}

}  // namespace

SliceState shoot(const SliceMetric& m, double t0, double alpha, double length,
                 int steps) {
  SliceState s{t0, 0.0, std::cos(alpha), std::sin(alpha) / m.S(t0)};
  const double h = length / steps;
  for (int i = 0; i < steps; ++i) s = advance(m, s, h);
  return s;
}

double slice_distance(const SliceMetric& m, double t1, double t2, double dphi) {
  dphi = std::abs(std::remainder(dphi, 2 * std::acos(-1.0)));
  if (t1 < 1e-12) return t2;
  if (t2 < 1e-12) return t1;
  if (dphi < 1e-12) return std::abs(t1 - t2);

  // Planar chord as the initial guess (exact when S = t).
  const double px = t2 * std::cos(dphi) - t1;
  const double py = t2 * std::sin(dphi);
  double length = std::hypot(px, py);
  double alpha = std::atan2(py, px);

  auto endpoint = [&](double a, double L) {
    const int steps = std::max(64, static_cast<int>(std::ceil(L / 0.005)));
    return shoot(m, t1, a, L, steps);
  };
  auto residual = [&](double a, double L, double* rt, double* rp) {
    const SliceState s = endpoint(a, L);
    *rt = s.t - t2;
    *rp = s.phi - dphi;
  };

  double rt, rp;
  residual(alpha, length, &rt, &rp);
  double err = std::hypot(rt, rp);
  const double tol = 1e-11 * std::max(1.0, t1 + t2);
  bool stalled = false;
  for (int iter = 0; iter < 60 && err > tol && !stalled; ++iter) {
    const double da = 1e-7;
    const double dL = 1e-7 * std::max(1.0, length);
    double rt_a, rp_a, rt_l, rp_l;
    residual(alpha + da, length, &rt_a, &rp_a);
    residual(alpha, length + dL, &rt_l, &rp_l);
    const double j11 = (rt_a - rt) / da, j12 = (rt_l - rt) / dL;
    const double j21 = (rp_a - rp) / da, j22 = (rp_l - rp) / dL;
    const double det = j11 * j22 - j12 * j21;
    if (std::abs(det) < 1e-16) break;
    double step_a = -(j22 * rt - j12 * rp) / det;
    double step_l = -(-j21 * rt + j11 * rp) / det;
    // Damped update; keep the arc length positive.
    double scale = 1.0;
    for (int back = 0; back < 30; ++back) {
      const double na = alpha + scale * step_a;
      const double nl = length + scale * step_l;
      if (nl > 1e-12) {
        double nrt, nrp;
        residual(na, nl, &nrt, &nrp);
        const double nerr = std::hypot(nrt, nrp);
        if (nerr < err) {
          alpha = na;
          length = nl;
          rt = nrt;
          rp = nrp;
          err = nerr;
          break;
        }
      }
      scale *= 0.5;
      if (back == 29) stalled = true;
    }
  }
  if (err > 1e-6 * std::max(1.0, t1 + t2))
    throw std::runtime_error("slice_distance: shooting solve did not converge");
  return length;
}

}  // namespace hmap
