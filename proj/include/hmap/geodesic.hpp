#pragma once

#include <functional>

namespace hmap {

// Totally geodesic 2-D slice (t, phi) of a rotationally symmetric target,
// metric dt (x) dt + S(t)^2 dphi (x) dphi.
struct SliceMetric {
  std::function<double(double)> S;
  std::function<double(double)> dS;
};

struct SliceState {
  double t, phi;
  double vt, vphi;
};

// Unit-speed geodesic from (t0, 0); alpha = 0 points radially outward.
// Fixed-step RK4.
SliceState shoot(const SliceMetric& m, double t0, double alpha, double length,
                 int steps);

// Geodesic distance between (t1, 0) and (t2, dphi). Radial pairs are exact;
// the general case is a two-parameter Newton solve on the shooting map.
double slice_distance(const SliceMetric& m, double t1, double t2, double dphi);

}  // namespace hmap
