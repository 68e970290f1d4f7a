#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <vector>

#include "hmap/mesh.hpp"
#include "hmap/polar_metric.hpp"

namespace hmap {

// Per-vertex target points in global normal coordinates; row v = u(x_v).
using MapField = Eigen::MatrixXd;

// First-order elements shared by the 2-D and 1-D domains: vertex ids, a
// constant-gradient operator, the inverse reference metric and the volume
// weight.
struct ElementAssembly {
  struct Element {
    std::array<int, 3> v{-1, -1, -1};
    int nv = 3;
    Eigen::MatrixXd grad;  // (dim_dom x nv)
    Eigen::MatrixXd ginv;  // (dim_dom x dim_dom)
    double weight = 0;
  };
  std::vector<Element> elements;
  int num_vertices = 0;
  int dim_domain = 2;
  std::vector<bool> boundary;
  double max_edge = 0;
  bool nonobtuse = true;

  std::vector<double> lumped_mass() const;
};

ElementAssembly assemble(const TriangulatedDomain& d);
ElementAssembly assemble(const IntervalDomain& d);

// Discrete p-energy (1/p) sum_T w_T (g^{ab} d_a u^i d_b u^j h_ij(u_T))^{p/2}
// with h evaluated at the vertex average of each element.
double dirichlet_energy(const ElementAssembly& a, const NormalChart& chart,
                        const MapField& u, double p = 2.0);

// Exact gradient of dirichlet_energy in the interior vertex values
// (boundary rows zeroed), including the d_k h_ij term.
MapField energy_gradient(const ElementAssembly& a, const NormalChart& chart,
                         const MapField& u, double p = 2.0);

// Nearest-point projection onto the closed ball of radius R'.
MapField radial_projection(MapField u, double r_prime);
Eigen::VectorXd radial_projection_point(Eigen::VectorXd x, double r_prime);

// Componentwise discrete harmonic extension of the trace (Euclidean target).
MapField harmonic_extension(const ElementAssembly& a, const BoundaryTrace& trace,
                            int dim_target);

struct SolverConfig {
  double p = 2.0;
  int max_iterations = 100000;
  double grad_tolerance = 1e-8;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  double projection_radius = std::numeric_limits<double>::infinity();  // R5
  // When set, the report checks confinement of the range in B_{R1} and
  // evaluates the range integral of fuchs_check at this radius.
  double confinement_radius = std::numeric_limits<double>::quiet_NaN();
  uint64_t seed = 0;
};

struct SolveReport {
  double final_energy = 0;
  int iterations = 0;
  double final_grad_norm = 0;
  double max_range_radius = 0;
  double harmonic_residual_norm = 0;
  bool max_principle_ok = false;
  double subharmonicity_defect = 0;
  double fuchs_value = 0;
  double max_principle_tolerance = 0;
  bool converged = false;
  bool stagnated = false;
  std::vector<double> energy_history;  // strictly decreasing
};

// Fixed-trace descent: harmonic extension + projection as the initial field,
// then gradient descent with Armijo backtracking on the interior vertices;
// after each accepted step the R5-projection is kept only when it does not
// increase the energy.
std::pair<MapField, SolveReport> minimize(const ElementAssembly& a,
                                          const NormalChart& chart,
                                          const BoundaryTrace& trace,
                                          const SolverConfig& config);

// Per-interior-vertex residual of the harmonic system
// Delta_M u^A + Gamma^A_ij(u) g^{ab} d_a u^i d_b u^j.
MapField harmonic_residual(const ElementAssembly& a, const NormalChart& chart,
                           const MapField& u);

struct MaxPrincipleReport {
  bool ok = false;
  double max_radius = 0;
  double interior_max_rho = 0;
  double boundary_max_rho = 0;
  double subharmonicity_defect = 0;  // min of the discrete Laplacian of |u|^2
  double tolerance = 0;              // 10 h^2
};

MaxPrincipleReport max_principle_check(const ElementAssembly& a,
                                       const MapField& u, double R1);

// Discrete range integral int_{|u|^2 >= R^2} ||du||^{p-2} |grad |u|^2|_g^2;
// vanishes when the range stays inside B_R, must be ~0 for minimizers.
double fuchs_check(const ElementAssembly& a, const NormalChart& chart,
                   const MapField& u, double R, double p = 2.0);

}  // namespace hmap
