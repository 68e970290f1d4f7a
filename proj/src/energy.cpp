#include "hmap/energy.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <stdexcept>

namespace hmap {

std::vector<double> ElementAssembly::lumped_mass() const {
  std::vector<double> mass(num_vertices, 0.0);
  for (const auto& e : elements)
    for (int a = 0; a < e.nv; ++a) mass[e.v[a]] += e.weight / e.nv;
  return mass;
}

ElementAssembly assemble(const TriangulatedDomain& d) {
  ElementAssembly a;
  a.num_vertices = d.num_vertices();
  a.dim_domain = 2;
  a.boundary = d.boundary;
  a.max_edge = d.max_edge;
  a.nonobtuse = d.nonobtuse;
  a.elements.reserve(d.num_triangles());
  for (int t = 0; t < d.num_triangles(); ++t) {
    ElementAssembly::Element e;
    e.v = d.triangles[t];
    e.nv = 3;
    e.grad = p1_gradient(d, t);
    e.ginv = d.metric[t].inverse();
    e.weight = d.weight[t];
    a.elements.push_back(std::move(e));
  }
  return a;
}

ElementAssembly assemble(const IntervalDomain& d) {
  ElementAssembly a;
  a.num_vertices = d.num_vertices();
  a.dim_domain = 1;
  a.boundary.assign(a.num_vertices, false);
  a.boundary.front() = true;
  a.boundary.back() = true;
  for (int s = 0; s + 1 < a.num_vertices; ++s) {
    const double ds = d.params[s + 1] - d.params[s];
    if (!(ds > 0))
      throw std::invalid_argument("assemble: interval parameters must increase");
    ElementAssembly::Element e;
    e.v = {s, s + 1, -1};
    e.nv = 2;
    e.grad.resize(1, 2);
    e.grad << -1.0 / ds, 1.0 / ds;
    e.ginv = Eigen::MatrixXd::Identity(1, 1);
    e.weight = ds;
    a.max_edge = std::max(a.max_edge, ds);
    a.elements.push_back(std::move(e));
  }
  return a;
}

namespace {

void check_field(const ElementAssembly& a, const NormalChart& chart,
                 const MapField& u) {
  if (u.rows() != a.num_vertices || u.cols() != chart.dimension)
    throw std::invalid_argument("map field shape does not match domain/chart");
  if (!u.allFinite())
    throw std::invalid_argument("map field has non-finite entries");
}

Eigen::MatrixXd element_values(const MapField& u,
                               const ElementAssembly::Element& e) {
  Eigen::MatrixXd ue(e.nv, u.cols());
  for (int a = 0; a < e.nv; ++a) ue.row(a) = u.row(e.v[a]);
  return ue;
}

// Stiffness of the scalar Laplace-Beltrami form sum_T w_T grad^T ginv grad.
Eigen::SparseMatrix<double> build_stiffness(const ElementAssembly& a) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(a.elements.size() * 9);
  for (const auto& e : a.elements) {
    const Eigen::MatrixXd local =
        e.weight * e.grad.transpose() * e.ginv * e.grad;
    for (int i = 0; i < e.nv; ++i)
      for (int j = 0; j < e.nv; ++j)
        trip.emplace_back(e.v[i], e.v[j], local(i, j));
  }
  Eigen::SparseMatrix<double> K(a.num_vertices, a.num_vertices);
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

}  // namespace

double dirichlet_energy(const ElementAssembly& a, const NormalChart& chart,
                        const MapField& u, double p) {
  check_field(a, chart, u);
  if (!(p >= 2)) throw std::invalid_argument("dirichlet_energy: p must be >= 2");
  double total = 0.0;
  for (const auto& e : a.elements) {
    const Eigen::MatrixXd ue = element_values(u, e);
    const Eigen::MatrixXd gu = e.grad * ue;  // dim x n
    double density;
    if (chart.flat) {
      density = (gu.transpose() * e.ginv * gu).trace();
    } else {
      const Eigen::VectorXd ubar = ue.colwise().mean();
      const Eigen::MatrixXd M = gu.transpose() * e.ginv * gu;
      density = (chart.metric_at(ubar) * M).trace();
    }
    total += e.weight * (p == 2.0 ? density : std::pow(density, p / 2));
  }
  return total / p;
}

MapField energy_gradient(const ElementAssembly& a, const NormalChart& chart,
                         const MapField& u, double p) {
  check_field(a, chart, u);
  if (!(p >= 2)) throw std::invalid_argument("energy_gradient: p must be >= 2");
  const int n = static_cast<int>(u.cols());
  MapField grad = MapField::Zero(u.rows(), n);
  for (const auto& e : a.elements) {
    const Eigen::MatrixXd ue = element_values(u, e);
    const Eigen::MatrixXd gu = e.grad * ue;                      // dim x n
    const Eigen::MatrixXd C = e.grad.transpose() * e.ginv * gu;  // nv x n
    const Eigen::MatrixXd M = gu.transpose() * e.ginv * gu;      // n x n

    Eigen::MatrixXd de;  // nv x n
    double density;
    if (chart.flat) {
      density = M.trace();
      de = 2.0 * C;
    } else {
      const Eigen::VectorXd ubar = ue.colwise().mean();
      const Eigen::MatrixXd h = chart.metric_at(ubar);
      const auto dh = chart.metric_deriv_at(ubar);
      density = (h * M).trace();
      de = 2.0 * C * h;
      for (int m = 0; m < n; ++m) {
        const double dterm = dh[m].cwiseProduct(M).sum() / e.nv;
        for (int s = 0; s < e.nv; ++s) de(s, m) += dterm;
      }
    }
    const double scale =
        0.5 * e.weight *
        (p == 2.0 ? 1.0 : std::pow(density, p / 2 - 1.0));
    for (int s = 0; s < e.nv; ++s) grad.row(e.v[s]) += scale * de.row(s);
  }
  for (int v = 0; v < a.num_vertices; ++v)
    if (a.boundary[v]) grad.row(v).setZero();
  return grad;
}

Eigen::VectorXd radial_projection_point(Eigen::VectorXd x, double r_prime) {
  const double norm = x.norm();
  if (norm > r_prime) x *= r_prime / norm;
  return x;
}

MapField radial_projection(MapField u, double r_prime) {
  if (!(r_prime > 0)) throw std::invalid_argument("radial_projection: R' must be > 0");
  for (long v = 0; v < u.rows(); ++v) {
    const double norm = u.row(v).norm();
    if (norm > r_prime) u.row(v) *= r_prime / norm;
  }
  return u;
}

MapField harmonic_extension(const ElementAssembly& a, const BoundaryTrace& trace,
                            int dim_target) {
  validate_trace(trace, a.boundary);
  if (trace.dimension() != dim_target)
    throw std::invalid_argument("harmonic_extension: trace dimension mismatch");

  MapField u = MapField::Zero(a.num_vertices, dim_target);
  for (size_t i = 0; i < trace.vertex.size(); ++i)
    u.row(trace.vertex[i]) = trace.target[i];

  std::vector<int> interior;
  std::vector<int> slot(a.num_vertices, -1);
  for (int v = 0; v < a.num_vertices; ++v)
    if (!a.boundary[v]) {
      slot[v] = static_cast<int>(interior.size());
      interior.push_back(v);
    }
  if (interior.empty()) return u;

  const Eigen::SparseMatrix<double> K = build_stiffness(a);
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(interior.size(), dim_target);
  for (int col = 0; col < K.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(K, col); it; ++it) {
      const int r = static_cast<int>(it.row()), c = static_cast<int>(it.col());
      if (slot[r] < 0) continue;
      if (slot[c] >= 0)
        trip.emplace_back(slot[r], slot[c], it.value());
      else
        rhs.row(slot[r]) -= it.value() * u.row(c);
    }
  Eigen::SparseMatrix<double> Kii(interior.size(), interior.size());
  Kii.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> solver(Kii);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("harmonic_extension: factorization failed");
  const Eigen::MatrixXd sol = solver.solve(rhs);
  for (size_t i = 0; i < interior.size(); ++i) u.row(interior[i]) = sol.row(i);
  return u;
}

std::pair<MapField, SolveReport> minimize(const ElementAssembly& a,
                                          const NormalChart& chart,
                                          const BoundaryTrace& trace,
                                          const SolverConfig& config) {
  SolveReport report;
  MapField u = harmonic_extension(a, trace, chart.dimension);
  if (std::isfinite(config.projection_radius))
    u = radial_projection(u, config.projection_radius);

  // Interior stiffness, factored once: the descent direction is the gradient
  // in the discrete H^1 inner product. Plain l^2 steps need O(1/h^2) more
  // iterations and stall above tight gradient tolerances.
  std::vector<int> interior;
  std::vector<int> slot(a.num_vertices, -1);
  for (int v = 0; v < a.num_vertices; ++v)
    if (!a.boundary[v]) {
      slot[v] = static_cast<int>(interior.size());
      interior.push_back(v);
    }
  const Eigen::SparseMatrix<double> K = build_stiffness(a);
  Eigen::SparseMatrix<double> Kii(interior.size(), interior.size());
  {
    std::vector<Eigen::Triplet<double>> trip;
    for (int col = 0; col < K.outerSize(); ++col)
      for (Eigen::SparseMatrix<double>::InnerIterator it(K, col); it; ++it)
        if (slot[it.row()] >= 0 && slot[it.col()] >= 0)
          trip.emplace_back(slot[it.row()], slot[it.col()], it.value());
    Kii.setFromTriplets(trip.begin(), trip.end());
  }
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> precond(Kii);
  if (precond.info() != Eigen::Success)
    throw std::runtime_error("minimize: stiffness factorization failed");
  auto descent_direction = [&](const MapField& grad) {
    Eigen::MatrixXd gi(interior.size(), grad.cols());
    for (size_t i = 0; i < interior.size(); ++i) gi.row(i) = grad.row(interior[i]);
    const Eigen::MatrixXd di = precond.solve(gi);
    MapField dir = MapField::Zero(grad.rows(), grad.cols());
    for (size_t i = 0; i < interior.size(); ++i) dir.row(interior[i]) = -di.row(i);
    return dir;
  };

  const double p = config.p;
  double energy = dirichlet_energy(a, chart, u, p);
  report.energy_history.push_back(energy);
  MapField grad = energy_gradient(a, chart, u, p);
  double gnorm = grad.norm();

  int iter = 0;
  while (iter < config.max_iterations && gnorm > config.grad_tolerance &&
         !interior.empty()) {
    const MapField dir = descent_direction(grad);
    const double slope = grad.cwiseProduct(dir).sum();  // < 0
    double alpha = 1.0;
    double trial_energy = 0;
    MapField trial;
    bool accepted = false;
    while (alpha >= 1e-16) {
      trial = u + alpha * dir;
      trial_energy = dirichlet_energy(a, chart, trial, p);
      if (trial_energy <= energy + config.armijo_c * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= config.backtrack;
    }
    if (!accepted) {
      report.stagnated = true;
      break;
    }
    if (std::isfinite(config.projection_radius)) {
      MapField projected = radial_projection(trial, config.projection_radius);
      if (!projected.isApprox(trial, 0.0)) {
        const double pe = dirichlet_energy(a, chart, projected, p);
        if (pe <= trial_energy) {
          trial = std::move(projected);
          trial_energy = pe;
        }
      }
    }
    u = std::move(trial);
    energy = trial_energy;
    report.energy_history.push_back(energy);
    grad = energy_gradient(a, chart, u, p);
    gnorm = grad.norm();
    ++iter;
  }

  report.final_energy = energy;
  report.iterations = iter;
  report.final_grad_norm = gnorm;
  report.converged = gnorm <= config.grad_tolerance;
  report.max_range_radius = u.rowwise().norm().maxCoeff();
  {
    // discrete L^2 norm of the strong residual
    const MapField res = harmonic_residual(a, chart, u);
    const std::vector<double> mass = a.lumped_mass();
    double acc = 0;
    for (int v = 0; v < a.num_vertices; ++v)
      acc += mass[v] * res.row(v).squaredNorm();
    report.harmonic_residual_norm = std::sqrt(acc);
  }
  const double r1 = std::isnan(config.confinement_radius)
                        ? std::numeric_limits<double>::infinity()
                        : config.confinement_radius;
  const MaxPrincipleReport mp = max_principle_check(a, u, r1);
  report.max_principle_ok = mp.ok;
  report.subharmonicity_defect = mp.subharmonicity_defect;
  report.max_principle_tolerance = mp.tolerance;
  report.fuchs_value = std::isnan(config.confinement_radius)
                           ? 0.0
                           : fuchs_check(a, chart, u, r1, p);
  return {u, report};
}

MapField harmonic_residual(const ElementAssembly& a, const NormalChart& chart,
                           const MapField& u) {
  check_field(a, chart, u);
  const int n = static_cast<int>(u.cols());
  const Eigen::SparseMatrix<double> K = build_stiffness(a);
  const std::vector<double> mass = a.lumped_mass();
  const Eigen::MatrixXd Ku = K * u;

  // Vertex-averaged gradient contraction S_v = avg_T g^{ab} d_a u^i d_b u^j.
  std::vector<Eigen::MatrixXd> S(a.num_vertices,
                                 Eigen::MatrixXd::Zero(n, n));
  for (const auto& e : a.elements) {
    const Eigen::MatrixXd gu = e.grad * element_values(u, e);
    const Eigen::MatrixXd M = gu.transpose() * e.ginv * gu;
    for (int s = 0; s < e.nv; ++s) S[e.v[s]] += (e.weight / e.nv) * M;
  }

  MapField res = MapField::Zero(u.rows(), n);
  for (int v = 0; v < a.num_vertices; ++v) {
    if (a.boundary[v] || mass[v] <= 0) continue;
    const Eigen::MatrixXd Sv = S[v] / mass[v];
    Eigen::VectorXd gamma_term = Eigen::VectorXd::Zero(n);
    if (!chart.flat) {
      const auto gamma = chart.christoffel_at(u.row(v).transpose());
      for (int A = 0; A < n; ++A)
        gamma_term[A] = gamma[A].cwiseProduct(Sv).sum();
    }
    res.row(v) = (-Ku.row(v).transpose() / mass[v] + gamma_term).transpose();
  }
  return res;
}

MaxPrincipleReport max_principle_check(const ElementAssembly& a,
                                       const MapField& u, double R1) {
  MaxPrincipleReport rep;
  rep.tolerance = 10.0 * a.max_edge * a.max_edge;
  const Eigen::VectorXd rho = u.rowwise().squaredNorm();
  rep.max_radius = std::sqrt(rho.maxCoeff());

  rep.interior_max_rho = 0;
  rep.boundary_max_rho = 0;
  bool has_interior = false;
  for (int v = 0; v < a.num_vertices; ++v) {
    if (a.boundary[v])
      rep.boundary_max_rho = std::max(rep.boundary_max_rho, rho[v]);
    else {
      rep.interior_max_rho = std::max(rep.interior_max_rho, rho[v]);
      has_interior = true;
    }
  }

  const Eigen::SparseMatrix<double> K = build_stiffness(a);
  const std::vector<double> mass = a.lumped_mass();
  const Eigen::VectorXd Krho = K * rho;
  rep.subharmonicity_defect = std::numeric_limits<double>::infinity();
  for (int v = 0; v < a.num_vertices; ++v) {
    if (a.boundary[v] || mass[v] <= 0) continue;
    rep.subharmonicity_defect =
        std::min(rep.subharmonicity_defect, -Krho[v] / mass[v]);
  }
  if (!has_interior) rep.subharmonicity_defect = 0;

  rep.ok = rep.interior_max_rho <= rep.boundary_max_rho + rep.tolerance &&
           rep.max_radius <= R1 + rep.tolerance;
  return rep;
}

double fuchs_check(const ElementAssembly& a, const NormalChart& chart,
                   const MapField& u, double R, double p) {
  check_field(a, chart, u);
  const Eigen::VectorXd rho = u.rowwise().squaredNorm();
  double total = 0.0;
  for (const auto& e : a.elements) {
    const Eigen::MatrixXd ue = element_values(u, e);
    const Eigen::VectorXd ubar = ue.colwise().mean();
    if (ubar.squaredNorm() < R * R) continue;
    Eigen::VectorXd rho_e(e.nv);
    for (int s = 0; s < e.nv; ++s) rho_e[s] = rho[e.v[s]];
    const Eigen::VectorXd grho = e.grad * rho_e;
    double factor = 1.0;
    if (p != 2.0) {
      const Eigen::MatrixXd gu = e.grad * ue;
      const Eigen::MatrixXd M = gu.transpose() * e.ginv * gu;
      const double density =
          chart.flat ? M.trace() : (chart.metric_at(ubar) * M).trace();
      factor = std::pow(density, (p - 2.0) / 2.0);
    }
    total += e.weight * factor * grho.dot(e.ginv * grho);
  }
  return total;
}

}  // namespace hmap
