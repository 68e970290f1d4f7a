#include "hmap/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "hmap/classifier.hpp"
#include "hmap/energy.hpp"
#include "hmap/errors.hpp"
#include "hmap/ks_energy.hpp"
#include "hmap/metric_gluing.hpp"
#include "hmap/run_config.hpp"
#include "hmap/version.hpp"

namespace hmap::cli {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Context {
  RunConfig cfg;
  std::string hash_line;

  std::ofstream open(const std::string& name) const {
    std::filesystem::create_directories(cfg.out_dir);
    const auto path = std::filesystem::path(cfg.out_dir) / name;
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write output file '" + path.string() + "'");
    f << "# hmap " << kVersion << "\n" << hash_line << "\n";
    return f;
  }
};

Context make_context(const std::string& config_path, const std::string& out_override,
                     long long seed_override) {
  Context ctx;
  ctx.cfg = parse_config_file(config_path);
  if (!out_override.empty()) ctx.cfg.out_dir = out_override;
  if (seed_override >= 0) ctx.cfg.seed = static_cast<uint64_t>(seed_override);
  char buf[40];
  std::snprintf(buf, sizeof buf, "# config %016llx",
                static_cast<unsigned long long>(config_hash(ctx.cfg.raw_text)));
  ctx.hash_line = buf;
  return ctx;
}

WarpingFunction target_warping(const RunConfig& cfg) {
  if (cfg.target_preset.empty())
    throw ConfigError("config: target.preset is required");
  try {
    return warping_from_name(cfg.target_preset);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

GlueOptions glue_options(const RunConfig& cfg) {
  GlueOptions o;
  o.R2 = cfg.R2;
  o.R3 = cfg.R3;
  o.R4 = cfg.R4;
  o.safety = cfg.safety;
  o.grid_t = cfg.grid_t;
  o.grid_theta = cfg.grid_theta;
  o.seed = cfg.seed;
  return o;
}

void write_certificate(std::ostream& os, const ConvexityCertificate& cert,
                       const GluedMetric& g) {
  os << "pass = " << (cert.pass ? "yes" : "no") << "\n";
  os << "min_hess_value = " << fmt(cert.min_value) << "\n";
  os << "min_at_t = " << fmt(cert.argmin.t) << "\n";
  os << "t_range = (" << fmt(cert.t_min) << ", " << fmt(cert.t_max) << "]\n";
  os << "grid = " << cert.grid_t << " x " << cert.grid_theta << " x "
     << cert.directions_per_point << "\n";
  os << "seed = " << cert.seed << "\n";
  os << "R1 = " << fmt(g.params.R1) << "\n";
  os << "R2 = " << fmt(g.params.R2) << "\n";
  os << "R3 = " << fmt(g.params.R3) << "\n";
  os << "R4 = " << fmt(g.params.R4) << "\n";
  os << "k = " << fmt(g.params.k) << "\n";
  os << "c2 = " << fmt(g.params.c2) << "\n";
  if (g.tilde_certificate) {
    os << "sigma_tilde_min_deriv = " << fmt(g.tilde_certificate->min_deriv) << "\n";
    os << "sigma_tilde_widenings = " << g.tilde_certificate->widenings << "\n";
  }
  if (g.original.warping && g.original.warping->kind == WarpKind::Spliced) {
    // Blend constants of the spliced preset, for the record.
    for (const auto& [key, val] : g.original.warping->params)
      os << "spliced_" << key << " = " << fmt(val) << "\n";
  }
}

int cmd_geom(const Context& ctx) {
  const WarpingFunction sigma = target_warping(ctx.cfg);
  double lo = ctx.cfg.t_min, hi = ctx.cfg.t_max;
  const double domain = std::isfinite(sigma.domain_radius)
                            ? sigma.domain_radius * (1 - 1e-9)
                            : 10.0;
  if (hi <= 0) hi = ctx.cfg.R > 0 ? ctx.cfg.R : domain;
  if (lo <= 0) lo = hi / ctx.cfg.t_count;
  if (!(lo < hi) || hi > domain)
    throw ConfigError("geom: bad t-grid [" + fmt(lo) + ", " + fmt(hi) + "]");

  auto out = ctx.open("geom.csv");
  out << "t,sect_radial,sect_tangential,hess_r2_radial,hess_r2_tangential\n";
  for (int i = 0; i < ctx.cfg.t_count; ++i) {
    const double t =
        lo + (hi - lo) * i / std::max(1, ctx.cfg.t_count - 1);
    const SectionalCurvatures s = sectional_curvatures(sigma, t);
    const HessRSquared hess = hessian_r_squared(sigma, t);
    out << fmt(t) << "," << fmt(s.radial) << "," << fmt(s.tangential) << ","
        << fmt(hess.radial_coeff) << "," << fmt(hess.tangential_coeff) << "\n";
  }
  return 0;
}

GluedMetric build_glue(const Context& ctx) {
  if (!(ctx.cfg.R1 > 0)) throw ConfigError("config: target.R1 is required for gluing");
  const PolarMetric model =
      model_metric(target_warping(ctx.cfg), ctx.cfg.dimension);
  return build_euclidean_end(model, ctx.cfg.R1, glue_options(ctx.cfg));
}

// The metric parameter file must start with its own format header; the
// version and config hash go in as trailing comment lines.
void write_metric_file(const Context& ctx, const GluedMetric& g) {
  std::filesystem::create_directories(ctx.cfg.out_dir);
  std::ofstream f(std::filesystem::path(ctx.cfg.out_dir) / "glued_metric.txt");
  if (!f) throw ConfigError("cannot write glued_metric.txt");
  save_glued_metric(g, f);
  f << "# hmap " << kVersion << "\n" << ctx.hash_line << "\n";
}

int cmd_glue(const Context& ctx) {
  const GluedMetric g = build_glue(ctx);
  write_metric_file(ctx, g);
  auto cert = ctx.open("convexity_certificate.txt");
  write_certificate(cert, *g.certificate, g);
  return g.certificate->pass ? 0 : 1;
}

BoundaryTrace named_trace(const std::string& spec, const TriangulatedDomain& d,
                          int dim) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  std::map<std::string, double> kv;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos)
        throw ConfigError("boundary.trace: expected key=value in '" + spec + "'");
      kv[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
  }
  BoundaryTrace t;
  if (head == "scale") {
    // x -> factor * x on the boundary vertices
    if (dim != 2) throw ConfigError("boundary.trace scale: target dimension must be 2");
    const double f = kv.count("factor") ? kv["factor"] : 1.0;
    for (int v = 0; v < d.num_vertices(); ++v)
      if (d.boundary[v]) {
        t.vertex.push_back(v);
        t.target.push_back(Eigen::VectorXd(f * d.vertices[v]));
      }
    return t;
  }
  if (head == "constant") {
    Eigen::VectorXd c(dim);
    for (int j = 0; j < dim; ++j) {
      const std::string key = "c" + std::to_string(j + 1);
      if (!kv.count(key)) throw ConfigError("boundary.trace constant: missing " + key);
      c[j] = kv[key];
    }
    for (int v = 0; v < d.num_vertices(); ++v)
      if (d.boundary[v]) {
        t.vertex.push_back(v);
        t.target.push_back(c);
      }
    return t;
  }
  throw ConfigError("boundary.trace: unknown trace '" + head + "'");
}

int cmd_solve(const Context& ctx) {
  const RunConfig& cfg = ctx.cfg;

  // Domain
  ElementAssembly assembly;
  TriangulatedDomain disk;
  bool planar = true;
  if (cfg.generator == "disk") {
    disk = make_disk_mesh(cfg.radius, cfg.refinement);
    assembly = assemble(disk);
  } else if (cfg.generator == "file") {
    disk = load_off_file(cfg.mesh_file);
    assembly = assemble(disk);
  } else {
    assembly = assemble(make_interval_mesh(cfg.interval_K));
    planar = false;
  }

  // Target chart
  NormalChart chart;
  double R4 = 0, R1 = cfg.R1;
  bool glued = false;
  if (!cfg.metric_file.empty()) {
    std::ifstream mf(cfg.metric_file);
    const GluedMetric g = load_glued_metric(mf);
    chart = g.normal_chart();
    R4 = g.params.R4;
    if (R1 <= 0) R1 = g.params.R1;
    glued = true;
  } else if (cfg.R1 > 0) {
    const GluedMetric g = build_glue(ctx);
    write_metric_file(ctx, g);
    chart = g.normal_chart();
    R4 = g.params.R4;
    glued = true;
  } else {
    const WarpingFunction sigma = target_warping(cfg);
    chart = sigma.kind == WarpKind::Linear
                ? euclidean_chart(cfg.dimension)
                : to_normal_chart(model_metric(sigma, cfg.dimension));
  }

  // Trace
  BoundaryTrace trace;
  if (!cfg.trace_file.empty()) {
    std::ifstream tf(cfg.trace_file);
    trace = load_trace_csv(tf);
  } else if (!cfg.trace.empty()) {
    if (!planar) throw ConfigError("named traces need a planar domain");
    trace = named_trace(cfg.trace, disk, chart.dimension);
  } else {
    throw ConfigError("config: boundary.trace or boundary.trace_file is required");
  }

  SolverConfig sc;
  sc.p = cfg.p;
  sc.max_iterations = cfg.max_iterations;
  sc.grad_tolerance = cfg.grad_tolerance;
  sc.armijo_c = cfg.armijo_c;
  sc.backtrack = cfg.backtrack;
  sc.seed = cfg.seed;
  if (cfg.R5 > 0)
    sc.projection_radius = cfg.R5;
  else if (glued)
    sc.projection_radius = 1.5 * R4;
  if (R1 > 0) sc.confinement_radius = R1;

  const auto [field, report] = minimize(assembly, chart, trace, sc);

  {
    auto out = ctx.open("solution.csv");
    out << "vertex";
    for (int j = 0; j < chart.dimension; ++j) out << ",u" << (j + 1);
    out << "\n";
    for (long v = 0; v < field.rows(); ++v) {
      out << v;
      for (long j = 0; j < field.cols(); ++j) out << "," << fmt(field(v, j));
      out << "\n";
    }
  }
  {
    auto out = ctx.open("history.csv");
    out << "iteration,energy\n";
    for (size_t i = 0; i < report.energy_history.size(); ++i)
      out << i << "," << fmt(report.energy_history[i]) << "\n";
  }
  {
    auto out = ctx.open("report.txt");
    out << "final_energy = " << fmt(report.final_energy) << "\n";
    out << "iterations = " << report.iterations << "\n";
    out << "final_grad_norm = " << fmt(report.final_grad_norm) << "\n";
    out << "converged = " << (report.converged ? "yes" : "no") << "\n";
    out << "stagnated = " << (report.stagnated ? "yes" : "no") << "\n";
    out << "max_range_radius = " << fmt(report.max_range_radius) << "\n";
    out << "harmonic_residual_norm = " << fmt(report.harmonic_residual_norm) << "\n";
    out << "max_principle_ok = " << (report.max_principle_ok ? "yes" : "no") << "\n";
    out << "subharmonicity_defect = " << fmt(report.subharmonicity_defect) << "\n";
    out << "max_principle_tolerance = " << fmt(report.max_principle_tolerance) << "\n";
    out << "fuchs_value = " << fmt(report.fuchs_value) << "\n";
  }
  if (report.stagnated) return 1;
  return 0;
}

int cmd_check(const Context& ctx) {
  const WarpingFunction sigma = target_warping(ctx.cfg);
  if (!(ctx.cfg.R > 0)) throw ConfigError("config: target.R is required for check");
  BallReport rep;
  try {
    rep = classify_ball(sigma, ctx.cfg.R);
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
  auto out = ctx.open("check.txt");
  out << "target = " << warping_to_name(sigma) << "\n";
  out << "R = " << fmt(rep.R) << "\n";
  out << "Lambda = " << fmt(rep.curvature_upper) << "\n";
  out << "R_sqrt_Lambda = "
      << fmt(rep.R * std::sqrt(std::max(rep.curvature_upper, 0.0))) << "\n";
  out << "regular = " << (rep.regular ? "yes" : "no") << "\n";
  out << "convex = " << (rep.convex ? "yes" : "no") << "\n";
  out << "cut_locus = " << rep.cut_locus_note << "\n";
  out << "min_sigma_prime = " << fmt(rep.min_sigma_prime) << "\n";
  out << "min_sigma_prime_at = " << fmt(rep.min_sigma_prime_at) << "\n";
  return 0;
}

PlanarMap ks_map_by_name(const std::string& spec, int dim) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  if (head == "quadratic") {
    return [](const Eigen::Vector2d& x) {
      Eigen::VectorXd u(2);
      u << x[0] * x[0], x[0] * x[1];
      return u;
    };
  }
  if (head == "linear") {
    Eigen::Matrix2d A = Eigen::Matrix2d::Identity();
    if (colon != std::string::npos) {
      std::stringstream ss(spec.substr(colon + 1));
      std::string item;
      std::map<std::string, double> kv;
      while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("ks.map: bad parameter");
        kv[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
      }
      if (kv.count("a11")) A(0, 0) = kv["a11"];
      if (kv.count("a12")) A(0, 1) = kv["a12"];
      if (kv.count("a21")) A(1, 0) = kv["a21"];
      if (kv.count("a22")) A(1, 1) = kv["a22"];
    }
    return [A](const Eigen::Vector2d& x) { return Eigen::VectorXd(A * x); };
  }
  if (head == "radial_cap") {
    // Small-range map into a curved target: u = s * x.
    double s = 0.5;
    if (colon != std::string::npos) {
      const auto eq = spec.find('=', colon);
      if (eq != std::string::npos) s = std::stod(spec.substr(eq + 1));
    }
    return [s](const Eigen::Vector2d& x) { return Eigen::VectorXd(s * x); };
  }
  (void)dim;
  throw ConfigError("ks.map: unknown map '" + head + "'");
}

int cmd_ks(const Context& ctx) {
  const WarpingFunction sigma = target_warping(ctx.cfg);
  const NormalChart chart =
      sigma.kind == WarpKind::Linear
          ? euclidean_chart(2)
          : to_normal_chart(model_metric(sigma, 2));
  const PlanarMap u = ks_map_by_name(ctx.cfg.ks_map, 2);
  auto out = ctx.open("ks.csv");
  out << "eps,estimate,reference\n";
  for (double eps : ctx.cfg.ks_eps) {
    const EpsilonEnergyEstimate est =
        ks_energy(u, chart, eps, ctx.cfg.ks_margin, ctx.cfg.ks_circle_points,
                  ctx.cfg.ks_radial_nodes, ctx.cfg.ks_angular_nodes);
    out << fmt(eps) << "," << fmt(est.value) << "," << fmt(est.reference) << "\n";
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"harmonic maps into convex-supporting balls: glue, certify, solve"};
  app.require_subcommand(1);

  std::string config_path, out_override;
  long long seed_override = -1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--out", out_override, "output directory override");
    sub->add_option("--seed", seed_override, "seed override");
  };
  CLI::App* geom = app.add_subcommand("geom", "curvature and Hessian tables");
  CLI::App* glue = app.add_subcommand("glue", "build and certify the glued metric");
  CLI::App* solve = app.add_subcommand("solve", "minimize the Dirichlet energy");
  CLI::App* check = app.add_subcommand("check", "classify the target ball");
  CLI::App* ks = app.add_subcommand("ks-energy", "epsilon-energy sweep");
  for (CLI::App* sub : {geom, glue, solve, check, ks}) add_common(sub);

  std::vector<const char*> argv;
  argv.push_back("hmap");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    const Context ctx = make_context(config_path, out_override, seed_override);
    if (geom->parsed()) return cmd_geom(ctx);
    if (glue->parsed()) return cmd_glue(ctx);
    if (solve->parsed()) return cmd_solve(ctx);
    if (check->parsed()) return cmd_check(ctx);
    if (ks->parsed()) return cmd_ks(ctx);
    return 2;
  } catch (const CertifiedFailure& e) {
    std::cerr << "certified failure: " << e.what() << "\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace hmap::cli
