#include "hmap/run_config.hpp"

#include <fstream>
#include <sstream>

#include "hmap/errors.hpp"

namespace hmap {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double to_num(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const double x = std::stod(v, &used);
    if (trim(v.substr(used)).empty()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("config: key '" + key + "' is not a number: '" + v + "'");
}

int to_int(const std::string& key, const std::string& v) {
  const double x = to_num(key, v);
  const int i = static_cast<int>(x);
  if (i != x) throw ConfigError("config: key '" + key + "' must be an integer");
  return i;
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_num(key, trim(item)));
  if (out.empty()) throw ConfigError("config: key '" + key + "' is empty");
  return out;
}

}  // namespace

uint64_t config_hash(const std::string& text) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

RunConfig parse_config(std::istream& is) {
  RunConfig c;
  std::ostringstream raw;
  raw << is.rdbuf();
  c.raw_text = raw.str();

  std::istringstream text(c.raw_text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(text, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config: malformed section at line " + std::to_string(lineno));
      section = line.substr(1, line.size() - 2);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected key = value at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string qual = section + "." + key;

    if (qual == "target.preset") c.target_preset = value;
    else if (qual == "target.dimension") c.dimension = to_int(qual, value);
    else if (qual == "target.R") c.R = to_num(qual, value);
    else if (qual == "target.R1") c.R1 = to_num(qual, value);
    else if (qual == "target.metric_file") c.metric_file = value;
    else if (qual == "gluing.R2") c.R2 = to_num(qual, value);
    else if (qual == "gluing.R3") c.R3 = to_num(qual, value);
    else if (qual == "gluing.R4") c.R4 = to_num(qual, value);
    else if (qual == "gluing.safety") c.safety = to_num(qual, value);
    else if (qual == "gluing.grid_t") c.grid_t = to_int(qual, value);
    else if (qual == "gluing.grid_theta") c.grid_theta = to_int(qual, value);
    else if (qual == "domain.generator") c.generator = value;
    else if (qual == "domain.refinement") c.refinement = to_int(qual, value);
    else if (qual == "domain.radius") c.radius = to_num(qual, value);
    else if (qual == "domain.K") c.interval_K = to_int(qual, value);
    else if (qual == "domain.mesh_file") c.mesh_file = value;
    else if (qual == "boundary.trace_file") c.trace_file = value;
    else if (qual == "boundary.trace") c.trace = value;
    else if (qual == "solver.p") c.p = to_num(qual, value);
    else if (qual == "solver.max_iterations") c.max_iterations = to_int(qual, value);
    else if (qual == "solver.grad_tolerance") c.grad_tolerance = to_num(qual, value);
    else if (qual == "solver.armijo_c") c.armijo_c = to_num(qual, value);
    else if (qual == "solver.backtrack") c.backtrack = to_num(qual, value);
    else if (qual == "solver.R5") c.R5 = to_num(qual, value);
    else if (qual == "geom.t_min") c.t_min = to_num(qual, value);
    else if (qual == "geom.t_max") c.t_max = to_num(qual, value);
    else if (qual == "geom.count") c.t_count = to_int(qual, value);
    else if (qual == "ks.eps") c.ks_eps = to_list(qual, value);
    else if (qual == "ks.margin") c.ks_margin = to_num(qual, value);
    else if (qual == "ks.map") c.ks_map = value;
    else if (qual == "ks.circle_points") c.ks_circle_points = to_int(qual, value);
    else if (qual == "ks.radial_nodes") c.ks_radial_nodes = to_int(qual, value);
    else if (qual == "ks.angular_nodes") c.ks_angular_nodes = to_int(qual, value);
    else if (qual == "output.dir") c.out_dir = value;
    else if (qual == "output.seed") c.seed = static_cast<uint64_t>(to_num(qual, value));
    else
      throw ConfigError("config: unknown key '" + qual + "' at line " +
                        std::to_string(lineno));
  }

  if (!(c.p >= 2)) throw ConfigError("config: solver.p must be >= 2");
  if (!(c.grad_tolerance > 0)) throw ConfigError("config: solver.grad_tolerance must be > 0");
  if (!(c.backtrack > 0 && c.backtrack < 1))
    throw ConfigError("config: solver.backtrack must be in (0,1)");
  if (!(c.armijo_c > 0 && c.armijo_c < 1))
    throw ConfigError("config: solver.armijo_c must be in (0,1)");
  if (c.max_iterations < 0) throw ConfigError("config: solver.max_iterations must be >= 0");
  if (!(c.safety >= 1)) throw ConfigError("config: gluing.safety must be >= 1");
  if (c.grid_t < 2 || c.grid_theta < 1) throw ConfigError("config: gluing grid too small");
  if (c.refinement < 0) throw ConfigError("config: domain.refinement must be >= 0");
  if (!(c.radius > 0)) throw ConfigError("config: domain.radius must be > 0");
  if (c.interval_K < 1) throw ConfigError("config: domain.K must be >= 1");
  if (c.dimension < 2) throw ConfigError("config: target.dimension must be >= 2");
  if (!(c.ks_margin > 0 && c.ks_margin < 1))
    throw ConfigError("config: ks.margin must be in (0,1)");
  for (double e : c.ks_eps)
    if (!(e > 0 && e <= c.ks_margin))
      throw ConfigError("config: ks.eps values must be in (0, margin]");
  if (c.generator != "disk" && c.generator != "interval" && c.generator != "file")
    throw ConfigError("config: domain.generator must be disk, interval or file");
  auto check_file = [](const std::string& path, const char* what) {
    if (path.empty()) return;
    std::ifstream f(path);
    if (!f) throw ConfigError(std::string("config: ") + what + " '" + path + "' does not exist");
  };
  check_file(c.metric_file, "target.metric_file");
  check_file(c.mesh_file, "domain.mesh_file");
  check_file(c.trace_file, "boundary.trace_file");
  if (c.generator == "file" && c.mesh_file.empty())
    throw ConfigError("config: domain.generator = file requires domain.mesh_file");
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config file '" + path + "' does not exist");
  return parse_config(f);
}

}  // namespace hmap
