#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hmap {

// Flat INI-style configuration ([section], key = value, '#' comments).
// Unknown sections or keys are config errors; file references and numeric
// ranges are validated before any work starts.
struct RunConfig {
  // [target]
  std::string target_preset;
  int dimension = 2;
  double R = 0;   // ball radius for `check`
  double R1 = 0;  // gluing radius
  std::string metric_file;

  // [gluing]
  double R2 = 0, R3 = 0, R4 = 0;  // 0 = derive defaults
  double safety = 1.1;
  int grid_t = 64, grid_theta = 64;

  // [domain]
  std::string generator = "disk";  // disk | interval | file
  int refinement = 3;
  double radius = 1.0;
  int interval_K = 64;
  std::string mesh_file;

  // [boundary]
  std::string trace_file;
  std::string trace;  // scale:factor=.. | constant:c1=..,c2=..

  // [solver]
  double p = 2.0;
  int max_iterations = 100000;
  double grad_tolerance = 1e-8;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  double R5 = 0;  // 0 = derive (1.5 R4 with a glued target, else off)

  // [geom]
  double t_min = 0, t_max = 0;  // 0 = derive from the target domain
  int t_count = 256;

  // [ks]
  std::vector<double> ks_eps = {0.1, 0.05, 0.025};
  double ks_margin = 0.2;
  std::string ks_map = "quadratic";
  int ks_circle_points = 64;
  int ks_radial_nodes = 24;
  int ks_angular_nodes = 48;

  // [output]
  std::string out_dir = ".";
  uint64_t seed = 0;

  // Raw file text, for hashing.
  std::string raw_text;
};

RunConfig parse_config(std::istream& is);
RunConfig parse_config_file(const std::string& path);

// FNV-1a 64-bit of the raw config text.
uint64_t config_hash(const std::string& text);

}  // namespace hmap
