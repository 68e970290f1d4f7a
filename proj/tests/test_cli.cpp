#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hmap/cli.hpp"
#include "hmap/errors.hpp"
#include "hmap/run_config.hpp"

using namespace hmap;
namespace fs = std::filesystem;

namespace {

fs::path sandbox() {
  const fs::path dir = fs::temp_directory_path() / "hmap_cli_tests";
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = sandbox() / name;
  std::ofstream f(p);
  f << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string report_value(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + " = ", 0) == 0) return line.substr(key.size() + 3);
  }
  return "";
}
}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("valid file") {
    std::istringstream in(
        "[target]\npreset = sine\nR1 = 1.0\n\n"
        "[solver]\ngrad_tolerance = 1e-9  # tight\n"
        "[output]\nseed = 42\n");
    const RunConfig c = parse_config(in);
    CHECK(c.target_preset == "sine");
    CHECK(c.R1 == 1.0);
    CHECK(c.grad_tolerance == 1e-9);
    CHECK(c.seed == 42);
  }
  SUBCASE("unknown keys are rejected") {
    std::istringstream in("[target]\npresett = sine\n");
    CHECK_THROWS_AS(parse_config(in), ConfigError);
  }
  SUBCASE("bad numbers are rejected") {
    std::istringstream in("[solver]\np = banana\n");
    CHECK_THROWS_AS(parse_config(in), ConfigError);
  }
  SUBCASE("invalid ranges are rejected") {
    std::istringstream in("[solver]\nbacktrack = 1.5\n");
    CHECK_THROWS_AS(parse_config(in), ConfigError);
  }
  SUBCASE("missing referenced files are rejected") {
    std::istringstream in("[domain]\nmesh_file = /nonexistent/mesh.off\n");
    CHECK_THROWS_AS(parse_config(in), ConfigError);
  }
  SUBCASE("hash is stable") {
    CHECK(config_hash("abc") == config_hash("abc"));
    CHECK(config_hash("abc") != config_hash("abd"));
  }
}

TEST_CASE("cli exit codes") {
  SUBCASE("missing config file") {
    CHECK(cli::run({"check", "--config", "/nonexistent.ini"}) == 2);
  }
  SUBCASE("refused gluing is a certified failure") {
    const fs::path cfg = write_file(
        "refuse.ini", "[target]\npreset = sine\nR1 = 1.6\n");
    const fs::path out = sandbox() / "refuse_out";
    CHECK(cli::run({"glue", "--config", cfg.string(), "--out", out.string()}) == 1);
  }
  SUBCASE("usage error without a subcommand") {
    CHECK(cli::run({}) == 2);
  }
}

TEST_CASE("glue subcommand output and determinism") {
  const fs::path cfg = write_file("glue.ini",
                                  "[target]\npreset = sine\nR1 = 1.0\n"
                                  "[output]\nseed = 7\n");
  const fs::path out1 = sandbox() / "glue1";
  const fs::path out2 = sandbox() / "glue2";
  fs::remove_all(out1);
  fs::remove_all(out2);
  REQUIRE(cli::run({"glue", "--config", cfg.string(), "--out", out1.string()}) == 0);
  REQUIRE(cli::run({"glue", "--config", cfg.string(), "--out", out2.string()}) == 0);

  for (const char* name : {"glued_metric.txt", "convexity_certificate.txt"}) {
    const std::string a = slurp(out1 / name);
    const std::string b = slurp(out2 / name);
    CHECK(a == b);
    CHECK_FALSE(a.empty());
    CHECK(a.find("# hmap ") != std::string::npos);
    CHECK(a.find("# config ") != std::string::npos);
  }
  CHECK(slurp(out1 / "convexity_certificate.txt").find("pass = yes") !=
        std::string::npos);
}

TEST_CASE("solve subcommand: euclidean target matches the linear problem") {
  const fs::path cfg = write_file("solve_flat.ini",
                                  "[target]\npreset = linear\n"
                                  "[domain]\ngenerator = disk\nrefinement = 2\n"
                                  "[boundary]\ntrace = scale:factor=0.8\n");
  const fs::path out = sandbox() / "solve_flat";
  fs::remove_all(out);
  REQUIRE(cli::run({"solve", "--config", cfg.string(), "--out", out.string()}) == 0);
  const std::string report = slurp(out / "report.txt");
  CHECK(report_value(report, "converged") == "yes");
  CHECK(fs::exists(out / "solution.csv"));
  CHECK(fs::exists(out / "history.csv"));
}

TEST_CASE("glue then solve through the parameter file") {
  const fs::path cfg = write_file("pipe_glue.ini",
                                  "[target]\npreset = sine\nR1 = 1.0\n");
  const fs::path gout = sandbox() / "pipe_glue";
  fs::remove_all(gout);
  REQUIRE(cli::run({"glue", "--config", cfg.string(), "--out", gout.string()}) == 0);

  const fs::path scfg = write_file(
      "pipe_solve.ini",
      "[target]\npreset = sine\nmetric_file = " +
          (gout / "glued_metric.txt").string() +
          "\n[domain]\ngenerator = disk\nrefinement = 2\n"
          "[boundary]\ntrace = scale:factor=0.8\n");
  const fs::path sout = sandbox() / "pipe_solve";
  fs::remove_all(sout);
  REQUIRE(cli::run({"solve", "--config", scfg.string(), "--out", sout.string()}) == 0);
  const std::string report = slurp(sout / "report.txt");
  CHECK(report_value(report, "converged") == "yes");
  CHECK(report_value(report, "max_principle_ok") == "yes");
}

TEST_CASE("check subcommand reproduces the separating example") {
  SUBCASE("round sphere at pi/3") {
    const fs::path cfg = write_file(
        "check_sine.ini", "[target]\npreset = sine\nR = 1.0471975511965976\n");
    const fs::path out = sandbox() / "check_sine";
    REQUIRE(cli::run({"check", "--config", cfg.string(), "--out", out.string()}) == 0);
    const std::string text = slurp(out / "check.txt");
    CHECK(report_value(text, "regular") == "yes");
    CHECK(report_value(text, "convex") == "yes");
  }
  SUBCASE("spliced target at R = 10") {
    const fs::path cfg =
        write_file("check_spliced.ini", "[target]\npreset = spliced\nR = 10\n");
    const fs::path out = sandbox() / "check_spliced";
    REQUIRE(cli::run({"check", "--config", cfg.string(), "--out", out.string()}) == 0);
    const std::string text = slurp(out / "check.txt");
    CHECK(report_value(text, "regular") == "no");
    CHECK(report_value(text, "convex") == "yes");
  }
}

TEST_CASE("geom subcommand writes the curvature table") {
  const fs::path cfg = write_file("geom.ini",
                                  "[target]\npreset = linear\n"
                                  "[geom]\nt_min = 0.1\nt_max = 2\ncount = 16\n");
  const fs::path out = sandbox() / "geom_out";
  fs::remove_all(out);
  REQUIRE(cli::run({"geom", "--config", cfg.string(), "--out", out.string()}) == 0);
  std::ifstream csv(out / "geom.csv");
  std::string line;
  std::getline(csv, line);  // version
  std::getline(csv, line);  // hash
  std::getline(csv, line);
  CHECK(line == "t,sect_radial,sect_tangential,hess_r2_radial,hess_r2_tangential");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    // euclidean: both curvatures are zero
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    std::getline(ss, cell, ',');
    CHECK(std::abs(std::stod(cell)) < 1e-14);
  }
  CHECK(rows == 16);
}

TEST_CASE("ks-energy subcommand emits the sweep") {
  const fs::path cfg = write_file("ks.ini",
                                  "[target]\npreset = linear\n"
                                  "[ks]\neps = 0.1,0.05\nmap = linear:a11=2\n");
  const fs::path out = sandbox() / "ks_out";
  fs::remove_all(out);
  REQUIRE(cli::run({"ks-energy", "--config", cfg.string(), "--out", out.string()}) == 0);
  std::ifstream csv(out / "ks.csv");
  std::string line;
  std::getline(csv, line);
  std::getline(csv, line);
  std::getline(csv, line);
  CHECK(line == "eps,estimate,reference");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 2);
}
