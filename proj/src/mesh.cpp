#include "hmap/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "hmap/errors.hpp"

namespace hmap {

namespace {

double tri_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                const Eigen::Vector2d& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) -
                (b.y() - a.y()) * (c.x() - a.x()));
}

}  // namespace

int TriangulatedDomain::num_edges() const {
  std::map<std::pair<int, int>, int> edges;
  for (const auto& t : triangles)
    for (int e = 0; e < 3; ++e) {
      int a = t[e], b = t[(e + 1) % 3];
      if (a > b) std::swap(a, b);
      edges[{a, b}]++;
    }
  return static_cast<int>(edges.size());
}

int TriangulatedDomain::euler_characteristic() const {
  return num_vertices() - num_edges() + num_triangles();
}

void finalize_domain(TriangulatedDomain& d) {
  const int nv = d.num_vertices();
  const int nt = d.num_triangles();
  if (d.metric.size() != static_cast<size_t>(nt))
    d.metric.assign(nt, Eigen::Matrix2d::Identity());
  d.area.resize(nt);
  d.weight.resize(nt);
  d.max_edge = 0;
  d.nonobtuse = true;

  for (int t = 0; t < nt; ++t) {
    const auto& tri = d.triangles[t];
    for (int v : tri)
      if (v < 0 || v >= nv)
        throw std::invalid_argument("finalize_domain: vertex index out of range");
    const double a =
        tri_area(d.vertices[tri[0]], d.vertices[tri[1]], d.vertices[tri[2]]);
    if (!(a >= 1e-12))
      throw std::invalid_argument("finalize_domain: non-positive or degenerate triangle " +
                                  std::to_string(t));
    d.area[t] = a;
    const Eigen::Matrix2d& g = d.metric[t];
    const double det = g.determinant();
    if (!(det > 0) || !(g(0, 0) > 0))
      throw std::invalid_argument("finalize_domain: reference metric not SPD on triangle " +
                                  std::to_string(t));
    d.weight[t] = std::sqrt(det) * a;
    // Edge lengths and corner angles in the reference metric.
    for (int e = 0; e < 3; ++e) {
      const Eigen::Vector2d u = d.vertices[tri[(e + 1) % 3]] - d.vertices[tri[e]];
      const Eigen::Vector2d v = d.vertices[tri[(e + 2) % 3]] - d.vertices[tri[e]];
      d.max_edge = std::max(d.max_edge, std::sqrt(u.dot(g * u)));
      if (u.dot(g * v) < 0) d.nonobtuse = false;
    }
  }

  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& tri : d.triangles)
    for (int e = 0; e < 3; ++e) {
      int a = tri[e], b = tri[(e + 1) % 3];
      if (a > b) std::swap(a, b);
      edge_count[{a, b}]++;
    }
  d.boundary.assign(nv, false);
  d.boundary_edges.clear();
  for (const auto& [edge, count] : edge_count) {
    if (count > 2)
      throw std::invalid_argument("finalize_domain: non-manifold edge");
    if (count == 1) {
      d.boundary[edge.first] = true;
      d.boundary[edge.second] = true;
      d.boundary_edges.push_back({edge.first, edge.second});
    }
  }
}

TriangulatedDomain make_disk_mesh(double radius, int level) {
  if (!(radius > 0)) throw std::invalid_argument("make_disk_mesh: radius must be > 0");
  if (level < 0) throw std::invalid_argument("make_disk_mesh: level must be >= 0");
  const int rings = 1 << level;
  const double two_pi = 2.0 * std::acos(-1.0);

  TriangulatedDomain d;
  d.vertices.emplace_back(0.0, 0.0);
  std::vector<int> ring_start(rings + 1, 0);
  for (int j = 1; j <= rings; ++j) {
    ring_start[j] = d.num_vertices();
    const int count = 6 * j;
    const double r = radius * j / rings;
    for (int i = 0; i < count; ++i) {
      const double phi = two_pi * i / count;
      d.vertices.emplace_back(r * std::cos(phi), r * std::sin(phi));
    }
  }

  // Annulus between rings j-1 (6(j-1) vertices) and j: per sector, j outer
  // segments zigzag against j-1 inner segments.
  for (int j = 1; j <= rings; ++j) {
    const int outer = ring_start[j], on = 6 * j;
    const int inner = j == 1 ? 0 : ring_start[j - 1];
    const int in = 6 * (j - 1);
    if (j == 1) {
      for (int i = 0; i < 6; ++i)
        d.triangles.push_back({0, outer + i, outer + (i + 1) % 6});
      continue;
    }
    for (int s = 0; s < 6; ++s) {
      for (int i = 0; i < j; ++i) {
        const int o0 = outer + (s * j + i) % on;
        const int o1 = outer + (s * j + i + 1) % on;
        const int i0 = inner + (s * (j - 1) + i) % in;
        d.triangles.push_back({i0, o0, o1});
        if (i < j - 1) {
          const int i1 = inner + (s * (j - 1) + i) % in;
          const int i2 = inner + (s * (j - 1) + i + 1) % in;
          d.triangles.push_back({i1, o1, i2});
        }
      }
    }
  }
  finalize_domain(d);
  return d;
}

TriangulatedDomain load_off(std::istream& is) {
  std::string line;
  int lineno = 0;
  auto next_line = [&]() -> std::string {
    while (std::getline(is, line)) {
      ++lineno;
      const auto h = line.find('#');
      if (h != std::string::npos) line.erase(h);
      if (line.find_first_not_of(" \t\r\n") != std::string::npos) return line;
    }
    throw std::invalid_argument("load_off: unexpected end of file at line " +
                                std::to_string(lineno));
  };

  if (next_line().substr(0, 3) != "OFF")
    throw std::invalid_argument("load_off: missing OFF header at line " +
                                std::to_string(lineno));
  std::istringstream counts(next_line());
  long nv = -1, nf = -1, ne = 0;
  if (!(counts >> nv >> nf >> ne) || nv < 0 || nf < 0)
    throw std::invalid_argument("load_off: malformed counts at line " +
                                std::to_string(lineno));

  TriangulatedDomain d;
  d.vertices.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    std::istringstream v(next_line());
    double x, y, z;
    if (!(v >> x >> y >> z))
      throw std::invalid_argument("load_off: malformed vertex at line " +
                                  std::to_string(lineno));
    if (z != 0.0)
      throw std::invalid_argument("load_off: nonzero third coordinate at line " +
                                  std::to_string(lineno));
    d.vertices.emplace_back(x, y);
  }
  for (long i = 0; i < nf; ++i) {
    std::istringstream f(next_line());
    int deg, a, b, c;
    if (!(f >> deg))
      throw std::invalid_argument("load_off: malformed face at line " +
                                  std::to_string(lineno));
    if (deg != 3)
      throw std::invalid_argument("load_off: non-triangle face at line " +
                                  std::to_string(lineno));
    if (!(f >> a >> b >> c))
      throw std::invalid_argument("load_off: malformed face at line " +
                                  std::to_string(lineno));
    if (a < 0 || b < 0 || c < 0 || a >= nv || b >= nv || c >= nv)
      throw std::invalid_argument("load_off: vertex index out of range at line " +
                                  std::to_string(lineno));
    if (tri_area(d.vertices[a], d.vertices[b], d.vertices[c]) <= 0)
      throw std::invalid_argument("load_off: inverted triangle at line " +
                                  std::to_string(lineno));
    d.triangles.push_back({a, b, c});
  }
  finalize_domain(d);
  return d;
}

TriangulatedDomain load_off_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open mesh file '" + path + "'");
  return load_off(f);
}

void save_off(const TriangulatedDomain& d, std::ostream& os) {
  char buf[96];
  os << "OFF\n" << d.num_vertices() << " " << d.num_triangles() << " 0\n";
  for (const auto& v : d.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g 0\n", v.x(), v.y());
    os << buf;
  }
  for (const auto& t : d.triangles)
    os << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
}

Eigen::Matrix<double, 2, 3> p1_gradient(const TriangulatedDomain& d, int tri) {
  const auto& t = d.triangles.at(tri);
  const Eigen::Vector2d& p0 = d.vertices[t[0]];
  Eigen::Matrix2d E;
  E.col(0) = d.vertices[t[1]] - p0;
  E.col(1) = d.vertices[t[2]] - p0;
  const double det = E.determinant();
  if (std::abs(det) < 1e-14)
    throw std::invalid_argument("p1_gradient: degenerate triangle");
  const Eigen::Matrix2d Einv = E.inverse();
  Eigen::Matrix<double, 2, 3> G;
  // gradient = Einv^T * (f1 - f0, f2 - f0)
  G.col(1) = Einv.row(0).transpose();
  G.col(2) = Einv.row(1).transpose();
  G.col(0) = -G.col(1) - G.col(2);
  return G;
}

IntervalDomain make_interval_mesh(int K) {
  if (K < 1) throw std::invalid_argument("make_interval_mesh: K must be >= 1");
  IntervalDomain d;
  d.params.resize(K + 1);
  for (int i = 0; i <= K; ++i) d.params[i] = static_cast<double>(i) / K;
  return d;
}

BoundaryTrace load_trace_csv(std::istream& is) {
  BoundaryTrace t;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    bool first = true;
    int index = -1;
    while (std::getline(ss, cell, ',')) {
      if (first) {
        index = std::stoi(cell);
        first = false;
      } else {
        row.push_back(std::stod(cell));
      }
    }
    if (index < 0 || row.empty())
      throw std::invalid_argument("load_trace_csv: malformed row at line " +
                                  std::to_string(lineno));
    if (!t.target.empty() && t.target[0].size() != static_cast<long>(row.size()))
      throw std::invalid_argument("load_trace_csv: inconsistent dimension at line " +
                                  std::to_string(lineno));
    t.vertex.push_back(index);
    t.target.push_back(Eigen::Map<Eigen::VectorXd>(row.data(), row.size()));
  }
  return t;
}

void save_trace_csv(const BoundaryTrace& t, std::ostream& os) {
  char buf[48];
  for (size_t i = 0; i < t.vertex.size(); ++i) {
    os << t.vertex[i];
    for (long j = 0; j < t.target[i].size(); ++j) {
      std::snprintf(buf, sizeof buf, ",%.17g", t.target[i][j]);
      os << buf;
    }
    os << "\n";
  }
}

void validate_trace(const BoundaryTrace& t, const std::vector<bool>& boundary) {
  std::vector<bool> seen(boundary.size(), false);
  for (int v : t.vertex) {
    if (v < 0 || v >= static_cast<int>(boundary.size()))
      throw std::invalid_argument("trace: vertex index " + std::to_string(v) +
                                  " out of range");
    if (!boundary[v])
      throw std::invalid_argument("trace: vertex " + std::to_string(v) +
                                  " is not a boundary vertex");
    if (seen[v])
      throw std::invalid_argument("trace: duplicate vertex " + std::to_string(v));
    seen[v] = true;
  }
  for (size_t v = 0; v < boundary.size(); ++v)
    if (boundary[v] && !seen[v])
      throw std::invalid_argument("trace: boundary vertex " + std::to_string(v) +
                                  " has no value");
}

double trace_lipschitz(const BoundaryTrace& t, const TriangulatedDomain& d) {
  std::map<int, int> slot;
  for (size_t i = 0; i < t.vertex.size(); ++i) slot[t.vertex[i]] = static_cast<int>(i);
  double lip = 0;
  for (const auto& e : d.boundary_edges) {
    const auto a = slot.find(e[0]), b = slot.find(e[1]);
    if (a == slot.end() || b == slot.end()) continue;
    const double dom = (d.vertices[e[0]] - d.vertices[e[1]]).norm();
    if (dom <= 0) continue;
    lip = std::max(lip, (t.target[a->second] - t.target[b->second]).norm() / dom);
  }
  return lip;
}

}  // namespace hmap
