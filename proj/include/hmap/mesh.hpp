#pragma once

#include <Eigen/Dense>
#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace hmap {

// Triangulated planar domain with boundary flags and a per-triangle constant
// reference metric g (identity unless set). Element weights are
// sqrt(det g) * euclidean area.
struct TriangulatedDomain {
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<bool> boundary;
  std::vector<Eigen::Matrix2d> metric;
  std::vector<double> area;    // euclidean
  std::vector<double> weight;  // sqrt(det g) * area
  std::vector<std::array<int, 2>> boundary_edges;
  bool nonobtuse = false;
  double max_edge = 0;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int num_edges() const;
  int euler_characteristic() const;
};

// Validates orientation/areas, infers boundary from edge incidence, computes
// weights and the nonobtuse flag. Called by the generators and the loader;
// call it again after editing per-triangle metrics.
void finalize_domain(TriangulatedDomain& d);

// Concentric-ring triangulation of the disk: 2^level rings, ring j carries
// 6j vertices, so the boundary vertex count doubles per level.
TriangulatedDomain make_disk_mesh(double radius, int level);

// OFF text format: "OFF", counts, vertices (x y 0), triangular faces.
TriangulatedDomain load_off(std::istream& is);
TriangulatedDomain load_off_file(const std::string& path);
void save_off(const TriangulatedDomain& d, std::ostream& os);

// P1 gradient operator of a triangle: (value at the 3 vertices) -> constant
// gradient. Exact on affine functions.
Eigen::Matrix<double, 2, 3> p1_gradient(const TriangulatedDomain& d, int tri);

// 1-D chain 0 = s_0 < ... < s_K = 1; endpoints are boundary.
struct IntervalDomain {
  std::vector<double> params;
  int num_vertices() const { return static_cast<int>(params.size()); }
};
IntervalDomain make_interval_mesh(int K);

// Fixed boundary values: target points (normal coordinates) per boundary
// vertex index.
struct BoundaryTrace {
  std::vector<int> vertex;
  std::vector<Eigen::VectorXd> target;

  int dimension() const { return target.empty() ? 0 : static_cast<int>(target[0].size()); }
};

// CSV rows "vertex_index,c1,...,cn".
BoundaryTrace load_trace_csv(std::istream& is);
void save_trace_csv(const BoundaryTrace& t, std::ostream& os);

// Trace must cover exactly the boundary vertex set of the domain.
void validate_trace(const BoundaryTrace& t, const std::vector<bool>& boundary);

// Max ratio of target to domain distance over boundary edges.
double trace_lipschitz(const BoundaryTrace& t, const TriangulatedDomain& d);

}  // namespace hmap
