#pragma once

#include <array>
#include <vector>

#include "wg/geometry.hpp"

namespace wg {

struct Vertex {
  double x = 0.0;
  double y = 0.0;
  Vec2 pos() const { return {x, y}; }
};

/// Triangle cell. Vertices are counterclockwise; local edge i is the edge
/// opposite vertex i, i.e. edge 0 = (v1,v2), edge 1 = (v2,v0), edge 2 = (v0,v1).
struct Cell {
  std::array<int, 3> v{};  // vertex ids, CCW
  std::array<int, 3> e{};  // edge ids, e[i] opposite v[i]
  int refinement_edge = 0;  // local edge index used by newest-vertex bisection
  int parent = -1;          // ancestor cell id in the mesh this one was refined from
  double diameter = 0.0;    // longest edge length
  double area = 0.0;
  Vec2 centroid{};
};

/// Oriented mesh edge. The stored normal is the unit vector pointing from
/// cell_plus into cell_minus; for boundary edges (cell_minus < 0) it points
/// out of the domain. tangent = normal rotated by +90 degrees.
struct Edge {
  std::array<int, 2> v{};
  int cell_plus = -1;
  int cell_minus = -1;
  Vec2 normal{};
  Vec2 tangent{};
  double length = 0.0;
  Vec2 midpoint{};

  bool is_boundary() const { return cell_minus < 0; }
};

/// Conforming triangulation. Immutable after construction; refine() returns
/// a new mesh.
struct Mesh {
  std::vector<Vertex> vertices;
  std::vector<Cell> cells;
  std::vector<Edge> edges;
  std::vector<int> boundary_edges;
  std::vector<int> interior_edges;
  double mesh_size = 0.0;  // max cell diameter

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }

  Vec2 vertex_pos(int v) const { return vertices[static_cast<size_t>(v)].pos(); }

  std::array<Vec2, 3> cell_points(int c) const {
    const Cell& cell = cells[static_cast<size_t>(c)];
    return {vertex_pos(cell.v[0]), vertex_pos(cell.v[1]), vertex_pos(cell.v[2])};
  }

  /// Outward-normal sign of edge e seen from cell c: +1 if the stored edge
  /// normal is outward for c, -1 otherwise.
  double outward_sign(int c, int e) const {
    return edges[static_cast<size_t>(e)].cell_plus == c ? 1.0 : -1.0;
  }
};

/// Build a mesh from raw vertices and CCW vertex triples. Cells with negative
/// signed area are reoriented; zero-area cells and edges shared by more than
/// two cells are rejected. Refinement edges are initialized to the longest
/// edge (ties broken by smallest local index) unless refinement_edges is
/// given (one local index per cell).
Mesh build_mesh(std::vector<Vertex> vertices, const std::vector<std::array<int, 3>>& tris,
                const std::vector<int>* refinement_edges = nullptr,
                const std::vector<int>* parents = nullptr);

/// Uniform triangulation of (0,1)^2 with 2*n^2 right triangles.
Mesh unit_square_mesh(int n);

/// Newest-vertex bisection of the marked cells plus conformity closure.
/// Every marked cell is bisected at least once; the result is conforming.
Mesh refine(const Mesh& mesh, const std::vector<int>& marked);

/// Refine every cell once (plus closure).
Mesh refine_all(const Mesh& mesh);

/// True when no vertex lies strictly inside another edge (no hanging nodes).
bool is_conforming(const Mesh& mesh, double tol = 1e-12);

/// Smallest interior angle over all cells, in radians.
double min_angle(const Mesh& mesh);

}  // namespace wg
