#include "wg/mesh.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace wg {

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

double signed_area(Vec2 a, Vec2 b, Vec2 c) { return 0.5 * cross(b - a, c - a); }

}  // namespace

Mesh build_mesh(std::vector<Vertex> vertices, const std::vector<std::array<int, 3>>& tris,
                const std::vector<int>* refinement_edges, const std::vector<int>* parents) {
  Mesh mesh;
  mesh.vertices = std::move(vertices);
  const int nv = mesh.n_vertices();

  mesh.cells.resize(tris.size());
  for (size_t c = 0; c < tris.size(); ++c) {
    Cell& cell = mesh.cells[c];
    cell.v = tris[c];
    for (int vid : cell.v) {
      if (vid < 0 || vid >= nv)
        throw std::invalid_argument("build_mesh: cell " + std::to_string(c) +
                                    " references vertex " + std::to_string(vid));
    }
    std::array<Vec2, 3> p = {mesh.vertex_pos(cell.v[0]), mesh.vertex_pos(cell.v[1]),
                             mesh.vertex_pos(cell.v[2])};
    double area = signed_area(p[0], p[1], p[2]);
    if (area < 0.0) {
      std::swap(cell.v[1], cell.v[2]);
      std::swap(p[1], p[2]);
      area = -area;
    }
    if (!(area > 0.0))
      throw std::runtime_error("build_mesh: degenerate cell " + std::to_string(c));
    cell.area = area;
    cell.centroid = (p[0] + p[1] + p[2]) / 3.0;
    cell.diameter = std::max({distance(p[0], p[1]), distance(p[1], p[2]), distance(p[2], p[0])});
    cell.parent = parents ? (*parents)[c] : -1;
  }

  // Edge table: local edge i of a cell is opposite vertex i.
  std::unordered_map<std::uint64_t, int> edge_ids;
  edge_ids.reserve(tris.size() * 2);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    Cell& cell = mesh.cells[static_cast<size_t>(c)];
    for (int i = 0; i < 3; ++i) {
      const int a = cell.v[(i + 1) % 3];
      const int b = cell.v[(i + 2) % 3];
      auto [it, inserted] = edge_ids.try_emplace(edge_key(a, b), mesh.n_edges());
      if (inserted) {
        Edge edge;
        edge.v = {std::min(a, b), std::max(a, b)};
        edge.cell_plus = c;
        mesh.edges.push_back(edge);
      } else {
        Edge& edge = mesh.edges[static_cast<size_t>(it->second)];
        if (edge.cell_minus >= 0)
          throw std::runtime_error("build_mesh: edge shared by more than two cells");
        edge.cell_minus = c;
      }
      cell.e[i] = it->second;
    }
  }

  for (int e = 0; e < mesh.n_edges(); ++e) {
    Edge& edge = mesh.edges[static_cast<size_t>(e)];
    const Vec2 pa = mesh.vertex_pos(edge.v[0]);
    const Vec2 pb = mesh.vertex_pos(edge.v[1]);
    edge.length = distance(pa, pb);
    edge.midpoint = (pa + pb) * 0.5;
    Vec2 n = perp((pb - pa) / edge.length);
    const Vec2 ref = edge.is_boundary()
                         ? edge.midpoint - mesh.cells[static_cast<size_t>(edge.cell_plus)].centroid
                         : mesh.cells[static_cast<size_t>(edge.cell_minus)].centroid -
                               mesh.cells[static_cast<size_t>(edge.cell_plus)].centroid;
    if (dot(n, ref) < 0.0) n = n * -1.0;
    edge.normal = n;
    edge.tangent = {-n.y, n.x};
    (edge.is_boundary() ? mesh.boundary_edges : mesh.interior_edges).push_back(e);
  }

  for (int c = 0; c < mesh.n_cells(); ++c) {
    Cell& cell = mesh.cells[static_cast<size_t>(c)];
    if (refinement_edges) {
      cell.refinement_edge = (*refinement_edges)[static_cast<size_t>(c)];
    } else {
      int best = 0;
      double best_len = -1.0;
      for (int i = 0; i < 3; ++i) {
        const double len = mesh.edges[static_cast<size_t>(cell.e[i])].length;
        if (len > best_len + 1e-14 * cell.diameter) {
          best_len = len;
          best = i;
        }
      }
      cell.refinement_edge = best;
    }
    mesh.mesh_size = std::max(mesh.mesh_size, cell.diameter);
  }

  return mesh;
}

Mesh unit_square_mesh(int n) {
  if (n < 1) throw std::invalid_argument("unit_square_mesh: n must be >= 1");
  std::vector<Vertex> vertices;
  vertices.reserve(static_cast<size_t>((n + 1) * (n + 1)));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});

  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 3>> tris;
  tris.reserve(static_cast<size_t>(2 * n * n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      tris.push_back({a, b, c});
      tris.push_back({a, c, d});
    }
  }
  return build_mesh(std::move(vertices), tris);
}

namespace {

// Working cell for bisection, stored peak-first: the refinement edge is
// (v[1], v[2]) and v[0] is the newest vertex of the cell's ancestry.
struct WorkCell {
  std::array<int, 3> v{};
  int ancestor = -1;
  bool alive = true;
};

class Bisector {
 public:
  explicit Bisector(const Mesh& mesh) {
    vertices_ = mesh.vertices;
    cells_.reserve(mesh.cells.size() * 2);
    for (const Cell& cell : mesh.cells) {
      const int r = cell.refinement_edge;
      WorkCell wc;
      wc.v = {cell.v[static_cast<size_t>(r)], cell.v[static_cast<size_t>((r + 1) % 3)],
              cell.v[static_cast<size_t>((r + 2) % 3)]};
      wc.ancestor = static_cast<int>(cells_.size());
      cells_.push_back(wc);
    }
    for (int c = 0; c < static_cast<int>(cells_.size()); ++c) link_cell(c);
  }

  void bisect_with_closure(int cell) {
    std::vector<int> chain{cell};
    // NVB compatibility chains on longest-edge-initialized meshes are finite;
    // the cap guards against malformed input meshes.
    const size_t cap = cells_.size() * 8 + 64;
    size_t steps = 0;
    while (!chain.empty()) {
      if (++steps > cap) throw std::runtime_error("refine: bisection chain did not terminate");
      const int c = chain.back();
      if (!cells_[static_cast<size_t>(c)].alive) {
        chain.pop_back();
        continue;
      }
      const int partner = neighbor_across_refinement_edge(c);
      if (partner >= 0 && !refines_same_edge(partner, c)) {
        chain.push_back(partner);
        continue;
      }
      split_pair(c, partner);
      chain.pop_back();
    }
  }

  Mesh finish() && {
    std::vector<std::array<int, 3>> tris;
    std::vector<int> refinement_edges;
    std::vector<int> parents;
    for (const WorkCell& wc : cells_) {
      if (!wc.alive) continue;
      tris.push_back(wc.v);
      refinement_edges.push_back(0);  // peak-first: refinement edge opposite v[0]
      parents.push_back(wc.ancestor);
    }
    return build_mesh(std::move(vertices_), tris, &refinement_edges, &parents);
  }

  bool alive(int cell) const { return cells_[static_cast<size_t>(cell)].alive; }

 private:
  std::array<int, 2> refinement_edge(int c) const {
    const WorkCell& wc = cells_[static_cast<size_t>(c)];
    return {wc.v[1], wc.v[2]};
  }

  int neighbor_across_refinement_edge(int c) const {
    const auto [a, b] = refinement_edge(c);
    const auto it = edge_cells_.find(edge_key(a, b));
    if (it == edge_cells_.end()) return -1;
    for (int other : it->second)
      if (other != c) return other;
    return -1;
  }

  bool refines_same_edge(int c, int other) const {
    const auto [a, b] = refinement_edge(c);
    const auto [a2, b2] = refinement_edge(other);
    return edge_key(a, b) == edge_key(a2, b2);
  }

  void link_cell(int c) {
    const WorkCell& wc = cells_[static_cast<size_t>(c)];
    for (int i = 0; i < 3; ++i)
      edge_cells_[edge_key(wc.v[static_cast<size_t>(i)], wc.v[static_cast<size_t>((i + 1) % 3)])]
          .push_back(c);
  }

  void unlink_cell(int c) {
    const WorkCell& wc = cells_[static_cast<size_t>(c)];
    for (int i = 0; i < 3; ++i) {
      auto& list =
          edge_cells_[edge_key(wc.v[static_cast<size_t>(i)], wc.v[static_cast<size_t>((i + 1) % 3)])];
      list.erase(std::remove(list.begin(), list.end(), c), list.end());
    }
  }

  int midpoint_vertex(int a, int b) {
    const auto [it, inserted] = midpoints_.try_emplace(edge_key(a, b), -1);
    if (inserted) {
      const Vertex& pa = vertices_[static_cast<size_t>(a)];
      const Vertex& pb = vertices_[static_cast<size_t>(b)];
      it->second = static_cast<int>(vertices_.size());
      vertices_.push_back({0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)});
    }
    return it->second;
  }

  void split_cell(int c, int m) {
    WorkCell& wc = cells_[static_cast<size_t>(c)];
    const int p = wc.v[0], a = wc.v[1], b = wc.v[2];
    unlink_cell(c);
    wc.alive = false;
    WorkCell child1{{m, p, a}, wc.ancestor, true};
    WorkCell child2{{m, b, p}, wc.ancestor, true};
    const int id1 = static_cast<int>(cells_.size());
    cells_.push_back(child1);
    cells_.push_back(child2);
    link_cell(id1);
    link_cell(id1 + 1);
  }

  // Bisect c (and the compatible partner sharing its refinement edge, if any)
  // at the common midpoint. Conformity is preserved at every step.
  void split_pair(int c, int partner) {
    const auto [a, b] = refinement_edge(c);
    const int m = midpoint_vertex(a, b);
    split_cell(c, m);
    if (partner >= 0) split_cell(partner, m);
  }

  std::vector<Vertex> vertices_;
  std::vector<WorkCell> cells_;
  std::unordered_map<std::uint64_t, std::vector<int>> edge_cells_;
  std::unordered_map<std::uint64_t, int> midpoints_;
};

}  // namespace

Mesh refine(const Mesh& mesh, const std::vector<int>& marked) {
  for (int c : marked) {
    if (c < 0 || c >= mesh.n_cells())
      throw std::invalid_argument("refine: marked cell " + std::to_string(c) + " out of range");
  }
  if (marked.empty()) return mesh;

  std::vector<int> order(marked);
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());

  Bisector bisector(mesh);
  for (int c : order) {
    if (bisector.alive(c)) bisector.bisect_with_closure(c);
  }
  return std::move(bisector).finish();
}

Mesh refine_all(const Mesh& mesh) {
  std::vector<int> all(static_cast<size_t>(mesh.n_cells()));
  for (int c = 0; c < mesh.n_cells(); ++c) all[static_cast<size_t>(c)] = c;
  return refine(mesh, all);
}

bool is_conforming(const Mesh& mesh, double tol) {
  for (const Edge& edge : mesh.edges) {
    const Vec2 pa = mesh.vertex_pos(edge.v[0]);
    const Vec2 pb = mesh.vertex_pos(edge.v[1]);
    const Vec2 d = pb - pa;
    const double len2 = dot(d, d);
    for (int v = 0; v < mesh.n_vertices(); ++v) {
      if (v == edge.v[0] || v == edge.v[1]) continue;
      const Vec2 p = mesh.vertex_pos(v);
      const double t = dot(p - pa, d) / len2;
      if (t <= 0.0 || t >= 1.0) continue;
      const Vec2 foot = pa + d * t;
      if (distance(foot, p) < tol * edge.length) return false;
    }
  }
  return true;
}

double min_angle(const Mesh& mesh) {
  double best = 4.0;  // > pi
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto p = mesh.cell_points(c);
    for (int i = 0; i < 3; ++i) {
      const Vec2 u = p[static_cast<size_t>((i + 1) % 3)] - p[static_cast<size_t>(i)];
      const Vec2 w = p[static_cast<size_t>((i + 2) % 3)] - p[static_cast<size_t>(i)];
      best = std::min(best, std::atan2(std::abs(cross(u, w)), dot(u, w)));
    }
  }
  return best;
}

}  // namespace wg
