#include <doctest.h>

#include <stdexcept>

#include <numeric>
#include <random>

#include "wg/mesh.hpp"

using namespace wg;

namespace {

int euler_characteristic(const Mesh& m) { return m.n_vertices() - m.n_edges() + m.n_cells(); }

double total_area(const Mesh& m) {
  double a = 0.0;
  for (const Cell& c : m.cells) a += c.area;
  return a;
}

}  // namespace

TEST_CASE("unit square mesh n=1") {
  const Mesh m = unit_square_mesh(1);
  CHECK(m.n_vertices() == 4);
  CHECK(m.n_cells() == 2);
  CHECK(m.n_edges() == 5);
  CHECK(m.boundary_edges.size() == 4);
  CHECK(m.interior_edges.size() == 1);
  CHECK(m.mesh_size == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(euler_characteristic(m) == 1);
}

TEST_CASE("unit square mesh rejects n=0") {
  CHECK_THROWS_AS(unit_square_mesh(0), std::invalid_argument);
}

TEST_CASE("unit square mesh n=2 counts and Euler relation") {
  const Mesh m = unit_square_mesh(2);
  CHECK(m.n_vertices() == 9);
  CHECK(m.n_cells() == 8);
  CHECK(m.n_edges() == 16);
  CHECK(euler_characteristic(m) == 1);
}

TEST_CASE("mesh geometric invariants") {
  for (int n : {1, 2, 3, 5}) {
    const Mesh m = unit_square_mesh(n);
    CAPTURE(n);
    CHECK(total_area(m) == doctest::Approx(1.0).epsilon(1e-12));
    for (const Cell& c : m.cells) {
      CHECK(c.area > 0.0);
      double dmax = 0.0;
      const auto p = m.cell_points(static_cast<int>(&c - m.cells.data()));
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
          dmax = std::max(dmax, distance(p[static_cast<size_t>(i)], p[static_cast<size_t>(j)]));
      CHECK(c.diameter == doctest::Approx(dmax).epsilon(1e-14));
    }
    for (const Edge& e : m.edges) {
      CHECK(std::abs(norm(e.normal) - 1.0) <= 1e-12);
      if (!e.is_boundary()) {
        const Vec2 d = m.cells[static_cast<size_t>(e.cell_minus)].centroid -
                       m.cells[static_cast<size_t>(e.cell_plus)].centroid;
        CHECK(dot(e.normal, d) > 0.0);
      }
    }
  }
}

TEST_CASE("refine both cells of the two-cell square") {
  const Mesh m = refine(unit_square_mesh(1), {0, 1});
  CHECK(m.n_vertices() == 5);
  CHECK(m.n_cells() == 4);
  CHECK(m.n_edges() == 8);
  CHECK(euler_characteristic(m) == 1);
  CHECK(is_conforming(m));
  CHECK(total_area(m) == doctest::Approx(1.0).epsilon(1e-12));
  // new vertex is the diagonal midpoint
  bool found = false;
  for (const Vertex& v : m.vertices) found |= (v.x == 0.5 && v.y == 0.5);
  CHECK(found);
}

TEST_CASE("refine with empty marked set is the identity") {
  const Mesh m = unit_square_mesh(2);
  const Mesh r = refine(m, {});
  REQUIRE(r.n_cells() == m.n_cells());
  REQUIRE(r.n_vertices() == m.n_vertices());
  REQUIRE(r.n_edges() == m.n_edges());
  for (int c = 0; c < m.n_cells(); ++c) CHECK(r.cells[static_cast<size_t>(c)].v == m.cells[static_cast<size_t>(c)].v);
}

TEST_CASE("closure keeps the mesh conforming") {
  const Mesh m = refine(unit_square_mesh(2), {0});
  CHECK(is_conforming(m));
  CHECK(euler_characteristic(m) == 1);
  for (const Edge& e : m.edges) {
    const bool on_boundary = std::abs(e.midpoint.x) < 1e-14 || std::abs(e.midpoint.x - 1) < 1e-14 ||
                             std::abs(e.midpoint.y) < 1e-14 || std::abs(e.midpoint.y - 1) < 1e-14;
    CHECK(e.is_boundary() == on_boundary);
  }
}

TEST_CASE("marked cells out of range are rejected") {
  CHECK_THROWS_AS(refine(unit_square_mesh(1), {7}), std::invalid_argument);
}

TEST_CASE("newest-vertex bisection keeps the minimum angle") {
  Mesh m = unit_square_mesh(1);
  const double angle0 = min_angle(m);
  for (int level = 0; level < 10; ++level) {
    m = refine_all(m);
    CHECK(min_angle(m) >= angle0 - 1e-12);
  }
  CHECK(is_conforming(m));
  CHECK(total_area(m) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(euler_characteristic(m) == 1);
}

TEST_CASE("random marking keeps conformity and ancestry") {
  std::mt19937 rng(42);
  Mesh m = unit_square_mesh(2);
  for (int round = 0; round < 6; ++round) {
    std::vector<int> marked;
    std::uniform_int_distribution<int> pick(0, m.n_cells() - 1);
    for (int i = 0; i < 1 + m.n_cells() / 4; ++i) marked.push_back(pick(rng));
    const int before = m.n_cells();
    const Mesh r = refine(m, marked);
    CHECK(r.n_cells() > before);
    CHECK(is_conforming(r));
    CHECK(total_area(r) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(euler_characteristic(r) == 1);
    for (const Cell& c : r.cells) {
      CHECK(c.parent >= 0);
      CHECK(c.parent < before);
    }
    m = r;
  }
}

TEST_CASE("refinement is local up to closure") {
  const Mesh m = unit_square_mesh(4);
  const Mesh r = refine(m, {10});
  // one pair bisection plus a bounded closure fan
  CHECK(r.n_cells() >= m.n_cells() + 1);
  CHECK(r.n_cells() <= m.n_cells() + 6);
  int descendants = 0;
  for (const Cell& c : r.cells) descendants += (c.parent == 10);
  CHECK(descendants >= 2);
}
