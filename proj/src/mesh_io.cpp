#include "wg/mesh_io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

namespace wg {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-empty line, or nullopt at EOF.
  bool next(std::string& out) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      if (line.find_first_not_of(" \t\r\n") != std::string::npos) {
        out = line;
        return true;
      }
    }
    return false;
  }

  int line() const { return line_; }

 private:
  std::istream& in_;
  int line_ = 0;
};

}  // namespace

void write_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_mesh: cannot open " + path);
  out << "wgmesh 1\n";
  out << "vertices " << mesh.n_vertices() << "\n";
  for (const Vertex& v : mesh.vertices) out << fmt17(v.x) << " " << fmt17(v.y) << "\n";
  out << "cells " << mesh.n_cells() << "\n";
  for (const Cell& c : mesh.cells) out << c.v[0] << " " << c.v[1] << " " << c.v[2] << "\n";
  out << "boundary " << mesh.boundary_edges.size() << "\n";
  for (int e : mesh.boundary_edges) {
    const Edge& edge = mesh.edges[static_cast<size_t>(e)];
    out << edge.v[0] << " " << edge.v[1] << "\n";
  }
  if (!out) throw std::runtime_error("write_mesh: write failed for " + path);
}

Mesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_mesh: cannot open " + path);
  LineReader reader(in);
  std::string line;

  if (!reader.next(line)) throw ParseError(reader.line(), "empty file, missing 'wgmesh' header");
  {
    std::istringstream ss(line);
    std::string magic;
    int version = 0;
    if (!(ss >> magic >> version) || magic != "wgmesh" || version != 1)
      throw ParseError(reader.line(), "expected header 'wgmesh 1'");
  }

  auto section_count = [&](const char* name) {
    if (!reader.next(line))
      throw ParseError(reader.line(), std::string("unexpected end of file, missing '") + name +
                                          "' section");
    std::istringstream ss(line);
    std::string key;
    long count = -1;
    if (!(ss >> key >> count) || key != name || count < 0)
      throw ParseError(reader.line(), std::string("expected '") + name + " <count>'");
    return count;
  };

  const long nv = section_count("vertices");
  std::vector<Vertex> vertices;
  vertices.reserve(static_cast<size_t>(nv));
  for (long i = 0; i < nv; ++i) {
    if (!reader.next(line))
      throw ParseError(reader.line(), "unexpected end of file inside 'vertices' section");
    std::istringstream ss(line);
    Vertex v;
    if (!(ss >> v.x >> v.y)) throw ParseError(reader.line(), "expected 'x y'");
    if (!std::isfinite(v.x) || !std::isfinite(v.y))
      throw ParseError(reader.line(), "non-finite vertex coordinate");
    vertices.push_back(v);
  }

  const long nc = section_count("cells");
  std::vector<std::array<int, 3>> tris;
  tris.reserve(static_cast<size_t>(nc));
  for (long i = 0; i < nc; ++i) {
    if (!reader.next(line))
      throw ParseError(reader.line(), "unexpected end of file inside 'cells' section");
    std::istringstream ss(line);
    std::array<int, 3> t{};
    if (!(ss >> t[0] >> t[1] >> t[2])) throw ParseError(reader.line(), "expected 'v0 v1 v2'");
    tris.push_back(t);
  }

  const long nb = section_count("boundary");
  std::set<std::pair<int, int>> declared;
  for (long i = 0; i < nb; ++i) {
    if (!reader.next(line))
      throw ParseError(reader.line(), "unexpected end of file inside 'boundary' section");
    std::istringstream ss(line);
    int a = 0, b = 0;
    if (!(ss >> a >> b)) throw ParseError(reader.line(), "expected 'va vb'");
    declared.emplace(std::min(a, b), std::max(a, b));
  }

  Mesh mesh = build_mesh(std::move(vertices), tris);

  std::set<std::pair<int, int>> actual;
  for (int e : mesh.boundary_edges) {
    const Edge& edge = mesh.edges[static_cast<size_t>(e)];
    actual.emplace(edge.v[0], edge.v[1]);
  }
  if (declared != actual)
    throw ParseError(reader.line(),
                     "boundary section does not match the boundary derived from cells");
  return mesh;
}

}  // namespace wg
