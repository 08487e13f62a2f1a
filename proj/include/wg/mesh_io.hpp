#pragma once

#include <stdexcept>
#include <string>

#include "wg/mesh.hpp"

namespace wg {

/// Malformed mesh file; message carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Plain-text format:
///   wgmesh 1
///   vertices N        followed by N lines "x y"
///   cells M           followed by M lines "v0 v1 v2"
///   boundary K        followed by K lines "va vb"
/// Indices 0-based; coordinates written with 17 significant digits so a
/// write/read round trip is bit-exact.
void write_mesh(const Mesh& mesh, const std::string& path);

Mesh read_mesh(const std::string& path);

}  // namespace wg
