#pragma once

#include <vector>

#include "wg/geometry.hpp"
#include "wg/mesh.hpp"

namespace wg {

/// Quadrature node in physical coordinates.
struct QuadPoint {
  Vec2 p;
  double w = 0.0;
};

/// Rule on the reference triangle {(0,0),(1,0),(0,1)}; weights sum to 1/2.
struct CellQuadRule {
  int exactness = 0;
  std::vector<Vec2> points;
  std::vector<double> weights;
  int size() const { return static_cast<int>(points.size()); }
};

/// Rule on the reference segment [0,1]; weights sum to 1.
struct EdgeQuadRule {
  int exactness = 0;
  std::vector<double> points;
  std::vector<double> weights;
  int size() const { return static_cast<int>(points.size()); }
};

inline constexpr int kMaxQuadExactness = 40;

/// Conical-product rule (Gauss-Legendre x Gauss-Jacobi) exact for all
/// bivariate polynomials of total degree <= exactness.
CellQuadRule cell_quadrature(int exactness);

/// Gauss-Legendre, exact for univariate degree <= exactness.
EdgeQuadRule edge_quadrature(int exactness);

std::vector<QuadPoint> map_to_cell(const CellQuadRule& rule, const Mesh& mesh, int cell);
std::vector<QuadPoint> map_to_edge(const EdgeQuadRule& rule, const Mesh& mesh, int edge);

}  // namespace wg
