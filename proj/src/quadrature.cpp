#include "wg/quadrature.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace wg {

namespace {

void check_exactness(int exactness) {
  if (exactness < 0) throw std::invalid_argument("quadrature: exactness must be >= 0");
  if (exactness > kMaxQuadExactness)
    throw std::invalid_argument("quadrature: exactness " + std::to_string(exactness) +
                                " not supported, maximum is " +
                                std::to_string(kMaxQuadExactness));
}

// Golub-Welsch for the Jacobi weight (1-x)^alpha (1+x)^beta on [-1,1].
// Returns nodes/weights mapped to [0,1] with the weight's total mass scaled
// accordingly.
void gauss_jacobi01(int n, double alpha, double beta, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double k = i;
    const double denom = (2 * k + alpha + beta) * (2 * k + alpha + beta + 2);
    J(i, i) = denom == 0.0 ? (beta - alpha) / (alpha + beta + 2)
                           : (beta * beta - alpha * alpha) / denom;
    if (i + 1 < n) {
      const double m = k + 1;
      const double num = 4 * m * (m + alpha) * (m + beta) * (m + alpha + beta);
      const double den = (2 * m + alpha + beta) * (2 * m + alpha + beta) *
                         (2 * m + alpha + beta + 1) * (2 * m + alpha + beta - 1);
      J(i, i + 1) = J(i + 1, i) = std::sqrt(num / den);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const double mu0 =
      std::pow(2.0, alpha + beta + 1) * std::exp(std::lgamma(alpha + 1) + std::lgamma(beta + 1) -
                                                 std::lgamma(alpha + beta + 2));
  nodes.resize(static_cast<size_t>(n));
  weights.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    nodes[static_cast<size_t>(i)] = 0.5 * (es.eigenvalues()(i) + 1.0);
    const double v = es.eigenvectors()(0, i);
    // Mass on [0,1] with weight ((1-x)/ ... ) absorbs the affine Jacobian.
    weights[static_cast<size_t>(i)] =
        mu0 * v * v / std::pow(2.0, alpha + beta + 1);
  }
}

}  // namespace

CellQuadRule cell_quadrature(int exactness) {
  check_exactness(exactness);
  const int n = exactness / 2 + 1;

  std::vector<double> gx, gw;  // Gauss-Legendre on [0,1]
  gauss_jacobi01(n, 0.0, 0.0, gx, gw);
  std::vector<double> jx, jw;  // Gauss-Jacobi, weight (1-x) on [0,1]
  gauss_jacobi01(n, 1.0, 0.0, jx, jw);

  // Collapsed-square (Duffy) map: (xi, eta) -> (xi (1-eta), eta), Jacobian
  // (1-eta) absorbed by the Jacobi weight.
  CellQuadRule rule;
  rule.exactness = exactness;
  rule.points.reserve(static_cast<size_t>(n * n));
  rule.weights.reserve(static_cast<size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double eta = jx[static_cast<size_t>(j)];
      rule.points.push_back({gx[static_cast<size_t>(i)] * (1.0 - eta), eta});
      rule.weights.push_back(gw[static_cast<size_t>(i)] * jw[static_cast<size_t>(j)]);
    }
  }
  return rule;
}

EdgeQuadRule edge_quadrature(int exactness) {
  check_exactness(exactness);
  const int n = exactness / 2 + 1;
  EdgeQuadRule rule;
  rule.exactness = exactness;
  gauss_jacobi01(n, 0.0, 0.0, rule.points, rule.weights);
  return rule;
}

std::vector<QuadPoint> map_to_cell(const CellQuadRule& rule, const Mesh& mesh, int cell) {
  const auto p = mesh.cell_points(cell);
  const double scale = 2.0 * mesh.cells[static_cast<size_t>(cell)].area;
  std::vector<QuadPoint> out(static_cast<size_t>(rule.size()));
  for (int q = 0; q < rule.size(); ++q) {
    const Vec2 r = rule.points[static_cast<size_t>(q)];
    out[static_cast<size_t>(q)].p = p[0] + (p[1] - p[0]) * r.x + (p[2] - p[0]) * r.y;
    out[static_cast<size_t>(q)].w = rule.weights[static_cast<size_t>(q)] * scale;
  }
  return out;
}

std::vector<QuadPoint> map_to_edge(const EdgeQuadRule& rule, const Mesh& mesh, int edge) {
  const Edge& e = mesh.edges[static_cast<size_t>(edge)];
  const Vec2 pa = mesh.vertex_pos(e.v[0]);
  const Vec2 pb = mesh.vertex_pos(e.v[1]);
  std::vector<QuadPoint> out(static_cast<size_t>(rule.size()));
  for (int q = 0; q < rule.size(); ++q) {
    const double s = rule.points[static_cast<size_t>(q)];
    out[static_cast<size_t>(q)].p = pa + (pb - pa) * s;
    out[static_cast<size_t>(q)].w = rule.weights[static_cast<size_t>(q)] * e.length;
  }
  return out;
}

}  // namespace wg
