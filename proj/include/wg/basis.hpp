#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "wg/geometry.hpp"
#include "wg/mesh.hpp"
#include "wg/quadrature.hpp"

namespace wg {

inline constexpr int kMinDegree = 2;
inline constexpr int kMaxDegree = 4;

inline int cell_space_dim(int degree) { return (degree + 1) * (degree + 2) / 2; }
inline int edge_space_dim(int degree) { return degree + 1; }

/// Scaled monomials ((x-xc)/h)^a ((y-yc)/h)^b, a+b <= degree, ordered by
/// total degree and descending x-exponent within a degree.
class CellBasis {
 public:
  CellBasis(int degree, Vec2 center, double scale);
  CellBasis(const Mesh& mesh, int cell, int degree);

  int degree() const { return degree_; }
  int size() const { return cell_space_dim(degree_); }
  Vec2 center() const { return center_; }
  double scale() const { return scale_; }
  std::pair<int, int> exponents(int i) const { return exps_[static_cast<size_t>(i)]; }

  /// Index of the monomial with exponents (a, b); -1 if a+b > degree.
  int index_of(int a, int b) const;

  void values(Vec2 p, Eigen::Ref<Eigen::VectorXd> out) const;
  /// gx, gy: d/dx and d/dy of each basis function.
  void gradients(Vec2 p, Eigen::Ref<Eigen::VectorXd> gx, Eigen::Ref<Eigen::VectorXd> gy) const;
  /// hxx, hxy, hyy: second derivatives of each basis function.
  void hessians(Vec2 p, Eigen::Ref<Eigen::VectorXd> hxx, Eigen::Ref<Eigen::VectorXd> hxy,
                Eigen::Ref<Eigen::VectorXd> hyy) const;

  /// Coefficient-level exact differentiation within the same basis (the
  /// result has lower degree, so it is representable exactly).
  Eigen::VectorXd d_dx(const Eigen::VectorXd& coeffs) const;
  Eigen::VectorXd d_dy(const Eigen::VectorXd& coeffs) const;

  double eval(const Eigen::VectorXd& coeffs, Vec2 p) const;

 private:
  int degree_;
  Vec2 center_;
  double scale_;
  std::vector<std::pair<int, int>> exps_;
};

/// Scaled monomials ((s - L/2)/L)^j of the arclength parameter s in [0, L],
/// j = 0..degree, centered at the edge midpoint.
class EdgeBasis {
 public:
  EdgeBasis(int degree, double length) : degree_(degree), length_(length) {}
  EdgeBasis(const Mesh& mesh, int edge, int degree)
      : EdgeBasis(degree, mesh.edges[static_cast<size_t>(edge)].length) {}

  int degree() const { return degree_; }
  int size() const { return edge_space_dim(degree_); }
  double length() const { return length_; }

  /// Values at arclength parameter s in [0, length].
  void values(double s, Eigen::Ref<Eigen::VectorXd> out) const;

  double eval(const Eigen::VectorXd& coeffs, double s) const;

 private:
  int degree_;
  double length_;
};

/// Gram (mass) matrix of a cell basis under the cell L2 inner product.
Eigen::MatrixXd cell_mass_matrix(const CellBasis& basis, const std::vector<QuadPoint>& pts);

/// Gram matrix of an edge basis under the edge L2 inner product; qs are
/// arclength parameters with weights.
Eigen::MatrixXd edge_mass_matrix(const EdgeBasis& basis, const std::vector<double>& s,
                                 const std::vector<double>& w);

/// 2-norm condition number of a symmetric positive definite matrix.
double spd_condition(const Eigen::MatrixXd& m);

}  // namespace wg
