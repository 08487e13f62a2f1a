#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>

#include "wg/basis.hpp"
#include "wg/mesh.hpp"
#include "wg/spd_solver.hpp"

namespace wg {

/// Scalar field with enough derivatives to drive embeddings and error
/// measurement. hessian returns (xx, xy, yy).
struct ScalarField {
  std::function<double(Vec2)> value;
  std::function<Vec2(Vec2)> gradient;
  std::function<std::array<double, 3>(Vec2)> hessian;
};

/// Discrete weak function: an independent polynomial per cell (interior),
/// a scalar polynomial per edge (edge_values) and a vector polynomial per
/// edge (edge_gradients). Edge vector blocks are stored in the edge's fixed
/// (normal, tangent) frame, normal block first, so the essential boundary
/// condition on the normal component is a plain coefficient constraint.
struct WeakFunction {
  int degree = kMinDegree;
  int n_cells = 0;
  int n_edges = 0;
  Eigen::VectorXd interior;        // n_cells * cell_space_dim
  Eigen::VectorXd edge_values;     // n_edges * edge_space_dim
  Eigen::VectorXd edge_gradients;  // n_edges * 2 * edge_space_dim

  static WeakFunction zero(const Mesh& mesh, int degree);

  Eigen::VectorBlock<Eigen::VectorXd> cell_block(int c);
  Eigen::VectorBlock<const Eigen::VectorXd> cell_block(int c) const;
  Eigen::VectorBlock<Eigen::VectorXd> edge_value_block(int e);
  Eigen::VectorBlock<const Eigen::VectorXd> edge_value_block(int e) const;
  /// Both components, normal block then tangent block.
  Eigen::VectorBlock<Eigen::VectorXd> edge_gradient_block(int e);
  Eigen::VectorBlock<const Eigen::VectorXd> edge_gradient_block(int e) const;

  WeakFunction& operator-=(const WeakFunction& o);
  WeakFunction operator-(const WeakFunction& o) const;
};

/// Number of local degrees of freedom of one cell: interior block plus three
/// edge value blocks plus three edge gradient blocks.
inline int local_dof_count(int degree) {
  return cell_space_dim(degree) + 9 * edge_space_dim(degree);
}

/// Local coefficient vector of a cell in the order (interior; edge values for
/// local edges 0..2; edge gradients for local edges 0..2).
Eigen::VectorXd gather_local(const WeakFunction& u, const Mesh& mesh, int cell);

/// Per-cell realizations of the discrete weak Hessian and weak gradient as
/// matrices on the local degrees of freedom, together with the cell Gram
/// matrix and the edge penalty forms used by the stabilizers.
///
/// weak_hessian maps local dofs to the coefficients of a matrix-valued cell
/// polynomial, stored as four stacked blocks (xx, xy, yx, yy). weak_gradient
/// maps local dofs to two stacked blocks (x, y).
struct LocalOperators {
  int cell = -1;
  int degree = kMinDegree;
  CellBasis basis;
  Eigen::MatrixXd mass;           // nd x nd cell Gram matrix
  double mass_condition = 0.0;
  Eigen::MatrixXd weak_hessian;   // 4 nd x nloc
  Eigen::MatrixXd weak_gradient;  // 2 nd x nloc
  // sum over the cell's edges of <grad v0 - vg, grad w0 - wg>_e and
  // <v0 - vb, w0 - wb>_e as quadratic forms on the local dofs
  Eigen::MatrixXd penalty_grad;  // nloc x nloc
  Eigen::MatrixXd penalty_val;   // nloc x nloc
};

LocalOperators build_local_operators(const Mesh& mesh, int cell, int degree);

/// Coefficients of the weak Hessian / weak gradient of the local dof vector;
/// throws on dimension mismatch.
Eigen::VectorXd apply_weak_hessian(const LocalOperators& ops, const Eigen::VectorXd& local_dofs);
Eigen::VectorXd apply_weak_gradient(const LocalOperators& ops, const Eigen::VectorXd& local_dofs);

/// L2 projection onto the cell polynomial space.
class CellProjector {
 public:
  /// exactness < 0 selects the default 2*degree+2.
  CellProjector(const Mesh& mesh, int cell, int degree, int exactness = -1);

  const CellBasis& basis() const { return basis_; }
  Eigen::VectorXd project(const std::function<double(Vec2)>& f) const;

 private:
  CellBasis basis_;
  std::vector<QuadPoint> pts_;
  Eigen::MatrixXd values_;  // nq x nd
  std::optional<SpdSolver> solver_;
};

/// L2 projection onto the edge polynomial space.
class EdgeProjector {
 public:
  EdgeProjector(const Mesh& mesh, int edge, int degree, int exactness = -1);

  const EdgeBasis& basis() const { return basis_; }
  Eigen::VectorXd project(const std::function<double(Vec2)>& f) const;

 private:
  EdgeBasis basis_;
  std::vector<QuadPoint> pts_;
  std::vector<double> params_;
  Eigen::MatrixXd values_;
  std::optional<SpdSolver> solver_;
};

/// Projection of a smooth field into the weak space: cell and edge L2
/// projections of the value and edge projections of the gradient.
WeakFunction embed_exact(const ScalarField& u, const Mesh& mesh, int degree);

}  // namespace wg
