#pragma once

#include <Eigen/Sparse>

#include <functional>
#include <vector>

#include "wg/mesh.hpp"
#include "wg/weak_ops.hpp"

namespace wg {

/// Global numbering of the raw degrees of freedom (cell interior blocks,
/// then edge value blocks, then edge gradient blocks) and the elimination of
/// the essential boundary conditions: on boundary edges the value block and
/// the normal half of the gradient block are removed.
struct DofMap {
  int degree = kMinDegree;
  int n_cells = 0;
  int n_edges = 0;
  int n_raw = 0;
  int n_free = 0;
  std::vector<int> raw_to_free;  // -1 for eliminated dofs
  std::vector<int> free_to_raw;

  int cell_offset(int c) const { return c * cell_space_dim(degree); }
  int edge_value_offset(int e) const {
    return n_cells * cell_space_dim(degree) + e * edge_space_dim(degree);
  }
  int edge_gradient_offset(int e) const {
    return n_cells * cell_space_dim(degree) + n_edges * edge_space_dim(degree) +
           e * 2 * edge_space_dim(degree);
  }

  /// Raw indices of a cell's local dofs, in gather_local order.
  std::vector<int> local_to_raw(const Mesh& mesh, int cell) const;
};

DofMap build_dof_map(const Mesh& mesh, int degree);

/// Free coefficient vector -> weak function (eliminated dofs are zero).
WeakFunction expand_free_vector(const DofMap& dof_map, const Eigen::VectorXd& x);
/// Restriction of a weak function to the free dofs.
Eigen::VectorXd restrict_to_free(const DofMap& dof_map, const WeakFunction& u);

struct AssemblyOptions {
  int threads = 1;
};

/// Symmetric positive definite system of the discretization: the quadratic
/// form combines the eps^2-weighted weak Hessian product, the weak gradient
/// product and the two edge stabilizers; the load pairs the source with the
/// interior test component.
struct AssembledSystem {
  Eigen::SparseMatrix<double> matrix;  // free x free
  Eigen::VectorXd load;
  DofMap dof_map;
  double eps = 1.0;
};

AssembledSystem assemble(const Mesh& mesh, int degree, double eps,
                         const std::function<double(Vec2)>& source,
                         const AssemblyOptions& options = {});

/// The four scalar contributions of the discrete bilinear forms for a pair of
/// weak functions: eps^2-weighted Hessian term + first stabilizer, gradient
/// term + second stabilizer. total() is the associated norm of a function
/// paired with itself.
struct EnergyParts {
  double biharmonic = 0.0;
  double gradient = 0.0;
  double stab1 = 0.0;
  double stab2 = 0.0;
  double sum() const { return biharmonic + gradient + stab1 + stab2; }
  double total() const { return std::sqrt(sum()); }
};

EnergyParts energy_products(const Mesh& mesh, double eps, const WeakFunction& u,
                            const WeakFunction& v);

/// Per-cell stabilizer values (first, second) of a weak function.
std::pair<double, double> cell_stabilizer(const LocalOperators& ops, const Mesh& mesh, double eps,
                                          const Eigen::VectorXd& local_dofs);

}  // namespace wg
