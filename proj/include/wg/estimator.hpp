#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wg/assembly.hpp"
#include "wg/mesh.hpp"
#include "wg/weak_ops.hpp"

namespace wg {

/// Mesh-dependent estimator weights. For each cell, min(h_T^2/eps, h_T); for
/// each edge the corresponding 3/2- and 1/2-power weights built from the edge
/// length, satisfying edge_second = edge_first / h_e.
struct Weights {
  std::vector<double> cell;
  std::vector<double> edge_first;
  std::vector<double> edge_second;
};

Weights compute_weights(const Mesh& mesh, double eps);

/// Squared indicator components of one cell. stab1/stab2 are the per-cell
/// stabilizer values (already quadratic). total() is the local indicator.
struct CellIndicator {
  double osc_sq = 0.0;          // weighted data oscillation ||f - f_h||
  double residual_sq = 0.0;     // weighted interior residual
  double flux_jump_sq = 0.0;    // weighted first-order jump over the cell's edges
  double moment_jump_sq = 0.0;  // weighted second-order jump over the cell's edges
  double stab1 = 0.0;
  double stab2 = 0.0;
  double total_sq() const {
    return osc_sq + residual_sq + flux_jump_sq + moment_jump_sq + stab1 + stab2;
  }
  double total() const { return std::sqrt(total_sq()); }
};

struct ErrorIndicators {
  std::vector<CellIndicator> cells;
  double total_sq = 0.0;
  double total = 0.0;  // global estimator

  std::vector<double> cell_totals() const;
};

struct EstimatorOptions {
  /// Include boundary edges in the jump terms using the trace itself as the
  /// jump. Off by default: interior-only is the conservative reading when
  /// the test functions vanish on the boundary.
  bool include_boundary_jumps = false;
  int threads = 1;
};

/// Interior residual of one cell: coefficients of
/// f_h - div div (eps^2 weak Hessian) + div (weak gradient) in the cell
/// basis, with the L2 norms needed by the indicators. Derivatives of the
/// weak fields are exact coefficient-level operations; f_h is the degree-k
/// cell projection of the source.
struct ElementResidual {
  Eigen::VectorXd coeffs;
  double norm = 0.0;      // ||R_T||
  double osc_norm = 0.0;  // ||f - f_h||
};

ElementResidual element_residual(const Mesh& mesh, const LocalOperators& ops,
                                 const Eigen::VectorXd& local_dofs,
                                 const std::function<double(Vec2)>& source, double eps);

/// Cell polynomial fields entering the jump terms: the eps^2-weighted weak
/// Hessian blocks (the moment), the weak gradient blocks, and the flux
/// div(eps^2 weak Hessian) - weak gradient.
struct CellDerivedFields {
  CellBasis basis;
  Eigen::VectorXd moment;  // 4 nd blocks (xx, xy, yx, yy), eps^2 included
  Eigen::VectorXd grad;    // 2 nd blocks
  Eigen::VectorXd flux_x;  // nd
  Eigen::VectorXd flux_y;  // nd
};

CellDerivedFields derive_cell_fields(const LocalOperators& ops, const Eigen::VectorXd& local_dofs,
                                     double eps);

/// Squared L2 edge norms of the two jumps across an edge, traces taken with
/// the edge's fixed normal (plus side minus minus side). A null minus side
/// uses the plus trace itself as the jump.
std::pair<double, double> edge_jump_norms_sq(const Mesh& mesh, int edge,
                                             const CellDerivedFields& plus,
                                             const CellDerivedFields* minus);

/// L2 edge norms of the two jump fields of an interior edge: the jump of the
/// effective flux (div(eps^2 weak Hessian) - weak gradient) . n and the jump
/// of the moment eps^2 (weak Hessian) n. Throws for boundary edges unless
/// the boundary policy is enabled, in which case the trace itself is used.
std::pair<double, double> edge_jumps(const Mesh& mesh, int edge, const WeakFunction& u, double eps,
                                     const EstimatorOptions& options = {});

ErrorIndicators estimate(const Mesh& mesh, const WeakFunction& u,
                         const std::function<double(Vec2)>& source, double eps,
                         const EstimatorOptions& options = {});

/// CSV dump: cell_id,eta_T1,eta_T2,eta_e1,eta_e2,s1,s2,eta_T with the jump
/// and residual columns as square roots of the squared components.
void write_indicators_csv(const ErrorIndicators& indicators, const std::string& path);

/// Discrete and field error measures against a known exact solution.
struct TrueErrorReport {
  std::optional<double> discrete_error;   // triple-bar norm of (embedded exact - u_h)
  std::optional<double> field_error_sq;   // eps^2 |D2u - weak Hessian|^2 + |grad u - weak grad|^2
  std::optional<double> effectivity;      // estimator / sqrt(field_error_sq + stabilizers)
  double stabilizer_sum = 0.0;
};

TrueErrorReport true_error(const Mesh& mesh, const WeakFunction& u_h, const ScalarField& exact,
                           bool has_exact, double eps, double estimator_total);

}  // namespace wg
