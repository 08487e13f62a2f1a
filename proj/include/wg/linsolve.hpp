#pragma once

#include <Eigen/Sparse>

#include <stdexcept>
#include <string>

namespace wg {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SolverKind { direct, conjugate_gradient };

struct SolveReport {
  Eigen::VectorXd solution;
  double rel_residual = 0.0;  // ||Kx - F|| / ||F||, or 0 when F = 0
  int iterations = 0;         // 0 for the direct path
  SolverKind method = SolverKind::direct;
};

/// Solve a sparse symmetric positive definite system. Direct factorization by
/// default; a diagonally preconditioned conjugate gradient (tolerance 1e-12)
/// behind the same interface. Throws SolverError on an indefinite pivot,
/// naming the pivot index.
SolveReport solve_spd(const Eigen::SparseMatrix<double>& matrix, const Eigen::VectorXd& rhs,
                      SolverKind kind = SolverKind::direct);

}  // namespace wg
