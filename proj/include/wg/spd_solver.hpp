#pragma once

#include <Eigen/Dense>

#include <stdexcept>

namespace wg {

/// Dense SPD solver for the small local Gram systems. The scaled-monomial
/// Gram matrix reaches condition numbers near 1e8 on thin shape-regular cells
/// at degree 4, which double-precision Cholesky cannot solve to the accuracy
/// the operator oracles demand; factoring and solving in extended precision
/// keeps the forward error far below 1e-9 at negligible cost for these sizes.
class SpdSolver {
 public:
  using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

  explicit SpdSolver(const Eigen::MatrixXd& m) {
    matrix_ = m.cast<long double>();
    llt_.compute(matrix_);
    if (llt_.info() != Eigen::Success)
      throw std::runtime_error("SpdSolver: matrix not positive definite");
  }

  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const {
    LongMatrix x = llt_.solve(rhs.cast<long double>());
    x += llt_.solve(rhs.cast<long double>() - matrix_ * x);
    return x.cast<double>();
  }

 private:
  LongMatrix matrix_;
  Eigen::LLT<LongMatrix> llt_;
};

}  // namespace wg
