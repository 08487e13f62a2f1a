#include "wg/basis.hpp"

#include <stdexcept>

namespace wg {

namespace {

// powers[j] = t^j for j = 0..deg, with the convention t^0 = 1.
void fill_powers(double t, int deg, std::vector<double>& powers) {
  powers.resize(static_cast<size_t>(deg) + 1);
  powers[0] = 1.0;
  for (int j = 1; j <= deg; ++j) powers[static_cast<size_t>(j)] = powers[static_cast<size_t>(j - 1)] * t;
}

}  // namespace

CellBasis::CellBasis(int degree, Vec2 center, double scale)
    : degree_(degree), center_(center), scale_(scale) {
  if (degree < 0) throw std::invalid_argument("CellBasis: degree must be >= 0");
  if (!(scale > 0.0)) throw std::invalid_argument("CellBasis: scale must be positive");
  exps_.reserve(static_cast<size_t>(size()));
  for (int d = 0; d <= degree; ++d)
    for (int a = d; a >= 0; --a) exps_.emplace_back(a, d - a);
}

CellBasis::CellBasis(const Mesh& mesh, int cell, int degree)
    : CellBasis(degree, mesh.cells[static_cast<size_t>(cell)].centroid,
                mesh.cells[static_cast<size_t>(cell)].diameter) {}

int CellBasis::index_of(int a, int b) const {
  const int d = a + b;
  if (a < 0 || b < 0 || d > degree_) return -1;
  // Monomials of degree d start at index d(d+1)/2; within the block the
  // x-exponent descends from d.
  return d * (d + 1) / 2 + (d - a);
}

void CellBasis::values(Vec2 p, Eigen::Ref<Eigen::VectorXd> out) const {
  const double X = (p.x - center_.x) / scale_;
  const double Y = (p.y - center_.y) / scale_;
  std::vector<double> px, py;
  fill_powers(X, degree_, px);
  fill_powers(Y, degree_, py);
  for (int i = 0; i < size(); ++i) {
    const auto [a, b] = exps_[static_cast<size_t>(i)];
    out(i) = px[static_cast<size_t>(a)] * py[static_cast<size_t>(b)];
  }
}

void CellBasis::gradients(Vec2 p, Eigen::Ref<Eigen::VectorXd> gx,
                          Eigen::Ref<Eigen::VectorXd> gy) const {
  const double X = (p.x - center_.x) / scale_;
  const double Y = (p.y - center_.y) / scale_;
  std::vector<double> px, py;
  fill_powers(X, degree_, px);
  fill_powers(Y, degree_, py);
  const double inv_h = 1.0 / scale_;
  for (int i = 0; i < size(); ++i) {
    const auto [a, b] = exps_[static_cast<size_t>(i)];
    gx(i) = a > 0 ? a * px[static_cast<size_t>(a - 1)] * py[static_cast<size_t>(b)] * inv_h : 0.0;
    gy(i) = b > 0 ? b * px[static_cast<size_t>(a)] * py[static_cast<size_t>(b - 1)] * inv_h : 0.0;
  }
}

void CellBasis::hessians(Vec2 p, Eigen::Ref<Eigen::VectorXd> hxx, Eigen::Ref<Eigen::VectorXd> hxy,
                         Eigen::Ref<Eigen::VectorXd> hyy) const {
  const double X = (p.x - center_.x) / scale_;
  const double Y = (p.y - center_.y) / scale_;
  std::vector<double> px, py;
  fill_powers(X, degree_, px);
  fill_powers(Y, degree_, py);
  const double inv_h2 = 1.0 / (scale_ * scale_);
  for (int i = 0; i < size(); ++i) {
    const auto [a, b] = exps_[static_cast<size_t>(i)];
    hxx(i) = a > 1 ? a * (a - 1) * px[static_cast<size_t>(a - 2)] * py[static_cast<size_t>(b)] * inv_h2
                   : 0.0;
    hxy(i) = (a > 0 && b > 0)
                 ? a * b * px[static_cast<size_t>(a - 1)] * py[static_cast<size_t>(b - 1)] * inv_h2
                 : 0.0;
    hyy(i) = b > 1 ? b * (b - 1) * px[static_cast<size_t>(a)] * py[static_cast<size_t>(b - 2)] * inv_h2
                   : 0.0;
  }
}

Eigen::VectorXd CellBasis::d_dx(const Eigen::VectorXd& coeffs) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(size());
  for (int i = 0; i < size(); ++i) {
    const auto [a, b] = exps_[static_cast<size_t>(i)];
    if (a == 0) continue;
    out(index_of(a - 1, b)) += coeffs(i) * a / scale_;
  }
  return out;
}

Eigen::VectorXd CellBasis::d_dy(const Eigen::VectorXd& coeffs) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(size());
  for (int i = 0; i < size(); ++i) {
    const auto [a, b] = exps_[static_cast<size_t>(i)];
    if (b == 0) continue;
    out(index_of(a, b - 1)) += coeffs(i) * b / scale_;
  }
  return out;
}

double CellBasis::eval(const Eigen::VectorXd& coeffs, Vec2 p) const {
  Eigen::VectorXd vals(size());
  values(p, vals);
  return coeffs.dot(vals);
}

void EdgeBasis::values(double s, Eigen::Ref<Eigen::VectorXd> out) const {
  const double t = (s - 0.5 * length_) / length_;
  double tp = 1.0;
  for (int j = 0; j <= degree_; ++j) {
    out(j) = tp;
    tp *= t;
  }
}

double EdgeBasis::eval(const Eigen::VectorXd& coeffs, double s) const {
  Eigen::VectorXd vals(size());
  values(s, vals);
  return coeffs.dot(vals);
}

Eigen::MatrixXd cell_mass_matrix(const CellBasis& basis, const std::vector<QuadPoint>& pts) {
  const int nd = basis.size();
  Eigen::MatrixXd vals(static_cast<int>(pts.size()), nd);
  Eigen::VectorXd row(nd);
  for (size_t q = 0; q < pts.size(); ++q) {
    basis.values(pts[q].p, row);
    vals.row(static_cast<int>(q)) = row.transpose() * std::sqrt(pts[q].w);
  }
  return vals.transpose() * vals;
}

Eigen::MatrixXd edge_mass_matrix(const EdgeBasis& basis, const std::vector<double>& s,
                                 const std::vector<double>& w) {
  const int nd = basis.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nd, nd);
  Eigen::VectorXd vals(nd);
  for (size_t q = 0; q < s.size(); ++q) {
    basis.values(s[q], vals);
    m += w[q] * vals * vals.transpose();
  }
  return m;
}

double spd_condition(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

}  // namespace wg
