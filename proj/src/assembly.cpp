#include "wg/assembly.hpp"

#include <stdexcept>

#include "wg/parallel.hpp"
#include "wg/quadrature.hpp"

namespace wg {

std::vector<int> DofMap::local_to_raw(const Mesh& mesh, int cell) const {
  const int ndc = cell_space_dim(degree);
  const int nde = edge_space_dim(degree);
  std::vector<int> raw(static_cast<size_t>(local_dof_count(degree)));
  int k = 0;
  for (int i = 0; i < ndc; ++i) raw[static_cast<size_t>(k++)] = cell_offset(cell) + i;
  const Cell& c = mesh.cells[static_cast<size_t>(cell)];
  for (int le = 0; le < 3; ++le) {
    const int off = edge_value_offset(c.e[static_cast<size_t>(le)]);
    for (int i = 0; i < nde; ++i) raw[static_cast<size_t>(k++)] = off + i;
  }
  for (int le = 0; le < 3; ++le) {
    const int off = edge_gradient_offset(c.e[static_cast<size_t>(le)]);
    for (int i = 0; i < 2 * nde; ++i) raw[static_cast<size_t>(k++)] = off + i;
  }
  return raw;
}

DofMap build_dof_map(const Mesh& mesh, int degree) {
  if (degree < kMinDegree) throw std::invalid_argument("build_dof_map: degree must be >= 2");
  DofMap map;
  map.degree = degree;
  map.n_cells = mesh.n_cells();
  map.n_edges = mesh.n_edges();
  const int nde = edge_space_dim(degree);
  map.n_raw = map.n_cells * cell_space_dim(degree) + map.n_edges * 3 * nde;

  std::vector<bool> eliminated(static_cast<size_t>(map.n_raw), false);
  for (int e : mesh.boundary_edges) {
    const int voff = map.edge_value_offset(e);
    for (int i = 0; i < nde; ++i) eliminated[static_cast<size_t>(voff + i)] = true;
    // Only the normal component of the edge gradient is constrained; the
    // block stores the normal half first.
    const int goff = map.edge_gradient_offset(e);
    for (int i = 0; i < nde; ++i) eliminated[static_cast<size_t>(goff + i)] = true;
  }

  map.raw_to_free.assign(static_cast<size_t>(map.n_raw), -1);
  for (int r = 0; r < map.n_raw; ++r) {
    if (!eliminated[static_cast<size_t>(r)]) {
      map.raw_to_free[static_cast<size_t>(r)] = map.n_free++;
      map.free_to_raw.push_back(r);
    }
  }
  return map;
}

WeakFunction expand_free_vector(const DofMap& dof_map, const Eigen::VectorXd& x) {
  if (x.size() != dof_map.n_free)
    throw std::invalid_argument("expand_free_vector: wrong vector size");
  WeakFunction u;
  u.degree = dof_map.degree;
  u.n_cells = dof_map.n_cells;
  u.n_edges = dof_map.n_edges;
  const int ndc = dof_map.n_cells * cell_space_dim(dof_map.degree);
  const int ndv = dof_map.n_edges * edge_space_dim(dof_map.degree);
  Eigen::VectorXd raw = Eigen::VectorXd::Zero(dof_map.n_raw);
  for (int i = 0; i < dof_map.n_free; ++i) raw(dof_map.free_to_raw[static_cast<size_t>(i)]) = x(i);
  u.interior = raw.segment(0, ndc);
  u.edge_values = raw.segment(ndc, ndv);
  u.edge_gradients = raw.segment(ndc + ndv, dof_map.n_raw - ndc - ndv);
  return u;
}

Eigen::VectorXd restrict_to_free(const DofMap& dof_map, const WeakFunction& u) {
  if (u.degree != dof_map.degree || u.n_cells != dof_map.n_cells || u.n_edges != dof_map.n_edges)
    throw std::invalid_argument("restrict_to_free: function does not match dof map");
  Eigen::VectorXd raw(dof_map.n_raw);
  raw << u.interior, u.edge_values, u.edge_gradients;
  Eigen::VectorXd x(dof_map.n_free);
  for (int i = 0; i < dof_map.n_free; ++i) x(i) = raw(dof_map.free_to_raw[static_cast<size_t>(i)]);
  return x;
}

namespace {

// Element quadratic form: eps^2 (Hessian' M Hessian + stabilizer 1) +
// gradient' M gradient + stabilizer 2, symmetrized against rounding.
Eigen::MatrixXd element_matrix(const LocalOperators& ops, const Mesh& mesh, double eps) {
  const int nd = cell_space_dim(ops.degree);
  const int nloc = local_dof_count(ops.degree);
  const double h = mesh.cells[static_cast<size_t>(ops.cell)].diameter;
  Eigen::MatrixXd ke = Eigen::MatrixXd::Zero(nloc, nloc);
  for (int blk = 0; blk < 4; ++blk) {
    const auto b = ops.weak_hessian.block(blk * nd, 0, nd, nloc);
    ke += (eps * eps) * (b.transpose() * ops.mass * b);
  }
  for (int blk = 0; blk < 2; ++blk) {
    const auto b = ops.weak_gradient.block(blk * nd, 0, nd, nloc);
    ke += b.transpose() * ops.mass * b;
  }
  ke += (eps * eps / h) * ops.penalty_grad + (eps * eps / (h * h * h)) * ops.penalty_val;
  ke += h * ops.penalty_grad + (1.0 / h) * ops.penalty_val;
  return 0.5 * (ke + ke.transpose());
}

}  // namespace

AssembledSystem assemble(const Mesh& mesh, int degree, double eps,
                         const std::function<double(Vec2)>& source,
                         const AssemblyOptions& options) {
  if (!(eps > 0.0)) throw std::invalid_argument("assemble: eps must be positive");
  AssembledSystem sys;
  sys.eps = eps;
  sys.dof_map = build_dof_map(mesh, degree);

  const int ncells = mesh.n_cells();
  const int nloc = local_dof_count(degree);
  const int ndc = cell_space_dim(degree);
  const CellQuadRule load_rule = cell_quadrature(2 * degree + 2);

  std::vector<Eigen::MatrixXd> kes(static_cast<size_t>(ncells));
  std::vector<Eigen::VectorXd> fes(static_cast<size_t>(ncells));
  parallel_for(ncells, options.threads, [&](int c) {
    const LocalOperators ops = build_local_operators(mesh, c, degree);
    kes[static_cast<size_t>(c)] = element_matrix(ops, mesh, eps);
    Eigen::VectorXd fe = Eigen::VectorXd::Zero(ndc);
    Eigen::VectorXd vals(ndc);
    for (const QuadPoint& qp : map_to_cell(load_rule, mesh, c)) {
      ops.basis.values(qp.p, vals);
      fe += qp.w * source(qp.p) * vals;
    }
    fes[static_cast<size_t>(c)] = fe;
  });

  // Serial scatter in ascending (cell, local index) order keeps the assembly
  // bit-deterministic.
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<size_t>(ncells) * static_cast<size_t>(nloc) *
                   static_cast<size_t>(nloc) / 2);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(sys.dof_map.n_free);
  for (int c = 0; c < ncells; ++c) {
    const std::vector<int> raw = sys.dof_map.local_to_raw(mesh, c);
    std::vector<int> free(raw.size());
    for (size_t i = 0; i < raw.size(); ++i)
      free[i] = sys.dof_map.raw_to_free[static_cast<size_t>(raw[i])];
    const Eigen::MatrixXd& ke = kes[static_cast<size_t>(c)];
    for (int i = 0; i < nloc; ++i) {
      if (free[static_cast<size_t>(i)] < 0) continue;
      for (int j = 0; j < nloc; ++j) {
        if (free[static_cast<size_t>(j)] < 0) continue;
        triplets.emplace_back(free[static_cast<size_t>(i)], free[static_cast<size_t>(j)],
                              ke(i, j));
      }
    }
    for (int i = 0; i < ndc; ++i)
      load(free[static_cast<size_t>(i)]) += fes[static_cast<size_t>(c)](i);
  }

  sys.matrix.resize(sys.dof_map.n_free, sys.dof_map.n_free);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.matrix.makeCompressed();
  sys.load = std::move(load);
  return sys;
}

EnergyParts energy_products(const Mesh& mesh, double eps, const WeakFunction& u,
                            const WeakFunction& v) {
  if (u.degree != v.degree || u.n_cells != v.n_cells || u.n_edges != v.n_edges)
    throw std::invalid_argument("energy_products: mismatched weak functions");
  if (u.n_cells != mesh.n_cells() || u.n_edges != mesh.n_edges())
    throw std::invalid_argument("energy_products: functions do not live on this mesh");

  const int nd = cell_space_dim(u.degree);
  EnergyParts parts;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const LocalOperators ops = build_local_operators(mesh, c, u.degree);
    const Eigen::VectorXd lu = gather_local(u, mesh, c);
    const Eigen::VectorXd lv = gather_local(v, mesh, c);
    const Eigen::VectorXd hu = ops.weak_hessian * lu;
    const Eigen::VectorXd hv = ops.weak_hessian * lv;
    const Eigen::VectorXd gu = ops.weak_gradient * lu;
    const Eigen::VectorXd gv = ops.weak_gradient * lv;
    for (int blk = 0; blk < 4; ++blk)
      parts.biharmonic +=
          eps * eps * hu.segment(blk * nd, nd).dot(ops.mass * hv.segment(blk * nd, nd));
    for (int blk = 0; blk < 2; ++blk)
      parts.gradient += gu.segment(blk * nd, nd).dot(ops.mass * gv.segment(blk * nd, nd));
    const double h = mesh.cells[static_cast<size_t>(c)].diameter;
    const double pg = lu.dot(ops.penalty_grad * lv);
    const double pv = lu.dot(ops.penalty_val * lv);
    parts.stab1 += eps * eps * (pg / h + pv / (h * h * h));
    parts.stab2 += h * pg + pv / h;
  }
  return parts;
}

std::pair<double, double> cell_stabilizer(const LocalOperators& ops, const Mesh& mesh, double eps,
                                          const Eigen::VectorXd& local_dofs) {
  const double h = mesh.cells[static_cast<size_t>(ops.cell)].diameter;
  const double pg = local_dofs.dot(ops.penalty_grad * local_dofs);
  const double pv = local_dofs.dot(ops.penalty_val * local_dofs);
  return {eps * eps * (pg / h + pv / (h * h * h)), h * pg + pv / h};
}

}  // namespace wg
