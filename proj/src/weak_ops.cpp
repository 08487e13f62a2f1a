#include "wg/weak_ops.hpp"

#include "wg/spd_solver.hpp"

#include <stdexcept>

namespace wg {

WeakFunction WeakFunction::zero(const Mesh& mesh, int degree) {
  WeakFunction u;
  u.degree = degree;
  u.n_cells = mesh.n_cells();
  u.n_edges = mesh.n_edges();
  u.interior = Eigen::VectorXd::Zero(u.n_cells * cell_space_dim(degree));
  u.edge_values = Eigen::VectorXd::Zero(u.n_edges * edge_space_dim(degree));
  u.edge_gradients = Eigen::VectorXd::Zero(u.n_edges * 2 * edge_space_dim(degree));
  return u;
}

Eigen::VectorBlock<Eigen::VectorXd> WeakFunction::cell_block(int c) {
  const int nd = cell_space_dim(degree);
  return interior.segment(c * nd, nd);
}
Eigen::VectorBlock<const Eigen::VectorXd> WeakFunction::cell_block(int c) const {
  const int nd = cell_space_dim(degree);
  return interior.segment(c * nd, nd);
}
Eigen::VectorBlock<Eigen::VectorXd> WeakFunction::edge_value_block(int e) {
  const int nd = edge_space_dim(degree);
  return edge_values.segment(e * nd, nd);
}
Eigen::VectorBlock<const Eigen::VectorXd> WeakFunction::edge_value_block(int e) const {
  const int nd = edge_space_dim(degree);
  return edge_values.segment(e * nd, nd);
}
Eigen::VectorBlock<Eigen::VectorXd> WeakFunction::edge_gradient_block(int e) {
  const int nd = edge_space_dim(degree);
  return edge_gradients.segment(e * 2 * nd, 2 * nd);
}
Eigen::VectorBlock<const Eigen::VectorXd> WeakFunction::edge_gradient_block(int e) const {
  const int nd = edge_space_dim(degree);
  return edge_gradients.segment(e * 2 * nd, 2 * nd);
}

WeakFunction& WeakFunction::operator-=(const WeakFunction& o) {
  if (degree != o.degree || n_cells != o.n_cells || n_edges != o.n_edges)
    throw std::invalid_argument("WeakFunction: mismatched spaces");
  interior -= o.interior;
  edge_values -= o.edge_values;
  edge_gradients -= o.edge_gradients;
  return *this;
}

WeakFunction WeakFunction::operator-(const WeakFunction& o) const {
  WeakFunction out = *this;
  out -= o;
  return out;
}

Eigen::VectorXd gather_local(const WeakFunction& u, const Mesh& mesh, int cell) {
  const int ndc = cell_space_dim(u.degree);
  const int nde = edge_space_dim(u.degree);
  Eigen::VectorXd local(local_dof_count(u.degree));
  local.segment(0, ndc) = u.cell_block(cell);
  const Cell& c = mesh.cells[static_cast<size_t>(cell)];
  for (int le = 0; le < 3; ++le)
    local.segment(ndc + le * nde, nde) = u.edge_value_block(c.e[static_cast<size_t>(le)]);
  for (int le = 0; le < 3; ++le)
    local.segment(ndc + 3 * nde + le * 2 * nde, 2 * nde) =
        u.edge_gradient_block(c.e[static_cast<size_t>(le)]);
  return local;
}

namespace {

// Arclength parameter of a physical point on an edge, measured from v[0].
double edge_param(const Mesh& mesh, int edge, Vec2 p) {
  const Edge& e = mesh.edges[static_cast<size_t>(edge)];
  const Vec2 pa = mesh.vertex_pos(e.v[0]);
  const Vec2 pb = mesh.vertex_pos(e.v[1]);
  return dot(p - pa, (pb - pa) / e.length);
}

}  // namespace

LocalOperators build_local_operators(const Mesh& mesh, int cell, int degree) {
  if (degree < kMinDegree)
    throw std::invalid_argument("build_local_operators: degree must be >= 2");
  const Cell& c = mesh.cells[static_cast<size_t>(cell)];
  if (!(c.area > 0.0)) throw std::runtime_error("build_local_operators: degenerate cell");

  const int nd = cell_space_dim(degree);
  const int nde = edge_space_dim(degree);
  const int nloc = local_dof_count(degree);

  LocalOperators ops{cell, degree, CellBasis(mesh, cell, degree),
                     Eigen::MatrixXd(),      0.0,
                     Eigen::MatrixXd(),      Eigen::MatrixXd(),
                     Eigen::MatrixXd::Zero(nloc, nloc), Eigen::MatrixXd::Zero(nloc, nloc)};
  const CellBasis& basis = ops.basis;

  const auto cell_pts = map_to_cell(cell_quadrature(2 * degree + 2), mesh, cell);
  const int nq = static_cast<int>(cell_pts.size());
  Eigen::MatrixXd val(nq, nd), gx(nq, nd), gy(nq, nd), hxx(nq, nd), hxy(nq, nd), hyy(nq, nd);
  {
    Eigen::VectorXd r0(nd), r1(nd), r2(nd);
    for (int q = 0; q < nq; ++q) {
      basis.values(cell_pts[static_cast<size_t>(q)].p, r0);
      val.row(q) = r0.transpose();
      basis.gradients(cell_pts[static_cast<size_t>(q)].p, r0, r1);
      gx.row(q) = r0.transpose();
      gy.row(q) = r1.transpose();
      basis.hessians(cell_pts[static_cast<size_t>(q)].p, r0, r1, r2);
      hxx.row(q) = r0.transpose();
      hxy.row(q) = r1.transpose();
      hyy.row(q) = r2.transpose();
    }
  }
  Eigen::VectorXd wq(nq);
  for (int q = 0; q < nq; ++q) wq(q) = cell_pts[static_cast<size_t>(q)].w;

  ops.mass = val.transpose() * wq.asDiagonal() * val;
  ops.mass_condition = spd_condition(ops.mass);
  const SpdSolver mass_solver(ops.mass);

  // Volume parts of the moment identities. For the weak Hessian component
  // (a,b) tested against m_i, the interior term is (v0, d_a d_b m_i)_T; for
  // the weak gradient component a it is -(v0, d_a m_i)_T.
  const std::array<const Eigen::MatrixXd*, 3> hess{&hxx, &hxy, &hyy};
  auto hess_ab = [&](int a, int b) -> const Eigen::MatrixXd& {
    return *hess[static_cast<size_t>(a + b)];  // (0,0)->xx, (0,1)/(1,0)->xy, (1,1)->yy
  };

  Eigen::MatrixXd rhs_h = Eigen::MatrixXd::Zero(4 * nd, nloc);
  Eigen::MatrixXd rhs_g = Eigen::MatrixXd::Zero(2 * nd, nloc);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      rhs_h.block((2 * a + b) * nd, 0, nd, nd) = hess_ab(a, b).transpose() * wq.asDiagonal() * val;
    }
    const Eigen::MatrixXd& ga = a == 0 ? gx : gy;
    rhs_g.block(a * nd, 0, nd, nd) = -(ga.transpose() * wq.asDiagonal() * val);
  }

  // Edge contributions.
  const EdgeQuadRule edge_rule = edge_quadrature(2 * degree + 1);
  const int ne = edge_rule.size();
  Eigen::VectorXd cv(nd), cgx(nd), cgy(nd), ev(nde);
  for (int le = 0; le < 3; ++le) {
    const int eid = c.e[static_cast<size_t>(le)];
    const Edge& edge = mesh.edges[static_cast<size_t>(eid)];
    const double sign = mesh.outward_sign(cell, eid);
    const Vec2 out_n = edge.normal * sign;  // outward unit normal of the cell
    const std::array<double, 2> nhat{edge.normal.x, edge.normal.y};
    const std::array<double, 2> that{edge.tangent.x, edge.tangent.y};
    const std::array<double, 2> outn{out_n.x, out_n.y};

    const auto pts = map_to_edge(edge_rule, mesh, eid);
    const int vb_off = nd + le * nde;
    const int vg_off = nd + 3 * nde + le * 2 * nde;

    for (int q = 0; q < ne; ++q) {
      const Vec2 p = pts[static_cast<size_t>(q)].p;
      const double w = pts[static_cast<size_t>(q)].w;
      basis.values(p, cv);
      basis.gradients(p, cgx, cgy);
      const EdgeBasis ebasis(degree, edge.length);
      ebasis.values(edge_param(mesh, eid, p), ev);

      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const Eigen::VectorXd& cgb = b == 0 ? cgx : cgy;
          auto block = rhs_h.block((2 * a + b) * nd, 0, nd, nloc);
          // -<vb, (div phi) . n>: for phi = m_i e_ab this is -vb (d_b m_i) n_a.
          block.block(0, vb_off, nd, nde) -=
              (w * outn[static_cast<size_t>(a)]) * cgb * ev.transpose();
          // +<vg, phi n>: picks component a of vg times m_i n_b.
          block.block(0, vg_off, nd, nde) +=
              (w * outn[static_cast<size_t>(b)] * nhat[static_cast<size_t>(a)]) * cv *
              ev.transpose();
          block.block(0, vg_off + nde, nd, nde) +=
              (w * outn[static_cast<size_t>(b)] * that[static_cast<size_t>(a)]) * cv *
              ev.transpose();
        }
        // +<vb, q . n> for the weak gradient, q = m_i e_a.
        rhs_g.block(a * nd, vb_off, nd, nde) +=
            (w * outn[static_cast<size_t>(a)]) * cv * ev.transpose();
      }

      // Penalty forms: rows of the pointwise trace maps.
      Eigen::RowVectorXd row_val = Eigen::RowVectorXd::Zero(nloc);
      row_val.segment(0, nd) = cv.transpose();
      row_val.segment(vb_off, nde) = -ev.transpose();
      ops.penalty_val += w * row_val.transpose() * row_val;

      Eigen::RowVectorXd row_gx = Eigen::RowVectorXd::Zero(nloc);
      Eigen::RowVectorXd row_gy = Eigen::RowVectorXd::Zero(nloc);
      row_gx.segment(0, nd) = cgx.transpose();
      row_gy.segment(0, nd) = cgy.transpose();
      row_gx.segment(vg_off, nde) = -nhat[0] * ev.transpose();
      row_gy.segment(vg_off, nde) = -nhat[1] * ev.transpose();
      row_gx.segment(vg_off + nde, nde) = -that[0] * ev.transpose();
      row_gy.segment(vg_off + nde, nde) = -that[1] * ev.transpose();
      ops.penalty_grad += w * (row_gx.transpose() * row_gx + row_gy.transpose() * row_gy);
    }
  }

  ops.weak_hessian.resize(4 * nd, nloc);
  ops.weak_gradient.resize(2 * nd, nloc);
  for (int blk = 0; blk < 4; ++blk)
    ops.weak_hessian.block(blk * nd, 0, nd, nloc) =
        mass_solver.solve(rhs_h.block(blk * nd, 0, nd, nloc));
  for (int blk = 0; blk < 2; ++blk)
    ops.weak_gradient.block(blk * nd, 0, nd, nloc) =
        mass_solver.solve(rhs_g.block(blk * nd, 0, nd, nloc));
  return ops;
}

Eigen::VectorXd apply_weak_hessian(const LocalOperators& ops, const Eigen::VectorXd& local_dofs) {
  if (local_dofs.size() != ops.weak_hessian.cols())
    throw std::invalid_argument("apply_weak_hessian: local dof vector has wrong size");
  return ops.weak_hessian * local_dofs;
}

Eigen::VectorXd apply_weak_gradient(const LocalOperators& ops, const Eigen::VectorXd& local_dofs) {
  if (local_dofs.size() != ops.weak_gradient.cols())
    throw std::invalid_argument("apply_weak_gradient: local dof vector has wrong size");
  return ops.weak_gradient * local_dofs;
}

CellProjector::CellProjector(const Mesh& mesh, int cell, int degree, int exactness)
    : basis_(mesh, cell, degree),
      pts_(map_to_cell(cell_quadrature(exactness < 0 ? 2 * degree + 2 : exactness), mesh, cell)) {
  const int nd = basis_.size();
  values_.resize(static_cast<int>(pts_.size()), nd);
  Eigen::VectorXd row(nd);
  for (size_t q = 0; q < pts_.size(); ++q) {
    basis_.values(pts_[q].p, row);
    values_.row(static_cast<int>(q)) = row.transpose();
  }
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(nd, nd);
  for (size_t q = 0; q < pts_.size(); ++q)
    mass += pts_[q].w * values_.row(static_cast<int>(q)).transpose() *
            values_.row(static_cast<int>(q));
  solver_.emplace(mass);
}

Eigen::VectorXd CellProjector::project(const std::function<double(Vec2)>& f) const {
  Eigen::VectorXd moments = Eigen::VectorXd::Zero(basis_.size());
  for (size_t q = 0; q < pts_.size(); ++q)
    moments += pts_[q].w * f(pts_[q].p) * values_.row(static_cast<int>(q)).transpose();
  return solver_->solve(moments);
}

EdgeProjector::EdgeProjector(const Mesh& mesh, int edge, int degree, int exactness)
    : basis_(mesh, edge, degree) {
  const EdgeQuadRule rule = edge_quadrature(exactness < 0 ? 2 * degree + 2 : exactness);
  pts_ = map_to_edge(rule, mesh, edge);
  params_.resize(pts_.size());
  const double len = basis_.length();
  for (size_t q = 0; q < pts_.size(); ++q) params_[q] = rule.points[q] * len;
  const int nd = basis_.size();
  values_.resize(static_cast<int>(pts_.size()), nd);
  Eigen::VectorXd row(nd);
  for (size_t q = 0; q < pts_.size(); ++q) {
    basis_.values(params_[q], row);
    values_.row(static_cast<int>(q)) = row.transpose();
  }
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(nd, nd);
  for (size_t q = 0; q < pts_.size(); ++q)
    mass += pts_[q].w * values_.row(static_cast<int>(q)).transpose() *
            values_.row(static_cast<int>(q));
  solver_.emplace(mass);
}

Eigen::VectorXd EdgeProjector::project(const std::function<double(Vec2)>& f) const {
  Eigen::VectorXd moments = Eigen::VectorXd::Zero(basis_.size());
  for (size_t q = 0; q < pts_.size(); ++q)
    moments += pts_[q].w * f(pts_[q].p) * values_.row(static_cast<int>(q)).transpose();
  return solver_->solve(moments);
}

WeakFunction embed_exact(const ScalarField& u, const Mesh& mesh, int degree) {
  WeakFunction out = WeakFunction::zero(mesh, degree);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    CellProjector proj(mesh, c, degree);
    out.cell_block(c) = proj.project(u.value);
  }
  const int nde = edge_space_dim(degree);
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Edge& edge = mesh.edges[static_cast<size_t>(e)];
    EdgeProjector proj(mesh, e, degree);
    out.edge_value_block(e) = proj.project(u.value);
    auto grad_block = out.edge_gradient_block(e);
    grad_block.segment(0, nde) =
        proj.project([&](Vec2 p) { return dot(u.gradient(p), edge.normal); });
    grad_block.segment(nde, nde) =
        proj.project([&](Vec2 p) { return dot(u.gradient(p), edge.tangent); });
  }
  return out;
}

}  // namespace wg
