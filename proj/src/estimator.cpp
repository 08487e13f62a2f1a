#include "wg/estimator.hpp"

#include <fstream>

#include "wg/parallel.hpp"
#include "wg/quadrature.hpp"

namespace wg {

Weights compute_weights(const Mesh& mesh, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("compute_weights: eps must be positive");
  Weights w;
  w.cell.resize(static_cast<size_t>(mesh.n_cells()));
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const double h = mesh.cells[static_cast<size_t>(c)].diameter;
    w.cell[static_cast<size_t>(c)] = std::min(h * h / eps, h);
  }
  w.edge_first.resize(static_cast<size_t>(mesh.n_edges()));
  w.edge_second.resize(static_cast<size_t>(mesh.n_edges()));
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const double h = mesh.edges[static_cast<size_t>(e)].length;
    const double rt = std::sqrt(h);
    w.edge_first[static_cast<size_t>(e)] = std::min(h * rt / eps, rt);
    w.edge_second[static_cast<size_t>(e)] = std::min(rt / eps, 1.0 / rt);
  }
  return w;
}

std::vector<double> ErrorIndicators::cell_totals() const {
  std::vector<double> out(cells.size());
  for (size_t c = 0; c < cells.size(); ++c) out[c] = cells[c].total();
  return out;
}

CellDerivedFields derive_cell_fields(const LocalOperators& ops, const Eigen::VectorXd& local_dofs,
                                     double eps) {
  const int nd = ops.basis.size();
  CellDerivedFields f{ops.basis, (eps * eps) * (ops.weak_hessian * local_dofs),
                      ops.weak_gradient * local_dofs, Eigen::VectorXd(), Eigen::VectorXd()};
  const auto mxx = f.moment.segment(0, nd), mxy = f.moment.segment(nd, nd),
             myx = f.moment.segment(2 * nd, nd), myy = f.moment.segment(3 * nd, nd);
  f.flux_x = f.basis.d_dx(mxx) + f.basis.d_dy(mxy) - f.grad.segment(0, nd);
  f.flux_y = f.basis.d_dx(myx) + f.basis.d_dy(myy) - f.grad.segment(nd, nd);
  return f;
}

namespace {

Vec2 moment_times_normal(const CellDerivedFields& f, Vec2 p, Vec2 n) {
  const int nd = f.basis.size();
  Eigen::VectorXd vals(nd);
  f.basis.values(p, vals);
  const double mxx = f.moment.segment(0, nd).dot(vals);
  const double mxy = f.moment.segment(nd, nd).dot(vals);
  const double myx = f.moment.segment(2 * nd, nd).dot(vals);
  const double myy = f.moment.segment(3 * nd, nd).dot(vals);
  return {mxx * n.x + mxy * n.y, myx * n.x + myy * n.y};
}

double flux_dot_normal(const CellDerivedFields& f, Vec2 p, Vec2 n) {
  Eigen::VectorXd vals(f.basis.size());
  f.basis.values(p, vals);
  return f.flux_x.dot(vals) * n.x + f.flux_y.dot(vals) * n.y;
}

}  // namespace

std::pair<double, double> edge_jump_norms_sq(const Mesh& mesh, int edge,
                                             const CellDerivedFields& plus,
                                             const CellDerivedFields* minus) {
  const Edge& e = mesh.edges[static_cast<size_t>(edge)];
  const auto pts = map_to_edge(edge_quadrature(2 * plus.basis.degree() + 2), mesh, edge);
  double j1 = 0.0, j2 = 0.0;
  for (const QuadPoint& qp : pts) {
    double flux = flux_dot_normal(plus, qp.p, e.normal);
    Vec2 moment = moment_times_normal(plus, qp.p, e.normal);
    if (minus) {
      flux -= flux_dot_normal(*minus, qp.p, e.normal);
      moment = moment - moment_times_normal(*minus, qp.p, e.normal);
    }
    j1 += qp.w * flux * flux;
    j2 += qp.w * dot(moment, moment);
  }
  return {j1, j2};
}

ElementResidual element_residual(const Mesh& mesh, const LocalOperators& ops,
                                 const Eigen::VectorXd& local_dofs,
                                 const std::function<double(Vec2)>& source, double eps) {
  const int nd = ops.basis.size();
  const int degree = ops.degree;
  const CellDerivedFields fields = derive_cell_fields(ops, local_dofs, eps);

  // div div of the eps^2-weighted weak Hessian, exactly at coefficient level.
  const auto mxx = fields.moment.segment(0, nd), mxy = fields.moment.segment(nd, nd),
             myx = fields.moment.segment(2 * nd, nd), myy = fields.moment.segment(3 * nd, nd);
  const CellBasis& basis = ops.basis;
  const Eigen::VectorXd divdiv = basis.d_dx(basis.d_dx(mxx)) + basis.d_dx(basis.d_dy(mxy)) +
                                 basis.d_dy(basis.d_dx(myx)) + basis.d_dy(basis.d_dy(myy));
  const Eigen::VectorXd divgrad =
      basis.d_dx(fields.grad.segment(0, nd)) + basis.d_dy(fields.grad.segment(nd, nd));

  // Oscillation uses a richer rule than assembly since the source is not a
  // polynomial.
  CellProjector proj(mesh, ops.cell, degree, 2 * degree + 4);
  const Eigen::VectorXd f_h = proj.project(source);

  ElementResidual res;
  res.coeffs = f_h - divdiv + divgrad;

  double norm_sq = 0.0, osc_sq = 0.0;
  Eigen::VectorXd vals(nd);
  for (const QuadPoint& qp : map_to_cell(cell_quadrature(2 * degree + 4), mesh, ops.cell)) {
    basis.values(qp.p, vals);
    const double r = res.coeffs.dot(vals);
    norm_sq += qp.w * r * r;
    const double d = source(qp.p) - f_h.dot(vals);
    osc_sq += qp.w * d * d;
  }
  res.norm = std::sqrt(norm_sq);
  res.osc_norm = std::sqrt(std::max(osc_sq, 0.0));
  return res;
}

std::pair<double, double> edge_jumps(const Mesh& mesh, int edge, const WeakFunction& u, double eps,
                                     const EstimatorOptions& options) {
  const Edge& e = mesh.edges[static_cast<size_t>(edge)];
  if (e.is_boundary() && !options.include_boundary_jumps)
    throw std::invalid_argument("edge_jumps: boundary edge with interior-only policy");

  const LocalOperators ops_plus = build_local_operators(mesh, e.cell_plus, u.degree);
  const CellDerivedFields plus =
      derive_cell_fields(ops_plus, gather_local(u, mesh, e.cell_plus), eps);
  if (e.is_boundary()) {
    const auto [j1, j2] = edge_jump_norms_sq(mesh, edge, plus, nullptr);
    return {std::sqrt(j1), std::sqrt(j2)};
  }
  const LocalOperators ops_minus = build_local_operators(mesh, e.cell_minus, u.degree);
  const CellDerivedFields minus =
      derive_cell_fields(ops_minus, gather_local(u, mesh, e.cell_minus), eps);
  const auto [j1, j2] = edge_jump_norms_sq(mesh, edge, plus, &minus);
  return {std::sqrt(j1), std::sqrt(j2)};
}

ErrorIndicators estimate(const Mesh& mesh, const WeakFunction& u,
                         const std::function<double(Vec2)>& source, double eps,
                         const EstimatorOptions& options) {
  if (u.n_cells != mesh.n_cells() || u.n_edges != mesh.n_edges())
    throw std::invalid_argument("estimate: function does not live on this mesh");
  const Weights weights = compute_weights(mesh, eps);
  const int ncells = mesh.n_cells();

  ErrorIndicators out;
  out.cells.resize(static_cast<size_t>(ncells));
  std::vector<CellDerivedFields> fields;
  fields.reserve(static_cast<size_t>(ncells));
  for (int c = 0; c < ncells; ++c)
    fields.push_back({CellBasis(mesh, c, u.degree), {}, {}, {}, {}});

  parallel_for(ncells, options.threads, [&](int c) {
    const LocalOperators ops = build_local_operators(mesh, c, u.degree);
    const Eigen::VectorXd local = gather_local(u, mesh, c);
    fields[static_cast<size_t>(c)] = derive_cell_fields(ops, local, eps);
    const ElementResidual res = element_residual(mesh, ops, local, source, eps);
    const auto [s1, s2] = cell_stabilizer(ops, mesh, eps, local);
    CellIndicator& ind = out.cells[static_cast<size_t>(c)];
    const double a = weights.cell[static_cast<size_t>(c)];
    ind.osc_sq = a * a * res.osc_norm * res.osc_norm;
    ind.residual_sq = a * a * res.norm * res.norm;
    ind.stab1 = s1;
    ind.stab2 = s2;
  });

  // Each interior edge contributes to both incident cells (the per-cell edge
  // sums run over the cell's own edges).
  for (int eid = 0; eid < mesh.n_edges(); ++eid) {
    const Edge& e = mesh.edges[static_cast<size_t>(eid)];
    if (e.is_boundary() && !options.include_boundary_jumps) continue;
    const CellDerivedFields& plus = fields[static_cast<size_t>(e.cell_plus)];
    const CellDerivedFields* minus =
        e.is_boundary() ? nullptr : &fields[static_cast<size_t>(e.cell_minus)];
    const auto [j1_sq, j2_sq] = edge_jump_norms_sq(mesh, eid, plus, minus);
    const double a1 = weights.edge_first[static_cast<size_t>(eid)];
    const double a2 = weights.edge_second[static_cast<size_t>(eid)];
    out.cells[static_cast<size_t>(e.cell_plus)].flux_jump_sq += a1 * a1 * j1_sq;
    out.cells[static_cast<size_t>(e.cell_plus)].moment_jump_sq += a2 * a2 * j2_sq;
    if (!e.is_boundary()) {
      out.cells[static_cast<size_t>(e.cell_minus)].flux_jump_sq += a1 * a1 * j1_sq;
      out.cells[static_cast<size_t>(e.cell_minus)].moment_jump_sq += a2 * a2 * j2_sq;
    }
  }

  for (const CellIndicator& ind : out.cells) out.total_sq += ind.total_sq();
  out.total = std::sqrt(out.total_sq);
  return out;
}

void write_indicators_csv(const ErrorIndicators& indicators, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_indicators_csv: cannot open " + path);
  out << "cell_id,eta_T1,eta_T2,eta_e1,eta_e2,s1,s2,eta_T\n";
  char buf[240];
  for (size_t c = 0; c < indicators.cells.size(); ++c) {
    const CellIndicator& ind = indicators.cells[c];
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", c,
                  std::sqrt(ind.osc_sq), std::sqrt(ind.residual_sq), std::sqrt(ind.flux_jump_sq),
                  std::sqrt(ind.moment_jump_sq), ind.stab1, ind.stab2, ind.total());
    out << buf;
  }
}

TrueErrorReport true_error(const Mesh& mesh, const WeakFunction& u_h, const ScalarField& exact,
                           bool has_exact, double eps, double estimator_total) {
  TrueErrorReport report;

  EnergyParts self_stab;
  double field_sq = 0.0;
  const int nd = cell_space_dim(u_h.degree);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const LocalOperators ops = build_local_operators(mesh, c, u_h.degree);
    const Eigen::VectorXd local = gather_local(u_h, mesh, c);
    const auto [s1, s2] = cell_stabilizer(ops, mesh, eps, local);
    self_stab.stab1 += s1;
    self_stab.stab2 += s2;
    if (!has_exact) continue;

    const Eigen::VectorXd hess = ops.weak_hessian * local;
    const Eigen::VectorXd grad = ops.weak_gradient * local;
    Eigen::VectorXd vals(nd);
    for (const QuadPoint& qp :
         map_to_cell(cell_quadrature(2 * u_h.degree + 4), mesh, c)) {
      ops.basis.values(qp.p, vals);
      const auto h = exact.hessian(qp.p);
      const Vec2 g = exact.gradient(qp.p);
      const double dxx = h[0] - hess.segment(0, nd).dot(vals);
      const double dxy = h[1] - hess.segment(nd, nd).dot(vals);
      const double dyx = h[1] - hess.segment(2 * nd, nd).dot(vals);
      const double dyy = h[2] - hess.segment(3 * nd, nd).dot(vals);
      const double gx = g.x - grad.segment(0, nd).dot(vals);
      const double gy = g.y - grad.segment(nd, nd).dot(vals);
      field_sq += qp.w * (eps * eps * (dxx * dxx + dxy * dxy + dyx * dyx + dyy * dyy) +
                          gx * gx + gy * gy);
    }
  }
  report.stabilizer_sum = self_stab.stab1 + self_stab.stab2;
  if (!has_exact) return report;

  report.field_error_sq = field_sq;
  const WeakFunction diff = embed_exact(exact, mesh, u_h.degree) - u_h;
  report.discrete_error = energy_products(mesh, eps, diff, diff).total();
  const double denom = std::sqrt(field_sq + report.stabilizer_sum);
  if (denom > 0.0) report.effectivity = estimator_total / denom;
  return report;
}

}  // namespace wg
