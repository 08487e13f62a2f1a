#include "wg/adaptivity.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>

#include "wg/assembly.hpp"

namespace wg {

std::vector<int> dorfler_mark(const std::vector<double>& indicators, double theta) {
  if (!(theta > 0.0 && theta <= 1.0))
    throw std::invalid_argument("dorfler_mark: theta must be in (0, 1]");
  double total_sq = 0.0;
  for (double v : indicators) {
    if (!(v >= 0.0)) throw std::invalid_argument("dorfler_mark: indicators must be >= 0");
    total_sq += v * v;
  }
  if (total_sq == 0.0) return {};

  std::vector<int> order(indicators.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double va = indicators[static_cast<size_t>(a)];
    const double vb = indicators[static_cast<size_t>(b)];
    return va != vb ? va > vb : a < b;
  });

  const double target = theta * total_sq;
  std::vector<int> marked;
  double acc = 0.0;
  for (int c : order) {
    const double v = indicators[static_cast<size_t>(c)];
    if (v == 0.0) break;  // only zeros left; the accumulated sum is the total
    marked.push_back(c);
    acc += v * v;
    if (acc >= target) break;
  }
  std::sort(marked.begin(), marked.end());
  return marked;
}

AdaptResult adapt_loop(const ManufacturedCase& problem, int degree, const AdaptConfig& config) {
  if (!(config.theta > 0.0 && config.theta <= 1.0))
    throw std::invalid_argument("adapt_loop: theta must be in (0, 1]");
  if (config.max_levels < 1) throw std::invalid_argument("adapt_loop: max_levels must be >= 1");

  const double eps = problem.eps;
  AdaptResult result;
  result.final_mesh = unit_square_mesh(config.initial_n);
  double solve_seconds = 0.0;

  for (int level = 0; level < config.max_levels; ++level) {
    const Mesh& mesh = result.final_mesh;
    AssembledSystem sys = assemble(mesh, degree, eps, problem.source, {config.threads});

    SolveReport solved;
    try {
      const auto t0 = std::chrono::steady_clock::now();
      solved = solve_spd(sys.matrix, sys.load, config.solver);
      solve_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    } catch (const SolverError& err) {
      result.history.aborted = true;
      result.history.abort_reason = err.what();
      return result;
    }

    result.final_solution = expand_free_vector(sys.dof_map, solved.solution);
    EstimatorOptions eopts;
    eopts.include_boundary_jumps = config.include_boundary_jumps;
    eopts.threads = config.threads;
    result.final_indicators = estimate(mesh, result.final_solution, problem.source, eps, eopts);

    LevelRecord rec;
    rec.level = level;
    rec.dofs = sys.dof_map.n_free;
    rec.eta_h = result.final_indicators.total;
    rec.h_min = mesh.cells.empty() ? 0.0 : mesh.cells[0].diameter;
    rec.h_max = rec.h_min;
    for (const Cell& c : mesh.cells) {
      rec.h_min = std::min(rec.h_min, c.diameter);
      rec.h_max = std::max(rec.h_max, c.diameter);
    }
    if (problem.has_exact) {
      const TrueErrorReport ter = true_error(mesh, result.final_solution, problem.exact,
                                             /*has_exact=*/true, eps, rec.eta_h);
      rec.error = ter.discrete_error;
      rec.effectivity = ter.effectivity;
    }
    rec.seconds = config.deterministic ? 0.0 : solve_seconds;

    std::vector<int> marked;
    if (config.mode == AdaptConfig::Mode::uniform) {
      marked.resize(static_cast<size_t>(mesh.n_cells()));
      std::iota(marked.begin(), marked.end(), 0);
    } else {
      marked = dorfler_mark(result.final_indicators.cell_totals(), config.theta);
    }
    rec.marked = static_cast<int>(marked.size());
    result.history.levels.push_back(rec);

    if (rec.dofs > config.max_dof || marked.empty() || level + 1 >= config.max_levels) break;
    result.final_mesh = refine(mesh, marked);
  }
  return result;
}

}  // namespace wg
