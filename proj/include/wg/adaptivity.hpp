#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wg/cases.hpp"
#include "wg/estimator.hpp"
#include "wg/linsolve.hpp"
#include "wg/mesh.hpp"

namespace wg {

struct AdaptConfig {
  enum class Mode { adaptive, uniform };
  double theta = 0.3;  // marking fraction in (0, 1]
  int max_dof = 20000;
  int max_levels = 40;
  Mode mode = Mode::adaptive;
  int initial_n = 4;  // subdivision of the starting unit-square mesh
  int threads = 1;
  /// Deterministic reports: wall-clock seconds are reported as zero so two
  /// runs of the same configuration produce byte-identical files.
  bool deterministic = true;
  bool include_boundary_jumps = false;
  SolverKind solver = SolverKind::direct;
};

struct LevelRecord {
  int level = 0;
  int dofs = 0;
  double h_min = 0.0;
  double h_max = 0.0;
  double eta_h = 0.0;
  std::optional<double> error;        // absent when the case has no exact solution
  std::optional<double> effectivity;  // same
  int marked = 0;
  double seconds = 0.0;  // cumulative solve time
};

struct AdaptHistory {
  std::vector<LevelRecord> levels;
  bool aborted = false;
  std::string abort_reason;
};

/// Bulk marking: the smallest cell set (greedy by descending indicator, ties
/// by ascending cell id) whose squared indicators reach the theta fraction of
/// the squared total. All-zero indicators yield the empty set.
std::vector<int> dorfler_mark(const std::vector<double>& indicators, double theta);

struct AdaptResult {
  AdaptHistory history;
  Mesh final_mesh;
  WeakFunction final_solution;
  ErrorIndicators final_indicators;
};

/// Solve-estimate-mark-refine loop starting from unit_square_mesh(initial_n),
/// stopping once the dof budget or level budget is exhausted or the estimator
/// vanishes. Uniform mode refines every cell each level. A solver failure
/// aborts with the partial history preserved.
AdaptResult adapt_loop(const ManufacturedCase& problem, int degree, const AdaptConfig& config);

}  // namespace wg
