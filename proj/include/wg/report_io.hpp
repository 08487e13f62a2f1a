#pragma once

#include <string>

#include "wg/adaptivity.hpp"
#include "wg/weak_ops.hpp"

namespace wg {

/// JSON array of level records with exactly the fields {level, dofs, h_min,
/// h_max, eta_h, error, effectivity, marked, seconds}; error and effectivity
/// are null when the case has no exact solution.
std::string history_to_json(const AdaptHistory& history);
void write_history_json(const AdaptHistory& history, const std::string& path);

/// Same records as CSV; absent values are empty fields.
void write_history_csv(const AdaptHistory& history, const std::string& path);

/// Interior solution component sampled on an n x n lattice over the closed
/// unit square, written as CSV rows "x,y,u".
void write_solution_grid_csv(const Mesh& mesh, const WeakFunction& u, int n,
                             const std::string& path);

}  // namespace wg
