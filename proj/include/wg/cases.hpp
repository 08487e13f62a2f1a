#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wg/weak_ops.hpp"

namespace wg {

/// Benchmark problem on the unit square: a source term for
/// eps^2 biharmonic - Laplacian with clamped boundary, and, when available,
/// the exact solution with derivatives. A case is bound to the eps it was
/// built with (the exact fields of the boundary-layer case depend on eps).
struct ManufacturedCase {
  std::string name;
  double eps = 1.0;           // value this instance is bound to
  double eps_default = 1.0;   // experiment default for the case
  double theta_default = 0.3; // marking fraction used by the experiments
  bool has_exact = false;
  ScalarField exact;                   // value/gradient/hessian when has_exact
  std::function<double(Vec2)> source;  // right-hand side at the bound eps
  /// Max |grad u . n| measured on the boundary: the internal- and
  /// interior-layer solutions satisfy the clamped condition only up to an
  /// exponentially small tail, recorded here instead of being hidden.
  double boundary_flux_max = 0.0;
};

/// Internal peak: polynomial bubble times a sharp Gaussian centered at
/// (0.5, 0.117).
ManufacturedCase example_1(double eps = 1.0);

/// Interior layer of width gamma at x = beta from a tanh profile.
ManufacturedCase example_2(double eps = 1.0, double beta = 0.5, double gamma = 0.05);

/// Separable solution with boundary layers of width eps on all sides.
ManufacturedCase example_3(double eps = 1e-6);

/// Unknown exact solution with four sharp boundary layers;
/// source 2 pi^2 (1 - cos 2 pi x cos 2 pi y).
ManufacturedCase example_4(double eps = 1e-6);

const std::vector<std::string>& case_names();

/// Build a case by registry name ("internal-peak", "interior-layer",
/// "boundary-layer-product", "four-layers"); throws std::invalid_argument
/// for unknown names. eps falls back to the case default.
ManufacturedCase case_by_name(const std::string& name, std::optional<double> eps = {});

}  // namespace wg
