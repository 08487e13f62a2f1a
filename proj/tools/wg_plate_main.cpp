#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "wg/adaptivity.hpp"
#include "wg/cases.hpp"
#include "wg/estimator.hpp"
#include "wg/mesh_io.hpp"
#include "wg/report_io.hpp"

namespace {

int run_experiment(const std::string& case_name, int degree, std::optional<double> eps,
                   std::optional<double> theta, const std::string& mode, int max_dof,
                   int max_levels, int initial_n, int threads, bool deterministic,
                   bool boundary_jumps, const std::string& out_dir) {
  wg::ManufacturedCase problem;
  try {
    problem = wg::case_by_name(case_name, eps);
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }

  wg::AdaptConfig config;
  config.theta = theta.value_or(problem.theta_default);
  config.max_dof = max_dof;
  config.max_levels = max_levels;
  config.mode = mode == "uniform" ? wg::AdaptConfig::Mode::uniform : wg::AdaptConfig::Mode::adaptive;
  config.initial_n = initial_n;
  config.threads = threads;
  config.deterministic = deterministic;
  config.include_boundary_jumps = boundary_jumps;

  std::filesystem::create_directories(out_dir);
  const auto path = [&](const char* name) {
    return (std::filesystem::path(out_dir) / name).string();
  };

  std::cout << "case " << problem.name << ", k=" << degree << ", eps=" << problem.eps
            << ", theta=" << config.theta << ", mode=" << mode << ", max-dof=" << max_dof << "\n";

  const wg::AdaptResult result = wg::adapt_loop(problem, degree, config);

  wg::write_history_json(result.history, path("history.json"));
  wg::write_history_csv(result.history, path("history.csv"));
  if (!result.history.levels.empty()) {
    wg::write_mesh(result.final_mesh, path("mesh_final.wgmesh"));
    wg::write_indicators_csv(result.final_indicators, path("indicators.csv"));
    wg::write_solution_grid_csv(result.final_mesh, result.final_solution, 201,
                                path("solution_grid.csv"));
  }

  for (const wg::LevelRecord& rec : result.history.levels) {
    std::cout << "level " << rec.level << ": dofs=" << rec.dofs << " eta_h=" << rec.eta_h;
    if (rec.error) std::cout << " error=" << *rec.error;
    if (rec.effectivity) std::cout << " effectivity=" << *rec.effectivity;
    std::cout << " marked=" << rec.marked << "\n";
  }
  if (result.history.aborted) {
    std::cerr << "solver failure: " << result.history.abort_reason
              << " (partial artifacts written to " << out_dir << ")\n";
    return 3;
  }
  std::cout << "artifacts written to " << out_dir << "\n";
  return 0;
}

int default_threads() {
  if (const char* env = std::getenv("WG_PLATE_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive weak Galerkin solver for the clamped fourth-order "
               "singularly perturbed problem on the unit square"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run one adaptive or uniform refinement experiment");
  std::string case_name;
  int degree = 2;
  std::optional<double> eps;
  std::optional<double> theta;
  std::string mode = "adaptive";
  int max_dof = 20000;
  int max_levels = 40;
  int initial_n = 4;
  int threads = default_threads();
  bool deterministic = true;
  bool boundary_jumps = false;
  std::string out_dir = "out";

  run->add_option("--case", case_name, "Problem name: internal-peak, interior-layer, "
                                       "boundary-layer-product, four-layers")
      ->required();
  run->add_option("--k", degree, "Polynomial degree (2..4)")->check(CLI::Range(2, 4));
  run->add_option("--eps", eps, "Perturbation parameter (default: the case's value)");
  run->add_option("--theta", theta, "Marking fraction in (0,1] (default: the case's value)");
  run->add_option("--mode", mode, "adaptive or uniform")
      ->check(CLI::IsMember({"adaptive", "uniform"}));
  run->add_option("--max-dof", max_dof, "Stop once the free dof count exceeds this");
  run->add_option("--max-levels", max_levels, "Refinement level budget");
  run->add_option("--initial-n", initial_n, "Subdivision of the starting mesh");
  run->add_option("--threads", threads, "Worker threads (env WG_PLATE_THREADS)");
  run->add_flag("--deterministic,!--no-deterministic", deterministic,
                "Byte-stable reports (timings reported as zero)");
  run->add_flag("--boundary-jumps", boundary_jumps,
                "Include boundary edges in the estimator jump terms");
  run->add_option("--out", out_dir, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    return run_experiment(case_name, degree, eps, theta, mode, max_dof, max_levels, initial_n,
                          threads, deterministic, boundary_jumps, out_dir);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
