#include <cstdio>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rbm/harness.hpp"

namespace {

// exit codes by failure category
enum Exit : int {
  ok = 0,
  usage = 2,
  invalid_input = 3,
  io_error = 4,
  numerical = 5,
  internal = 6,
};

int report(const char* category, const std::exception& e, int code) {
  std::cerr << "rbm_cli: " << category << ": " << e.what() << "\n";
  return code;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reduced basis greedy experiments"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run one greedy experiment and write its artifacts");
  std::string config_path;
  bool paper_scale = false;
  std::string problem, estimator, alpha_mode, output_dir;
  int nodes_per_dim = 0, N_max = 0;
  std::vector<int> training_grid, validation_grid, checkpoints, lagrange_checkpoints;
  double eps_tol = 0, drop_tol = 0, rank_tol = 0;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  bool no_validation = false;
  run->add_option("config", config_path, "JSON config file")->check(CLI::ExistingFile);
  run->add_flag("--paper-scale", paper_scale, "Start from the full-resolution defaults");
  run->add_option("--problem", problem, "oned-continuous | oned-discontinuous | twod-first | twod-second");
  run->add_option("--nodes-per-dim", nodes_per_dim, "Chebyshev nodes per direction, boundary included");
  run->add_option("--training-grid", training_grid, "Points per parameter dimension");
  run->add_option("--estimator", estimator, "classical | stable | lebesgue");
  run->add_option("--eps-tol", eps_tol);
  run->add_option("--N-max", N_max);
  run->add_option("--seed", seed);
  run->add_option("--alpha-mode", alpha_mode, "unit | exact-eig");
  run->add_flag("--no-validation", no_validation, "Skip true-error validation");
  run->add_option("--validation-grid", validation_grid, "Points per parameter dimension");
  run->add_option("--checkpoints", checkpoints, "Basis sizes for field files");
  run->add_option("--lagrange-checkpoints", lagrange_checkpoints, "Basis sizes for Lagrange traces");
  run->add_option("--drop-tol", drop_tol);
  run->add_option("--rank-tol", rank_tol);
  run->add_option("--workers", workers);
  run->add_option("--output-dir", output_dir, "Overrides the config and RBM_OUTPUT_DIR");

  // float-demo
  auto* demo = app.add_subcommand("float-demo", "Write the cancellation demo table");
  int n_min = 1, n_max = 21, mu_samples = 1000;
  std::uint64_t demo_seed = 20170901;
  std::string demo_dir = "out";
  demo->add_option("--n-min", n_min)->capture_default_str();
  demo->add_option("--n-max", n_max)->capture_default_str();
  demo->add_option("--mu-samples", mu_samples)->capture_default_str();
  demo->add_option("--seed", demo_seed)->capture_default_str();
  demo->add_option("--output-dir", demo_dir)->capture_default_str();

  // validate
  auto* val = app.add_subcommand("validate", "Recompute true errors for a saved run");
  std::string run_dir;
  int val_n = 0;
  unsigned val_workers = 0;
  val->add_option("run_dir", run_dir, "Directory written by `run`")->required()->check(CLI::ExistingDirectory);
  val->add_option("--N", val_n, "Use the first N snapshots (default: all)");
  val->add_option("--workers", val_workers);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? Exit::ok : Exit::usage;
  }

  try {
    if (*run) {
      rbm::ExperimentConfig config;
      if (!config_path.empty()) {
        config = rbm::load_config(config_path);
      } else {
        const auto id = problem.empty() ? rbm::ProblemId::oned_continuous : rbm::parse_problem_id(problem);
        config = rbm::default_config(id, paper_scale ? rbm::Profile::paper : rbm::Profile::desk);
      }
      if (!problem.empty() && rbm::parse_problem_id(problem) != config.problem) {
        // switching problem resets the problem-dependent grids
        auto fresh = rbm::default_config(rbm::parse_problem_id(problem), config.profile);
        config.problem = fresh.problem;
        config.training_grid = fresh.training_grid;
        config.validation_grid.reset();
        config.lagrange_checkpoints = fresh.lagrange_checkpoints;
      }
      if (paper_scale && config.profile != rbm::Profile::paper) {
        auto fresh = rbm::default_config(config.problem, rbm::Profile::paper);
        config.profile = fresh.profile;
        config.nodes_per_dim = fresh.nodes_per_dim;
        config.training_grid = fresh.training_grid;
      }
      rbm::apply_environment(config);
      if (run->count("--nodes-per-dim")) config.nodes_per_dim = nodes_per_dim;
      if (run->count("--training-grid")) config.training_grid = training_grid;
      if (run->count("--estimator")) config.estimator_kind = rbm::parse_estimator_kind(estimator);
      if (run->count("--eps-tol")) config.eps_tol = eps_tol;
      if (run->count("--N-max")) config.N_max = N_max;
      if (run->count("--seed")) config.seed = seed;
      if (run->count("--alpha-mode")) config.alpha_mode = rbm::parse_alpha_mode(alpha_mode);
      if (no_validation) config.validation = false;
      if (run->count("--validation-grid")) config.validation_grid = validation_grid;
      if (run->count("--checkpoints")) config.checkpoints = checkpoints;
      if (run->count("--lagrange-checkpoints")) config.lagrange_checkpoints = lagrange_checkpoints;
      if (run->count("--drop-tol")) config.drop_tol = drop_tol;
      if (run->count("--rank-tol")) config.rank_tol_rel = rank_tol;
      if (run->count("--workers")) config.workers = workers;
      if (run->count("--output-dir")) config.output_dir = output_dir;
      config.validate();

      const auto art = rbm::run_experiment(config);
      const auto& h = art.greedy.history;
      std::cout << "N = " << art.greedy.basis.size() << ", " << h.records.size()
                << " sweeps, stop: " << h.stop_reason << "\n"
                << "artifacts in " << config.output_dir << "\n";
    } else if (*demo) {
      if (n_min < 1 || n_max < n_min)
        throw rbm::InvalidInput("float-demo: need 1 <= n-min <= n-max");
      std::vector<int> Ns(static_cast<std::size_t>(n_max - n_min + 1));
      std::iota(Ns.begin(), Ns.end(), n_min);
      if (const char* env = std::getenv(rbm::kOutputDirEnv); env && *env && !demo->count("--output-dir"))
        demo_dir = env;
      std::cout << rbm::run_float_demo(Ns, mu_samples, demo_seed, demo_dir).string() << "\n";
    } else if (*val) {
      std::optional<int> n;
      if (val->count("--N")) n = val_n;
      std::optional<unsigned> w;
      if (val->count("--workers")) w = val_workers;
      std::cout << rbm::validate_run(run_dir, n, w).string() << "\n";
    }
  } catch (const rbm::InvalidInput& e) {
    return report("invalid input", e, Exit::invalid_input);
  } catch (const rbm::InvalidGram& e) {
    return report("invalid input", e, Exit::invalid_input);
  } catch (const rbm::IoError& e) {
    return report("i/o error", e, Exit::io_error);
  } catch (const rbm::Error& e) {
    return report("numerical failure", e, Exit::numerical);
  } catch (const std::exception& e) {
    return report("internal error", e, Exit::internal);
  }
  return Exit::ok;
}
