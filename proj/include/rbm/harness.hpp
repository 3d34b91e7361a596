#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "rbm/greedy.hpp"

namespace rbm {

/// Default sizes: desk keeps the acceptance runs short, paper uses 50 nodes
/// and the full-size training grids.
enum class Profile { desk, paper };

std::string_view to_string(Profile profile);
Profile parse_profile(std::string_view name);

/// Overrides output_dir when set and non-empty.
inline constexpr const char* kOutputDirEnv = "RBM_OUTPUT_DIR";

struct ExperimentConfig {
  Profile profile = Profile::desk;
  ProblemId problem = ProblemId::oned_continuous;
  int nodes_per_dim = 32;
  std::vector<int> training_grid{512};
  EstimatorKind estimator_kind = EstimatorKind::stable;
  double eps_tol = 1e-14;
  int N_max = 40;
  std::uint64_t seed = 20170901;
  AlphaMode alpha_mode = AlphaMode::unit;
  /// Validation (true errors) on/off; the grid defaults to the training grid.
  bool validation = true;
  std::optional<std::vector<int>> validation_grid;
  /// Basis sizes at which estimate/true-error fields are written. Values above
  /// the final basis size are clamped to it.
  std::vector<int> checkpoints{10, 20, 30, 40};
  /// Basis sizes at which Lagrange traces are written (1-parameter problems).
  std::vector<int> lagrange_checkpoints{10};
  double drop_tol = kDefaultDropTol;
  double rank_tol_rel = kDefaultRankTol;
  unsigned workers = 1;
  std::string output_dir = "out";

  bool operator==(const ExperimentConfig&) const = default;

  /// Throws InvalidInput.
  void validate() const;
};

ExperimentConfig default_config(ProblemId problem, Profile profile = Profile::desk);

nlohmann::json to_json(const ExperimentConfig& config);

/// Reads a config object. Missing keys take the defaults of the given
/// problem and profile; unknown keys and ill-typed values throw InvalidInput.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Replaces output_dir with the environment override, if any.
void apply_environment(ExperimentConfig& config);

/// Tensor grid of uniformly spaced points including the endpoints, first
/// dimension running fastest.
std::vector<Param> make_training_grid(const Box& domain, const std::vector<int>& counts);

struct ValidationPoint {
  Param mu;
  /// Empty when the truth or reduced solve was singular at mu.
  std::optional<double> error;
};

/// Truth solutions at every point; singular points are left empty.
std::vector<std::optional<Snapshot>> solve_truths(const AffineOperator& op,
                                                  const std::vector<Param>& points,
                                                  unsigned workers = 1);

std::vector<ValidationPoint> validate(const ReducedBasis& basis, const ReducedModel& model,
                                      const AffineOperator& op, const std::vector<Param>& points,
                                      const GramSpec& gram, unsigned workers = 1);

/// Same, reusing precomputed truth solutions (truths[i] belongs to points[i]).
std::vector<ValidationPoint> validate(const ReducedBasis& basis, const ReducedModel& model,
                                      const AffineOperator& op, const std::vector<Param>& points,
                                      const std::vector<std::optional<Snapshot>>& truths,
                                      const GramSpec& gram, unsigned workers = 1);

/// Largest error over the points that have one; nullopt if none does.
std::optional<double> max_error(const std::vector<ValidationPoint>& points);

struct RunArtifacts {
  std::filesystem::path history;
  std::vector<std::filesystem::path> fields;
  std::filesystem::path snapshots;
  std::vector<std::filesystem::path> lagrange;
  std::filesystem::path metadata;

  GreedyResult greedy;
  /// Max true error over the validation grid per history row (empty when
  /// validation is off).
  std::vector<std::optional<double>> max_true_error;
};

/// Builds the problem, runs the greedy loop and writes every artifact into
/// config.output_dir. A greedy failure is recorded in the metadata, the
/// partial artifacts are written, and the error is rethrown.
RunArtifacts run_experiment(const ExperimentConfig& config);

/// Writes the cancellation demo table; returns the path.
std::filesystem::path run_float_demo(const std::vector<int>& N_values, int mu_samples,
                                     std::uint64_t seed, const std::filesystem::path& output_dir);

/// Post-hoc validation of a saved run: rebuilds the basis from the recorded
/// sample set (first n entries, all when n is empty) and writes the true
/// error over the configured validation grid. Returns the written path.
std::filesystem::path validate_run(const std::filesystem::path& run_dir,
                                   std::optional<int> n = std::nullopt,
                                   std::optional<unsigned> workers = std::nullopt);

/// "%.17g", or the empty string for nullopt.
std::string format_real(double value);
std::string format_real(const std::optional<double>& value);

} // namespace rbm
