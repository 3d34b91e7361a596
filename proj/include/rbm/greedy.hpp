#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rbm/estimators.hpp"

namespace rbm {

struct GreedyConfig {
  double eps_tol = 1e-14;
  int N_max = 40;
  std::vector<Param> training_set;
  EstimatorKind estimator_kind = EstimatorKind::stable;
  std::uint64_t seed = 20170901;
  AlphaMode alpha_mode = AlphaMode::unit;
  double alpha_floor = kDefaultAlphaFloor;
  double drop_tol = kDefaultDropTol;
  double rank_tol_rel = kDefaultRankTol;
  unsigned workers = 1;

  /// Throws InvalidInput.
  void validate() const;
};

struct GreedyRecord {
  std::size_t n = 0;           // basis size during the sweep
  std::size_t index = 0;       // argmax position in the training set
  Param mu;                    // argmax parameter
  double estimate = 0.0;       // objective value at the argmax
  bool clamped = false;        // classical estimator clamped at the argmax
  double seconds = 0.0;        // wall time of the sweep
  std::size_t clamp_events = 0;
  std::size_t solve_failures = 0;
  /// ||u(mu) - u_n(mu)|| at the argmax; available whenever a snapshot was taken there.
  std::optional<double> true_error_at_argmax;
};

struct GreedyHistory {
  std::size_t first_index = 0;
  std::vector<GreedyRecord> records;
  bool saturated = false;
  std::string stop_reason;
  /// Set when a numerical error aborted the loop; the records collected so
  /// far and the basis built so far stay valid.
  bool failed = false;
  std::string error;
};

struct GreedyResult {
  ReducedBasis basis;
  ReducedModel model;
  GreedyHistory history;
  std::unique_ptr<GreedyObjective> objective;
};

/// Seeded first-sample index: the first draw of a 64-bit Mersenne twister
/// reduced modulo the training-set size.
std::size_t initial_sample_index(std::uint64_t seed, std::size_t training_size);

/// Argmax over values, skipping excluded entries; ties go to the lowest
/// index. Returns training_size when every entry is excluded.
std::size_t deterministic_argmax(const std::vector<double>& values,
                                 const std::vector<bool>& excluded);

/// Greedy offline phase with the objective chosen by config.estimator_kind.
///
/// Starting from a seeded random training point, each sweep evaluates the
/// objective at every training point, records the maximum over points not yet
/// selected and, while that maximum exceeds eps_tol and N < N_max, adds the
/// truth snapshot at the argmax. Stops with `saturated` set when the new
/// snapshot is numerically dependent or when an already-selected point
/// strictly dominates the remaining ones.
GreedyResult greedy(const GreedyConfig& config, const AffineOperator& op);

/// Same, with a caller-supplied objective (rebuilt as the basis grows).
GreedyResult greedy(const GreedyConfig& config, const AffineOperator& op,
                    std::unique_ptr<GreedyObjective> objective);

/// Objective values of the current basis at every point, evaluated in
/// parallel and returned in input order. Points where the reduced solve
/// fails get +infinity.
std::vector<EstimateValue> sweep(const GreedyObjective& objective, const AffineOperator& op,
                                 const ReducedModel& model, const std::vector<Param>& points,
                                 const std::vector<double>& alpha, unsigned workers);

} // namespace rbm
