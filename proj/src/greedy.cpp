#include "rbm/greedy.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "rbm/parallel.hpp"

namespace rbm {

void GreedyConfig::validate() const {
  if (!(eps_tol > 0))
    throw InvalidInput("greedy: eps_tol must be positive");
  if (N_max < 1)
    throw InvalidInput("greedy: N_max must be at least 1");
  if (training_set.empty())
    throw InvalidInput("greedy: training set is empty");
  if (!(drop_tol > 0) || !(rank_tol_rel > 0 && rank_tol_rel < 1) || !(alpha_floor > 0))
    throw InvalidInput("greedy: tolerances must be positive");
}

std::size_t initial_sample_index(std::uint64_t seed, std::size_t training_size) {
  if (training_size == 0)
    throw InvalidInput("initial_sample_index: empty training set");
  std::mt19937_64 rng(seed);
  return static_cast<std::size_t>(rng() % training_size);
}

std::size_t deterministic_argmax(const std::vector<double>& values,
                                 const std::vector<bool>& excluded) {
  std::size_t best = values.size();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (excluded[i])
      continue;
    if (best == values.size() || values[i] > values[best])
      best = i;
  }
  return best;
}

std::vector<EstimateValue> sweep(const GreedyObjective& objective, const AffineOperator& op,
                                 const ReducedModel& model, const std::vector<Param>& points,
                                 const std::vector<double>& alpha, unsigned workers) {
  std::vector<EstimateValue> out(points.size());
  parallel_for(points.size(), workers, [&](std::size_t i) {
    const double alpha_lb = alpha.empty() ? 1.0 : alpha[i];
    try {
      const Vector u_hat = rb_solve(model, op, points[i]);
      out[i] = objective.evaluate(op, points[i], u_hat, alpha_lb);
    } catch (const SingularSystem&) {
      out[i].value = std::numeric_limits<double>::infinity();
      out[i].alpha_used = alpha_lb;
    }
  });
  return out;
}

GreedyResult greedy(const GreedyConfig& config, const AffineOperator& op) {
  ObjectiveOptions options;
  options.rank_tol_rel = config.rank_tol_rel;
  return greedy(config, op, make_objective(config.estimator_kind, op.gram, options));
}

namespace {

struct LoopState {
  const GreedyConfig& config;
  const AffineOperator& op;
  GreedyResult& result;
  std::vector<bool>& selected;
  std::vector<double>& alpha;
};

void greedy_loop(LoopState st) {
  using clock = std::chrono::steady_clock;
  const auto& config = st.config;
  const auto& op = st.op;
  const auto& train = config.training_set;
  GreedyResult& result = st.result;
  GreedyHistory& history = result.history;

  {
    auto ext = extend_basis(result.basis, result.model, truth_solve(op, train[history.first_index]),
                            op, config.drop_tol);
    result.basis = std::move(ext.basis);
    result.model = std::move(ext.model);
  }
  result.objective->rebuild(op, result.basis);

  double eps = 2.0 * config.eps_tol;
  while (eps > config.eps_tol && result.basis.size() < static_cast<std::size_t>(config.N_max)) {
    const auto start = clock::now();
    const auto estimates =
        sweep(*result.objective, op, result.model, train, st.alpha, config.workers);

    std::vector<double> values(estimates.size());
    GreedyRecord record;
    record.n = result.basis.size();
    double excluded_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < estimates.size(); ++i) {
      values[i] = estimates[i].value;
      record.clamp_events += estimates[i].clamped ? 1 : 0;
      record.solve_failures += std::isinf(values[i]) ? 1 : 0;
      if (st.selected[i])
        excluded_max = std::max(excluded_max, values[i]);
    }

    const std::size_t best = deterministic_argmax(values, st.selected);
    record.seconds = std::chrono::duration<double>(clock::now() - start).count();
    if (best == train.size()) {
      history.saturated = true;
      history.stop_reason = "training set exhausted";
      return;
    }
    record.index = best;
    record.mu = train[best];
    record.estimate = values[best];
    record.clamped = estimates[best].clamped;
    eps = record.estimate;

    if (excluded_max > eps) {
      history.records.push_back(record);
      history.saturated = true;
      history.stop_reason = "basis saturated: a selected point dominates the sweep";
      return;
    }
    if (!(eps > config.eps_tol)) {
      history.records.push_back(record);
      history.stop_reason = "tolerance reached";
      return;
    }

    Snapshot snap = truth_solve(op, record.mu);
    try {
      const Vector u_hat = rb_solve(result.model, op, record.mu);
      record.true_error_at_argmax = true_error(snap, reconstruct(result.basis, u_hat), op.gram);
    } catch (const SingularSystem&) {
    }
    history.records.push_back(record);

    try {
      auto ext = extend_basis(result.basis, result.model, snap, op, config.drop_tol);
      result.basis = std::move(ext.basis);
      result.model = std::move(ext.model);
    } catch (const DependentSnapshot&) {
      history.saturated = true;
      history.stop_reason = "basis saturated: dependent snapshot";
      return;
    }
    st.selected[best] = true;
    result.objective->rebuild(op, result.basis);
  }
  history.stop_reason = eps > config.eps_tol ? "N_max reached" : "tolerance reached";
}

} // namespace

GreedyResult greedy(const GreedyConfig& config, const AffineOperator& op,
                    std::unique_ptr<GreedyObjective> objective) {
  config.validate();
  if (!objective)
    throw InvalidInput("greedy: no objective");

  const auto& train = config.training_set;
  GreedyResult result;
  result.objective = std::move(objective);
  GreedyHistory& history = result.history;

  std::vector<double> alpha;
  if (config.alpha_mode == AlphaMode::exact_eig &&
      result.objective->kind() != EstimatorKind::lebesgue) {
    alpha.resize(train.size());
    parallel_for(train.size(), config.workers, [&](std::size_t i) {
      alpha[i] = coercivity_lower_bound(op, train[i], config.alpha_mode, op.gram,
                                        config.alpha_floor)
                     .value;
    });
  }

  std::vector<bool> selected(train.size(), false);
  history.first_index = initial_sample_index(config.seed, train.size());
  selected[history.first_index] = true;
  try {
    greedy_loop({config, op, result, selected, alpha});
  } catch (const DependentSnapshot& e) {
    history.saturated = true;
    history.stop_reason = std::string("basis saturated: ") + e.what();
  } catch (const Error& e) {
    history.failed = true;
    history.error = e.what();
    history.stop_reason = "error";
  }
  return result;
}

} // namespace rbm
