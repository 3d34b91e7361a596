#include "rbm/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "rbm/parallel.hpp"

namespace rbm {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolkitVersion = "0.1.0";

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out)
    throw IoError("write failed for " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string mu_header(std::size_t dim) {
  std::string h;
  for (std::size_t d = 0; d < dim; ++d)
    h += (d ? ",mu_" : "mu_") + std::to_string(d + 1);
  return h;
}

std::string mu_cells(const Param& mu) {
  std::string s;
  for (std::size_t d = 0; d < mu.size(); ++d)
    s += (d ? "," : "") + format_real(mu[d]);
  return s;
}

std::vector<int> positive_list(const json& value, const char* key) {
  if (!value.is_array())
    throw InvalidInput(std::string("config: ") + key + " must be an array of integers");
  std::vector<int> out;
  for (const auto& v : value) {
    if (!v.is_number_integer())
      throw InvalidInput(std::string("config: ") + key + " must contain integers");
    out.push_back(v.get<int>());
  }
  return out;
}

template <class T>
T typed(const json& value, const char* key) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw InvalidInput(std::string("config: ill-typed value for ") + key);
  }
}

/// Clamps requested sizes to [1, final_n] and removes duplicates, keeping
/// the sorted order.
std::vector<std::size_t> effective_checkpoints(const std::vector<int>& requested,
                                               std::size_t final_n) {
  std::set<std::size_t> out;
  for (int k : requested)
    out.insert(std::min<std::size_t>(static_cast<std::size_t>(k), final_n));
  out.erase(0);
  return {out.begin(), out.end()};
}

std::string history_csv(const GreedyResult& g, const std::vector<Param>& train, bool validation,
                        const std::vector<std::optional<double>>& max_err) {
  const std::size_t dim = train.front().size();
  std::string s = "n," + mu_header(dim) +
                  ",training_index,estimate,clamped,selected,true_error_argmax,true_error_max\n";
  const auto& h = g.history;
  // row 0 is the seeded initial sample (no sweep precedes it)
  s += "0," + mu_cells(train[h.first_index]) + "," + std::to_string(h.first_index) + ",,0,1,,\n";
  for (std::size_t r = 0; r < h.records.size(); ++r) {
    const auto& rec = h.records[r];
    const bool selected = g.basis.size() > rec.n;
    s += std::to_string(rec.n) + "," + mu_cells(rec.mu) + "," + std::to_string(rec.index) + "," +
         format_real(rec.estimate) + "," + (rec.clamped ? "1" : "0") + "," +
         (selected ? "1" : "0") + "," +
         format_real(validation ? rec.true_error_at_argmax : std::nullopt) + "," +
         format_real(validation && r < max_err.size() ? max_err[r] : std::nullopt) + "\n";
  }
  return s;
}

std::string snapshots_csv(const ReducedBasis& basis, const std::vector<std::size_t>& indices) {
  const std::size_t dim = basis.sample_set.empty() ? 1 : basis.sample_set.front().size();
  std::string s = "order,training_index," + mu_header(dim) + "\n";
  for (std::size_t m = 0; m < basis.sample_set.size(); ++m)
    s += std::to_string(m + 1) + "," + std::to_string(indices[m]) + "," +
         mu_cells(basis.sample_set[m]) + "\n";
  return s;
}

std::vector<std::size_t> selected_indices(const GreedyResult& g) {
  std::vector<std::size_t> out{g.history.first_index};
  for (const auto& rec : g.history.records)
    if (out.size() < g.basis.size() && rec.n == out.size())
      out.push_back(rec.index);
  return out;
}

json compiler_info() {
#if defined(__clang__)
  return std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
  return std::string("gcc ") + __VERSION__;
#else
  return "unknown";
#endif
}

} // namespace

std::string_view to_string(Profile profile) {
  return profile == Profile::desk ? "desk" : "paper";
}

Profile parse_profile(std::string_view name) {
  if (name == "desk")
    return Profile::desk;
  if (name == "paper")
    return Profile::paper;
  throw InvalidInput("unknown profile '" + std::string(name) + "'");
}

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string format_real(const std::optional<double>& value) {
  return value ? format_real(*value) : std::string();
}

ExperimentConfig default_config(ProblemId problem, Profile profile) {
  ExperimentConfig c;
  c.profile = profile;
  c.problem = problem;
  const bool paper = profile == Profile::paper;
  c.nodes_per_dim = paper ? 50 : 32;
  switch (problem) {
  case ProblemId::oned_continuous:
  case ProblemId::oned_discontinuous:
    c.training_grid = {512};
    break;
  case ProblemId::twod_first:
    c.training_grid = paper ? std::vector<int>{129, 65} : std::vector<int>{65, 33};
    break;
  case ProblemId::twod_second:
    c.training_grid = paper ? std::vector<int>{160, 160} : std::vector<int>{80, 80};
    break;
  }
  if (problem_spec(problem).param_dim != 1)
    c.lagrange_checkpoints.clear();
  return c;
}

void ExperimentConfig::validate() const {
  const ProblemSpec spec = problem_spec(problem);
  auto check_grid = [&](const std::vector<int>& counts, const char* what) {
    if (counts.size() != static_cast<std::size_t>(spec.param_dim))
      throw InvalidInput(std::string("config: ") + what + " needs one count per parameter");
    for (int n : counts)
      if (n < 2)
        throw InvalidInput(std::string("config: ") + what + " counts must be at least 2");
  };
  if (nodes_per_dim < 3)
    throw InvalidInput("config: nodes_per_dim must be at least 3");
  check_grid(training_grid, "training_grid");
  if (validation_grid)
    check_grid(*validation_grid, "validation_grid");
  if (!(eps_tol > 0))
    throw InvalidInput("config: eps_tol must be positive");
  if (N_max < 1)
    throw InvalidInput("config: N_max must be at least 1");
  for (int k : checkpoints)
    if (k < 1)
      throw InvalidInput("config: checkpoints must be positive");
  for (int k : lagrange_checkpoints)
    if (k < 1)
      throw InvalidInput("config: lagrange_checkpoints must be positive");
  if (!(drop_tol > 0) || !(rank_tol_rel > 0 && rank_tol_rel < 1))
    throw InvalidInput("config: drop_tol must be positive and rank_tol_rel in (0, 1)");
  if (workers < 1)
    throw InvalidInput("config: workers must be at least 1");
  if (output_dir.empty())
    throw InvalidInput("config: output_dir is empty");
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["profile"] = to_string(c.profile);
  j["problem"] = to_string(c.problem);
  j["nodes_per_dim"] = c.nodes_per_dim;
  j["training_grid"] = c.training_grid;
  j["estimator"] = to_string(c.estimator_kind);
  j["eps_tol"] = c.eps_tol;
  j["N_max"] = c.N_max;
  j["seed"] = c.seed;
  j["alpha_mode"] = to_string(c.alpha_mode);
  j["validation"] = c.validation;
  j["validation_grid"] = c.validation_grid ? json(*c.validation_grid) : json(nullptr);
  j["checkpoints"] = c.checkpoints;
  j["lagrange_checkpoints"] = c.lagrange_checkpoints;
  j["drop_tol"] = c.drop_tol;
  j["rank_tol_rel"] = c.rank_tol_rel;
  j["workers"] = c.workers;
  j["output_dir"] = c.output_dir;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object())
    throw InvalidInput("config: top level must be an object");
  static const std::set<std::string> known{
      "profile",     "problem",          "nodes_per_dim",   "training_grid",
      "estimator",   "eps_tol",          "N_max",           "seed",
      "alpha_mode",  "validation",       "validation_grid", "checkpoints",
      "lagrange_checkpoints", "drop_tol", "rank_tol_rel",   "workers",
      "output_dir"};
  for (const auto& item : j.items())
    if (!known.count(item.key()))
      throw InvalidInput("config: unknown key '" + item.key() + "'");

  const Profile profile =
      j.contains("profile") ? parse_profile(typed<std::string>(j["profile"], "profile"))
                            : Profile::desk;
  const ProblemId problem =
      j.contains("problem") ? parse_problem_id(typed<std::string>(j["problem"], "problem"))
                            : ProblemId::oned_continuous;
  ExperimentConfig c = default_config(problem, profile);

  if (j.contains("nodes_per_dim"))
    c.nodes_per_dim = typed<int>(j["nodes_per_dim"], "nodes_per_dim");
  if (j.contains("training_grid"))
    c.training_grid = positive_list(j["training_grid"], "training_grid");
  if (j.contains("estimator"))
    c.estimator_kind = parse_estimator_kind(typed<std::string>(j["estimator"], "estimator"));
  if (j.contains("eps_tol"))
    c.eps_tol = typed<double>(j["eps_tol"], "eps_tol");
  if (j.contains("N_max"))
    c.N_max = typed<int>(j["N_max"], "N_max");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned())
      throw InvalidInput("config: seed must be a nonnegative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("alpha_mode"))
    c.alpha_mode = parse_alpha_mode(typed<std::string>(j["alpha_mode"], "alpha_mode"));
  if (j.contains("validation")) {
    if (!j["validation"].is_boolean())
      throw InvalidInput("config: validation must be a boolean");
    c.validation = j["validation"].get<bool>();
  }
  if (j.contains("validation_grid")) {
    if (j["validation_grid"].is_null())
      c.validation_grid.reset();
    else
      c.validation_grid = positive_list(j["validation_grid"], "validation_grid");
  }
  if (j.contains("checkpoints"))
    c.checkpoints = positive_list(j["checkpoints"], "checkpoints");
  if (j.contains("lagrange_checkpoints"))
    c.lagrange_checkpoints = positive_list(j["lagrange_checkpoints"], "lagrange_checkpoints");
  if (j.contains("drop_tol"))
    c.drop_tol = typed<double>(j["drop_tol"], "drop_tol");
  if (j.contains("rank_tol_rel"))
    c.rank_tol_rel = typed<double>(j["rank_tol_rel"], "rank_tol_rel");
  if (j.contains("workers")) {
    if (!j["workers"].is_number_unsigned())
      throw InvalidInput("config: workers must be a positive integer");
    c.workers = j["workers"].get<unsigned>();
  }
  if (j.contains("output_dir"))
    c.output_dir = typed<std::string>(j["output_dir"], "output_dir");
  c.validate();
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw InvalidInput("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

void apply_environment(ExperimentConfig& config) {
  if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir)
    config.output_dir = dir;
}

std::vector<Param> make_training_grid(const Box& domain, const std::vector<int>& counts) {
  if (counts.size() != domain.dim())
    throw InvalidInput("make_training_grid: one count per dimension required");
  std::size_t total = 1;
  for (int n : counts) {
    if (n < 2)
      throw InvalidInput("make_training_grid: counts must be at least 2");
    total *= static_cast<std::size_t>(n);
  }
  std::vector<Param> points;
  points.reserve(total);
  std::vector<int> idx(counts.size(), 0);
  for (std::size_t p = 0; p < total; ++p) {
    Param mu(counts.size());
    for (std::size_t d = 0; d < counts.size(); ++d) {
      const double lo = domain.lower[d], hi = domain.upper[d];
      mu[d] = idx[d] == counts[d] - 1 ? hi : lo + (hi - lo) * idx[d] / (counts[d] - 1);
    }
    points.push_back(std::move(mu));
    for (std::size_t d = 0; d < counts.size(); ++d) {
      if (++idx[d] < counts[d])
        break;
      idx[d] = 0;
    }
  }
  return points;
}

std::vector<std::optional<Snapshot>> solve_truths(const AffineOperator& op,
                                                  const std::vector<Param>& points,
                                                  unsigned workers) {
  std::vector<std::optional<Snapshot>> out(points.size());
  parallel_for(points.size(), workers, [&](std::size_t i) {
    try {
      out[i] = truth_solve(op, points[i]);
    } catch (const SingularSystem&) {
    }
  });
  return out;
}

std::vector<ValidationPoint> validate(const ReducedBasis& basis, const ReducedModel& model,
                                      const AffineOperator& op, const std::vector<Param>& points,
                                      const GramSpec& gram, unsigned workers) {
  return validate(basis, model, op, points, solve_truths(op, points, workers), gram, workers);
}

std::vector<ValidationPoint> validate(const ReducedBasis& basis, const ReducedModel& model,
                                      const AffineOperator& op, const std::vector<Param>& points,
                                      const std::vector<std::optional<Snapshot>>& truths,
                                      const GramSpec& gram, unsigned workers) {
  if (truths.size() != points.size())
    throw InvalidInput("validate: one truth entry per point required");
  std::vector<ValidationPoint> out(points.size());
  parallel_for(points.size(), workers, [&](std::size_t i) {
    out[i].mu = points[i];
    if (!truths[i])
      return;
    try {
      const Vector u_hat = rb_solve(model, op, points[i]);
      out[i].error = true_error(*truths[i], reconstruct(basis, u_hat), gram);
    } catch (const SingularSystem&) {
    }
  });
  return out;
}

std::optional<double> max_error(const std::vector<ValidationPoint>& points) {
  std::optional<double> best;
  for (const auto& p : points)
    if (p.error && (!best || *p.error > *best))
      best = p.error;
  return best;
}

RunArtifacts run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto run_start = clock_type::now();
  const fs::path dir = config.output_dir;
  ensure_directory(dir);

  const ProblemSpec spec = problem_spec(config.problem);
  const TruthDiscretization disc(config.nodes_per_dim);
  const AffineOperator op = assemble_affine(spec, disc);
  const auto train = make_training_grid(spec.domain, config.training_grid);
  const auto valid_points =
      make_training_grid(spec.domain, config.validation_grid.value_or(config.training_grid));

  GreedyConfig gc;
  gc.eps_tol = config.eps_tol;
  gc.N_max = config.N_max;
  gc.training_set = train;
  gc.estimator_kind = config.estimator_kind;
  gc.seed = config.seed;
  gc.alpha_mode = config.alpha_mode;
  gc.drop_tol = config.drop_tol;
  gc.rank_tol_rel = config.rank_tol_rel;
  gc.workers = config.workers;

  RunArtifacts art;
  auto t0 = clock_type::now();
  art.greedy = greedy(gc, op);
  const double greedy_seconds = seconds_since(t0);
  const GreedyResult& g = art.greedy;
  const std::size_t final_n = g.basis.size();
  json notes = json::array();

  t0 = clock_type::now();
  std::vector<std::optional<Snapshot>> truths;
  if (config.validation && final_n > 0) {
    truths = solve_truths(op, valid_points, config.workers);
    for (const auto& rec : g.history.records) {
      const std::size_t n = std::min(rec.n, final_n);
      art.max_true_error.push_back(max_error(validate(g.basis.truncated(n), g.model.truncated(n),
                                                      op, valid_points, truths, op.gram,
                                                      config.workers)));
    }
  }
  const double validation_seconds = seconds_since(t0);

  art.history = dir / "history.csv";
  write_file(art.history, history_csv(g, train, config.validation, art.max_true_error));
  art.snapshots = dir / "snapshots.csv";
  write_file(art.snapshots, snapshots_csv(g.basis, selected_indices(g)));

  t0 = clock_type::now();
  const std::size_t pdim = valid_points.front().size();
  for (std::size_t k : effective_checkpoints(config.checkpoints, final_n)) {
    const ReducedBasis basis_k = g.basis.truncated(k);
    const ReducedModel model_k = g.model.truncated(k);
    ObjectiveOptions options;
    options.rank_tol_rel = config.rank_tol_rel;
    auto objective = make_objective(config.estimator_kind, op.gram, options);
    objective->rebuild(op, basis_k);
    std::vector<double> alpha;
    if (config.alpha_mode == AlphaMode::exact_eig &&
        config.estimator_kind != EstimatorKind::lebesgue) {
      alpha.resize(valid_points.size());
      parallel_for(valid_points.size(), config.workers, [&](std::size_t i) {
        alpha[i] = coercivity_lower_bound(op, valid_points[i], config.alpha_mode, op.gram).value;
      });
    }
    const auto est = sweep(*objective, op, model_k, valid_points, alpha, config.workers);
    std::vector<ValidationPoint> errors;
    if (!truths.empty())
      errors = validate(basis_k, model_k, op, valid_points, truths, op.gram, config.workers);

    std::string s = mu_header(pdim) + ",estimate,true_error\n";
    for (std::size_t i = 0; i < valid_points.size(); ++i)
      s += mu_cells(valid_points[i]) + "," + format_real(est[i].value) + "," +
           format_real(errors.empty() ? std::nullopt : errors[i].error) + "\n";
    art.fields.push_back(dir / ("field_N" + std::to_string(k) + ".csv"));
    write_file(art.fields.back(), s);
  }

  if (spec.param_dim == 1) {
    for (std::size_t k : effective_checkpoints(config.lagrange_checkpoints, final_n)) {
      const ReducedBasis basis_k = g.basis.truncated(k);
      const ReducedModel model_k = g.model.truncated(k);
      std::vector<std::optional<LagrangeCoefficients>> coeffs(train.size());
      parallel_for(train.size(), config.workers, [&](std::size_t i) {
        try {
          coeffs[i] = lagrange_coefficients(basis_k, rb_solve(model_k, op, train[i]));
        } catch (const SingularSystem&) {
        }
      });
      std::string s = "mu_1";
      for (std::size_t m = 1; m <= k; ++m)
        s += ",c_" + std::to_string(m);
      s += ",lebesgue\n";
      bool warned = false;
      for (std::size_t i = 0; i < train.size(); ++i) {
        s += mu_cells(train[i]);
        for (std::size_t m = 0; m < k; ++m)
          s += "," + (coeffs[i] ? format_real(coeffs[i]->c[m]) : std::string());
        s += "," + (coeffs[i] ? format_real(coeffs[i]->c.cwiseAbs().sum()) : std::string()) + "\n";
        warned = warned || (coeffs[i] && coeffs[i]->ill_conditioned);
      }
      if (warned)
        notes.push_back("lagrange_N" + std::to_string(k) +
                        ": snapshot change-of-basis factor is ill-conditioned");
      art.lagrange.push_back(dir / ("lagrange_N" + std::to_string(k) + ".csv"));
      write_file(art.lagrange.back(), s);
    }
  } else if (!config.lagrange_checkpoints.empty()) {
    notes.push_back("lagrange traces are only written for 1-parameter problems");
  }
  const double output_seconds = seconds_since(t0);

  json meta;
  meta["config"] = to_json(config);
  meta["versions"] = {{"toolkit", kToolkitVersion},
                      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                    std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                    std::to_string(EIGEN_MINOR_VERSION)},
                      {"compiler", compiler_info()}};
  json sweeps = json::array();
  for (const auto& rec : g.history.records)
    sweeps.push_back({{"n", rec.n},
                      {"seconds", rec.seconds},
                      {"clamp_events", rec.clamp_events},
                      {"solve_failures", rec.solve_failures}});
  meta["timings"] = {{"greedy_seconds", greedy_seconds},
                     {"validation_seconds", validation_seconds},
                     {"output_seconds", output_seconds},
                     {"total_seconds", seconds_since(run_start)},
                     {"sweeps", sweeps}};
  meta["result"] = {{"final_N", final_n},
                    {"first_index", g.history.first_index},
                    {"stop_reason", g.history.stop_reason},
                    {"saturated", g.history.saturated},
                    {"failed", g.history.failed},
                    {"error", g.history.failed ? json(g.history.error) : json(nullptr)},
                    {"training_points", train.size()},
                    {"validation_points", config.validation ? valid_points.size() : 0}};
  json files = json::array();
  for (const fs::path& p : {art.history, art.snapshots})
    files.push_back(p.filename().string());
  for (const auto& p : art.fields)
    files.push_back(p.filename().string());
  for (const auto& p : art.lagrange)
    files.push_back(p.filename().string());
  meta["files"] = files;
  meta["notes"] = notes;
  art.metadata = dir / "metadata.json";
  write_file(art.metadata, meta.dump(2) + "\n");

  if (g.history.failed)
    throw Error("greedy failed after " + std::to_string(g.history.records.size()) +
                " sweeps: " + g.history.error);
  return art;
}

fs::path run_float_demo(const std::vector<int>& N_values, int mu_samples, std::uint64_t seed,
                        const fs::path& output_dir) {
  const auto rows = float_demo(N_values, mu_samples, seed);
  ensure_directory(output_dir);
  std::string s = "N,max_stable,max_expanded,max_exact\n";
  for (const auto& r : rows)
    s += std::to_string(r.N) + "," + format_real(r.max_stable) + "," +
         format_real(r.max_expanded) + "," + format_real(r.max_exact) + "\n";
  const fs::path path = output_dir / "float_demo.csv";
  write_file(path, s);
  return path;
}

fs::path validate_run(const fs::path& run_dir, std::optional<int> n,
                      std::optional<unsigned> workers) {
  json meta;
  try {
    meta = json::parse(read_file(run_dir / "metadata.json"));
  } catch (const json::parse_error& e) {
    throw InvalidInput("metadata " + (run_dir / "metadata.json").string() + ": " + e.what());
  }
  if (!meta.contains("config"))
    throw InvalidInput("metadata has no config section");
  ExperimentConfig config = config_from_json(meta["config"]);
  if (workers)
    config.workers = *workers;

  const ProblemSpec spec = problem_spec(config.problem);
  const auto train = make_training_grid(spec.domain, config.training_grid);

  std::vector<std::size_t> indices;
  {
    std::istringstream in(read_file(run_dir / "snapshots.csv"));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      if (line.empty())
        continue;
      std::istringstream cells(line);
      std::string order, index;
      std::getline(cells, order, ',');
      std::getline(cells, index, ',');
      std::size_t pos = 0;
      unsigned long long value = 0;
      try {
        value = std::stoull(index, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != index.size() || index.empty() || value >= train.size())
        throw InvalidInput("snapshots.csv: bad training index '" + index + "'");
      indices.push_back(static_cast<std::size_t>(value));
    }
  }
  if (indices.empty())
    throw InvalidInput("snapshots.csv lists no snapshots");
  const std::size_t count =
      n ? std::min<std::size_t>(static_cast<std::size_t>(std::max(*n, 1)), indices.size())
        : indices.size();

  const TruthDiscretization disc(config.nodes_per_dim);
  const AffineOperator op = assemble_affine(spec, disc);
  ReducedBasis basis;
  ReducedModel model;
  for (std::size_t m = 0; m < count; ++m) {
    auto ext = extend_basis(basis, model, truth_solve(op, train[indices[m]]), op, config.drop_tol);
    basis = std::move(ext.basis);
    model = std::move(ext.model);
  }

  const auto points =
      make_training_grid(spec.domain, config.validation_grid.value_or(config.training_grid));
  const auto result = validate(basis, model, op, points, op.gram, config.workers);
  std::string s = mu_header(spec.domain.dim()) + ",true_error\n";
  for (const auto& p : result)
    s += mu_cells(p.mu) + "," + format_real(p.error) + "\n";
  const fs::path path = run_dir / ("validation_N" + std::to_string(count) + ".csv");
  write_file(path, s);
  return path;
}

} // namespace rbm
