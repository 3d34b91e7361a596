#include "rbm/estimators.hpp"

#include <cmath>
#include <random>

namespace rbm {

std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
  case EstimatorKind::classical: return "classical";
  case EstimatorKind::stable: return "stable";
  case EstimatorKind::lebesgue: return "lebesgue";
  }
  return "unknown";
}

EstimatorKind parse_estimator_kind(std::string_view name) {
  for (auto k : {EstimatorKind::classical, EstimatorKind::stable, EstimatorKind::lebesgue})
    if (to_string(k) == name)
      return k;
  throw InvalidInput("unknown estimator kind '" + std::string(name) + "'");
}

std::string_view to_string(AlphaMode mode) {
  return mode == AlphaMode::unit ? "unit" : "exact-eig";
}

AlphaMode parse_alpha_mode(std::string_view name) {
  if (name == "unit")
    return AlphaMode::unit;
  if (name == "exact-eig")
    return AlphaMode::exact_eig;
  throw InvalidInput("unknown alpha mode '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Riesz data

void extend_riesz_data(RieszData& riesz, const AffineOperator& op, const ReducedBasis& basis,
                       const GramSpec& gram) {
  const std::size_t Qa = op.Q_a();
  const std::size_t Qf = op.Q_f();
  if (riesz.C.empty()) {
    riesz.Q_a = Qa;
    riesz.N = 0;
    for (const auto& f : op.f_components)
      riesz.C.push_back(gram.riesz(f));
    riesz.CC.resize(static_cast<Eigen::Index>(Qf), static_cast<Eigen::Index>(Qf));
    for (std::size_t i = 0; i < Qf; ++i)
      for (std::size_t j = 0; j < Qf; ++j)
        riesz.CC(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            gram.inner(riesz.C[i], riesz.C[j]);
    riesz.CL.resize(static_cast<Eigen::Index>(Qf), 0);
    riesz.LL.resize(0, 0);
  }
  if (riesz.Q_a != Qa || riesz.C.size() != Qf)
    throw InvalidInput("extend_riesz_data: Riesz data does not match the operator");
  if (riesz.N > basis.size())
    throw InvalidInput("extend_riesz_data: basis is smaller than the Riesz data");

  const auto old_cols = static_cast<Eigen::Index>(riesz.N * Qa);
  const auto new_cols = static_cast<Eigen::Index>(basis.size() * Qa);
  for (std::size_t m = riesz.N; m < basis.size(); ++m)
    for (std::size_t q = 0; q < Qa; ++q)
      riesz.L.push_back(gram.riesz(op.a_components[q] * basis.xi[m]));

  riesz.CL.conservativeResize(Eigen::NoChange, new_cols);
  for (Eigen::Index j = old_cols; j < new_cols; ++j)
    for (std::size_t i = 0; i < Qf; ++i)
      riesz.CL(static_cast<Eigen::Index>(i), j) =
          gram.inner(riesz.C[i], riesz.L[static_cast<std::size_t>(j)]);

  riesz.LL.conservativeResize(new_cols, new_cols);
  for (Eigen::Index j = old_cols; j < new_cols; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      const double v =
          gram.inner(riesz.L[static_cast<std::size_t>(i)], riesz.L[static_cast<std::size_t>(j)]);
      riesz.LL(i, j) = v;
      riesz.LL(j, i) = v;
    }
  }
  riesz.N = basis.size();
}

RieszData build_riesz_data(const AffineOperator& op, const ReducedBasis& basis,
                           const GramSpec& gram) {
  RieszData riesz;
  extend_riesz_data(riesz, op, basis, gram);
  return riesz;
}

Vector interleaved_coefficients(const Vector& theta_a, const Vector& u_hat) {
  const Eigen::Index Qa = theta_a.size();
  Vector c(Qa * u_hat.size());
  for (Eigen::Index m = 0; m < u_hat.size(); ++m)
    for (Eigen::Index q = 0; q < Qa; ++q)
      c[m * Qa + q] = theta_a[q] * u_hat[m];
  return c;
}

namespace {

void check_alpha(double alpha_lb) {
  if (!(alpha_lb > 0) || !std::isfinite(alpha_lb))
    throw InvalidInput("estimator: alpha_lb must be positive and finite");
}

} // namespace

EstimateValue estimator_classical(const RieszData& riesz, const AffineOperator& op,
                                  const Param& mu, const Vector& u_hat, double alpha_lb) {
  check_alpha(alpha_lb);
  if (static_cast<std::size_t>(u_hat.size()) != riesz.N)
    throw InvalidInput("estimator_classical: coefficient count does not match Riesz data");

  const Vector theta_f = op.coefficients_f(mu);
  const Vector c = interleaved_coefficients(op.coefficients_a(mu), u_hat);

  const double ff = theta_f.dot(riesz.CC * theta_f);
  const double aa = c.dot(riesz.LL * c);
  const double fa = theta_f.dot(riesz.CL * c);
  const double quadratic = ff + aa - 2.0 * fa;

  EstimateValue out;
  out.alpha_used = alpha_lb;
  out.clamped = quadratic < 0.0;
  out.value = std::sqrt(std::max(quadratic, 0.0)) / alpha_lb;
  return out;
}

// ---------------------------------------------------------------------------
// Pivoted-QR residual evaluation

StableFactors build_stable_factors(const RieszData& riesz, const GramSpec& gram,
                                   double rank_tol_rel) {
  if (riesz.C.empty())
    throw InvalidInput("build_stable_factors: Riesz data is not populated");

  const std::size_t Qf = riesz.C.size();
  const Eigen::Index dim = riesz.C.front().size();
  const auto cols = static_cast<Eigen::Index>(riesz.L.size());

  StableFactors out;
  out.Q_a = riesz.Q_a;

  Matrix B(dim, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    B.col(j) = gram.to_euclidean(riesz.L[static_cast<std::size_t>(j)]);

  std::vector<Vector> C_euclid;
  for (const auto& C : riesz.C)
    C_euclid.push_back(gram.to_euclidean(C));

  if (cols > 0) {
    PivotedQR qr = pivoted_qr(B, rank_tol_rel);
    out.rank = qr.rank;
    out.perm = qr.perm;
    out.Q = std::move(qr.Q);
    out.RZt = Matrix::Zero(out.rank, cols);
    for (Eigen::Index k = 0; k < cols; ++k)
      out.RZt.col(qr.perm[static_cast<std::size_t>(k)]) = qr.R.col(k);
  } else {
    out.Q = Matrix(dim, 0);
    out.RZt = Matrix(0, 0);
  }

  out.QtC.resize(out.rank, static_cast<Eigen::Index>(Qf));
  std::vector<Vector> complements;
  for (std::size_t q = 0; q < Qf; ++q) {
    out.QtC.col(static_cast<Eigen::Index>(q)) = out.Q.transpose() * C_euclid[q];
    complements.push_back(complement_project(out.Q, C_euclid[q]));
  }

  // Complement parts at roundoff level relative to C^q lie in range(B).
  std::vector<Vector> kept;
  for (std::size_t q = 0; q < Qf; ++q)
    if (complements[q].norm() > rank_tol_rel * C_euclid[q].norm())
      kept.push_back(complements[q]);

  std::vector<Vector> w_basis;
  for (const auto& v : kept)
    orthonormalize_append(w_basis, v, GramSpec{}, rank_tol_rel);

  out.W = Matrix(dim, static_cast<Eigen::Index>(w_basis.size()));
  for (std::size_t k = 0; k < w_basis.size(); ++k)
    out.W.col(static_cast<Eigen::Index>(k)) = w_basis[k];
  out.W_coords.resize(out.W.cols(), static_cast<Eigen::Index>(Qf));
  for (std::size_t q = 0; q < Qf; ++q)
    out.W_coords.col(static_cast<Eigen::Index>(q)) = out.W.transpose() * complements[q];
  return out;
}

StableTerms stable_terms(const StableFactors& factors, const AffineOperator& op, const Param& mu,
                         const Vector& u_hat) {
  const Vector theta_f = op.coefficients_f(mu);
  const Vector c = interleaved_coefficients(op.coefficients_a(mu), u_hat);
  if (c.size() != factors.RZt.cols() && !(factors.rank == 0 && u_hat.size() == 0))
    throw InvalidInput("estimator_stable: coefficient count does not match the factors");

  StableTerms out;
  out.complement = (factors.W_coords * theta_f).norm();
  if (factors.rank > 0)
    out.range = (factors.QtC * theta_f - factors.RZt * c).norm();
  return out;
}

EstimateValue estimator_stable(const StableFactors& factors, const AffineOperator& op,
                               const Param& mu, const Vector& u_hat, double alpha_lb) {
  check_alpha(alpha_lb);
  const StableTerms t = stable_terms(factors, op, mu, u_hat);
  EstimateValue out;
  out.alpha_used = alpha_lb;
  out.value = std::sqrt(t.complement * t.complement + t.range * t.range) / alpha_lb;
  return out;
}

// ---------------------------------------------------------------------------

EstimateValue estimator_lebesgue(const Vector& c) {
  EstimateValue out;
  out.value = c.cwiseAbs().sum();
  out.alpha_used = 1.0;
  return out;
}

CoercivityBound coercivity_lower_bound(const AffineOperator& op, const Param& mu, AlphaMode mode,
                                       const GramSpec& gram, double floor) {
  if (!(floor > 0))
    throw InvalidInput("coercivity_lower_bound: floor must be positive");
  op.check_param(mu);
  if (mode == AlphaMode::unit)
    return {1.0, false};

  const double lambda =
      smallest_symmetric_eigenvalue(op.coercive_sign * op.assemble_matrix(mu), gram);
  if (lambda < floor)
    return {floor, true};
  return {lambda, false};
}

double residual_norm_oracle(const AffineOperator& op, const ReducedBasis& basis, const Param& mu,
                            const Vector& u_hat, const GramSpec& gram) {
  const Vector u = basis.empty() ? Vector::Zero(op.dim()).eval() : reconstruct(basis, u_hat);
  const Vector r = op.assemble_load(mu) - op.assemble_matrix(mu) * u;
  return gram.dual_to_euclidean(r).norm();
}

std::vector<FloatDemoRow> float_demo(const std::vector<int>& N_values, int mu_samples,
                                     std::uint64_t seed) {
  if (mu_samples < 1)
    throw InvalidInput("float_demo: mu_samples must be at least 1");

  std::mt19937_64 rng(seed);
  const auto uniform_open = [&rng] {
    for (;;) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (u > 0.0)
        return u;
    }
  };

  std::vector<FloatDemoRow> rows;
  for (int N : N_values) {
    const double a = uniform_open();
    const double scale = std::pow(4.0, -N);
    FloatDemoRow row;
    row.N = N;
    for (int i = 1; i <= mu_samples; ++i) {
      const double mu = static_cast<double>(i) / (mu_samples + 1);
      const double b = a + mu * scale;
      const double diff = a - b;
      const double expanded = a * a - 2.0 * a * b + b * b;
      row.max_stable = std::max(row.max_stable, std::sqrt(diff * diff));
      row.max_expanded = std::max(row.max_expanded, std::sqrt(std::max(expanded, 0.0)));
      row.max_exact = std::max(row.max_exact, mu * scale);
    }
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Greedy objectives

namespace {

class ClassicalObjective final : public GreedyObjective {
public:
  explicit ClassicalObjective(GramSpec gram) : gram_(std::move(gram)) {}

  EstimatorKind kind() const override { return EstimatorKind::classical; }

  void rebuild(const AffineOperator& op, const ReducedBasis& basis) override {
    if (riesz_.N > basis.size())
      riesz_ = RieszData{};
    extend_riesz_data(riesz_, op, basis, gram_);
  }

  EstimateValue evaluate(const AffineOperator& op, const Param& mu, const Vector& u_hat,
                         double alpha_lb) const override {
    return estimator_classical(riesz_, op, mu, u_hat, alpha_lb);
  }

private:
  GramSpec gram_;
  RieszData riesz_;
};

class StableObjective final : public GreedyObjective {
public:
  StableObjective(GramSpec gram, double rank_tol) : gram_(std::move(gram)), rank_tol_(rank_tol) {}

  EstimatorKind kind() const override { return EstimatorKind::stable; }

  void rebuild(const AffineOperator& op, const ReducedBasis& basis) override {
    if (riesz_.N > basis.size())
      riesz_ = RieszData{};
    extend_riesz_data(riesz_, op, basis, gram_);
    factors_ = build_stable_factors(riesz_, gram_, rank_tol_);
  }

  EstimateValue evaluate(const AffineOperator& op, const Param& mu, const Vector& u_hat,
                         double alpha_lb) const override {
    return estimator_stable(factors_, op, mu, u_hat, alpha_lb);
  }

private:
  GramSpec gram_;
  double rank_tol_;
  RieszData riesz_;
  StableFactors factors_;
};

class LebesgueObjective final : public GreedyObjective {
public:
  EstimatorKind kind() const override { return EstimatorKind::lebesgue; }

  void rebuild(const AffineOperator&, const ReducedBasis& basis) override {
    chol_coeffs_ = basis.chol_coeffs;
  }

  EstimateValue evaluate(const AffineOperator&, const Param&, const Vector& u_hat,
                         double) const override {
    const Vector c = chol_coeffs_.triangularView<Eigen::Upper>().solve(u_hat);
    return estimator_lebesgue(c);
  }

private:
  Matrix chol_coeffs_;
};

} // namespace

std::unique_ptr<GreedyObjective> make_objective(EstimatorKind kind, const GramSpec& gram,
                                                ObjectiveOptions options) {
  switch (kind) {
  case EstimatorKind::classical: return std::make_unique<ClassicalObjective>(gram);
  case EstimatorKind::stable: return std::make_unique<StableObjective>(gram, options.rank_tol_rel);
  case EstimatorKind::lebesgue: return std::make_unique<LebesgueObjective>();
  }
  throw InvalidInput("make_objective: unknown estimator kind");
}

} // namespace rbm
