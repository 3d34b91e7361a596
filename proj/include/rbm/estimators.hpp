#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "rbm/objective.hpp"

namespace rbm {

/// Riesz representers of the affine load and operator components.
///
/// C[q] solves (C^q, v)_X = f^q(v); L[m * Q_a + q] solves
/// (L_m^q, v)_X = a^q(xi_m, v). The column order of L is the column order of
/// the matrix B = [L_1^1 .. L_1^Qa .. L_N^1 .. L_N^Qa].
struct RieszData {
  std::size_t Q_a = 0;
  std::size_t N = 0;
  std::vector<Vector> C;
  std::vector<Vector> L;
  Matrix CC; // Q_f x Q_f
  Matrix CL; // Q_f x (N Q_a)
  Matrix LL; // (N Q_a) x (N Q_a)
};

/// Builds Riesz data for every basis vector. Throws InvalidGram.
RieszData build_riesz_data(const AffineOperator& op, const ReducedBasis& basis,
                           const GramSpec& gram);

/// Appends representers and table rows for basis vectors riesz.N .. basis.size()-1.
/// Existing entries are not touched.
void extend_riesz_data(RieszData& riesz, const AffineOperator& op, const ReducedBasis& basis,
                       const GramSpec& gram);

/// Interleaved coefficient vector c(mu)[m * Q_a + q] = theta_a^q(mu) u_hat[m].
Vector interleaved_coefficients(const Vector& theta_a, const Vector& u_hat);

/// Classical expanded-quadratic residual estimator: sqrt of
/// theta_f^T CC theta_f + c^T LL c - 2 theta_f^T CL c, clamped at zero,
/// divided by alpha_lb. Reads only the tables.
EstimateValue estimator_classical(const RieszData& riesz, const AffineOperator& op,
                                  const Param& mu, const Vector& u_hat, double alpha_lb);

/// Online data of the pivoted-QR residual evaluation.
///
/// With B Z = Q R (Euclidean images of the representers) and W an
/// orthonormal basis of span{(I - QQ^T) C^q}, the residual norm is
///   sqrt(|W_coords theta_f|^2 + |QtC theta_f - RZt c(mu)|^2).
/// Q and W are kept for diagnostics only; the online evaluation reads
/// QtC, RZt and W_coords, none of which has a truth-sized dimension.
struct StableFactors {
  std::size_t Q_a = 0;
  Eigen::Index rank = 0;
  std::vector<Eigen::Index> perm;
  Matrix QtC;      // rank x Q_f
  Matrix RZt;      // rank x (N Q_a)
  Matrix W_coords; // dim(W) x Q_f

  Matrix Q; // offline only
  Matrix W; // offline only
};

StableFactors build_stable_factors(const RieszData& riesz, const GramSpec& gram,
                                   double rank_tol_rel = kDefaultRankTol);

/// Squared-free split of the residual norm into its complement and range parts.
struct StableTerms {
  double complement = 0.0; // |W_coords theta_f|
  double range = 0.0;      // |QtC theta_f - RZt c(mu)|
};

StableTerms stable_terms(const StableFactors& factors, const AffineOperator& op, const Param& mu,
                         const Vector& u_hat);

EstimateValue estimator_stable(const StableFactors& factors, const AffineOperator& op,
                               const Param& mu, const Vector& u_hat, double alpha_lb);

/// Lebesgue function: sum_m |c_m| of the snapshot-basis coefficients.
EstimateValue estimator_lebesgue(const Vector& c);

struct CoercivityBound {
  double value = 1.0;
  /// Exact eigenvalue fell below the floor.
  bool degenerate = false;
};

inline constexpr double kDefaultAlphaFloor = 1e-12;

/// Lower bound for the coercivity constant. `unit` returns 1; `exact_eig`
/// returns the smallest eigenvalue of the symmetrized (coercively oriented)
/// operator in the gram inner product, floored at `floor`.
CoercivityBound coercivity_lower_bound(const AffineOperator& op, const Param& mu, AlphaMode mode,
                                       const GramSpec& gram, double floor = kDefaultAlphaFloor);

/// Dual norm of f(mu) - A(mu) Xi u_hat computed directly in the truth space.
double residual_norm_oracle(const AffineOperator& op, const ReducedBasis& basis, const Param& mu,
                            const Vector& u_hat, const GramSpec& gram);

struct FloatDemoRow {
  int N = 0;
  double max_stable = 0.0;   // max_mu sqrt((a - b)^2)
  double max_expanded = 0.0; // max_mu sqrt(max(a^2 - 2ab + b^2, 0))
  double max_exact = 0.0;    // max_mu mu 4^-N
};

/// Cancellation demo with b = a + mu 4^-N, a uniform in (0,1) per N and
/// mu_samples equispaced mu in (0,1).
std::vector<FloatDemoRow> float_demo(const std::vector<int>& N_values, int mu_samples,
                                     std::uint64_t seed);

struct ObjectiveOptions {
  double rank_tol_rel = kDefaultRankTol;
};

std::unique_ptr<GreedyObjective> make_objective(EstimatorKind kind, const GramSpec& gram,
                                                ObjectiveOptions options = {});

} // namespace rbm
