#pragma once

#include <vector>

#include "rbm/numerics.hpp"
#include "rbm/truth.hpp"

namespace rbm {

/// Orthonormal snapshot basis with its sample set.
///
/// snapshots[m] = sum_k xi[k] * chol_coeffs(k, m); chol_coeffs is upper
/// triangular and grows by one row and column per extension.
struct ReducedBasis {
  std::vector<Param> sample_set;
  std::vector<Vector> xi;
  std::vector<Vector> snapshots;
  Matrix chol_coeffs;

  std::size_t size() const noexcept { return xi.size(); }
  bool empty() const noexcept { return xi.empty(); }
  /// xi as the columns of a dim x N matrix.
  Matrix matrix() const;
  /// Leading n-dimensional basis (the basis as it was after n extensions).
  ReducedBasis truncated(std::size_t n) const;
};

/// Parameter-independent reduced blocks: a_blocks[q](n, m) = a^q(xi_m, xi_n)
/// = xi_n^T A^q xi_m and f_blocks[q](n) = f^q(xi_n).
struct ReducedModel {
  std::vector<Matrix> a_blocks;
  std::vector<Vector> f_blocks;

  std::size_t size() const noexcept {
    return a_blocks.empty() ? 0 : static_cast<std::size_t>(a_blocks.front().rows());
  }
  ReducedModel truncated(std::size_t n) const;
};

/// Solves the N x N Galerkin system at mu. Throws SingularSystem.
Vector rb_solve(const ReducedModel& model, const AffineOperator& op, const Param& mu);

/// Xi * u_hat.
Vector reconstruct(const ReducedBasis& basis, const Vector& u_hat);

struct LagrangeCoefficients {
  Vector c;
  double condition = 1.0;
  /// Set when the condition estimate of chol_coeffs exceeds 1e12.
  bool ill_conditioned = false;
};

inline constexpr double kLagrangeConditionWarning = 1e12;

/// Coefficients of the reduced solution in the snapshot basis, c = R_s^{-1} u_hat.
LagrangeCoefficients lagrange_coefficients(const ReducedBasis& basis, const Vector& u_hat);

/// 2-norm condition number of chol_coeffs (singular-value ratio).
double basis_condition(const ReducedBasis& basis);

struct ExtendedBasis {
  ReducedBasis basis;
  ReducedModel model;
};

/// Appends a snapshot: orthonormalizes it against the current basis and
/// borders every reduced block with one new row and column. Existing block
/// entries are copied unchanged. Throws DependentSnapshot when the snapshot
/// adds no direction above drop_tol, InvalidInput when its parameter is
/// already in the sample set.
ExtendedBasis extend_basis(const ReducedBasis& basis, const ReducedModel& model,
                           const Snapshot& snapshot, const AffineOperator& op,
                           double drop_tol = kDefaultDropTol);

} // namespace rbm
