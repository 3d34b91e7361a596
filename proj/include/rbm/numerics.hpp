#pragma once

#include <optional>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "rbm/errors.hpp"

namespace rbm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Inner product on the truth space.
///
/// Either the plain Euclidean product or v^T G w for an SPD matrix G. In the
/// explicit case G = L L^T is factored once; primal vectors map to Euclidean
/// coordinates through L^T v and dual vectors (functionals) through L^{-1} f,
/// so every norm reduces to a Euclidean norm of a transformed vector.
class GramSpec {
public:
  enum class Kind { identity, explicit_spd };

  /// Identity Gram (plain l2 inner product).
  GramSpec() = default;

  /// Explicit SPD Gram. Throws InvalidGram when G is not symmetric to 1e-12
  /// relative or its Cholesky factorization fails.
  static GramSpec explicit_spd(Matrix G);

  Kind kind() const noexcept { return kind_; }
  bool is_identity() const noexcept { return kind_ == Kind::identity; }
  const Matrix& matrix() const;

  double inner(const Vector& u, const Vector& v) const;
  double norm(const Vector& v) const;

  /// G v.
  Vector apply(const Vector& v) const;
  /// Riesz representer of the functional f: solves G c = f.
  Vector riesz(const Vector& f) const;
  /// L^T v, so that ||v||_G = ||L^T v||.
  Vector to_euclidean(const Vector& v) const;
  /// L^{-1} f, so that the dual norm of f equals ||L^{-1} f||.
  Vector dual_to_euclidean(const Vector& f) const;

private:
  Kind kind_ = Kind::identity;
  std::optional<Matrix> matrix_;
  std::optional<Eigen::LLT<Matrix>> llt_;
};

struct Orthonormalized {
  std::vector<Vector> basis;
  /// Upper-triangular, basis.size() x kept.size(); column j reproduces the
  /// j-th kept input vector in terms of the basis.
  Matrix coeffs;
  std::vector<std::size_t> kept;
};

inline constexpr double kDefaultDropTol = 1e-10;
inline constexpr double kDefaultRankTol = 1e-14;

/// Modified Gram-Schmidt with one re-orthogonalization pass. A vector whose
/// norm after projection falls below drop_tol times its original norm is
/// dropped (zero vectors are always dropped).
Orthonormalized orthonormalize(const std::vector<Vector>& vectors, const GramSpec& gram,
                               double drop_tol = kDefaultDropTol);

/// Appends one vector to an existing gram-orthonormal basis. Returns the
/// new coefficient column (length basis.size()+1, last entry the new
/// diagonal) or std::nullopt if the vector is dropped.
std::optional<Vector> orthonormalize_append(std::vector<Vector>& basis, const Vector& v,
                                            const GramSpec& gram, double drop_tol = kDefaultDropTol);

struct PivotedQR {
  Matrix Q;                       // rows x rank, orthonormal columns
  Matrix R;                       // rank x cols, upper trapezoidal in pivoted order
  std::vector<Eigen::Index> perm; // column perm[k] of B is column k of B*Z
  Eigen::Index rank = 0;

  /// Z^T x: reorders x from original column order to pivoted order.
  Vector permute(const Vector& x) const;
};

/// Householder QR with column pivoting, truncated at the first diagonal entry
/// with |R_kk| <= rank_tol_rel * |R_11|.
PivotedQR pivoted_qr(const Matrix& B, double rank_tol_rel = kDefaultRankTol);

/// (I - Q Q^T) v, applied twice so the result is orthogonal to range(Q) to
/// working precision. An empty Q leaves v unchanged.
Vector complement_project(const Matrix& Q, const Vector& v);

/// LU with partial pivoting. Throws SingularSystem when a pivot is below
/// n * eps * max|A|.
Vector solve_dense(const Matrix& A, const Vector& b);

/// min_w w^T sym(A) w / w^T G w.
double smallest_symmetric_eigenvalue(const Matrix& A, const GramSpec& gram);

/// Throws InvalidInput if any entry is non-finite.
void require_finite(const Matrix& A, const char* what);
void require_finite(const Vector& v, const char* what);

} // namespace rbm
