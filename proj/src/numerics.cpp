#include "rbm/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace rbm {

void require_finite(const Matrix& A, const char* what) {
  if (!A.allFinite())
    throw InvalidInput(std::string(what) + ": non-finite entry");
}

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite())
    throw InvalidInput(std::string(what) + ": non-finite entry");
}

// ---------------------------------------------------------------------------
// GramSpec

GramSpec GramSpec::explicit_spd(Matrix G) {
  if (G.rows() == 0 || G.rows() != G.cols())
    throw InvalidGram("gram matrix must be square and nonempty");
  require_finite(G, "gram matrix");
  const double scale = G.norm();
  if ((G - G.transpose()).norm() > 1e-12 * scale)
    throw InvalidGram("gram matrix is not symmetric");
  Eigen::LLT<Matrix> llt(G);
  if (llt.info() != Eigen::Success)
    throw InvalidGram("gram matrix is not positive definite");

  GramSpec g;
  g.kind_ = Kind::explicit_spd;
  g.matrix_ = std::move(G);
  g.llt_ = std::move(llt);
  return g;
}

const Matrix& GramSpec::matrix() const {
  if (!matrix_)
    throw InvalidInput("identity gram has no explicit matrix");
  return *matrix_;
}

double GramSpec::inner(const Vector& u, const Vector& v) const {
  if (is_identity())
    return u.dot(v);
  return u.dot(*matrix_ * v);
}

double GramSpec::norm(const Vector& v) const {
  if (is_identity())
    return v.norm();
  return to_euclidean(v).norm();
}

Vector GramSpec::apply(const Vector& v) const {
  if (is_identity())
    return v;
  return *matrix_ * v;
}

Vector GramSpec::riesz(const Vector& f) const {
  if (is_identity())
    return f;
  return llt_->solve(f);
}

Vector GramSpec::to_euclidean(const Vector& v) const {
  if (is_identity())
    return v;
  return llt_->matrixU() * v;
}

Vector GramSpec::dual_to_euclidean(const Vector& f) const {
  if (is_identity())
    return f;
  return llt_->matrixL().solve(f);
}

// ---------------------------------------------------------------------------
// Orthonormalization

std::optional<Vector> orthonormalize_append(std::vector<Vector>& basis, const Vector& v,
                                            const GramSpec& gram, double drop_tol) {
  if (!(drop_tol > 0))
    throw InvalidInput("orthonormalize: drop_tol must be positive");
  require_finite(v, "orthonormalize");
  if (!basis.empty() && basis.front().size() != v.size())
    throw InvalidInput("orthonormalize: dimension mismatch");

  const double original = gram.norm(v);
  Vector w = v;
  Vector h = Vector::Zero(static_cast<Eigen::Index>(basis.size()) + 1);

  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const double c = gram.inner(basis[i], w);
      w -= c * basis[i];
      h[static_cast<Eigen::Index>(i)] += c;
    }
  }

  const double remaining = gram.norm(w);
  if (original == 0.0 || remaining < drop_tol * original)
    return std::nullopt;

  h[h.size() - 1] = remaining;
  basis.push_back(w / remaining);
  return h;
}

Orthonormalized orthonormalize(const std::vector<Vector>& vectors, const GramSpec& gram,
                               double drop_tol) {
  if (vectors.empty())
    throw InvalidInput("orthonormalize: empty input");

  Orthonormalized out;
  std::vector<Vector> columns;
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (auto h = orthonormalize_append(out.basis, vectors[j], gram, drop_tol)) {
      out.kept.push_back(j);
      columns.push_back(std::move(*h));
    }
  }

  const auto n = static_cast<Eigen::Index>(out.basis.size());
  out.coeffs = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    out.coeffs.col(j).head(j + 1) = columns[static_cast<std::size_t>(j)];
  return out;
}

// ---------------------------------------------------------------------------
// Column-pivoted Householder QR

Vector PivotedQR::permute(const Vector& x) const {
  Vector out(static_cast<Eigen::Index>(perm.size()));
  for (std::size_t k = 0; k < perm.size(); ++k)
    out[static_cast<Eigen::Index>(k)] = x[perm[k]];
  return out;
}

PivotedQR pivoted_qr(const Matrix& B, double rank_tol_rel) {
  if (!(rank_tol_rel > 0 && rank_tol_rel < 1))
    throw InvalidInput("pivoted_qr: rank_tol_rel must lie in (0, 1)");
  require_finite(B, "pivoted_qr");

  const Eigen::Index m = B.rows();
  const Eigen::Index n = B.cols();
  const Eigen::Index steps = std::min(m, n);

  PivotedQR out;
  out.perm.resize(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j)
    out.perm[static_cast<std::size_t>(j)] = j;

  Matrix A = B;
  std::vector<Vector> reflectors;
  Vector diag(steps);
  double r11 = 0.0;
  Eigen::Index rank = 0;

  for (Eigen::Index k = 0; k < steps; ++k) {
    // Pivot on the largest trailing column norm; norms are recomputed
    // rather than downdated.
    Eigen::Index best = k;
    double best_norm = -1.0;
    for (Eigen::Index j = k; j < n; ++j) {
      const double nrm = A.col(j).tail(m - k).norm();
      if (nrm > best_norm) {
        best_norm = nrm;
        best = j;
      }
    }
    if (best != k) {
      A.col(k).swap(A.col(best));
      std::swap(out.perm[static_cast<std::size_t>(k)], out.perm[static_cast<std::size_t>(best)]);
    }

    if (k == 0)
      r11 = best_norm;
    if (best_norm == 0.0 || best_norm <= rank_tol_rel * r11)
      break;

    auto x = A.col(k).tail(m - k);
    const double alpha = x[0] >= 0 ? -best_norm : best_norm;
    Vector v = x;
    v[0] -= alpha;
    const double vnorm = v.norm();
    if (vnorm > 0)
      v /= vnorm;

    if (k + 1 < n) {
      auto trailing = A.block(k, k + 1, m - k, n - k - 1);
      const Eigen::RowVectorXd proj = v.transpose() * trailing;
      trailing.noalias() -= 2.0 * v * proj;
    }
    A.col(k).tail(m - k).setZero();
    A(k, k) = alpha;
    diag[k] = alpha;
    reflectors.push_back(std::move(v));
    rank = k + 1;
  }

  out.rank = rank;
  out.R = A.topRows(rank).triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < rank; ++k)
    out.R(k, k) = diag[k];

  out.Q = Matrix::Zero(m, rank);
  for (Eigen::Index j = 0; j < rank; ++j)
    out.Q(j, j) = 1.0;
  for (Eigen::Index k = rank - 1; k >= 0; --k) {
    const Vector& v = reflectors[static_cast<std::size_t>(k)];
    auto block = out.Q.block(k, 0, m - k, rank);
    const Eigen::RowVectorXd proj = v.transpose() * block;
    block.noalias() -= 2.0 * v * proj;
  }
  return out;
}

Vector complement_project(const Matrix& Q, const Vector& v) {
  if (Q.cols() == 0)
    return v;
  if (Q.rows() != v.size())
    throw InvalidInput("complement_project: dimension mismatch");
  Vector w = v - Q * (Q.transpose() * v);
  w -= Q * (Q.transpose() * w);
  return w;
}

Vector solve_dense(const Matrix& A, const Vector& b) {
  if (A.rows() != A.cols() || A.rows() != b.size())
    throw InvalidInput("solve_dense: dimension mismatch");
  if (A.rows() == 0)
    return Vector();
  require_finite(A, "solve_dense");
  require_finite(b, "solve_dense");

  Eigen::PartialPivLU<Matrix> lu(A);
  const double threshold = static_cast<double>(A.rows()) * std::numeric_limits<double>::epsilon() *
                           A.cwiseAbs().maxCoeff();
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(min_pivot > threshold))
    throw SingularSystem("solve_dense: matrix is singular to working precision", min_pivot);
  return lu.solve(b);
}

double smallest_symmetric_eigenvalue(const Matrix& A, const GramSpec& gram) {
  if (A.rows() != A.cols() || A.rows() == 0)
    throw InvalidInput("smallest_symmetric_eigenvalue: matrix must be square and nonempty");
  require_finite(A, "smallest_symmetric_eigenvalue");
  const Matrix S = 0.5 * (A + A.transpose());
  if (gram.is_identity()) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(S, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff();
  }
  if (gram.matrix().rows() != A.rows())
    throw InvalidInput("smallest_symmetric_eigenvalue: gram dimension mismatch");
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> eig(S, gram.matrix(), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

} // namespace rbm
