#include "rbm/reduced_basis.hpp"

#include <algorithm>
#include <limits>

#include <Eigen/SVD>

namespace rbm {

Matrix ReducedBasis::matrix() const {
  if (xi.empty())
    return Matrix();
  Matrix out(xi.front().size(), static_cast<Eigen::Index>(xi.size()));
  for (std::size_t m = 0; m < xi.size(); ++m)
    out.col(static_cast<Eigen::Index>(m)) = xi[m];
  return out;
}

ReducedBasis ReducedBasis::truncated(std::size_t n) const {
  if (n > size())
    throw InvalidInput("ReducedBasis::truncated: n exceeds basis size");
  ReducedBasis out;
  out.sample_set.assign(sample_set.begin(), sample_set.begin() + static_cast<std::ptrdiff_t>(n));
  out.xi.assign(xi.begin(), xi.begin() + static_cast<std::ptrdiff_t>(n));
  out.snapshots.assign(snapshots.begin(), snapshots.begin() + static_cast<std::ptrdiff_t>(n));
  const auto k = static_cast<Eigen::Index>(n);
  out.chol_coeffs = chol_coeffs.topLeftCorner(k, k);
  return out;
}

ReducedModel ReducedModel::truncated(std::size_t n) const {
  if (n > size())
    throw InvalidInput("ReducedModel::truncated: n exceeds model size");
  const auto k = static_cast<Eigen::Index>(n);
  ReducedModel out;
  for (const auto& block : a_blocks)
    out.a_blocks.push_back(block.topLeftCorner(k, k));
  for (const auto& block : f_blocks)
    out.f_blocks.push_back(block.head(k));
  return out;
}

Vector rb_solve(const ReducedModel& model, const AffineOperator& op, const Param& mu) {
  const auto n = static_cast<Eigen::Index>(model.size());
  if (n == 0)
    throw InvalidInput("rb_solve: empty reduced model");
  if (model.a_blocks.size() != op.Q_a() || model.f_blocks.size() != op.Q_f())
    throw InvalidInput("rb_solve: model does not match the affine operator");

  const Vector theta_a = op.coefficients_a(mu);
  const Vector theta_f = op.coefficients_f(mu);
  Matrix A = Matrix::Zero(n, n);
  Vector f = Vector::Zero(n);
  for (std::size_t q = 0; q < op.Q_a(); ++q)
    A += theta_a[static_cast<Eigen::Index>(q)] * model.a_blocks[q];
  for (std::size_t q = 0; q < op.Q_f(); ++q)
    f += theta_f[static_cast<Eigen::Index>(q)] * model.f_blocks[q];
  return solve_dense(A, f);
}

Vector reconstruct(const ReducedBasis& basis, const Vector& u_hat) {
  if (static_cast<std::size_t>(u_hat.size()) != basis.size())
    throw InvalidInput("reconstruct: coefficient count does not match basis size");
  if (basis.empty())
    return Vector();
  Vector out = Vector::Zero(basis.xi.front().size());
  for (std::size_t m = 0; m < basis.size(); ++m)
    out += u_hat[static_cast<Eigen::Index>(m)] * basis.xi[m];
  return out;
}

double basis_condition(const ReducedBasis& basis) {
  if (basis.empty())
    return 1.0;
  Eigen::JacobiSVD<Matrix> svd(basis.chol_coeffs);
  const auto& s = svd.singularValues();
  const double smallest = s[s.size() - 1];
  return smallest > 0 ? s[0] / smallest : std::numeric_limits<double>::infinity();
}

LagrangeCoefficients lagrange_coefficients(const ReducedBasis& basis, const Vector& u_hat) {
  if (static_cast<std::size_t>(u_hat.size()) != basis.size())
    throw InvalidInput("lagrange_coefficients: coefficient count does not match basis size");
  const auto& R = basis.chol_coeffs;
  if (R.rows() > 0 && R.diagonal().cwiseAbs().minCoeff() == 0.0)
    throw SingularSystem("lagrange_coefficients: singular change of basis", 0.0);

  LagrangeCoefficients out;
  out.c = R.triangularView<Eigen::Upper>().solve(u_hat);
  out.condition = basis_condition(basis);
  out.ill_conditioned = out.condition > kLagrangeConditionWarning;
  return out;
}

ExtendedBasis extend_basis(const ReducedBasis& basis, const ReducedModel& model,
                           const Snapshot& snapshot, const AffineOperator& op, double drop_tol) {
  if (model.size() != basis.size())
    throw InvalidInput("extend_basis: basis and model sizes differ");
  if (snapshot.values.size() != op.dim())
    throw InvalidInput("extend_basis: snapshot dimension mismatch");
  if (std::find(basis.sample_set.begin(), basis.sample_set.end(), snapshot.mu) !=
      basis.sample_set.end())
    throw InvalidInput("extend_basis: parameter already in the sample set");

  ExtendedBasis out{basis, model};
  auto column = orthonormalize_append(out.basis.xi, snapshot.values, op.gram, drop_tol);
  if (!column)
    throw DependentSnapshot("extend_basis: snapshot is numerically dependent on the basis");

  const auto n = static_cast<Eigen::Index>(basis.size());
  out.basis.sample_set.push_back(snapshot.mu);
  out.basis.snapshots.push_back(snapshot.values);
  out.basis.chol_coeffs.conservativeResize(n + 1, n + 1);
  out.basis.chol_coeffs.row(n).setZero();
  out.basis.chol_coeffs.col(n) = *column;

  const Vector& xi_new = out.basis.xi.back();
  if (out.model.a_blocks.empty()) {
    out.model.a_blocks.assign(op.Q_a(), Matrix());
    out.model.f_blocks.assign(op.Q_f(), Vector());
  }
  for (std::size_t q = 0; q < op.Q_a(); ++q) {
    const Matrix& Aq = op.a_components[q];
    const Vector A_new = Aq * xi_new;
    const Vector At_new = Aq.transpose() * xi_new;
    Matrix& block = out.model.a_blocks[q];
    block.conservativeResize(n + 1, n + 1);
    for (Eigen::Index m = 0; m < n; ++m) {
      block(n, m) = At_new.dot(out.basis.xi[static_cast<std::size_t>(m)]); // xi_new^T A xi_m
      block(m, n) = out.basis.xi[static_cast<std::size_t>(m)].dot(A_new);  // xi_m^T A xi_new
    }
    block(n, n) = xi_new.dot(A_new);
  }
  for (std::size_t q = 0; q < op.Q_f(); ++q) {
    Vector& block = out.model.f_blocks[q];
    block.conservativeResize(n + 1);
    block[n] = op.f_components[q].dot(xi_new);
  }
  return out;
}

} // namespace rbm
