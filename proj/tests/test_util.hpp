#pragma once

#include <cmath>
#include <random>

#include "rbm/numerics.hpp"

namespace test {

inline rbm::Vector random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> dist;
  rbm::Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v(i) = dist(rng);
  return v;
}

inline rbm::Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> dist;
  rbm::Matrix A(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i)
      A(i, j) = dist(rng);
  return A;
}

inline rbm::Matrix random_spd(Eigen::Index n, std::mt19937_64& rng) {
  const rbm::Matrix M = random_matrix(n, n, rng);
  rbm::Matrix G = M * M.transpose() / static_cast<double>(n) + rbm::Matrix::Identity(n, n);
  return 0.5 * (G + G.transpose());
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
inline rbm::Vector jacobi_eigenvalues(rbm::Matrix A) {
  const Eigen::Index n = A.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q)
        off += A(p, q) * A(p, q);
    if (off <= 1e-30 * A.squaredNorm())
      break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (A(p, q) == 0.0)
          continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  return A.diagonal();
}

} // namespace test
