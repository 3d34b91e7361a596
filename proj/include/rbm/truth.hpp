#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rbm/numerics.hpp"

namespace rbm {

/// A point in parameter space.
using Param = std::vector<double>;

/// Axis-aligned box in R^p.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t dim() const noexcept { return lower.size(); }
  bool contains(const Param& mu, double slack = 1e-12) const;
};

enum class ProblemId { oned_continuous, oned_discontinuous, twod_first, twod_second };

std::string_view to_string(ProblemId id);
ProblemId parse_problem_id(std::string_view name);

/// The four benchmark problems on [-1,1]^2 with homogeneous Dirichlet data:
///
///   oned-continuous     (1 + mu x) u_xx + u_yy = exp(4xy),          mu in [-0.995, 0.995]
///   oned-discontinuous  (1 + l(mu) x) u_xx + u_yy = exp(4xy),
///                       l(mu) = sin((mu - sign(mu)) pi / 2),          mu in [-0.995, 0.995]
///   twod-first          -u_xx - mu1 u_yy - mu2 u = -10 sin(8x(y-1)),  mu in [0.1,4] x [0,2]
///   twod-second         (1 + mu1 x) u_xx + (1 + mu2 y) u_yy = exp(4xy), mu in [-0.99,0.99]^2
struct ProblemSpec {
  ProblemId id = ProblemId::oned_continuous;
  int param_dim = 1;
  Box domain;
  int Q_a = 0;
  int Q_f = 0;
  /// Value taken by sign(0) inside l(mu); only used by oned-discontinuous.
  double sign_at_zero = 1.0;
};

ProblemSpec problem_spec(ProblemId id);

/// l(mu) = sin((mu - sign(mu)) pi / 2).
double discontinuous_coefficient(double mu, double sign_at_zero = 1.0);

struct ChebyshevGrid {
  Vector nodes; // cos(j pi / n), j = 0..n, descending from 1 to -1
  Matrix D;     // (n+1) x (n+1) first-derivative matrix
};

ChebyshevGrid chebyshev_grid(int n);

/// Tensor Chebyshev collocation on [-1,1]^2 restricted to interior nodes.
///
/// Unknowns are ordered with the x index running fastest:
/// k = (i - 1) + (j - 1) * (nodes_per_dim - 2) for grid position (i, j),
/// 1 <= i, j <= nodes_per_dim - 2.
class TruthDiscretization {
public:
  explicit TruthDiscretization(int nodes_per_dim, GramSpec gram = {});

  int nodes_per_dim() const noexcept { return nodes_per_dim_; }
  int interior_per_dim() const noexcept { return nodes_per_dim_ - 2; }
  Eigen::Index interior_dim() const noexcept {
    return static_cast<Eigen::Index>(interior_per_dim()) * interior_per_dim();
  }

  const Vector& nodes() const noexcept { return grid_.nodes; }
  const Matrix& diff1() const noexcept { return grid_.D; }
  const Matrix& diff2() const noexcept { return diff2_; }
  const GramSpec& gram() const noexcept { return gram_; }

  Eigen::Index interior_index(int i, int j) const;
  std::pair<int, int> grid_position(Eigen::Index k) const;

  /// Interior coordinates of unknown k.
  double x(Eigen::Index k) const;
  double y(Eigen::Index k) const;

  /// Samples g at the interior nodes.
  Vector sample(const std::function<double(double, double)>& g) const;

  /// Interior second-derivative operators on the unknown vector.
  Matrix dxx() const;
  Matrix dyy() const;

  /// Values on the full nodes_per_dim^2 grid (x fastest), zero on the boundary.
  Vector extend_to_grid(const Vector& interior) const;

private:
  int nodes_per_dim_;
  ChebyshevGrid grid_;
  Matrix diff2_;
  GramSpec gram_;
};

/// Affinely parametrized operator and load:
///   A(mu) = sum_q theta_a^q(mu) A^q,   f(mu) = sum_q theta_f^q(mu) f^q.
struct AffineOperator {
  std::vector<Matrix> a_components;
  std::vector<Vector> f_components;
  std::function<Vector(const Param&)> theta_a;
  std::function<Vector(const Param&)> theta_f;
  std::optional<Box> domain;
  /// +1 when a(w, w) = w^T A w is the coercive form, -1 when the problem is
  /// posed with the negative-definite orientation (e.g. u_xx + u_yy = f).
  double coercive_sign = 1.0;
  GramSpec gram;

  std::size_t Q_a() const noexcept { return a_components.size(); }
  std::size_t Q_f() const noexcept { return f_components.size(); }
  Eigen::Index dim() const;

  Matrix assemble_matrix(const Param& mu) const;
  Vector assemble_load(const Param& mu) const;
  /// Evaluates theta_a and checks the length against Q_a.
  Vector coefficients_a(const Param& mu) const;
  Vector coefficients_f(const Param& mu) const;
  void check_param(const Param& mu) const;
};

AffineOperator assemble_affine(const ProblemSpec& spec, const TruthDiscretization& disc);

struct Snapshot {
  Param mu;
  Vector values;
};

/// Solves A(mu) u = f(mu). Throws SingularSystem for a degenerate mu.
Snapshot truth_solve(const AffineOperator& op, const Param& mu);

/// ||u_truth - u_rb|| in the gram norm.
double true_error(const Snapshot& u_truth, const Vector& u_rb, const GramSpec& gram);

} // namespace rbm
