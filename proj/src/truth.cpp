#include "rbm/truth.hpp"

#include <cmath>
#include <numbers>

namespace rbm {

bool Box::contains(const Param& mu, double slack) const {
  if (mu.size() != dim())
    return false;
  for (std::size_t d = 0; d < dim(); ++d) {
    const double tol = slack * std::max(1.0, upper[d] - lower[d]);
    if (!(mu[d] >= lower[d] - tol && mu[d] <= upper[d] + tol))
      return false;
  }
  return true;
}

std::string_view to_string(ProblemId id) {
  switch (id) {
  case ProblemId::oned_continuous: return "oned-continuous";
  case ProblemId::oned_discontinuous: return "oned-discontinuous";
  case ProblemId::twod_first: return "twod-first";
  case ProblemId::twod_second: return "twod-second";
  }
  return "unknown";
}

ProblemId parse_problem_id(std::string_view name) {
  for (auto id : {ProblemId::oned_continuous, ProblemId::oned_discontinuous, ProblemId::twod_first,
                  ProblemId::twod_second}) {
    if (to_string(id) == name)
      return id;
  }
  throw InvalidInput("unknown problem id '" + std::string(name) + "'");
}

ProblemSpec problem_spec(ProblemId id) {
  ProblemSpec spec;
  spec.id = id;
  switch (id) {
  case ProblemId::oned_continuous:
  case ProblemId::oned_discontinuous:
    spec.param_dim = 1;
    spec.domain = {{-0.995}, {0.995}};
    spec.Q_a = 2;
    spec.Q_f = 1;
    break;
  case ProblemId::twod_first:
    spec.param_dim = 2;
    spec.domain = {{0.1, 0.0}, {4.0, 2.0}};
    spec.Q_a = 3;
    spec.Q_f = 1;
    break;
  case ProblemId::twod_second:
    spec.param_dim = 2;
    spec.domain = {{-0.99, -0.99}, {0.99, 0.99}};
    spec.Q_a = 3;
    spec.Q_f = 1;
    break;
  }
  return spec;
}

double discontinuous_coefficient(double mu, double sign_at_zero) {
  const double sign = mu > 0 ? 1.0 : (mu < 0 ? -1.0 : sign_at_zero);
  return std::sin((mu - sign) * std::numbers::pi / 2.0);
}

ChebyshevGrid chebyshev_grid(int n) {
  if (n < 1)
    throw InvalidInput("chebyshev_grid: n must be at least 1");

  const auto size = static_cast<Eigen::Index>(n) + 1;
  ChebyshevGrid grid;
  grid.nodes.resize(size);
  // sin form of cos(j pi / n): exactly antisymmetric about the midpoint.
  for (Eigen::Index j = 0; j < size; ++j)
    grid.nodes[j] = std::sin(std::numbers::pi * static_cast<double>(n - 2 * j) / (2.0 * n));

  Vector c(size);
  for (Eigen::Index j = 0; j < size; ++j)
    c[j] = ((j == 0 || j == size - 1) ? 2.0 : 1.0) * ((j % 2 == 0) ? 1.0 : -1.0);

  grid.D = Matrix::Zero(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    double row_sum = 0.0;
    for (Eigen::Index j = 0; j < size; ++j) {
      if (i == j)
        continue;
      grid.D(i, j) = (c[i] / c[j]) / (grid.nodes[i] - grid.nodes[j]);
      row_sum += grid.D(i, j);
    }
    // Rows annihilate constants.
    grid.D(i, i) = -row_sum;
  }
  return grid;
}

// ---------------------------------------------------------------------------
// TruthDiscretization

TruthDiscretization::TruthDiscretization(int nodes_per_dim, GramSpec gram)
    : nodes_per_dim_(nodes_per_dim), gram_(std::move(gram)) {
  if (nodes_per_dim < 3)
    throw InvalidInput("TruthDiscretization: need at least 3 nodes per dimension");
  grid_ = chebyshev_grid(nodes_per_dim - 1);
  diff2_ = grid_.D * grid_.D;
  if (!gram_.is_identity() && gram_.matrix().rows() != interior_dim())
    throw InvalidGram("TruthDiscretization: gram dimension does not match interior dimension");
}

Eigen::Index TruthDiscretization::interior_index(int i, int j) const {
  const int m = interior_per_dim();
  if (i < 1 || i > m || j < 1 || j > m)
    throw InvalidInput("interior_index: position is not an interior node");
  return static_cast<Eigen::Index>(i - 1) + static_cast<Eigen::Index>(j - 1) * m;
}

std::pair<int, int> TruthDiscretization::grid_position(Eigen::Index k) const {
  const int m = interior_per_dim();
  if (k < 0 || k >= interior_dim())
    throw InvalidInput("grid_position: index out of range");
  return {static_cast<int>(k % m) + 1, static_cast<int>(k / m) + 1};
}

double TruthDiscretization::x(Eigen::Index k) const { return grid_.nodes[grid_position(k).first]; }
double TruthDiscretization::y(Eigen::Index k) const { return grid_.nodes[grid_position(k).second]; }

Vector TruthDiscretization::sample(const std::function<double(double, double)>& g) const {
  Vector out(interior_dim());
  for (Eigen::Index k = 0; k < out.size(); ++k)
    out[k] = g(x(k), y(k));
  return out;
}

Matrix TruthDiscretization::dxx() const {
  const int m = interior_per_dim();
  const Matrix block = diff2_.block(1, 1, m, m);
  Matrix out = Matrix::Zero(interior_dim(), interior_dim());
  for (int j = 0; j < m; ++j)
    out.block(static_cast<Eigen::Index>(j) * m, static_cast<Eigen::Index>(j) * m, m, m) = block;
  return out;
}

Matrix TruthDiscretization::dyy() const {
  const int m = interior_per_dim();
  const Matrix block = diff2_.block(1, 1, m, m);
  Matrix out = Matrix::Zero(interior_dim(), interior_dim());
  for (int j = 0; j < m; ++j)
    for (int l = 0; l < m; ++l)
      for (int i = 0; i < m; ++i)
        out(i + static_cast<Eigen::Index>(j) * m, i + static_cast<Eigen::Index>(l) * m) = block(j, l);
  return out;
}

Vector TruthDiscretization::extend_to_grid(const Vector& interior) const {
  if (interior.size() != interior_dim())
    throw InvalidInput("extend_to_grid: dimension mismatch");
  const int n = nodes_per_dim_;
  Vector out = Vector::Zero(static_cast<Eigen::Index>(n) * n);
  for (Eigen::Index k = 0; k < interior.size(); ++k) {
    const auto [i, j] = grid_position(k);
    out[i + static_cast<Eigen::Index>(j) * n] = interior[k];
  }
  return out;
}

// ---------------------------------------------------------------------------
// AffineOperator

Eigen::Index AffineOperator::dim() const {
  if (!a_components.empty())
    return a_components.front().rows();
  if (!f_components.empty())
    return f_components.front().size();
  return 0;
}

void AffineOperator::check_param(const Param& mu) const {
  for (double v : mu)
    if (!std::isfinite(v))
      throw InvalidInput("parameter has a non-finite component");
  if (domain && mu.size() != domain->dim())
    throw InvalidInput("parameter has the wrong dimension");
  if (domain && !domain->contains(mu))
    throw InvalidInput("parameter lies outside the parameter domain");
}

Vector AffineOperator::coefficients_a(const Param& mu) const {
  check_param(mu);
  Vector theta = theta_a(mu);
  if (static_cast<std::size_t>(theta.size()) != Q_a())
    throw InvalidInput("theta_a returned the wrong number of coefficients");
  return theta;
}

Vector AffineOperator::coefficients_f(const Param& mu) const {
  check_param(mu);
  Vector theta = theta_f(mu);
  if (static_cast<std::size_t>(theta.size()) != Q_f())
    throw InvalidInput("theta_f returned the wrong number of coefficients");
  return theta;
}

Matrix AffineOperator::assemble_matrix(const Param& mu) const {
  const Vector theta = coefficients_a(mu);
  Matrix A = Matrix::Zero(dim(), dim());
  for (std::size_t q = 0; q < Q_a(); ++q)
    A += theta[static_cast<Eigen::Index>(q)] * a_components[q];
  return A;
}

Vector AffineOperator::assemble_load(const Param& mu) const {
  const Vector theta = coefficients_f(mu);
  Vector f = Vector::Zero(dim());
  for (std::size_t q = 0; q < Q_f(); ++q)
    f += theta[static_cast<Eigen::Index>(q)] * f_components[q];
  return f;
}

AffineOperator assemble_affine(const ProblemSpec& spec, const TruthDiscretization& disc) {
  AffineOperator op;
  op.domain = spec.domain;
  op.gram = disc.gram();

  const Matrix dxx = disc.dxx();
  const Matrix dyy = disc.dyy();
  const Vector xs = disc.sample([](double x, double) { return x; });
  const Vector ys = disc.sample([](double, double y) { return y; });
  const Vector exp_load = disc.sample([](double x, double y) { return std::exp(4.0 * x * y); });

  const auto one = [](const Param&) { return Vector::Ones(1).eval(); };

  switch (spec.id) {
  case ProblemId::oned_continuous:
  case ProblemId::oned_discontinuous: {
    op.a_components = {dxx + dyy, xs.asDiagonal() * dxx};
    op.f_components = {exp_load};
    op.coercive_sign = -1.0;
    if (spec.id == ProblemId::oned_continuous) {
      op.theta_a = [](const Param& mu) { return Vector{{1.0, mu.at(0)}}; };
    } else {
      const double s0 = spec.sign_at_zero;
      op.theta_a = [s0](const Param& mu) {
        return Vector{{1.0, discontinuous_coefficient(mu.at(0), s0)}};
      };
    }
    op.theta_f = one;
    break;
  }
  case ProblemId::twod_first: {
    const Eigen::Index n = disc.interior_dim();
    op.a_components = {-dxx, -dyy, -Matrix::Identity(n, n)};
    op.f_components = {disc.sample(
        [](double x, double y) { return -10.0 * std::sin(8.0 * x * (y - 1.0)); })};
    op.coercive_sign = 1.0;
    op.theta_a = [](const Param& mu) { return Vector{{1.0, mu.at(0), mu.at(1)}}; };
    op.theta_f = one;
    break;
  }
  case ProblemId::twod_second: {
    op.a_components = {dxx + dyy, xs.asDiagonal() * dxx, ys.asDiagonal() * dyy};
    op.f_components = {exp_load};
    op.coercive_sign = -1.0;
    op.theta_a = [](const Param& mu) { return Vector{{1.0, mu.at(0), mu.at(1)}}; };
    op.theta_f = one;
    break;
  }
  }
  return op;
}

Snapshot truth_solve(const AffineOperator& op, const Param& mu) {
  op.check_param(mu);
  return {mu, solve_dense(op.assemble_matrix(mu), op.assemble_load(mu))};
}

double true_error(const Snapshot& u_truth, const Vector& u_rb, const GramSpec& gram) {
  if (u_truth.values.size() != u_rb.size())
    throw InvalidInput("true_error: dimension mismatch");
  return gram.norm(u_truth.values - u_rb);
}

} // namespace rbm
