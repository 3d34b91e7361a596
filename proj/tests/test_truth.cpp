#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "rbm/truth.hpp"
#include "test_util.hpp"

using namespace rbm;
using std::numbers::pi;

TEST_CASE("chebyshev grid, n = 2") {
  const auto g = chebyshev_grid(2);
  REQUIRE(g.nodes.size() == 3);
  CHECK(g.nodes(0) == 1.0);
  CHECK(g.nodes(1) == 0.0);
  CHECK(g.nodes(2) == -1.0);
}

TEST_CASE("chebyshev grid, n = 1 differentiates x") {
  const auto g = chebyshev_grid(1);
  Vector p(2);
  p << 1.0, -1.0;
  const Vector dp = g.D * p;
  CHECK(dp(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(dp(1) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("chebyshev grid, n = 16 differentiates x^5 (analytic derivative oracle)") {
  const auto g = chebyshev_grid(16);
  Vector p(17), dp(17);
  for (int j = 0; j <= 16; ++j) {
    const double x = g.nodes(j);
    p(j) = std::pow(x, 5);
    dp(j) = 5 * std::pow(x, 4);
  }
  CHECK((g.D * p - dp).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("chebyshev grid: nodes are cos(j pi / n), descending") {
  for (int n : {1, 2, 5, 16, 31, 49}) {
    const auto g = chebyshev_grid(n);
    for (int j = 0; j <= n; ++j)
      CHECK(g.nodes(j) == doctest::Approx(std::cos(j * pi / n)).epsilon(1e-15).scale(1.0));
    for (int j = 1; j <= n; ++j)
      CHECK(g.nodes(j) < g.nodes(j - 1));
  }
}

TEST_CASE("chebyshev grid: monomial exactness up to degree n") {
  for (int n : {4, 10, 31}) {
    const auto g = chebyshev_grid(n);
    for (int deg = 0; deg <= n; ++deg) {
      Vector p(n + 1), dp(n + 1);
      for (int j = 0; j <= n; ++j) {
        const double x = g.nodes(j);
        p(j) = std::pow(x, deg);
        dp(j) = deg == 0 ? 0.0 : deg * std::pow(x, deg - 1);
      }
      const double scale = std::max(1.0, dp.cwiseAbs().maxCoeff());
      CHECK((g.D * p - dp).cwiseAbs().maxCoeff() <= 1e-10 * scale);
    }
  }
}

TEST_CASE("chebyshev grid: n = 0 is rejected") {
  CHECK_THROWS_AS(chebyshev_grid(0), InvalidInput);
}

TEST_CASE("problem specs") {
  const auto a = problem_spec(ProblemId::oned_continuous);
  CHECK(a.param_dim == 1);
  CHECK(a.domain.lower == std::vector<double>{-0.995});
  CHECK(a.domain.upper == std::vector<double>{0.995});
  CHECK(a.Q_a == 2);
  CHECK(a.Q_f == 1);
  const auto b = problem_spec(ProblemId::oned_discontinuous);
  CHECK(b.domain.lower == a.domain.lower);
  CHECK(b.Q_a == 2);
  const auto c = problem_spec(ProblemId::twod_first);
  CHECK(c.domain.lower == std::vector<double>{0.1, 0.0});
  CHECK(c.domain.upper == std::vector<double>{4.0, 2.0});
  CHECK(c.Q_a == 3);
  CHECK(c.Q_f == 1);
  const auto d = problem_spec(ProblemId::twod_second);
  CHECK(d.domain.lower == std::vector<double>{-0.99, -0.99});
  CHECK(d.domain.upper == std::vector<double>{0.99, 0.99});
  CHECK(d.Q_a == 3);

  for (auto id : {ProblemId::oned_continuous, ProblemId::oned_discontinuous, ProblemId::twod_first,
                  ProblemId::twod_second})
    CHECK(parse_problem_id(to_string(id)) == id);
  CHECK_THROWS_AS(parse_problem_id("oned"), InvalidInput);
}

TEST_CASE("discontinuous coefficient") {
  CHECK(discontinuous_coefficient(0.5) == doctest::Approx(std::sin(-0.25 * pi)));
  CHECK(discontinuous_coefficient(-0.5) == doctest::Approx(std::sin(0.25 * pi)));
  CHECK(discontinuous_coefficient(0.0) == doctest::Approx(-1.0));
  CHECK(discontinuous_coefficient(0.0, -1.0) == doctest::Approx(1.0));
  // jump of size 2 across zero
  CHECK(discontinuous_coefficient(-1e-9) - discontinuous_coefficient(1e-9) ==
        doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("interior index map") {
  const TruthDiscretization disc(8);
  CHECK(disc.interior_per_dim() == 6);
  CHECK(disc.interior_dim() == 36);
  for (Eigen::Index k = 0; k < disc.interior_dim(); ++k) {
    const auto [i, j] = disc.grid_position(k);
    CHECK(disc.interior_index(i, j) == k);
    CHECK(disc.x(k) == disc.nodes()(i));
    CHECK(disc.y(k) == disc.nodes()(j));
  }
  // x runs fastest
  CHECK(disc.grid_position(1) == std::pair<int, int>{2, 1});
  CHECK_THROWS_AS(disc.interior_index(0, 1), InvalidInput);
  CHECK_THROWS_AS(TruthDiscretization(2), InvalidInput);
}

namespace {

// Smooth functions vanishing on the boundary of [-1,1]^2 with analytic
// second derivatives.
struct TestFunction {
  double a, b, c, d;
  // u = (1 - x^2)(1 - y^2) * exp(a x + b y) * (1 + c x y + d x)
  double g(double x, double y) const { return std::exp(a * x + b * y) * (1 + c * x * y + d * x); }
  double u(double x, double y) const { return (1 - x * x) * (1 - y * y) * g(x, y); }
};

// derivatives by exact symbolic expansion
double uxx(const TestFunction& f, double x, double y) {
  const double e = std::exp(f.a * x + f.b * y);
  const double h = 1 + f.c * x * y + f.d * x;
  const double hx = f.c * y + f.d;
  const double gx = e * (f.a * h + hx);
  const double gxx = e * (f.a * f.a * h + 2 * f.a * hx);
  const double g = e * h;
  const double py = 1 - y * y;
  return py * (-2 * g - 4 * x * gx + (1 - x * x) * gxx);
}

double uyy(const TestFunction& f, double x, double y) {
  const double e = std::exp(f.a * x + f.b * y);
  const double h = 1 + f.c * x * y + f.d * x;
  const double hy = f.c * x;
  const double gy = e * (f.b * h + hy);
  const double gyy = e * (f.b * f.b * h + 2 * f.b * hy);
  const double g = e * h;
  const double px = 1 - x * x;
  return px * (-2 * g - 4 * y * gy + (1 - y * y) * gyy);
}

double pde(ProblemId id, const Param& mu, const TestFunction& f, double x, double y) {
  switch (id) {
  case ProblemId::oned_continuous:
    return (1 + mu[0] * x) * uxx(f, x, y) + uyy(f, x, y);
  case ProblemId::oned_discontinuous:
    return (1 + discontinuous_coefficient(mu[0]) * x) * uxx(f, x, y) + uyy(f, x, y);
  case ProblemId::twod_first:
    return -uxx(f, x, y) - mu[0] * uyy(f, x, y) - mu[1] * f.u(x, y);
  case ProblemId::twod_second:
    return (1 + mu[0] * x) * uxx(f, x, y) + (1 + mu[1] * y) * uyy(f, x, y);
  }
  return 0;
}

Param random_param(const Box& box, std::mt19937_64& rng) {
  Param mu(box.dim());
  for (std::size_t d = 0; d < box.dim(); ++d)
    mu[d] = std::uniform_real_distribution<double>(box.lower[d], box.upper[d])(rng);
  return mu;
}

} // namespace

TEST_CASE("assemble_affine: components and loads") {
  const TruthDiscretization disc(12);
  const Matrix dxx = disc.dxx(), dyy = disc.dyy();

  SUBCASE("twod-first") {
    const auto op = assemble_affine(problem_spec(ProblemId::twod_first), disc);
    REQUIRE(op.Q_a() == 3);
    REQUIRE(op.Q_f() == 1);
    CHECK(op.a_components[0] == -dxx);
    CHECK(op.a_components[1] == -dyy);
    CHECK(op.a_components[2] == -Matrix::Identity(disc.interior_dim(), disc.interior_dim()));
    for (Eigen::Index k = 0; k < disc.interior_dim(); ++k)
      CHECK(op.f_components[0](k) ==
            doctest::Approx(-10 * std::sin(8 * disc.x(k) * (disc.y(k) - 1))).epsilon(1e-15));
    const Vector th = op.coefficients_a({2.5, 0.75});
    CHECK(th(0) == 1.0);
    CHECK(th(1) == 2.5);
    CHECK(th(2) == 0.75);
  }
  SUBCASE("oned-continuous") {
    const auto op = assemble_affine(problem_spec(ProblemId::oned_continuous), disc);
    REQUIRE(op.Q_a() == 2);
    CHECK((op.a_components[0] - (dxx + dyy)).cwiseAbs().maxCoeff() == 0.0);
    Vector xs(disc.interior_dim());
    for (Eigen::Index k = 0; k < xs.size(); ++k)
      xs(k) = disc.x(k);
    CHECK((op.a_components[1] - xs.asDiagonal() * dxx).cwiseAbs().maxCoeff() == 0.0);
    for (Eigen::Index k = 0; k < disc.interior_dim(); ++k)
      CHECK(op.f_components[0](k) ==
            doctest::Approx(std::exp(4 * disc.x(k) * disc.y(k))).epsilon(1e-15));
    CHECK(op.coefficients_a({0.3})(1) == 0.3);
  }
  SUBCASE("oned-discontinuous differs only in theta") {
    const auto c = assemble_affine(problem_spec(ProblemId::oned_continuous), disc);
    const auto d = assemble_affine(problem_spec(ProblemId::oned_discontinuous), disc);
    CHECK(c.a_components[0] == d.a_components[0]);
    CHECK(c.a_components[1] == d.a_components[1]);
    CHECK(c.f_components[0] == d.f_components[0]);
    CHECK(d.coefficients_a({0.3})(1) == doctest::Approx(std::sin((0.3 - 1) * pi / 2)));
    CHECK(d.coefficients_a({-0.3})(1) == doctest::Approx(std::sin((-0.3 + 1) * pi / 2)));
  }
  SUBCASE("parameters outside the domain are rejected") {
    const auto op = assemble_affine(problem_spec(ProblemId::twod_first), disc);
    CHECK_THROWS_AS(op.assemble_matrix({0.0, 0.0}), InvalidInput);
    CHECK_THROWS_AS(op.assemble_matrix({1.0}), InvalidInput);
    CHECK_THROWS_AS(op.assemble_load({1.0, std::nan("")}), InvalidInput);
  }
}

TEST_CASE("affine consistency against the PDE operator") {
  const TruthDiscretization disc(32);
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (auto id : {ProblemId::oned_continuous, ProblemId::oned_discontinuous, ProblemId::twod_first,
                  ProblemId::twod_second}) {
    const auto spec = problem_spec(id);
    const auto op = assemble_affine(spec, disc);
    std::vector<TestFunction> fns;
    for (int i = 0; i < 5; ++i)
      fns.push_back({coef(rng), coef(rng), coef(rng), coef(rng)});
    for (int t = 0; t < 20; ++t) {
      const Param mu = random_param(spec.domain, rng);
      const Matrix A = op.assemble_matrix(mu);
      for (const auto& f : fns) {
        const Vector u = disc.sample([&](double x, double y) { return f.u(x, y); });
        const Vector direct = disc.sample([&](double x, double y) { return pde(id, mu, f, x, y); });
        CHECK((A * u - direct).norm() <= 1e-8 * direct.norm());
      }
    }
  }
}

TEST_CASE("theta evaluation is deterministic and total") {
  const TruthDiscretization disc(6);
  std::mt19937_64 rng(7);
  for (auto id : {ProblemId::oned_continuous, ProblemId::oned_discontinuous, ProblemId::twod_first,
                  ProblemId::twod_second}) {
    const auto spec = problem_spec(id);
    const auto op = assemble_affine(spec, disc);
    for (int t = 0; t < 50; ++t) {
      const Param mu = random_param(spec.domain, rng);
      const Vector a1 = op.coefficients_a(mu), a2 = op.coefficients_a(mu);
      CHECK(a1 == a2);
      CHECK(a1.allFinite());
      CHECK(op.coefficients_f(mu).allFinite());
    }
    CHECK(op.coefficients_a(spec.domain.lower).allFinite());
    CHECK(op.coefficients_a(spec.domain.upper).allFinite());
  }
  const auto op = assemble_affine(problem_spec(ProblemId::oned_discontinuous), disc);
  CHECK(op.coefficients_a({0.0}).allFinite());
}

TEST_CASE("truth solve: twod-first at (1, 0) residual oracle") {
  const TruthDiscretization disc(24);
  const auto op = assemble_affine(problem_spec(ProblemId::twod_first), disc);
  const Param mu{1.0, 0.0};
  const Snapshot s = truth_solve(op, mu);
  const Matrix A = op.assemble_matrix(mu);
  const Vector f = op.assemble_load(mu);
  // the operator is -Laplacian
  CHECK((A + disc.dxx() + disc.dyy()).cwiseAbs().maxCoeff() <= 1e-15 * A.cwiseAbs().maxCoeff());
  CHECK((A * s.values - f).norm() <= 1e-9 * (A.norm() * s.values.norm() + f.norm()));
}

TEST_CASE("truth solve: oned-continuous at 0 is point symmetric") {
  const TruthDiscretization disc(32);
  const auto op = assemble_affine(problem_spec(ProblemId::oned_continuous), disc);
  const Snapshot s = truth_solve(op, {0.0});
  const int n = disc.nodes_per_dim() - 1;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < disc.interior_dim(); ++k) {
    const auto [i, j] = disc.grid_position(k);
    worst = std::max(worst, std::abs(s.values(k) - s.values(disc.interior_index(n - i, n - j))));
  }
  CHECK(worst <= 1e-8 * s.values.cwiseAbs().maxCoeff());
}

TEST_CASE("truth solve: residual bound, determinism, boundary values") {
  const TruthDiscretization disc(20);
  std::mt19937_64 rng(5);
  for (auto id : {ProblemId::oned_continuous, ProblemId::oned_discontinuous, ProblemId::twod_first,
                  ProblemId::twod_second}) {
    const auto spec = problem_spec(id);
    const auto op = assemble_affine(spec, disc);
    for (int t = 0; t < 3; ++t) {
      const Param mu = random_param(spec.domain, rng);
      const Snapshot a = truth_solve(op, mu);
      const Snapshot b = truth_solve(op, mu);
      CHECK(a.values == b.values);
      CHECK(a.mu == mu);
      const Matrix A = op.assemble_matrix(mu);
      const Vector f = op.assemble_load(mu);
      CHECK((A * a.values - f).norm() <= 1e-9 * (A.norm() * a.values.norm() + f.norm()));

      const Vector full = disc.extend_to_grid(a.values);
      const int n = disc.nodes_per_dim();
      for (int i = 0; i < n; ++i) {
        CHECK(full(i) == 0.0);                    // y = 1
        CHECK(full(i + (n - 1) * n) == 0.0);      // y = -1
        CHECK(full(i * n) == 0.0);                // x = 1
        CHECK(full(n - 1 + i * n) == 0.0);        // x = -1
      }
    }
  }
}

TEST_CASE("truth solve: degenerate operator") {
  AffineOperator op;
  op.a_components = {Matrix::Identity(3, 3)};
  op.f_components = {Vector::Ones(3)};
  op.theta_a = [](const Param& mu) { return Vector::Constant(1, mu[0]); };
  op.theta_f = [](const Param&) { return Vector::Ones(1); };
  CHECK_THROWS_AS(truth_solve(op, {0.0}), SingularSystem);
  CHECK(truth_solve(op, {2.0}).values.isApproxToConstant(0.5));
}

TEST_CASE("true error") {
  std::mt19937_64 rng(9);
  const Vector u = test::random_vector(40, rng);
  const Snapshot s{{0.0}, u};
  CHECK(true_error(s, u, GramSpec{}) == 0.0);
  CHECK(true_error(s, Vector::Zero(40), GramSpec{}) == doctest::Approx(u.norm()).epsilon(1e-15));
  const Vector v = test::random_vector(40, rng);
  double direct = 0.0;
  for (Eigen::Index i = 0; i < 40; ++i)
    direct += (u(i) - v(i)) * (u(i) - v(i));
  CHECK(true_error(s, v, GramSpec{}) == doctest::Approx(std::sqrt(direct)).epsilon(1e-14));

  const Matrix G = test::random_spd(40, rng);
  const Vector e = u - v;
  CHECK(true_error(s, v, GramSpec::explicit_spd(G)) ==
        doctest::Approx(std::sqrt(e.dot(G * e))).epsilon(1e-13));
  CHECK_THROWS_AS(true_error(s, Vector::Zero(3), GramSpec{}), InvalidInput);
}
