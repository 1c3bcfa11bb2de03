#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fle/problems.hpp"
#include "oracles.hpp"

using namespace fle;
using oracles::kInf;

namespace {

// Central-difference gradient oracle in the full space.
Vector central_diff(const Objective& f, const Vector& x, double h = 1e-6) {
  Vector g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    Vector e = Vector::Zero(x.size());
    e(i) = h;
    g(i) = (f(x + e) - f(x - e)) / (2.0 * h);
  }
  return g;
}

}  // namespace

TEST_CASE("catalog problems are internally consistent") {
  const std::vector<Problem> all = catalog();
  CHECK(all.size() >= 15);
  for (const Problem& p : all) {
    CAPTURE(p.name);
    REQUIRE(p.region != nullptr);
    CHECK(p.n == p.region->dim());
    CHECK(p.x0.size() == p.n);
    CHECK(p.region->is_feasible(p.x0, 1e-9));
    const double f0 = p.objective(p.x0);
    CHECK(std::isfinite(f0));
    if (p.f_best) {
      CHECK(std::isfinite(*p.f_best));
      CHECK(f0 > *p.f_best);  // no catalog problem starts at its optimum
    }
  }
}

TEST_CASE("analytic gradients match central differences") {
  std::mt19937_64 rng(211);
  for (const Problem& p : catalog()) {
    if (!p.gradient) continue;
    CAPTURE(p.name);
    for (int k = 0; k < 5; ++k) {
      const Vector x = oracles::random_feasible_point(*p.region, rng, 0.5);
      const Vector ga = (*p.gradient)(x);
      const Vector gn = central_diff(p.objective, x);
      CHECK((ga - gn).norm() < 1e-5 * (1.0 + ga.norm()));
    }
  }
}

TEST_CASE("specific objective values") {
  const Problem lsq = catalog_problem("lsqfit");
  // Residuals at the origin: sum of b_i^2 with the known data vector.
  const double expected =
      0.25 * 0.25 + 0.3 * 0.3 + 0.625 * 0.625 + 0.701 * 0.701 + 1.0;
  Vector zero = Vector::Zero(2);
  CHECK(lsq.objective(zero) == doctest::Approx(expected).epsilon(1e-12));

  const Problem hs21 = catalog_problem("hs21");
  Vector x(2);
  x << 2.0, 0.0;
  CHECK(hs21.objective(x) == doctest::Approx(0.01 * 4.0 - 100.0));

  const Problem mad1 = catalog_problem("mad1");
  Vector y(2);
  y << 1.0, 0.0;
  // max(x1^2 + x2^2 + x1 x2 - 1, sin x1, -cos x2) at (1, 0) = max(0, sin 1, -1).
  CHECK(mad1.objective(y) == doctest::Approx(std::sin(1.0)));
}

TEST_CASE("catalog_problem rejects unknown names") {
  CHECK_THROWS_AS(catalog_problem("no_such_problem"), std::invalid_argument);
}

TEST_CASE("multiplicative noise: keyed, bounded, seed-sensitive") {
  const Problem base = catalog_problem("quad_box_2");
  const double eps_f = 1e-2;
  const Problem noisy = with_noise(base, eps_f, 42);

  std::mt19937_64 rng(213);
  for (int k = 0; k < 100; ++k) {
    const Vector x = oracles::random_feasible_point(*base.region, rng);
    const double clean = base.objective(x);
    const double a = noisy.objective(x);
    const double b = noisy.objective(x);
    CHECK(a == b);  // keyed: same point, same draw
    CHECK(std::abs(a - clean) <= eps_f * std::abs(clean) + 1e-15);
  }

  const Problem noisy2 = with_noise(base, eps_f, 43);
  const Vector x0 = base.x0;
  CHECK(noisy.objective(x0) != noisy2.objective(x0));

  SUBCASE("fresh mode re-draws on every call") {
    const Problem fresh = with_noise(base, eps_f, 42, true);
    const double a = fresh.objective(x0);
    const double b = fresh.objective(x0);
    CHECK(a != b);
  }

  SUBCASE("keyed_uniform is deterministic and in (-1, 1)") {
    Vector v(3);
    v << 0.25, -3.0, 1e-8;
    const double u = keyed_uniform(7, v);
    CHECK(u == keyed_uniform(7, v));
    CHECK(u > -1.0);
    CHECK(u < 1.0);
    CHECK(u != keyed_uniform(8, v));
  }
}

TEST_CASE("l1 penalty moves constraints into the objective") {
  const Problem base = catalog_problem("hs35");  // 3 bound rows + 1 general row
  const double lambda = 50.0;
  const Problem pen = with_l1_penalty(base, lambda, PenaltyTarget::LI);

  CHECK(pen.region->num_ineq() == 3);  // the general row was penalized away
  CHECK(!pen.smooth);

  // On base-feasible points the penalty vanishes.
  std::mt19937_64 rng(217);
  for (int k = 0; k < 20; ++k) {
    const Vector x = oracles::random_feasible_point(*base.region, rng);
    CHECK(pen.objective(x) == doctest::Approx(base.objective(x)));
  }

  // Outside, the objective grows by lambda times the violation of the
  // penalized row x1 + x2 + 2 x3 <= 3.
  Vector x(3);
  x << 2.0, 2.0, 0.0;
  const double viol = 2.0 + 2.0 + 0.0 - 3.0;
  CHECK(pen.objective(x) ==
        doctest::Approx(base.objective(x) + lambda * viol));

  SUBCASE("bound targeting keeps general rows") {
    const Problem pb = with_l1_penalty(base, lambda, PenaltyTarget::B);
    CHECK(pb.region->num_ineq() == 1);
    const Problem ph = with_l1_penalty(base, lambda, PenaltyTarget::HalfB);
    CHECK(ph.region->num_ineq() == 2);  // ceil(3/2) = 2 bounds penalized
  }
}

TEST_CASE("minimax wrapper takes the pointwise maximum") {
  auto region = std::make_shared<FeasibleRegion>(
      Matrix::Identity(1, 1), Vector::Constant(1, -2.0),
      Vector::Constant(1, 2.0), Vector::Zero(1));
  Vector x0 = Vector::Zero(1);
  const Problem p = make_minimax(
      "mm", {[](const Vector& v) { return v(0); },
             [](const Vector& v) { return -v(0); }},
      region, x0);
  Vector x(1);
  x << 0.7;
  CHECK(p.objective(x) == doctest::Approx(0.7));
  x << -1.3;
  CHECK(p.objective(x) == doctest::Approx(1.3));
  CHECK(!p.smooth);
}

TEST_CASE("problem file loader") {
  const char* text = R"(objective rosen_box
2 0 2
1 0
0 1
-2 -2
2 2
0 0
x0 -1.2 1
fL 0
)";
  std::istringstream in(text);
  const Problem p = load_problem(in);
  CHECK(p.n == 2);
  CHECK(p.x0(0) == -1.2);
  REQUIRE(p.f_best.has_value());
  CHECK(*p.f_best == 0.0);
  Vector ones = Vector::Ones(2);
  CHECK(p.objective(ones) == doctest::Approx(0.0));

  SUBCASE("round trip through save_problem") {
    std::ostringstream out;
    save_problem(p, out);
    std::istringstream in2(out.str());
    const Problem q = load_problem(in2);
    CHECK(q.n == p.n);
    CHECK((q.x0 - p.x0).norm() == 0.0);
    CHECK(q.objective(ones) == p.objective(ones));
  }

  SUBCASE("unknown objective is rejected with a line number") {
    std::istringstream bad("objective not_a_thing\n");
    try {
      load_problem(bad);
      FAIL("expected a parse error");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
  }

  SUBCASE("infeasible x0 is rejected at load") {
    const char* infeasible = R"(objective rosen_box
2 0 2
1 0
0 1
-2 -2
2 2
0 0
x0 5 5
)";
    std::istringstream bad(infeasible);
    CHECK_THROWS_AS(load_problem(bad), std::invalid_argument);
  }
}

TEST_CASE("registry lists the loader-visible objectives") {
  CHECK(registry_has("rosen_box"));
  CHECK(!registry_has("not_a_thing"));
  CHECK(!registry_names().empty());
}
