#include <cmath>
#include <memory>

#include "fle/problems.hpp"

// Built-in test problems. Best-known values (f_best) were computed with the
// independent solvers in scripts/compute_reference_values.py and frozen here.

namespace fle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::shared_ptr<FeasibleRegion> box_region(const Vector& lo, const Vector& up,
                                           const Vector& xref) {
  const int n = static_cast<int>(lo.size());
  return std::make_shared<FeasibleRegion>(Matrix::Identity(n, n), lo, up, xref);
}

Problem quadratic(const std::string& name, const Vector& diag, const Vector& c,
                  std::shared_ptr<FeasibleRegion> region, Vector x0,
                  double f_best) {
  Problem p;
  p.name = name;
  p.n = static_cast<int>(diag.size());
  p.objective = [diag, c](const Vector& x) {
    return 0.5 * (x - c).dot(diag.cwiseProduct(x - c));
  };
  p.gradient = [diag, c](const Vector& x) -> Vector {
    return diag.cwiseProduct(x - c);
  };
  p.region = std::move(region);
  p.x0 = std::move(x0);
  p.f_best = f_best;
  p.convex = true;
  p.provenance = "synthetic convex quadratic";
  return p;
}

Problem make_lsqfit() {
  const Vector a = (Vector(5) << 0.1, 0.3, 0.5, 0.7, 0.9).finished();
  const Vector b = (Vector(5) << 0.25, 0.3, 0.625, 0.701, 1.0).finished();
  Problem p;
  p.name = "lsqfit";
  p.n = 2;
  p.objective = [a, b](const Vector& v) {
    return (a.array() * v(0) + v(1) - b.array()).square().sum();
  };
  p.gradient = [a, b](const Vector& v) -> Vector {
    const Eigen::ArrayXd r = a.array() * v(0) + v(1) - b.array();
    Vector g(2);
    g(0) = 2.0 * (r * a.array()).sum();
    g(1) = 2.0 * r.sum();
    return g;
  };
  Matrix Ai(2, 2);
  Ai << 1, 1,  // x + y <= 0.85
      1, 0;    // x >= 0
  p.region = std::make_shared<FeasibleRegion>(
      Ai, (Vector(2) << -kInf, 0.0).finished(),
      (Vector(2) << 0.85, kInf).finished(), Vector::Zero(2));
  p.x0 = (Vector(2) << 0.0, 0.1).finished();
  p.f_best = 0.0675739757575758;
  p.convex = true;
  p.provenance = "lsqfit (CUTEr; 2 vars, 1 bound, 1 linear inequality)";
  return p;
}

Problem make_hs21() {
  Problem p;
  p.name = "hs21";
  p.n = 2;
  p.objective = [](const Vector& x) {
    return 0.01 * x(0) * x(0) + x(1) * x(1) - 100.0;
  };
  p.gradient = [](const Vector& x) -> Vector {
    return (Vector(2) << 0.02 * x(0), 2.0 * x(1)).finished();
  };
  Matrix Ai(3, 2);
  Ai << 10, -1,  // 10 x1 - x2 >= 10
      1, 0,      // 2 <= x1 <= 50
      0, 1;      // -50 <= x2 <= 50
  p.region = std::make_shared<FeasibleRegion>(
      Ai, (Vector(3) << 10.0, 2.0, -50.0).finished(),
      (Vector(3) << kInf, 50.0, 50.0).finished(),
      (Vector(2) << 2.0, 0.0).finished());
  p.x0 = (Vector(2) << 5.0, 1.0).finished();
  p.f_best = -99.96;
  p.convex = true;
  p.provenance = "hs21 (Hock-Schittkowski)";
  return p;
}

Problem make_hs24() {
  const double s3 = std::sqrt(3.0);
  Problem p;
  p.name = "hs24";
  p.n = 2;
  p.objective = [s3](const Vector& x) {
    return ((x(0) - 3.0) * (x(0) - 3.0) - 9.0) * x(1) * x(1) * x(1) /
           (27.0 * s3);
  };
  p.gradient = [s3](const Vector& x) -> Vector {
    Vector g(2);
    g(0) = 2.0 * (x(0) - 3.0) * x(1) * x(1) * x(1) / (27.0 * s3);
    g(1) = ((x(0) - 3.0) * (x(0) - 3.0) - 9.0) * 3.0 * x(1) * x(1) / (27.0 * s3);
    return g;
  };
  Matrix Ai2(4, 2);
  Ai2 << 1.0 / s3, -1,  // x1/sqrt(3) - x2 >= 0
      1, s3,            // 0 <= x1 + sqrt(3) x2 <= 6
      1, 0, 0, 1;       // x >= 0
  p.region = std::make_shared<FeasibleRegion>(
      Ai2, (Vector(4) << 0.0, 0.0, 0.0, 0.0).finished(),
      (Vector(4) << kInf, 6.0, kInf, kInf).finished(),
      (Vector(2) << 1.0, 0.5).finished());
  p.x0 = (Vector(2) << 1.0, 0.5).finished();
  p.f_best = -1.0;
  p.convex = false;
  p.provenance = "hs24 (Hock-Schittkowski)";
  return p;
}

Problem make_hs35() {
  Problem p;
  p.name = "hs35";
  p.n = 3;
  p.objective = [](const Vector& x) {
    return 9.0 - 8.0 * x(0) - 6.0 * x(1) - 4.0 * x(2) + 2.0 * x(0) * x(0) +
           2.0 * x(1) * x(1) + x(2) * x(2) + 2.0 * x(0) * x(1) +
           2.0 * x(0) * x(2);
  };
  p.gradient = [](const Vector& x) -> Vector {
    Vector g(3);
    g(0) = -8.0 + 4.0 * x(0) + 2.0 * x(1) + 2.0 * x(2);
    g(1) = -6.0 + 4.0 * x(1) + 2.0 * x(0);
    g(2) = -4.0 + 2.0 * x(2) + 2.0 * x(0);
    return g;
  };
  Matrix Ai(4, 3);
  Ai << 1, 1, 2,  // x1 + x2 + 2 x3 <= 3
      1, 0, 0, 0, 1, 0, 0, 0, 1;
  p.region = std::make_shared<FeasibleRegion>(
      Ai, (Vector(4) << -kInf, 0, 0, 0).finished(),
      (Vector(4) << 3.0, kInf, kInf, kInf).finished(),
      (Vector(3) << 0.5, 0.5, 0.5).finished());
  p.x0 = (Vector(3) << 0.5, 0.5, 0.5).finished();
  p.f_best = 1.0 / 9.0;
  p.convex = true;
  p.provenance = "hs35 (Hock-Schittkowski)";
  return p;
}

Problem make_hs76() {
  Problem p;
  p.name = "hs76";
  p.n = 4;
  p.objective = [](const Vector& x) {
    return x(0) * x(0) + 0.5 * x(1) * x(1) + x(2) * x(2) +
           0.5 * x(3) * x(3) - x(0) * x(2) + x(2) * x(3) - x(0) -
           3.0 * x(1) + x(2) - x(3);
  };
  p.gradient = [](const Vector& x) -> Vector {
    Vector g(4);
    g(0) = 2.0 * x(0) - x(2) - 1.0;
    g(1) = x(1) - 3.0;
    g(2) = 2.0 * x(2) - x(0) + x(3) + 1.0;
    g(3) = x(3) + x(2) - 1.0;
    return g;
  };
  Matrix Ai(7, 4);
  Ai << 1, 2, 1, 1,  // <= 5
      3, 1, 2, -1,   // <= 4
      0, 1, 4, 0,    // >= 1.5
      1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1;
  p.region = std::make_shared<FeasibleRegion>(
      Ai, (Vector(7) << -kInf, -kInf, 1.5, 0, 0, 0, 0).finished(),
      (Vector(7) << 5.0, 4.0, kInf, kInf, kInf, kInf, kInf).finished(),
      (Vector(4) << 0.5, 0.5, 0.5, 0.5).finished());
  p.x0 = (Vector(4) << 0.5, 0.5, 0.5, 0.5).finished();
  p.f_best = -4.68181818181818;
  p.convex = true;
  p.provenance = "hs76 (Hock-Schittkowski)";
  return p;
}

Problem make_simpllpa() {
  Problem p;
  p.name = "simpllpa";
  p.n = 2;
  p.objective = [](const Vector& x) { return x(0) + 2.0 * x(1); };
  p.gradient = [](const Vector&) -> Vector {
    return (Vector(2) << 1.0, 2.0).finished();
  };
  Matrix Ai(4, 2);
  Ai << 1, 1,   // x1 + x2 >= 1
      -1, 2,    // 2 x2 - x1 >= 0
      1, 0, 0, 1;
  p.region = std::make_shared<FeasibleRegion>(
      Ai, (Vector(4) << 1.0, 0.0, 0.0, 0.0).finished(),
      (Vector(4) << kInf, kInf, kInf, kInf).finished(),
      (Vector(2) << 1.0, 1.0).finished());
  p.x0 = (Vector(2) << 1.0, 1.0).finished();
  p.f_best = 1.33333333333333;
  p.convex = true;
  p.provenance = "simpllpa (after the CUTEr simple-LP instance)";
  return p;
}

Problem make_rosen_box() {
  Problem p;
  p.name = "rosen_box";
  p.n = 2;
  p.objective = [](const Vector& x) {
    const double t = x(1) - x(0) * x(0);
    return 100.0 * t * t + (1.0 - x(0)) * (1.0 - x(0));
  };
  p.gradient = [](const Vector& x) -> Vector {
    const double t = x(1) - x(0) * x(0);
    Vector g(2);
    g(0) = -400.0 * t * x(0) - 2.0 * (1.0 - x(0));
    g(1) = 200.0 * t;
    return g;
  };
  p.region = box_region((Vector(2) << -2.0, -2.0).finished(),
                        (Vector(2) << 2.0, 2.0).finished(), Vector::Zero(2));
  p.x0 = (Vector(2) << -1.2, 1.0).finished();
  p.f_best = 0.0;
  p.convex = false;
  p.provenance = "Rosenbrock, box-constrained";
  return p;
}

Problem make_mad1() {
  std::vector<Objective> partials = {
      [](const Vector& x) {
        return x(0) * x(0) + x(1) * x(1) + x(0) * x(1) - 1.0;
      },
      [](const Vector& x) { return std::sin(x(0)); },
      [](const Vector& x) { return -std::cos(x(1)); }};
  Matrix Ai(1, 2);
  Ai << 1, 1;  // x1 + x2 >= 0.5
  auto region = std::make_shared<FeasibleRegion>(
      Ai, (Vector(1) << 0.5).finished(), (Vector(1) << kInf).finished(),
      (Vector(2) << 1.0, 0.0).finished());
  Problem p = make_minimax("mad1", std::move(partials), region,
                           (Vector(2) << 1.0, -0.1).finished());
  p.f_best = -0.38965951609726;
  p.provenance = "mad1 (after the Luksan-Vlcek minimax set; 3 partials, 1 LI)";
  return p;
}

Problem make_pentagon() {
  std::vector<Objective> partials = {
      [](const Vector& z) { return -std::hypot(z(0) - z(2), z(1) - z(3)); },
      [](const Vector& z) { return -std::hypot(z(2) - z(4), z(3) - z(5)); },
      [](const Vector& z) { return -std::hypot(z(0) - z(4), z(1) - z(5)); }};
  Matrix Ai(15, 6);
  Ai.setZero();
  for (int k = 0; k < 5; ++k) {
    const double th = 2.0 * M_PI * k / 5.0;
    for (int i = 0; i < 3; ++i) {
      Ai(3 * k + i, 2 * i) = std::cos(th);
      Ai(3 * k + i, 2 * i + 1) = std::sin(th);
    }
  }
  auto region = std::make_shared<FeasibleRegion>(
      Ai, Vector::Constant(15, -kInf), Vector::Constant(15, 1.0),
      Vector::Zero(6));
  Vector x0(6);
  x0 << -0.5, 0.2, 0.3, 0.6, 0.4, -0.5;
  Problem p = make_minimax("pentagon", std::move(partials), region, x0);
  p.f_best = -1.85961869594175;
  p.provenance =
      "pentagon (after the Luksan-Vlcek minimax set; 3 points in a pentagon)";
  return p;
}

std::vector<Problem> build_catalog() {
  std::vector<Problem> out;
  out.push_back(make_lsqfit());
  {
    Problem l1 = with_l1_penalty(out.back(), 100.0, PenaltyTarget::LI);
    l1.f_best = 0.0675739757575757;
    l1.provenance = "lsqfit with the linear inequality moved into an l1 term";
    out.push_back(std::move(l1));
  }

  out.push_back(quadratic(
      "quad_box_2", (Vector(2) << 1, 4).finished(),
      (Vector(2) << 1.5, -0.5).finished(),
      box_region(Vector::Zero(2), Vector::Ones(2), Vector::Constant(2, 0.5)),
      Vector::Constant(2, 0.5), 0.625));
  out.push_back(quadratic(
      "quad_box_5", (Vector(5) << 1, 2, 3, 4, 5).finished(),
      (Vector(5) << 2.0, -1.0, 0.5, 1.5, -0.3).finished(),
      box_region(Vector::Zero(5), Vector::Ones(5), Vector::Constant(5, 0.5)),
      Vector::Constant(5, 0.5), 2.225));
  {
    Vector d(10), c(10);
    for (int i = 0; i < 10; ++i) {
      d(i) = i + 1.0;
      c(i) = (i % 2 == 0) ? 1.3 : -0.4;
    }
    out.push_back(quadratic(
        "quad_box_10", d, c,
        box_region(Vector::Zero(10), Vector::Ones(10),
                   Vector::Constant(10, 0.5)),
        Vector::Constant(10, 0.5), 3.525));
  }
  {
    Vector d(20), c(20);
    for (int i = 0; i < 20; ++i) {
      d(i) = 1.0 + (i % 7);
      c(i) = ((i * 37) % 100) / 50.0 - 1.0;
    }
    out.push_back(quadratic(
        "quad_box_20", d, c,
        box_region(Vector::Zero(20), Vector::Ones(20),
                   Vector::Constant(20, 0.5)),
        Vector::Constant(20, 0.5), 8.16));
  }
  {
    Matrix A(1, 3);
    A << 1, 1, 1;
    auto region = std::make_shared<FeasibleRegion>(
        A, (Vector(1) << 1.0).finished(), Matrix(0, 3), Vector(0), Vector(0),
        Vector::Constant(3, 1.0 / 3.0));
    out.push_back(quadratic("quad_eq_3", (Vector(3) << 2, 3, 5).finished(),
                            Vector::Ones(3), region,
                            Vector::Constant(3, 1.0 / 3.0),
                            1.93548387096774));
  }
  {
    Matrix A(2, 10);
    A.setZero();
    A.row(0).setOnes();
    A(1, 0) = 1.0;
    A(1, 1) = -1.0;
    Vector d(10);
    for (int i = 0; i < 10; ++i) d(i) = i + 1.0;
    auto region = std::make_shared<FeasibleRegion>(
        A, (Vector(2) << 1.0, 0.0).finished(), Matrix(0, 10), Vector(0),
        Vector(0), Vector::Constant(10, 0.1));
    out.push_back(quadratic("quad_eq_10", d, Vector::Constant(10, 0.3), region,
                            Vector::Constant(10, 0.1), 0.724033903174831));
  }
  {
    Matrix Ai(6, 4);
    Ai.setZero();
    Ai.row(0).setOnes();          // sum <= 1
    Ai(1, 0) = 1.0;
    Ai(1, 2) = -1.0;              // x1 - x3 >= -0.5
    Ai.block(2, 0, 4, 4) = Matrix::Identity(4, 4);  // x >= 0
    Vector lo(6), up(6);
    lo << -kInf, -0.5, 0, 0, 0, 0;
    up << 1.0, kInf, kInf, kInf, kInf, kInf;
    auto region = std::make_shared<FeasibleRegion>(Ai, lo, up, Vector::Zero(4));
    out.push_back(quadratic("quad_ineq_4", (Vector(4) << 1, 2, 3, 4).finished(),
                            Vector::Ones(4), region, Vector::Constant(4, 0.1),
                            2.34615384615384));
  }
  {
    Matrix Ai(9, 8);
    Ai.setZero();
    Ai.row(0).setOnes();  // sum <= 2
    Ai.block(1, 0, 8, 8) = Matrix::Identity(8, 8);
    Vector lo(9), up(9);
    lo(0) = -kInf;
    up(0) = 2.0;
    lo.tail(8).setConstant(-0.5);
    up.tail(8).setConstant(0.5);
    Vector d(8);
    for (int i = 0; i < 8; ++i) d(i) = i + 1.0;
    auto region = std::make_shared<FeasibleRegion>(Ai, lo, up, Vector::Zero(8));
    out.push_back(quadratic("quad_ineq_8", d, Vector::Ones(8), region,
                            Vector::Zero(8), 7.25961538461538));
  }

  out.push_back(make_hs21());
  out.push_back(make_hs24());
  out.push_back(make_hs35());
  out.push_back(make_hs76());
  out.push_back(make_simpllpa());
  out.push_back(make_rosen_box());
  out.push_back(make_mad1());
  out.push_back(make_pentagon());
  return out;
}

}  // namespace

std::vector<Problem> catalog() { return build_catalog(); }

}  // namespace fle
