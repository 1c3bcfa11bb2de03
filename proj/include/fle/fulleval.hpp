#ifndef FLE_FULLEVAL_HPP
#define FLE_FULLEVAL_HPP

#include <cmath>
#include <functional>
#include <limits>

#include "fle/geometry.hpp"

namespace fle {

using Objective = std::function<double(const Vector&)>;

struct LineSearchParams {
  double beta_bar = 1.0;
  double tau = 0.5;
  double c = 1e-4;  // Armijo constant, unspecified upstream
  double gamma = 1.0;
  double eps_c = 1e-10;
  double h = std::sqrt(std::numeric_limits<double>::epsilon());
  double u_g_prime = 1.0;
  double omega = 0.5;
  int j_max = 20;
  bool fd_respect_bounds = false;
};

/// Carried between Full-Eval iterations: inverse-Hessian approximation in
/// reduced coordinates, the iterate/gradient pair of the previous Full-Eval
/// iteration, and its backtrack count.
struct FullEvalState {
  Matrix H;
  Vector x_prev;  // in R^n
  Vector g_prev;  // reduced gradient, R^(n-m)
  int nb = 0;
  bool initialized = false;
  // Set when the very first iteration's line search succeeds; triggers the
  // (y's)/(y'y) rescaling of H at the first BFGS update.
  bool scale_pending = false;

  static FullEvalState fresh(int reduced_dim) {
    FullEvalState s;
    s.H = Matrix::Identity(reduced_dim, reduced_dim);
    return s;
  }
};

struct FdGradient {
  Vector g;  // reduced gradient, R^(n-m)
  int evals = 0;
};

/// Forward finite differences along the columns of W: g_i = (f(x + h w_i) -
/// fx) / h. Costs n-m evaluations (fx is the caller's cached value). With
/// respect_bounds, probes violating an inequality by more than 1e-12 flip to
/// a backward difference. Throws std::runtime_error naming the probe index
/// on a non-finite value.
FdGradient fd_reduced_gradient(const Objective& f, const FeasibleRegion& region,
                               const Vector& x, double fx, double h,
                               bool respect_bounds = false);

struct CriticalityResult {
  double h = 0.0;
  Vector g;  // reduced FD gradient at the final h
  Vector q;  // projected-gradient step P_F[x - W g] - x
  int evals = 0;
  bool converged = false;  // inner budget exhausted: near-stationarity signal
};

/// Shrinks the FD parameter until h <= u_g' ||q^h||, recomputing the reduced
/// gradient each round (Algorithm with geometric h schedule). `converged`
/// reports inner-budget exhaustion, which callers treat as a terminal
/// near-stationarity status rather than a failure.
CriticalityResult criticality_step(const Objective& f,
                                   const FeasibleRegion& region,
                                   const Vector& x, double fx, double h0,
                                   const LineSearchParams& params);

/// Damped inverse-Hessian BFGS update; returns H unchanged when the curvature
/// condition s'y >= eps_c ||s|| ||y|| fails.
Matrix bfgs_update(const Matrix& H, const Vector& s, const Vector& y,
                   double eps_c);

enum class IterType { FullEval, LowEval };

struct FullEvalOutcome {
  IterType next_type = IterType::LowEval;
  Vector x_next;
  double f_next = 0.0;
  int evals = 0;
  int backtracks = 0;
  bool success = false;
  bool criticality_converged = false;
  double beta = 0.0;      // accepted stepsize (success only)
  double decrease_rhs = 0.0;  // c * beta * g'(xbar - x) at acceptance
};

/// One Full-Eval iteration: FD gradient (with criticality safeguard), BFGS
/// maintenance, projected direction and backtracking line search with the
/// switching floor beta >= gamma * alpha. `state` is updated in place with
/// (x, g, H, nb). When `ignore_switch` is set the gamma*alpha floor is
/// replaced by 1e-16 * beta_bar and a fruitless search reports failure with
/// next_type = FullEval (pure Full-Eval comparator semantics).
FullEvalOutcome full_eval_iteration(const Objective& f,
                                    const FeasibleRegion& region,
                                    const Vector& x, double fx, double alpha,
                                    FullEvalState& state,
                                    const LineSearchParams& params,
                                    bool ignore_switch = false);

}  // namespace fle

#endif  // FLE_FULLEVAL_HPP
