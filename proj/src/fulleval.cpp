#include "fle/fulleval.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fle {

FdGradient fd_reduced_gradient(const Objective& f, const FeasibleRegion& region,
                               const Vector& x, double fx, double h,
                               bool respect_bounds) {
  if (h <= 0.0) throw std::invalid_argument("fd_reduced_gradient: h <= 0");
  const Matrix& W = region.null_basis();
  const int p = region.reduced_dim();
  FdGradient out;
  out.g.resize(p);
  for (int i = 0; i < p; ++i) {
    Vector probe = x + h * W.col(i);
    double sign = 1.0;
    if (respect_bounds && region.max_violation(probe) > 1e-12) {
      probe = x - h * W.col(i);
      sign = -1.0;
    }
    const double fp = f(probe);
    ++out.evals;
    if (!std::isfinite(fp))
      throw std::runtime_error("fd_reduced_gradient: non-finite objective at probe " +
                               std::to_string(i));
    out.g(i) = sign * (fp - fx) / h;
  }
  return out;
}

CriticalityResult criticality_step(const Objective& f,
                                   const FeasibleRegion& region,
                                   const Vector& x, double fx, double h0,
                                   const LineSearchParams& params) {
  const Matrix& W = region.null_basis();
  CriticalityResult out;
  out.h = h0;
  FdGradient fd = fd_reduced_gradient(f, region, x, fx, out.h,
                                      params.fd_respect_bounds);
  out.evals += fd.evals;
  out.g = fd.g;
  out.q = region.project(x - W * out.g) - x;
  if (out.h <= params.u_g_prime * out.q.norm()) return out;

  const double q0 = out.q.norm();
  if (q0 <= 0.0) {
    out.converged = true;  // exactly stationary as measured: h would vanish
    return out;
  }
  for (int j = 1; j <= params.j_max; ++j) {
    out.h = std::pow(params.omega, j) * params.u_g_prime * q0;
    fd = fd_reduced_gradient(f, region, x, fx, out.h, params.fd_respect_bounds);
    out.evals += fd.evals;
    out.g = fd.g;
    out.q = region.project(x - W * out.g) - x;
    if (out.h <= params.u_g_prime * out.q.norm()) return out;
  }
  out.converged = true;
  return out;
}

Matrix bfgs_update(const Matrix& H, const Vector& s, const Vector& y,
                   double eps_c) {
  const double sy = s.dot(y);
  if (sy <= eps_c * s.norm() * y.norm()) return H;
  const int p = static_cast<int>(s.size());
  const Matrix I = Matrix::Identity(p, p);
  const Matrix V = I - s * y.transpose() / sy;
  return V * H * V.transpose() + s * s.transpose() / sy;
}

FullEvalOutcome full_eval_iteration(const Objective& f,
                                    const FeasibleRegion& region,
                                    const Vector& x, double fx, double alpha,
                                    FullEvalState& state,
                                    const LineSearchParams& params,
                                    bool ignore_switch) {
  const Matrix& W = region.null_basis();
  FullEvalOutcome out;
  out.x_next = x;
  out.f_next = fx;

  CriticalityResult crit = criticality_step(f, region, x, fx, params.h, params);
  out.evals += crit.evals;
  if (crit.converged) {
    out.criticality_converged = true;
    out.next_type = IterType::FullEval;
    return out;
  }
  const Vector& g = crit.g;

  if (state.initialized) {
    const Vector s = W.transpose() * (x - state.x_prev);
    const Vector y = g - state.g_prev;
    if (state.scale_pending) {
      const double sy = s.dot(y);
      if (sy >= params.eps_c * s.norm() * y.norm() && y.squaredNorm() > 0.0)
        state.H = (sy / y.squaredNorm()) *
                  Matrix::Identity(region.reduced_dim(), region.reduced_dim());
      state.scale_pending = false;
    }
    state.H = bfgs_update(state.H, s, y, params.eps_c);
  }

  Vector direction = -W * (state.H * g);
  Vector xbar = region.project(x + direction);
  Vector d = xbar - x;
  double gd = g.dot(W.transpose() * d);
  if (gd >= 0.0 && d.norm() > 1e-15 * (1.0 + x.norm())) {
    // The projected quasi-Newton direction lost descent (the curvature model
    // is unreliable near newly active constraints). Fall back to the
    // projected-gradient direction, which satisfies g'd <= -||d||^2, and
    // rebuild the curvature model from scratch.
    state.H = Matrix::Identity(region.reduced_dim(), region.reduced_dim());
    state.scale_pending = false;
    direction = -W * g;
    xbar = region.project(x + direction);
    d = xbar - x;
    gd = g.dot(W.transpose() * d);
  }

  const bool first_iteration = !state.initialized;
  state.x_prev = x;
  state.g_prev = g;
  state.initialized = true;

  const double beta_floor =
      ignore_switch ? 1e-16 * params.beta_bar : params.gamma * alpha;

  if (d.norm() <= 1e-15 * (1.0 + x.norm())) {
    // Projection returned the current point: no usable direction.
    state.nb = 0;
    out.next_type = IterType::LowEval;
    return out;
  }

  double beta = params.beta_bar;
  int nb = 0;
  bool accepted = false;
  double f_trial = fx;
  Vector x_trial;
  while (beta >= beta_floor) {
    x_trial = x + beta * d;
    f_trial = f(x_trial);
    ++out.evals;
    // The strict-decrease clause rejects zero-progress acceptances where
    // f(x + beta d) rounds to f(x) while c * beta * g'd underflows.
    if (std::isfinite(f_trial) && f_trial < fx &&
        f_trial <= fx + params.c * beta * gd) {
      accepted = true;
      break;
    }
    beta *= params.tau;
    ++nb;
  }

  state.nb = nb;
  out.backtracks = nb;
  if (accepted) {
    out.success = true;
    out.beta = beta;
    out.decrease_rhs = params.c * beta * gd;
    out.x_next = x_trial;
    out.f_next = f_trial;
    out.next_type = IterType::FullEval;
    if (first_iteration) state.scale_pending = true;
  } else {
    out.next_type = ignore_switch ? IterType::FullEval : IterType::LowEval;
  }
  return out;
}

}  // namespace fle
