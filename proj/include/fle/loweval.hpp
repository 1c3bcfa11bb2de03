#ifndef FLE_LOWEVAL_HPP
#define FLE_LOWEVAL_HPP

#include <random>

#include "fle/fulleval.hpp"
#include "fle/geometry.hpp"

namespace fle {

struct DirectSearchParams {
  double lambda = 2.0;  // expansion on success
  double theta = 0.5;   // contraction on failure
  double gamma1 = 1e-5;
  double gamma2 = 1e-5;
  double count_fraction = 0.5;
};

/// Forcing function rho(alpha) = min(gamma1, gamma2 * alpha^2).
double forcing(double alpha, double gamma1, double gamma2);

struct LowEvalOutcome {
  bool success = false;
  Vector x_next;
  double f_next = 0.0;
  double alpha_next = 0.0;
  int evals = 0;
  int poll_size = 0;
};

/// One feasible direct-search iteration: polls unit directions W d with d
/// sampled from the approximate tangent cone T(x, alpha), opportunistically
/// accepting the first point with f <= fx - rho(alpha). Every poll point
/// x + alpha W d is feasible. An empty polling set is an unsuccessful
/// iteration with zero evaluations.
LowEvalOutcome low_eval_iteration(const Objective& f,
                                  const FeasibleRegion& region,
                                  const Vector& x, double fx, double alpha,
                                  const DirectSearchParams& params,
                                  std::mt19937_64& rng);

}  // namespace fle

#endif  // FLE_LOWEVAL_HPP
