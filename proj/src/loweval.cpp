#include "fle/loweval.hpp"

#include <cmath>
#include <stdexcept>

namespace fle {

double forcing(double alpha, double gamma1, double gamma2) {
  if (alpha <= 0.0) throw std::invalid_argument("forcing: alpha <= 0");
  return std::min(gamma1, gamma2 * alpha * alpha);
}

LowEvalOutcome low_eval_iteration(const Objective& f,
                                  const FeasibleRegion& region,
                                  const Vector& x, double fx, double alpha,
                                  const DirectSearchParams& params,
                                  std::mt19937_64& rng) {
  LowEvalOutcome out;
  out.x_next = x;
  out.f_next = fx;

  const ActiveSet active = region.approx_active_sets(x, alpha);
  const ConeGenerators cone = tangent_cone_generators(
      region.normal_cone_generators(active), region.reduced_dim());
  const std::vector<Vector> dirs =
      sample_polling_directions(cone, params.count_fraction, rng);
  out.poll_size = static_cast<int>(dirs.size());

  const double rho = forcing(alpha, params.gamma1, params.gamma2);
  const Matrix& W = region.null_basis();
  for (const Vector& d : dirs) {
    const Vector poll = x + alpha * (W * d);
    const double fp = f(poll);
    ++out.evals;
    if (std::isfinite(fp) && fp <= fx - rho) {
      out.success = true;
      out.x_next = poll;
      out.f_next = fp;
      break;
    }
  }
  out.alpha_next = out.success ? params.lambda * alpha : params.theta * alpha;
  return out;
}

}  // namespace fle
