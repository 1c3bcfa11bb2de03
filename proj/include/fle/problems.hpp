#ifndef FLE_PROBLEMS_HPP
#define FLE_PROBLEMS_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fle/fulleval.hpp"
#include "fle/geometry.hpp"

namespace fle {

using GradientFn = std::function<Vector(const Vector&)>;

/// A test problem: objective, feasible region, feasible start point, and an
/// optional best-known value. Immutable after construction; the objective is
/// pure unless a fresh-noise transform was applied.
struct Problem {
  std::string name;
  int n = 0;
  Objective objective;
  std::optional<GradientFn> gradient;  // analytic, used for diagnostics only
  std::shared_ptr<const FeasibleRegion> region;
  Vector x0;
  std::optional<double> f_best;  // best-known objective value
  bool smooth = true;
  bool convex = false;
  std::string provenance;

  double evaluate(const Vector& x) const { return objective(x); }
};

/// Relative multiplicative noise f(x) * (1 + xi), xi ~ U(-eps_f, eps_f).
/// Draws are keyed on (seed, bits of x) so repeated evaluation at the same
/// point reproduces the same value; `fresh` switches to per-call draws.
Problem with_noise(const Problem& base, double eps_f, std::uint64_t seed,
                   bool fresh = false);

enum class PenaltyTarget { LI, LE, B, HalfB };

/// l1 exact-penalty transform: the targeted constraints are removed from the
/// region and their absolute violations added to the objective with weight
/// lambda. B targets bound rows (coordinate rows of A_I), LI the remaining
/// inequality rows, LE the equality block, HalfB the first half (rounded up)
/// of the bound rows.
Problem with_l1_penalty(const Problem& base, double lambda,
                        PenaltyTarget target);

/// Pointwise maximum of partial objectives over a common region.
Problem make_minimax(const std::string& name,
                     std::vector<Objective> partials,
                     std::shared_ptr<const FeasibleRegion> region, Vector x0);

/// Uniform draw in (-1, 1) keyed deterministically on (seed, bits of x).
double keyed_uniform(std::uint64_t seed, const Vector& x);

/// Built-in objective registry used by the problem-file loader.
std::vector<std::string> registry_names();
bool registry_has(const std::string& name);

/// Problem file: line "objective <registry-name>", then the region format,
/// then "x0 <n floats>" and optionally "fL <float>". Errors carry line
/// numbers; x0 feasibility is verified at load.
Problem load_problem(std::istream& in);
Problem load_problem_file(const std::string& path);
void save_problem(const Problem& problem, std::ostream& out);

/// The built-in catalog: LSQFIT and its l1-penalized variant, convex
/// quadratics under box/equality/inequality constraints, small standard
/// constrained instances, and two minimax problems. Best-known values were
/// computed offline with independent QP/LP/multistart solvers
/// (scripts/compute_reference_values.py).
std::vector<Problem> catalog();
Problem catalog_problem(const std::string& name);

}  // namespace fle

#endif  // FLE_PROBLEMS_HPP
