#ifndef FLE_BENCH_HPP
#define FLE_BENCH_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fle/driver.hpp"
#include "fle/problems.hpp"

namespace fle {

struct BenchResult {
  std::string problem;
  std::string solver;
  std::optional<long> t;  // evaluations to convergence; nullopt = failed
  double f_best = 0.0;
  long evals_used = 0;
};

struct ProfileCurve {
  std::string solver;
  // Right-continuous step function: sorted (ratio, fraction) jump points.
  std::vector<std::pair<double, double>> points;
};

/// Smallest cumulative evaluation count along the trace at which
/// f(x0) - f(x) >= (1 - tau) * (f(x0) - f_L) first holds; nullopt when the
/// run never satisfies the test. Throws when f_L > f(x0).
std::optional<long> convergence_eval_count(const RunRecord& trace, double f0,
                                           double f_L, double tau);

/// Dolan-More performance profiles. Problems where every solver failed stay
/// in the denominator. Throws on empty input.
std::vector<ProfileCurve> performance_profiles(
    const std::vector<BenchResult>& results);

/// Fraction of problems solved by each solver (rho at alpha = infinity).
std::map<std::string, double> solved_fractions(
    const std::vector<BenchResult>& results);

struct TransformSpec {
  enum class Kind { None, Noisy, L1 } kind = Kind::None;
  double eps_f = 1e-3;
  double lambda = 100.0;
  PenaltyTarget target = PenaltyTarget::LI;
};

TransformSpec parse_transform(const std::string& text);
Problem apply_transform(const Problem& base, const TransformSpec& spec,
                        std::uint64_t seed);

struct BenchConfig {
  std::vector<std::string> problems;  // catalog names; empty = all
  std::vector<std::string> problem_files;
  std::vector<SolverMode> solvers = {SolverMode::FLE, SolverMode::FullOnly,
                                     SolverMode::LowOnly};
  std::vector<double> taus = {1e-3, 1e-5};
  long budget_multiplier = 100;  // budget = multiplier * (n + 1)
  TransformSpec transform;
  std::uint64_t seed = 0;
  int replications = 1;  // >1: t is the median over seeds seed..seed+R-1
  int parallel = 1;
  std::string fl_source = "catalog";  // "catalog" or "runs"
  std::string out_dir;
  SolverConfig base_config;  // mode/budget/seed overridden per cell
};

struct BenchOutput {
  std::vector<Problem> problems;
  std::vector<BenchResult> results;                     // at the first tau
  std::map<double, std::vector<BenchResult>> by_tau;    // per tolerance
  std::map<double, std::vector<ProfileCurve>> profiles;
};

/// Runs the solver x problem matrix, applies the convergence test for each
/// tau, and writes results.csv, per-run trace CSVs, profiles_<tau>.csv and
/// profiles_<tau>.svg into out_dir. Per-run failures are recorded as
/// non-converged, never aborting the matrix.
BenchOutput run_matrix(const BenchConfig& config);

void write_results_csv(const std::vector<BenchResult>& results,
                       std::ostream& out);
void write_profiles_csv(const std::vector<ProfileCurve>& curves,
                        std::ostream& out);
void write_profiles_svg(const std::vector<ProfileCurve>& curves,
                        double tau, std::ostream& out);

}  // namespace fle

#endif  // FLE_BENCH_HPP
