#ifndef FLE_DRIVER_HPP
#define FLE_DRIVER_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fle/fulleval.hpp"
#include "fle/loweval.hpp"
#include "fle/problems.hpp"

namespace fle {

enum class SolverMode { FLE, FullOnly, LowOnly };

std::string to_string(SolverMode mode);
SolverMode solver_mode_from_string(const std::string& name);

struct SolverConfig {
  SolverMode mode = SolverMode::FLE;
  long budget = 0;  // max objective evaluations
  double alpha0 = 1.0;
  double alpha_min = 1e-10;
  LineSearchParams ls;
  DirectSearchParams ds;
  std::uint64_t seed = 0;
};

enum class Termination { Budget, AlphaMin, CriticalityConverged, NoDecrease };

std::string to_string(Termination reason);

struct IterationRecord {
  long k = 0;
  IterType type = IterType::FullEval;
  bool success = false;
  double f = 0.0;      // f at the end of the iteration
  double alpha = 0.0;  // alpha entering the iteration
  double alpha_next = 0.0;
  long evals = 0;      // evaluations spent by this iteration
  long cum_evals = 0;  // cumulative, including the initial f(x0)
  double beta = 0.0;   // accepted line-search step (Full-Eval successes)
  double decrease_rhs = 0.0;  // c * beta * g'd at acceptance (successes)
  int backtracks = 0;
};

struct RunRecord {
  std::vector<IterationRecord> entries;
  Vector x_final;
  double f_initial = 0.0;
  double f_final = 0.0;
  long total_evals = 0;
  Termination reason = Termination::Budget;
};

/// Runs the full-low evaluation loop (or one of its single-strategy
/// ablations) on a problem. Deterministic given (problem, config).
/// Throws std::invalid_argument when the start point is infeasible.
RunRecord solve(const Problem& problem, const SolverConfig& config);

/// One CSV row per iteration: k,type,success,f,alpha,evals,cum_evals,beta.
void write_trace_csv(const RunRecord& record, std::ostream& out);

/// key=value config text covering every SolverConfig field (unknown keys are
/// an error; missing keys keep defaults).
SolverConfig parse_config(std::istream& in);
SolverConfig parse_config_file(const std::string& path);

}  // namespace fle

#endif  // FLE_DRIVER_HPP
