#include "fle/driver.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fle {

std::string to_string(SolverMode mode) {
  switch (mode) {
    case SolverMode::FLE:
      return "fle";
    case SolverMode::FullOnly:
      return "full";
    case SolverMode::LowOnly:
      return "low";
  }
  return "?";
}

SolverMode solver_mode_from_string(const std::string& name) {
  if (name == "fle") return SolverMode::FLE;
  if (name == "full") return SolverMode::FullOnly;
  if (name == "low") return SolverMode::LowOnly;
  throw std::invalid_argument("unknown solver mode: " + name);
}

std::string to_string(Termination reason) {
  switch (reason) {
    case Termination::Budget:
      return "budget";
    case Termination::AlphaMin:
      return "alpha_min";
    case Termination::CriticalityConverged:
      return "criticality_converged";
    case Termination::NoDecrease:
      return "no_decrease";
  }
  return "?";
}

RunRecord solve(const Problem& problem, const SolverConfig& config) {
  if (config.budget <= 0) throw std::invalid_argument("solve: budget <= 0");
  if (!(config.alpha0 > config.alpha_min && config.alpha_min > 0.0))
    throw std::invalid_argument("solve: need alpha0 > alpha_min > 0");
  const FeasibleRegion& region = *problem.region;
  if (!region.is_feasible(problem.x0))
    throw std::invalid_argument("solve: infeasible start point on " +
                                problem.name);

  long evals = 0;
  const Objective counted = [&](const Vector& x) {
    ++evals;
    return problem.objective(x);
  };

  RunRecord rec;
  Vector x = problem.x0;
  double fx = counted(x);
  rec.f_initial = fx;

  std::mt19937_64 rng(config.seed);
  FullEvalState state = FullEvalState::fresh(region.reduced_dim());
  IterType t = config.mode == SolverMode::LowOnly ? IterType::LowEval
                                                  : IterType::FullEval;
  double alpha = config.alpha0;
  int low_fail_budget = 1;
  int consecutive_low_fails = 0;
  rec.reason = Termination::Budget;

  for (long k = 0;; ++k) {
    if (evals >= config.budget) {
      rec.reason = Termination::Budget;
      break;
    }
    if (alpha < config.alpha_min) {
      rec.reason = Termination::AlphaMin;
      break;
    }

    IterationRecord entry;
    entry.k = k;
    entry.type = t;
    entry.alpha = alpha;
    const long evals_before = evals;

    if (t == IterType::FullEval) {
      FullEvalOutcome out =
          full_eval_iteration(counted, region, x, fx, alpha, state, config.ls,
                              config.mode == SolverMode::FullOnly);
      if (out.criticality_converged) {
        rec.reason = Termination::CriticalityConverged;
        break;
      }
      x = out.x_next;
      fx = out.f_next;
      entry.success = out.success;
      entry.beta = out.beta;
      entry.decrease_rhs = out.decrease_rhs;
      entry.backtracks = out.backtracks;
      entry.alpha_next = alpha;  // Full-Eval never changes alpha
      if (config.mode == SolverMode::FullOnly) {
        t = IterType::FullEval;
        if (!out.success) {
          entry.evals = evals - evals_before;
          entry.cum_evals = evals;
          entry.f = fx;
          rec.entries.push_back(entry);
          rec.reason = Termination::NoDecrease;
          break;
        }
      } else if (out.success) {
        t = IterType::FullEval;
      } else {
        t = IterType::LowEval;
        low_fail_budget = std::max(1, out.backtracks);
        consecutive_low_fails = 0;
      }
    } else {
      LowEvalOutcome out =
          low_eval_iteration(counted, region, x, fx, alpha, config.ds, rng);
      x = out.x_next;
      fx = out.f_next;
      entry.success = out.success;
      entry.alpha_next = out.alpha_next;
      alpha = out.alpha_next;
      if (config.mode == SolverMode::LowOnly) {
        t = IterType::LowEval;
      } else if (out.success) {
        consecutive_low_fails = 0;
      } else {
        ++consecutive_low_fails;
        if (consecutive_low_fails >= low_fail_budget) {
          t = IterType::FullEval;
          consecutive_low_fails = 0;
        }
      }
    }

    entry.evals = evals - evals_before;
    entry.cum_evals = evals;
    entry.f = fx;
    rec.entries.push_back(entry);
  }

  rec.x_final = x;
  rec.f_final = fx;
  rec.total_evals = evals;
  return rec;
}

void write_trace_csv(const RunRecord& record, std::ostream& out) {
  out << "k,type,success,f,alpha,evals,cum_evals,beta\n";
  char buf[256];
  for (const auto& e : record.entries) {
    std::snprintf(buf, sizeof(buf), "%ld,%s,%d,%.17g,%.17g,%ld,%ld,%.17g\n",
                  e.k, e.type == IterType::FullEval ? "full" : "low",
                  e.success ? 1 : 0, e.f, e.alpha, e.evals, e.cum_evals,
                  e.beta);
    out << buf;
  }
}

SolverConfig parse_config(std::istream& in) {
  SolverConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string key, value;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::istringstream ss(line);
      if (ss >> key)
        throw std::invalid_argument("config parse error at line " +
                                    std::to_string(line_no) + ": expected key=value");
      continue;  // blank
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    key = trim(line.substr(0, eq));
    value = trim(line.substr(eq + 1));
    try {
      if (key == "mode")
        cfg.mode = solver_mode_from_string(value);
      else if (key == "budget")
        cfg.budget = std::stol(value);
      else if (key == "alpha0")
        cfg.alpha0 = std::stod(value);
      else if (key == "alpha_min")
        cfg.alpha_min = std::stod(value);
      else if (key == "seed")
        cfg.seed = std::stoull(value);
      else if (key == "c")
        cfg.ls.c = std::stod(value);
      else if (key == "beta_bar")
        cfg.ls.beta_bar = std::stod(value);
      else if (key == "tau")
        cfg.ls.tau = std::stod(value);
      else if (key == "gamma")
        cfg.ls.gamma = std::stod(value);
      else if (key == "eps_c")
        cfg.ls.eps_c = std::stod(value);
      else if (key == "h")
        cfg.ls.h = std::stod(value);
      else if (key == "u_g_prime")
        cfg.ls.u_g_prime = std::stod(value);
      else if (key == "omega")
        cfg.ls.omega = std::stod(value);
      else if (key == "j_max")
        cfg.ls.j_max = std::stoi(value);
      else if (key == "fd_respect_bounds")
        cfg.ls.fd_respect_bounds = (value == "1" || value == "true");
      else if (key == "lambda")
        cfg.ds.lambda = std::stod(value);
      else if (key == "theta")
        cfg.ds.theta = std::stod(value);
      else if (key == "gamma1")
        cfg.ds.gamma1 = std::stod(value);
      else if (key == "gamma2")
        cfg.ds.gamma2 = std::stod(value);
      else if (key == "count_fraction")
        cfg.ds.count_fraction = std::stod(value);
      else
        throw std::invalid_argument("unknown key '" + key + "'");
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config parse error at line " +
                                  std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

SolverConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  return parse_config(in);
}

}  // namespace fle
