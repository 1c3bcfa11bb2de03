#include "fle/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fle {

std::optional<long> convergence_eval_count(const RunRecord& trace, double f0,
                                           double f_L, double tau) {
  if (tau <= 0.0) throw std::invalid_argument("convergence_eval_count: tau <= 0");
  if (f_L > f0 + 1e-15 * std::abs(f0))
    throw std::invalid_argument("convergence_eval_count: f_L > f(x0)");
  const double threshold = (1.0 - tau) * (f0 - f_L);
  if (f0 - trace.f_initial >= threshold) return 1;  // counts the initial eval
  for (const auto& e : trace.entries)
    if (f0 - e.f >= threshold) return e.cum_evals;
  return std::nullopt;
}

namespace {

std::vector<std::string> ordered_keys(const std::vector<BenchResult>& results,
                                      bool solvers) {
  std::vector<std::string> keys;
  for (const auto& r : results) {
    const std::string& k = solvers ? r.solver : r.problem;
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  }
  return keys;
}

}  // namespace

std::vector<ProfileCurve> performance_profiles(
    const std::vector<BenchResult>& results) {
  if (results.empty())
    throw std::invalid_argument("performance_profiles: empty results");
  const std::vector<std::string> solvers = ordered_keys(results, true);
  const std::vector<std::string> problems = ordered_keys(results, false);
  const double inf = std::numeric_limits<double>::infinity();

  // r_{p,s} = t_{p,s} / min_s t_{p,s}; infinity when the solver failed.
  std::map<std::string, std::vector<double>> ratios;  // per solver
  for (const auto& p : problems) {
    double tmin = inf;
    for (const auto& r : results)
      if (r.problem == p && r.t) tmin = std::min(tmin, double(*r.t));
    for (const auto& s : solvers) {
      for (const auto& r : results)
        if (r.problem == p && r.solver == s)
          ratios[s].push_back(r.t && std::isfinite(tmin) ? double(*r.t) / tmin
                                                         : inf);
    }
  }

  const double np = static_cast<double>(problems.size());
  std::vector<ProfileCurve> curves;
  for (const auto& s : solvers) {
    ProfileCurve c;
    c.solver = s;
    std::vector<double> rs = ratios[s];
    std::sort(rs.begin(), rs.end());
    std::set<double> alphas = {1.0};
    for (double r : rs)
      if (std::isfinite(r)) alphas.insert(r);
    for (double a : alphas) {
      const double count = static_cast<double>(
          std::upper_bound(rs.begin(), rs.end(), a) - rs.begin());
      c.points.emplace_back(a, count / np);
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

std::map<std::string, double> solved_fractions(
    const std::vector<BenchResult>& results) {
  std::map<std::string, double> solved, total;
  for (const auto& r : results) {
    total[r.solver] += 1.0;
    if (r.t) solved[r.solver] += 1.0;
  }
  std::map<std::string, double> out;
  for (const auto& [s, n] : total) out[s] = solved[s] / n;
  return out;
}

TransformSpec parse_transform(const std::string& text) {
  TransformSpec spec;
  if (text.empty() || text == "none") return spec;
  std::istringstream ss(text);
  std::string kind, arg1, arg2;
  std::getline(ss, kind, ':');
  if (kind == "noisy") {
    spec.kind = TransformSpec::Kind::Noisy;
    if (std::getline(ss, arg1, ':')) spec.eps_f = std::stod(arg1);
  } else if (kind == "l1") {
    spec.kind = TransformSpec::Kind::L1;
    if (std::getline(ss, arg1, ':')) spec.lambda = std::stod(arg1);
    if (std::getline(ss, arg2, ':')) {
      if (arg2 == "LI")
        spec.target = PenaltyTarget::LI;
      else if (arg2 == "LE")
        spec.target = PenaltyTarget::LE;
      else if (arg2 == "B")
        spec.target = PenaltyTarget::B;
      else if (arg2 == "HALFB" || arg2 == "halfb")
        spec.target = PenaltyTarget::HalfB;
      else
        throw std::invalid_argument("unknown penalty target: " + arg2);
    }
  } else {
    throw std::invalid_argument("unknown transform: " + text);
  }
  return spec;
}

Problem apply_transform(const Problem& base, const TransformSpec& spec,
                        std::uint64_t seed) {
  switch (spec.kind) {
    case TransformSpec::Kind::None:
      return base;
    case TransformSpec::Kind::Noisy:
      return with_noise(base, spec.eps_f, seed);
    case TransformSpec::Kind::L1:
      return with_l1_penalty(base, spec.lambda, spec.target);
  }
  return base;
}

namespace {

struct Cell {
  int problem_idx = 0;
  SolverMode mode = SolverMode::FLE;
  std::vector<RunRecord> runs;  // one per replication
  bool failed = false;
};

std::optional<long> median_t(const std::vector<std::optional<long>>& ts) {
  std::vector<double> vals;
  for (const auto& t : ts)
    vals.push_back(t ? double(*t) : std::numeric_limits<double>::infinity());
  std::sort(vals.begin(), vals.end());
  const double med = vals[(vals.size() - 1) / 2];  // lower median
  if (!std::isfinite(med)) return std::nullopt;
  return static_cast<long>(med);
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
  return s;
}

}  // namespace

BenchOutput run_matrix(const BenchConfig& config) {
  BenchOutput out;

  std::vector<std::string> names = config.problems;
  if (names.empty() && config.problem_files.empty())
    for (const Problem& p : catalog()) names.push_back(p.name);
  for (const auto& name : names)
    out.problems.push_back(
        apply_transform(catalog_problem(name), config.transform, config.seed));
  for (const auto& path : config.problem_files)
    out.problems.push_back(apply_transform(load_problem_file(path),
                                           config.transform, config.seed));

  // Build and execute the cell list.
  std::vector<Cell> cells;
  for (int pi = 0; pi < static_cast<int>(out.problems.size()); ++pi)
    for (SolverMode mode : config.solvers)
      cells.push_back({pi, mode, {}, false});

  auto run_cell = [&](Cell& cell) {
    const Problem& problem = out.problems[cell.problem_idx];
    for (int rep = 0; rep < std::max(1, config.replications); ++rep) {
      SolverConfig sc = config.base_config;
      sc.mode = cell.mode;
      sc.budget = config.budget_multiplier * (problem.n + 1);
      sc.seed = config.seed + static_cast<std::uint64_t>(rep);
      try {
        cell.runs.push_back(solve(problem, sc));
      } catch (const std::exception&) {
        cell.failed = true;
        break;
      }
    }
  };

  if (config.parallel > 1) {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    const int nthreads = std::min<int>(config.parallel, cells.size());
    for (int i = 0; i < nthreads; ++i)
      pool.emplace_back([&] {
        for (size_t j = next.fetch_add(1); j < cells.size();
             j = next.fetch_add(1))
          run_cell(cells[j]);
      });
    for (auto& th : pool) th.join();
  } else {
    for (auto& cell : cells) run_cell(cell);
  }

  // f_L per problem: catalog value when present and requested, otherwise the
  // smallest value reached by any solver.
  std::vector<double> f_low(out.problems.size(),
                            std::numeric_limits<double>::infinity());
  std::vector<double> f_zero(out.problems.size(),
                             std::numeric_limits<double>::quiet_NaN());
  for (const auto& cell : cells)
    for (const auto& run : cell.runs) {
      f_low[cell.problem_idx] = std::min(f_low[cell.problem_idx], run.f_final);
      f_zero[cell.problem_idx] = run.f_initial;
    }
  if (config.fl_source == "catalog")
    for (size_t i = 0; i < out.problems.size(); ++i)
      if (out.problems[i].f_best) f_low[i] = *out.problems[i].f_best;

  for (double tau : config.taus) {
    std::vector<BenchResult> results;
    for (const auto& cell : cells) {
      const Problem& problem = out.problems[cell.problem_idx];
      BenchResult r;
      r.problem = problem.name;
      r.solver = to_string(cell.mode);
      if (cell.failed || cell.runs.empty() ||
          !std::isfinite(f_zero[cell.problem_idx])) {
        r.f_best = std::numeric_limits<double>::infinity();
      } else {
        std::vector<std::optional<long>> ts;
        double fb = std::numeric_limits<double>::infinity();
        long used = 0;
        for (const auto& run : cell.runs) {
          ts.push_back(convergence_eval_count(
              run, run.f_initial, f_low[cell.problem_idx], tau));
          fb = std::min(fb, run.f_final);
          used = std::max(used, run.total_evals);
        }
        r.t = median_t(ts);
        r.f_best = fb;
        r.evals_used = used;
      }
      results.push_back(std::move(r));
    }
    out.profiles[tau] = performance_profiles(results);
    out.by_tau[tau] = std::move(results);
  }
  out.results = out.by_tau.at(config.taus.front());

  if (!config.out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    {
      std::ofstream f(fs::path(config.out_dir) / "results.csv");
      write_results_csv(out.results, f);
    }
    for (double tau : config.taus) {
      char tag[32];
      std::snprintf(tag, sizeof(tag), "%g", tau);
      {
        std::ofstream f(fs::path(config.out_dir) /
                        ("profiles_" + std::string(tag) + ".csv"));
        write_profiles_csv(out.profiles.at(tau), f);
      }
      {
        std::ofstream f(fs::path(config.out_dir) /
                        ("profiles_" + std::string(tag) + ".svg"));
        write_profiles_svg(out.profiles.at(tau), tau, f);
      }
    }
    for (const auto& cell : cells) {
      if (cell.runs.empty()) continue;
      const std::string name = "trace_" +
                               sanitize(out.problems[cell.problem_idx].name) +
                               "_" + to_string(cell.mode) + ".csv";
      std::ofstream f(fs::path(config.out_dir) / name);
      write_trace_csv(cell.runs.front(), f);
    }
  }
  return out;
}

void write_results_csv(const std::vector<BenchResult>& results,
                       std::ostream& out) {
  out << "problem,solver,t,f_best,evals\n";
  char buf[256];
  for (const auto& r : results) {
    if (r.t)
      std::snprintf(buf, sizeof(buf), "%s,%s,%ld,%.17g,%ld\n",
                    r.problem.c_str(), r.solver.c_str(), *r.t, r.f_best,
                    r.evals_used);
    else
      std::snprintf(buf, sizeof(buf), "%s,%s,inf,%.17g,%ld\n",
                    r.problem.c_str(), r.solver.c_str(), r.f_best,
                    r.evals_used);
    out << buf;
  }
}

void write_profiles_csv(const std::vector<ProfileCurve>& curves,
                        std::ostream& out) {
  out << "alpha,solver,rho\n";
  char buf[128];
  for (const auto& c : curves)
    for (const auto& [a, rho] : c.points) {
      std::snprintf(buf, sizeof(buf), "%.17g,%s,%.17g\n", a, c.solver.c_str(),
                    rho);
      out << buf;
    }
}

void write_profiles_svg(const std::vector<ProfileCurve>& curves, double tau,
                        std::ostream& out) {
  const int width = 640, height = 480;
  const int ml = 60, mr = 20, mt = 40, mb = 50;
  const double pw = width - ml - mr, ph = height - mt - mb;
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                 "#9467bd", "#ff7f0e", "#8c564b"};

  double max_log = 1.0;
  for (const auto& c : curves)
    for (const auto& [a, rho] : c.points)
      if (std::isfinite(a)) max_log = std::max(max_log, std::log2(a));
  max_log = std::ceil(max_log);

  auto X = [&](double a) { return ml + pw * std::log2(a) / max_log; };
  auto Y = [&](double rho) { return mt + ph * (1.0 - rho); };

  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
      << "' height='" << height << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "<text x='%d' y='24' font-size='16' font-family='sans-serif'>"
                "Performance profile (tau = %g)</text>\n",
                ml, tau);
  out << buf;
  // Axes and gridlines.
  for (int i = 0; i <= static_cast<int>(max_log); ++i) {
    const double x = ml + pw * i / max_log;
    std::snprintf(buf, sizeof(buf),
                  "<line x1='%.1f' y1='%d' x2='%.1f' y2='%d' stroke='#ddd'/>"
                  "<text x='%.1f' y='%d' font-size='11' text-anchor='middle' "
                  "font-family='sans-serif'>%d</text>\n",
                  x, mt, x, mt + static_cast<int>(ph), x,
                  mt + static_cast<int>(ph) + 16, 1 << i);
    out << buf;
  }
  for (int i = 0; i <= 4; ++i) {
    const double y = mt + ph * i / 4.0;
    std::snprintf(buf, sizeof(buf),
                  "<line x1='%d' y1='%.1f' x2='%d' y2='%.1f' stroke='#ddd'/>"
                  "<text x='%d' y='%.1f' font-size='11' text-anchor='end' "
                  "font-family='sans-serif'>%.2f</text>\n",
                  ml, y, ml + static_cast<int>(pw), y, ml - 6, y + 4,
                  1.0 - i / 4.0);
    out << buf;
  }
  std::snprintf(buf, sizeof(buf),
                "<rect x='%d' y='%d' width='%.1f' height='%.1f' fill='none' "
                "stroke='black'/>\n",
                ml, mt, pw, ph);
  out << buf;

  int ci = 0;
  for (const auto& c : curves) {
    const char* color = colors[ci % 6];
    std::ostringstream path;
    double prev_rho = 0.0;
    bool first = true;
    for (const auto& [a, rho] : c.points) {
      if (!std::isfinite(a)) continue;
      if (first) {
        path << "M " << X(a) << ' ' << Y(rho);
        first = false;
      } else {
        path << " L " << X(a) << ' ' << Y(prev_rho) << " L " << X(a) << ' '
             << Y(rho);
      }
      prev_rho = rho;
    }
    if (!first) path << " L " << X(std::pow(2.0, max_log)) << ' ' << Y(prev_rho);
    std::snprintf(buf, sizeof(buf),
                  "<path d='%s' fill='none' stroke='%s' stroke-width='2'/>\n",
                  path.str().c_str(), color);
    out << buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x='%d' y='%d' font-size='13' fill='%s' "
                  "font-family='sans-serif'>%s</text>\n",
                  width - mr - 80, mt + 18 + 18 * ci, color, c.solver.c_str());
    out << buf;
    ++ci;
  }
  out << "</svg>\n";
}

}  // namespace fle
