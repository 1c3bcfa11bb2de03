#include "fle/problems.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>

namespace fle {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

double keyed_uniform(std::uint64_t seed, const Vector& x) {
  std::uint64_t h = mix64(seed);
  for (int i = 0; i < x.size(); ++i) {
    std::uint64_t bits;
    const double v = x(i);
    std::memcpy(&bits, &v, sizeof(bits));
    h = mix64(h ^ bits);
  }
  const double u = static_cast<double>(h >> 11) * 0x1p-53;  // [0, 1)
  return 2.0 * u - 1.0;
}

Problem with_noise(const Problem& base, double eps_f, std::uint64_t seed,
                   bool fresh) {
  if (eps_f <= 0.0) throw std::invalid_argument("with_noise: eps_f <= 0");
  Problem out = base;
  out.name = base.name + "_noisy";
  out.smooth = false;
  out.gradient.reset();
  const Objective phi = base.objective;
  if (fresh) {
    auto counter = std::make_shared<std::uint64_t>(0);
    out.objective = [phi, eps_f, seed, counter](const Vector& x) {
      const std::uint64_t h = mix64(seed ^ ++*counter);
      const double u = 2.0 * (static_cast<double>(h >> 11) * 0x1p-53) - 1.0;
      return phi(x) * (1.0 + eps_f * u);
    };
  } else {
    out.objective = [phi, eps_f, seed](const Vector& x) {
      return phi(x) * (1.0 + eps_f * keyed_uniform(seed, x));
    };
  }
  return out;
}

namespace {

bool is_bound_row(const Matrix& Ai, int row) {
  int nnz = 0;
  for (int j = 0; j < Ai.cols(); ++j)
    if (Ai(row, j) != 0.0) ++nnz;
  return nnz == 1;
}

}  // namespace

Problem with_l1_penalty(const Problem& base, double lambda,
                        PenaltyTarget target) {
  if (lambda <= 0.0) throw std::invalid_argument("with_l1_penalty: lambda <= 0");
  const FeasibleRegion& region = *base.region;
  const Objective phi = base.objective;
  Problem out = base;
  out.smooth = false;
  out.gradient.reset();

  std::string suffix;
  if (target == PenaltyTarget::LE) {
    suffix = "_l1le";
    const Matrix A = region.eq_matrix();
    const Vector b = region.eq_rhs();
    if (A.rows() > 0) {
      out.objective = [phi, lambda, A, b](const Vector& x) {
        return phi(x) + lambda * (A * x - b).cwiseAbs().sum();
      };
      out.region = std::make_shared<FeasibleRegion>(
          region.ineq_matrix(), region.lower(), region.upper(),
          region.reference_point());
    }
  } else {
    // Pick the penalized inequality rows.
    std::vector<int> bound_rows, general_rows;
    for (int i = 0; i < region.num_ineq(); ++i)
      (is_bound_row(region.ineq_matrix(), i) ? bound_rows : general_rows)
          .push_back(i);
    std::vector<int> penalized;
    switch (target) {
      case PenaltyTarget::LI:
        suffix = "_l1";
        penalized = general_rows;
        break;
      case PenaltyTarget::B:
        suffix = "_l1b";
        penalized = bound_rows;
        break;
      case PenaltyTarget::HalfB:
        suffix = "_l1hb";
        penalized.assign(bound_rows.begin(),
                         bound_rows.begin() + (bound_rows.size() + 1) / 2);
        break;
      default:
        break;
    }
    if (!penalized.empty()) {
      const int keep = region.num_ineq() - static_cast<int>(penalized.size());
      Matrix Ai_keep(keep, region.dim()), Ai_pen(penalized.size(), region.dim());
      Vector lo_keep(keep), up_keep(keep);
      Vector lo_pen(penalized.size()), up_pen(penalized.size());
      int k = 0, p = 0;
      for (int i = 0; i < region.num_ineq(); ++i) {
        const bool pen = std::find(penalized.begin(), penalized.end(), i) !=
                         penalized.end();
        if (pen) {
          Ai_pen.row(p) = region.ineq_matrix().row(i);
          lo_pen(p) = region.lower()(i);
          up_pen(p) = region.upper()(i);
          ++p;
        } else {
          Ai_keep.row(k) = region.ineq_matrix().row(i);
          lo_keep(k) = region.lower()(i);
          up_keep(k) = region.upper()(i);
          ++k;
        }
      }
      out.objective = [phi, lambda, Ai_pen, lo_pen, up_pen](const Vector& x) {
        const Vector v = Ai_pen * x;
        double pen_sum = 0.0;
        for (int i = 0; i < v.size(); ++i) {
          if (std::isfinite(lo_pen(i)))
            pen_sum += std::max(0.0, lo_pen(i) - v(i));
          if (std::isfinite(up_pen(i)))
            pen_sum += std::max(0.0, v(i) - up_pen(i));
        }
        return phi(x) + lambda * pen_sum;
      };
      out.region = std::make_shared<FeasibleRegion>(
          region.eq_matrix(), region.eq_rhs(), std::move(Ai_keep),
          std::move(lo_keep), std::move(up_keep), region.reference_point());
    }
  }
  out.name = base.name + suffix;
  return out;
}

Problem make_minimax(const std::string& name, std::vector<Objective> partials,
                     std::shared_ptr<const FeasibleRegion> region, Vector x0) {
  if (partials.empty())
    throw std::invalid_argument("make_minimax: no partial functions");
  Problem out;
  out.name = name;
  out.n = region->dim();
  out.region = std::move(region);
  out.x0 = std::move(x0);
  out.smooth = false;
  out.objective = [partials](const Vector& x) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& p : partials) best = std::max(best, p(x));
    return best;
  };
  return out;
}

namespace {

std::string next_content_line(std::istream& in, int& line_no) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string tok;
    if (ss >> tok && tok[0] != '#') return line;
  }
  return {};
}

}  // namespace

Problem load_problem(std::istream& in) {
  int line_no = 0;
  const std::string head = next_content_line(in, line_no);
  std::istringstream hs(head);
  std::string kw, name;
  hs >> kw >> name;
  if (kw != "objective" || name.empty())
    throw std::invalid_argument("problem parse error at line " +
                                std::to_string(line_no) +
                                ": expected 'objective <name>'");
  if (!registry_has(name))
    throw std::invalid_argument("problem parse error at line " +
                                std::to_string(line_no) +
                                ": unknown objective '" + name + "'");
  Problem proto = catalog_problem(name);
  Problem out = proto;
  out.region = std::make_shared<FeasibleRegion>(read_region(in));
  out.n = out.region->dim();

  const std::string x0_line = next_content_line(in, line_no);
  std::istringstream xs(x0_line);
  xs >> kw;
  if (kw != "x0")
    throw std::invalid_argument("problem parse error: expected 'x0 <" +
                                std::to_string(out.n) + " floats>'");
  out.x0.resize(out.n);
  for (int i = 0; i < out.n; ++i)
    if (!(xs >> out.x0(i)))
      throw std::invalid_argument("problem parse error: x0 needs " +
                                  std::to_string(out.n) + " values");
  out.f_best.reset();
  const std::string fl_line = next_content_line(in, line_no);
  if (!fl_line.empty()) {
    std::istringstream fs(fl_line);
    fs >> kw;
    if (kw == "fL") {
      double v;
      if (fs >> v) out.f_best = v;
    }
  }

  if (!out.region->is_feasible(out.x0))
    throw std::invalid_argument(
        "problem parse error: x0 is infeasible (violation " +
        std::to_string(out.region->max_violation(out.x0)) + ")");
  if (!std::isfinite(out.objective(out.x0)))
    throw std::invalid_argument("problem parse error: objective non-finite at x0");
  return out;
}

Problem load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open problem file: " + path);
  try {
    return load_problem(in);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void save_problem(const Problem& problem, std::ostream& out) {
  out << "objective " << problem.name << '\n';
  write_region(*problem.region, out);
  out << "x0";
  for (int i = 0; i < problem.x0.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), " %.17g", problem.x0(i));
    out << buf;
  }
  out << '\n';
  if (problem.f_best) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", *problem.f_best);
    out << "fL " << buf << '\n';
  }
}

std::vector<std::string> registry_names() {
  std::vector<std::string> names;
  for (const Problem& p : catalog()) names.push_back(p.name);
  return names;
}

bool registry_has(const std::string& name) {
  for (const Problem& p : catalog())
    if (p.name == name) return true;
  return false;
}

Problem catalog_problem(const std::string& name) {
  for (Problem& p : catalog())
    if (p.name == name) return p;
  throw std::invalid_argument("unknown catalog problem: " + name);
}

}  // namespace fle
