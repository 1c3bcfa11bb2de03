#include "fle/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace fle {

namespace {

constexpr double kOrthTol = 1e-12;
constexpr double kFeasTol = 1e-10;

}  // namespace

Matrix null_space_basis(const Matrix& A, int n) {
  const int m = static_cast<int>(A.rows());
  if (m == 0) return Matrix::Identity(n, n);
  if (A.cols() != n)
    throw std::invalid_argument("null_space_basis: A has " +
                                std::to_string(A.cols()) + " columns, expected " +
                                std::to_string(n));
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullV);
  const double smax = svd.singularValues()(0);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-12 * std::max(1.0, smax)) ++rank;
  if (rank < m)
    throw std::invalid_argument("null_space_basis: A is rank-deficient (rank " +
                                std::to_string(rank) + " < " + std::to_string(m) +
                                " rows)");
  // Right singular vectors past the rank span the kernel and are orthonormal.
  return svd.matrixV().rightCols(n - m);
}

FeasibleRegion::FeasibleRegion(Matrix A, Vector b, Matrix Ai, Vector lower,
                               Vector upper, Vector xref)
    : n_(static_cast<int>(xref.size())),
      A_(std::move(A)),
      b_(std::move(b)),
      Ai_(std::move(Ai)),
      lower_(std::move(lower)),
      upper_(std::move(upper)),
      xref_(std::move(xref)) {
  if (A_.rows() == 0) A_.resize(0, n_);
  if (Ai_.rows() == 0) Ai_.resize(0, n_);
  W_ = null_space_basis(A_, n_);
  B_ = Ai_ * W_;
  row_norms_.resize(Ai_.rows());
  for (int i = 0; i < Ai_.rows(); ++i) row_norms_(i) = B_.row(i).norm();
  validate();
}

FeasibleRegion::FeasibleRegion(Matrix Ai, Vector lower, Vector upper,
                               Vector xref)
    : FeasibleRegion(Matrix(0, static_cast<int>(xref.size())), Vector(0),
                     std::move(Ai), std::move(lower), std::move(upper),
                     std::move(xref)) {}

void FeasibleRegion::validate() const {
  if (A_.rows() > 0 && A_.cols() != n_)
    throw std::invalid_argument("FeasibleRegion: A column count mismatch");
  if (b_.size() != A_.rows())
    throw std::invalid_argument("FeasibleRegion: b size mismatch");
  if (Ai_.rows() != lower_.size() || Ai_.rows() != upper_.size())
    throw std::invalid_argument("FeasibleRegion: bound vector size mismatch");
  if (Ai_.rows() > 0 && Ai_.cols() != n_)
    throw std::invalid_argument("FeasibleRegion: A_I column count mismatch");
  for (int i = 0; i < lower_.size(); ++i)
    if (!(lower_(i) < upper_(i)))
      throw std::invalid_argument("FeasibleRegion: lower >= upper at row " +
                                  std::to_string(i));
  if (A_.rows() > 0 && (A_ * W_).cwiseAbs().maxCoeff() > kOrthTol)
    throw std::invalid_argument("FeasibleRegion: null-space basis check failed");
  for (int i = 0; i < Ai_.rows(); ++i) {
    const bool bounded = std::isfinite(lower_(i)) || std::isfinite(upper_(i));
    if (bounded && row_norms_(i) <= kOrthTol)
      throw std::invalid_argument(
          "FeasibleRegion: inequality row " + std::to_string(i) +
          " is redundant on the equality null space (W^T A_I^T e_i = 0)");
  }
  if (max_violation(xref_) > kFeasTol)
    throw std::invalid_argument("FeasibleRegion: reference point infeasible");
}

double FeasibleRegion::max_violation(const Vector& x) const {
  double v = 0.0;
  if (A_.rows() > 0) v = (A_ * x - b_).cwiseAbs().maxCoeff();
  if (Ai_.rows() > 0) {
    const Vector ax = Ai_ * x;
    for (int i = 0; i < ax.size(); ++i) {
      if (std::isfinite(lower_(i))) v = std::max(v, lower_(i) - ax(i));
      if (std::isfinite(upper_(i))) v = std::max(v, ax(i) - upper_(i));
    }
  }
  return v;
}

bool FeasibleRegion::is_feasible(const Vector& x, double tol) const {
  return max_violation(x) <= tol;
}

// Least-distance QP in reduced coordinates: min ||xt - zt|| over
// lo <= B xt <= up, where B = Ai W, lo = lower - Ai xref, up = upper - Ai xref
// and zt = W^T (z - xref). Primal active-set iteration starting from a
// feasible point. Working set entries are signed 1-based row indices.
Vector FeasibleRegion::project(const Vector& z) const {
  std::vector<int> scratch;
  return project(z, &scratch);
}

Vector FeasibleRegion::project(const Vector& z, std::vector<int>* warm) const {
  const int p = reduced_dim();
  const int mi = num_ineq();
  const Vector zt = W_.transpose() * (z - xref_);
  const Vector shift = mi > 0 ? Vector(Ai_ * xref_) : Vector(0);

  auto bound_of = [&](int signed_idx) -> double {
    const int i = std::abs(signed_idx) - 1;
    return (signed_idx > 0 ? upper_(i) : lower_(i)) - shift(i);
  };

  std::vector<int> ws;  // working set
  Vector xt = Vector::Zero(p);

  // Equality-constrained subproblem: projection of zt onto the affine set cut
  // out by the working-set rows.
  auto eq_solve = [&](const std::vector<int>& set, Vector* lambda) -> Vector {
    if (set.empty()) {
      if (lambda) lambda->resize(0);
      return zt;
    }
    const int q = static_cast<int>(set.size());
    Matrix Bw(q, p);
    Vector dw(q);
    for (int j = 0; j < q; ++j) {
      const int i = std::abs(set[j]) - 1;
      Bw.row(j) = B_.row(i);
      dw(j) = bound_of(set[j]);
    }
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(Bw * Bw.transpose());
    const Vector lam = cod.solve(dw - Bw * zt);
    if (lambda) *lambda = lam;
    return zt + Bw.transpose() * lam;
  };

  double lo_viol_tol = 1e-12;

  // Warm start: adopt the previous working set when its equality solution is
  // feasible, otherwise fall back to the reference point.
  if (warm && !warm->empty()) {
    bool valid = true;
    for (int s : *warm) {
      const int i = std::abs(s) - 1;
      if (i < 0 || i >= mi || !std::isfinite(bound_of(s))) {
        valid = false;
        break;
      }
    }
    if (valid) {
      const Vector cand = eq_solve(*warm, nullptr);
      bool feas = true;
      if (mi > 0) {
        const Vector bx = B_ * cand;
        for (int i = 0; i < mi && feas; ++i) {
          if (std::isfinite(lower_(i)) && bx(i) < lower_(i) - shift(i) - 1e-10)
            feas = false;
          if (std::isfinite(upper_(i)) && bx(i) > upper_(i) - shift(i) + 1e-10)
            feas = false;
        }
      }
      if (feas) {
        ws = *warm;
        xt = cand;
      }
    }
  }

  const int cap = 10 * (num_eq() + mi) + 20;
  const double scale = 1.0 + zt.norm();
  for (int iter = 0; iter < cap; ++iter) {
    Vector lambda;
    const Vector target = eq_solve(ws, &lambda);
    const Vector step = target - xt;

    if (step.norm() > 1e-13 * scale) {
      // Ratio test against rows outside the working set.
      double t = 1.0;
      int block = 0;  // signed index of the blocking row
      const Vector bx = mi > 0 ? Vector(B_ * xt) : Vector(0);
      const Vector bs = mi > 0 ? Vector(B_ * step) : Vector(0);
      for (int i = 0; i < mi; ++i) {
        bool in_ws = false;
        for (int s : ws)
          if (std::abs(s) - 1 == i) in_ws = true;
        if (in_ws) continue;
        if (bs(i) > 1e-14 && std::isfinite(upper_(i))) {
          const double ti = (upper_(i) - shift(i) - bx(i)) / bs(i);
          if (ti < t) {
            t = std::max(ti, 0.0);
            block = i + 1;
          }
        } else if (bs(i) < -1e-14 && std::isfinite(lower_(i))) {
          const double ti = (lower_(i) - shift(i) - bx(i)) / bs(i);
          if (ti < t) {
            t = std::max(ti, 0.0);
            block = -(i + 1);
          }
        }
      }
      xt += t * step;
      if (block != 0 && t < 1.0) {
        ws.push_back(block);
        continue;
      }
    }

    // At the working-set minimizer: check multiplier signs. Stationarity
    // gives xt - zt = Bw^T lambda; the inequality multiplier is -lambda for
    // upper-bound rows and +lambda for lower-bound rows, and must be >= 0.
    if (ws.empty()) {
      if (warm) warm->clear();
      return xref_ + W_ * xt;
    }
    Vector lam2;
    eq_solve(ws, &lam2);
    int worst = -1;
    double worst_val = lo_viol_tol;
    for (int j = 0; j < lam2.size(); ++j) {
      const double neg_mu = ws[j] > 0 ? lam2(j) : -lam2(j);
      if (neg_mu > worst_val) {
        worst_val = neg_mu;
        worst = j;
      }
    }
    if (worst < 0) {
      if (warm) *warm = ws;
      return xref_ + W_ * xt;
    }
    ws.erase(ws.begin() + worst);
  }

  throw ProjectionError("project: active-set iteration cap exceeded",
                        xref_ + W_ * xt);
}

ActiveSet FeasibleRegion::approx_active_sets(const Vector& x,
                                             double xi) const {
  if (xi <= 0.0) throw std::invalid_argument("approx_active_sets: xi <= 0");
  if (max_violation(x) > kFeasTol)
    throw std::invalid_argument("approx_active_sets: x is infeasible");
  ActiveSet out;
  out.xi = xi;
  if (num_ineq() == 0) return out;
  const Vector xt = W_.transpose() * (x - xref_);
  const Vector val = Ai_ * xref_ + B_ * xt;
  for (int i = 0; i < num_ineq(); ++i) {
    const double thresh = xi * row_norms_(i) + 1e-12;
    if (std::isfinite(upper_(i)) && std::abs(upper_(i) - val(i)) <= thresh)
      out.upper.push_back(i);
    if (std::isfinite(lower_(i)) && std::abs(lower_(i) - val(i)) <= thresh)
      out.lower.push_back(i);
  }
  return out;
}

std::vector<Vector> FeasibleRegion::normal_cone_generators(
    const ActiveSet& active) const {
  std::vector<Vector> out;
  out.reserve(active.upper.size() + active.lower.size());
  for (int i : active.upper) out.push_back(B_.row(i).transpose());
  for (int i : active.lower) out.push_back(-B_.row(i).transpose());
  return out;
}

namespace {

// Incremental double description on the pointed cone {v : M v <= 0} in R^r,
// rank(M) = r. Rays are kept unit-norm; `tight` records which processed rows
// are active at each ray for the rank-based adjacency test.
struct Ray {
  Vector v;
  std::vector<int> tight;
};

std::vector<int> tight_rows(const Matrix& M, const std::vector<int>& processed,
                            const Vector& v, double tol) {
  std::vector<int> out;
  for (int j : processed)
    if (std::abs(M.row(j).dot(v)) <= tol) out.push_back(j);
  return out;
}

bool adjacent(const Matrix& M, const Ray& a, const Ray& b, int r) {
  std::vector<int> common;
  std::set_intersection(a.tight.begin(), a.tight.end(), b.tight.begin(),
                        b.tight.end(), std::back_inserter(common));
  if (static_cast<int>(common.size()) < r - 2) return false;
  if (r <= 2) return true;
  Matrix sub(common.size(), M.cols());
  for (size_t j = 0; j < common.size(); ++j) sub.row(j) = M.row(common[j]);
  Eigen::ColPivHouseholderQR<Matrix> qr(sub);
  qr.setThreshold(1e-10);
  return qr.rank() == r - 2;
}

std::vector<Vector> pointed_rays(const Matrix& M) {
  const int r = static_cast<int>(M.cols());
  const int rows = static_cast<int>(M.rows());
  constexpr double tol = 1e-10;

  // Seed with r linearly independent rows; the simplicial cone they cut out
  // has rays u_k with m_{b_j}^T u_k = -delta_{jk}.
  Eigen::ColPivHouseholderQR<Matrix> qr(M.transpose());
  qr.setThreshold(1e-10);
  if (qr.rank() != r) return {};  // callers ensure rank == r
  std::vector<int> base(qr.colsPermutation().indices().data(),
                        qr.colsPermutation().indices().data() + r);
  Matrix Mb(r, r);
  for (int j = 0; j < r; ++j) Mb.row(j) = M.row(base[j]);
  const Matrix rays0 = -Mb.inverse();

  std::vector<int> processed(base.begin(), base.end());
  std::sort(processed.begin(), processed.end());
  std::vector<Ray> rays;
  for (int k = 0; k < r; ++k) {
    Ray ray;
    ray.v = rays0.col(k).normalized();
    ray.tight = tight_rows(M, processed, ray.v, tol);
    rays.push_back(std::move(ray));
  }

  for (int j = 0; j < rows; ++j) {
    if (std::find(processed.begin(), processed.end(), j) != processed.end())
      continue;
    std::vector<Ray> pos, neg, zero;
    for (auto& ray : rays) {
      const double val = M.row(j).dot(ray.v);
      if (val > tol)
        pos.push_back(ray);
      else if (val < -tol)
        neg.push_back(ray);
      else
        zero.push_back(ray);
    }
    processed.push_back(j);
    std::sort(processed.begin(), processed.end());
    std::vector<Ray> next = neg;
    for (auto& ray : zero) next.push_back(ray);
    for (const auto& rp : pos) {
      if (r < 2) break;  // no nonzero ray lives on a hyperplane of R^1
      for (const auto& rn : neg) {
        if (!adjacent(M, rp, rn, r)) continue;
        const double vp = M.row(j).dot(rp.v);
        const double vn = M.row(j).dot(rn.v);
        const Vector combo = vp * rn.v - vn * rp.v;
        if (combo.norm() < 1e-12) continue;
        Ray fresh;
        fresh.v = combo.normalized();
        fresh.tight = tight_rows(M, processed, fresh.v, tol);
        // Dedupe against rays already kept.
        bool dup = false;
        for (const auto& kept : next)
          if ((kept.v - fresh.v).norm() < 1e-9) dup = true;
        if (!dup) next.push_back(std::move(fresh));
      }
    }
    // Refresh tight sets of survivors with the new row included.
    for (auto& ray : next) ray.tight = tight_rows(M, processed, ray.v, tol);
    rays = std::move(next);
    if (rays.empty()) break;
  }

  std::vector<Vector> out;
  out.reserve(rays.size());
  for (auto& ray : rays) out.push_back(std::move(ray.v));
  return out;
}

}  // namespace

ConeGenerators tangent_cone_generators(const std::vector<Vector>& normals,
                                       int dim) {
  ConeGenerators out;
  for (const auto& w : normals) {
    if (static_cast<int>(w.size()) != dim)
      throw std::invalid_argument("tangent_cone_generators: dimension mismatch");
    if (w.norm() <= 1e-14)
      throw std::invalid_argument(
          "tangent_cone_generators: zero vector among normals");
  }
  if (normals.empty()) {
    for (int i = 0; i < dim; ++i) {
      Vector e = Vector::Zero(dim);
      e(i) = 1.0;
      out.lineality.push_back(std::move(e));
    }
    return out;
  }

  Matrix N(dim, static_cast<int>(normals.size()));
  for (size_t j = 0; j < normals.size(); ++j) N.col(j) = normals[j];
  Eigen::JacobiSVD<Matrix> svd(N, Eigen::ComputeFullU);
  const double smax = svd.singularValues()(0);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-12 * std::max(1.0, smax)) ++rank;

  // Lineality of the polar = orthogonal complement of span(normals).
  for (int i = rank; i < dim; ++i)
    out.lineality.push_back(svd.matrixU().col(i));

  // Pointed part: polar within span(normals), in span coordinates.
  const Matrix Vs = svd.matrixU().leftCols(rank);
  Matrix M(static_cast<int>(normals.size()), rank);
  for (size_t j = 0; j < normals.size(); ++j)
    M.row(j) = (Vs.transpose() * normals[j]).transpose();
  for (const Vector& ray : pointed_rays(M))
    out.pointed.push_back((Vs * ray).normalized());
  return out;
}

std::vector<Vector> sample_polling_directions(const ConeGenerators& cone,
                                              double count_fraction,
                                              std::mt19937_64& rng) {
  if (count_fraction <= 0.0 || count_fraction > 1.0)
    throw std::invalid_argument("sample_polling_directions: fraction not in (0,1]");
  std::vector<Vector> out;
  if (!cone.lineality.empty()) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector v = Vector::Zero(cone.lineality.front().size());
    double norm = 0.0;
    while (norm <= 1e-14) {
      v.setZero();
      for (const auto& basis : cone.lineality) v += gauss(rng) * basis;
      norm = v.norm();
    }
    v /= norm;
    out.push_back(v);
    out.push_back(-v);
  }
  if (!cone.pointed.empty()) {
    const int total = static_cast<int>(cone.pointed.size());
    const int take =
        static_cast<int>(std::ceil(count_fraction * total - 1e-12));
    std::vector<int> idx(total);
    for (int i = 0; i < total; ++i) idx[i] = i;
    for (int i = 0; i < take; ++i) {
      std::uniform_int_distribution<int> pick(i, total - 1);
      std::swap(idx[i], idx[pick(rng)]);
      out.push_back(cone.pointed[idx[i]]);
    }
  }
  return out;
}

namespace {

double parse_token(const std::string& tok, int line_no) {
  if (tok == "inf" || tok == "+inf")
    return std::numeric_limits<double>::infinity();
  if (tok == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("region parse error at line " +
                                std::to_string(line_no) + ": bad token '" +
                                tok + "'");
  }
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  Vector row(int count, const std::string& what) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      std::istringstream ss(line);
      std::vector<double> vals;
      std::string tok;
      while (ss >> tok) {
        if (tok[0] == '#') break;
        vals.push_back(parse_token(tok, line_no_));
      }
      if (vals.empty()) continue;  // blank / comment line
      if (static_cast<int>(vals.size()) != count)
        throw std::invalid_argument(
            "region parse error at line " + std::to_string(line_no_) + ": " +
            what + " expects " + std::to_string(count) + " values, got " +
            std::to_string(vals.size()));
      return Eigen::Map<Vector>(vals.data(), count);
    }
    throw std::invalid_argument("region parse error: unexpected end of input while reading " +
                                what);
  }

  int line_no() const { return line_no_; }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

}  // namespace

FeasibleRegion read_region(std::istream& in) {
  LineReader reader(in);
  const Vector header = reader.row(3, "header n m m_I");
  const int n = static_cast<int>(header(0));
  const int m = static_cast<int>(header(1));
  const int mi = static_cast<int>(header(2));
  if (n <= 0 || m < 0 || mi < 0 || m >= n)
    throw std::invalid_argument("region parse error at line " +
                                std::to_string(reader.line_no()) +
                                ": invalid dimensions");
  Matrix A(m, n);
  for (int i = 0; i < m; ++i) A.row(i) = reader.row(n, "row of A").transpose();
  Vector b = m > 0 ? reader.row(m, "b") : Vector(0);
  Matrix Ai(mi, n);
  for (int i = 0; i < mi; ++i)
    Ai.row(i) = reader.row(n, "row of A_I").transpose();
  Vector lower = mi > 0 ? reader.row(mi, "lower bounds") : Vector(0);
  Vector upper = mi > 0 ? reader.row(mi, "upper bounds") : Vector(0);
  Vector xref = reader.row(n, "reference point");
  return FeasibleRegion(std::move(A), std::move(b), std::move(Ai),
                        std::move(lower), std::move(upper), std::move(xref));
}

namespace {

void write_value(std::ostream& out, double v) {
  if (std::isinf(v))
    out << (v > 0 ? "inf" : "-inf");
  else {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
  }
}

void write_vector(std::ostream& out, const Vector& v) {
  for (int i = 0; i < v.size(); ++i) {
    if (i) out << ' ';
    write_value(out, v(i));
  }
  out << '\n';
}

}  // namespace

void write_region(const FeasibleRegion& region, std::ostream& out) {
  out << region.dim() << ' ' << region.num_eq() << ' ' << region.num_ineq()
      << '\n';
  for (int i = 0; i < region.num_eq(); ++i)
    write_vector(out, region.eq_matrix().row(i).transpose());
  if (region.num_eq() > 0) write_vector(out, region.eq_rhs());
  for (int i = 0; i < region.num_ineq(); ++i)
    write_vector(out, region.ineq_matrix().row(i).transpose());
  if (region.num_ineq() > 0) {
    write_vector(out, region.lower());
    write_vector(out, region.upper());
  }
  write_vector(out, region.reference_point());
}

}  // namespace fle
