#ifndef FLE_GEOMETRY_HPP
#define FLE_GEOMETRY_HPP

#include <Eigen/Dense>
#include <iosfwd>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace fle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thrown when the least-distance QP inside project() hits its iteration cap.
/// Carries the best feasible point found so far.
class ProjectionError : public std::runtime_error {
 public:
  ProjectionError(const std::string& what, Vector best_feasible)
      : std::runtime_error(what), best_feasible_(std::move(best_feasible)) {}
  const Vector& best_feasible() const { return best_feasible_; }

 private:
  Vector best_feasible_;
};

/// Indices of inequality rows within xi * ||row norm|| of their upper/lower
/// bound at some feasible point.
struct ActiveSet {
  std::vector<int> upper;
  std::vector<int> lower;
  double xi = 0.0;

  bool empty() const { return upper.empty() && lower.empty(); }
};

/// Generators of an approximate tangent cone in reduced (n-m)-dimensional
/// coordinates, split into the lineality subspace (orthonormal basis) and the
/// pointed remainder (unit rays).
struct ConeGenerators {
  std::vector<Vector> lineality;
  std::vector<Vector> pointed;

  bool empty() const { return lineality.empty() && pointed.empty(); }
};

/// Orthonormal basis of the null space of A (n columns). Returns the n x n
/// identity when A has zero rows. Throws std::invalid_argument when A is
/// rank-deficient, naming the deficient rank.
Matrix null_space_basis(const Matrix& A, int n);

/// The polyhedron { x : Ax = b, lower <= Ai x <= upper }, with a cached
/// orthonormal null-space basis W of A and a feasible reference point xref.
/// Immutable after construction.
class FeasibleRegion {
 public:
  FeasibleRegion(Matrix A, Vector b, Matrix Ai, Vector lower, Vector upper,
                 Vector xref);

  /// Region with only inequality constraints (m = 0).
  FeasibleRegion(Matrix Ai, Vector lower, Vector upper, Vector xref);

  int dim() const { return n_; }
  int reduced_dim() const { return n_ - static_cast<int>(A_.rows()); }
  int num_eq() const { return static_cast<int>(A_.rows()); }
  int num_ineq() const { return static_cast<int>(Ai_.rows()); }

  const Matrix& eq_matrix() const { return A_; }
  const Vector& eq_rhs() const { return b_; }
  const Matrix& ineq_matrix() const { return Ai_; }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  const Matrix& null_basis() const { return W_; }
  const Vector& reference_point() const { return xref_; }

  /// Ai * W, cached; the inequality rows seen in reduced coordinates.
  const Matrix& reduced_ineq() const { return B_; }
  /// Euclidean norms of the rows of Ai * W.
  const Vector& reduced_row_norms() const { return row_norms_; }

  /// Largest constraint violation at x (0 when feasible).
  double max_violation(const Vector& x) const;
  bool is_feasible(const Vector& x, double tol = 1e-10) const;

  /// Euclidean projection of z onto the region, via a primal active-set
  /// least-distance QP in reduced coordinates. `warm` (optional) carries the
  /// signed working set between calls: entries +(i+1) for row i at its upper
  /// bound, -(i+1) at its lower bound.
  Vector project(const Vector& z) const;
  Vector project(const Vector& z, std::vector<int>* warm) const;

  /// Approximately active inequality constraints at feasible x for step xi.
  /// Throws std::invalid_argument when x is infeasible beyond 1e-10.
  ActiveSet approx_active_sets(const Vector& x, double xi) const;

  /// Generators of the approximate normal cone N(x, xi) in reduced
  /// coordinates: W^T Ai^T e_i for active upper rows, negated for lower.
  std::vector<Vector> normal_cone_generators(const ActiveSet& active) const;

 private:
  void validate() const;

  int n_;
  Matrix A_;
  Vector b_;
  Matrix Ai_;
  Vector lower_, upper_;
  Vector xref_;
  Matrix W_;
  Matrix B_;          // Ai * W
  Vector row_norms_;  // ||B row i||
};

/// Polar of cone(normals) as lineality basis plus pointed unit rays, computed
/// by splitting off the orthogonal complement of span(normals) and running an
/// incremental double description pass on the pointed part. `dim` is the
/// reduced dimension n-m. Throws std::invalid_argument on a zero normal.
ConeGenerators tangent_cone_generators(const std::vector<Vector>& normals,
                                       int dim);

/// Random polling set: {v, -v} for v uniform on the lineality unit sphere
/// (when the lineality is nonempty) plus ceil(count_fraction * #pointed)
/// pointed generators sampled without replacement. Empty cone yields an
/// empty list.
std::vector<Vector> sample_polling_directions(const ConeGenerators& cone,
                                              double count_fraction,
                                              std::mt19937_64& rng);

/// Plain-text region format: header "n m m_I", dense rows of A, then b, rows
/// of Ai, lower, upper (tokens inf/-inf permitted), then xref. Errors carry
/// 1-based line numbers.
FeasibleRegion read_region(std::istream& in);
void write_region(const FeasibleRegion& region, std::ostream& out);

}  // namespace fle

#endif  // FLE_GEOMETRY_HPP
