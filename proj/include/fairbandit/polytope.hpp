#ifndef FAIRBANDIT_POLYTOPE_HPP
#define FAIRBANDIT_POLYTOPE_HPP

#include "fairbandit/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace fairbandit {

/**
 * Bounded convex polytope {x : Ax <= b} with nonempty interior.
 *
 * Construction validates boundedness (the recession cone {d : Ad <= 0} is
 * trivial) and full dimensionality (the vertices affinely span R^d),
 * enumerates the vertices, and caches them together with the outer radius
 * r = max ||vertex||. Vertex enumeration inspects every d-subset of
 * constraints and is sized for desk-scale instances (m up to ~30, d up to
 * ~6); `with_vertices` admits analytic constructions such as regular
 * polygons that would blow past that.
 */
class Polytope {
 public:
  // Validates, enumerates vertices. Throws std::invalid_argument when the
  // polytope is unbounded, empty, or has empty interior.
  Polytope(Matrix A, Vector b, double tol = 1e-9);

  // [-halfwidth, halfwidth]^d.
  static Polytope box(int dim, double halfwidth = 1.0);

  // Trusts the caller's vertex list (each vertex must satisfy the
  // constraints); skips exhaustive enumeration.
  static Polytope with_vertices(Matrix A, Vector b, std::vector<Vector> vertices,
                                double tol = 1e-9);

  // Text format: first line "m d", then m lines of d+1 reals (a row of A
  // followed by the b entry).
  static Polytope load(std::istream& in);
  static Polytope load_file(const std::string& path);
  void save(std::ostream& out) const;

  int dim() const { return static_cast<int>(A_.cols()); }
  int num_constraints() const { return static_cast<int>(A_.rows()); }
  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  const std::vector<Vector>& vertices() const { return vertices_; }

  // max ||vertex||_2
  double radius() const { return radius_; }

  // Vertex centroid; strictly interior for a full-dimensional polytope.
  const Vector& interior_point() const { return interior_; }

  bool contains(const Vector& x, double tol = 1e-9) const;

 private:
  Polytope() = default;
  void finish(double tol);  // radius, interior point, dimensionality check

  Matrix A_;
  Vector b_;
  std::vector<Vector> vertices_;
  Vector interior_;
  double radius_ = 0.0;
};

// Feasible basic solutions of Ax <= b: solutions of each invertible d-subset
// of constraints that satisfy all rows within tol, deduplicated within tol
// and sorted lexicographically.
std::vector<Vector> enumerate_vertices(const Matrix& A, const Vector& b,
                                       double tol = 1e-9);

// Exact uniform sample by rejection from the vertex bounding box. Throws
// when the acceptance rate falls below 1e-6 (one million consecutive
// rejections); such shapes need hit_and_run.
Vector sample_uniform(const Polytope& p, Rng& rng);

// Hit-and-run walk: from a strictly interior start, repeatedly pick a
// uniform direction and a uniform point on the feasible chord through it.
// Returns the point after `steps` moves (steps >= 1).
Vector hit_and_run(const Polytope& p, const Vector& start, int steps, Rng& rng);

struct LambdaEstimate {
  double value = 0.0;      // smallest eigenvalue of the sampled second moment
  double std_error = 0.0;  // delta-method standard error along the minimal eigenvector
};

// Monte-Carlo estimate of lambda_min(E[x x^T]) under the uniform
// distribution on p. Requires n_samples >= 10000.
LambdaEstimate lambda_uniform(const Polytope& p, int n_samples, Rng& rng);

}  // namespace fairbandit

#endif
