#ifndef FAIRBANDIT_ESTIMATOR_HPP
#define FAIRBANDIT_ESTIMATOR_HPP

#include "fairbandit/types.hpp"

namespace fairbandit {

/**
 * What to do with a context whose Euclidean norm exceeds 1 when it is folded
 * into a design. The confidence-width guarantee assumes unit-ball contexts;
 * `strict` rejects offenders, `clip` rescales them onto the unit sphere, and
 * `none` accepts them unchanged (for baselines that do not rely on the
 * guarantee).
 */
enum class NormPolicy { strict, clip, none };

struct ConfidenceInterval {
  double center = 0.0;
  double halfwidth = 0.0;

  double lower() const { return center - halfwidth; }
  double upper() const { return center + halfwidth; }
};

/**
 * Ridge-regression design state over d-dimensional contexts.
 *
 * Maintains the regularized Gram matrix V = gamma*I + sum_i x_i x_i^T and the
 * moment vector sum_i y_i x_i. The point estimate solves V b = moment; the
 * confidence halfwidth around b.x is
 *
 *   ||x||_{V^-1} * (R * sqrt(2 d ln((1 + t/gamma)/delta)) + sqrt(gamma)),
 *
 * which holds for all rounds simultaneously with probability 1 - delta when
 * noise is R-sub-Gaussian, ||x|| <= 1 and ||beta|| <= 1.
 *
 * Solves are recomputed from the Gram matrix on demand; IncrementalInverse
 * offers the rank-one-update route behind the same quantities.
 */
class DesignState {
 public:
  // Requires dim >= 1 and regularizer >= 1 (the width formula's sqrt(gamma)
  // term assumes gamma >= 1).
  DesignState(int dim, double regularizer);

  // Absorbs one observation (x, y). Norm handling per `policy`; `strict`
  // tolerates norms up to 1 + 1e-9.
  void update(const Vector& x, double y, NormPolicy policy = NormPolicy::strict);

  // Ridge estimate; the zero vector before any observation.
  Vector estimate() const;

  // Confidence halfwidth at x for failure probability delta in (0, 1].
  // noise_scale is the sub-Gaussian parameter R of the observation noise.
  double confidence_width(const Vector& x, double delta, double noise_scale = 1.0) const;

  ConfidenceInterval interval(const Vector& x, double delta, double noise_scale = 1.0) const;

  int dim() const { return dim_; }
  double regularizer() const { return gamma_; }
  long count() const { return count_; }
  const Matrix& gram() const { return gram_; }
  const Vector& moment() const { return moment_; }

 private:
  int dim_;
  double gamma_;
  Matrix gram_;
  Vector moment_;
  long count_ = 0;
};

/**
 * Inverse of gamma*I + sum_i x_i x_i^T maintained by Sherman-Morrison
 * rank-one updates. Matches full re-inversion to ~1e-8 over simulation-length
 * observation sequences; use it when a hot loop needs many quadratic forms
 * per round without refactorizing.
 */
class IncrementalInverse {
 public:
  IncrementalInverse(int dim, double regularizer);

  void update(const Vector& x);

  // x^T M^-1 x
  double quad_form(const Vector& x) const;

  const Matrix& inverse() const { return inverse_; }

 private:
  Matrix inverse_;
};

}  // namespace fairbandit

#endif
