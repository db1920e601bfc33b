#ifndef FAIRBANDIT_ENVIRONMENTS_HPP
#define FAIRBANDIT_ENVIRONMENTS_HPP

#include "fairbandit/fairgap.hpp"
#include "fairbandit/types.hpp"

#include <optional>
#include <vector>

namespace fairbandit {

enum class NoiseKind { none, gaussian, uniform };

// Observation noise. Gaussian noise has standard deviation `scale` and
// sub-Gaussian parameter scale; Uniform[-1,1] noise ignores `scale` and has
// sub-Gaussian parameter sqrt(1/3).
struct NoiseModel {
  NoiseKind kind = NoiseKind::gaussian;
  double scale = 1.0;

  double sub_gaussian_parameter() const;
};

struct LinearEnvironment {
  Vector beta;
  NoiseModel noise;
};

// One noisy reward observation beta.x + eta.
double observe_reward(const LinearEnvironment& env, const Vector& x, Rng& rng);

// k contexts with iid Uniform[-1,1] entries.
std::vector<Vector> gen_contexts_uniform(int k, int d, Rng& rng);

// Same contexts scaled by 1/sqrt(d) so every norm is at most 1, as the
// fairness algorithm's width guarantee requires. Scaling preserves the
// ordering of true rewards.
std::vector<Vector> gen_contexts_unit(int k, int d, Rng& rng);

// Uniform draw with norm at most 1 (rejection from the cube), for parameter
// vectors satisfying ||beta|| <= 1.
Vector sample_unit_ball(int d, Rng& rng);

struct TaggedContext {
  Vector x;  // d = 2
  bool majority = false;
};

// Two-population model for disparate-mistreatment runs: with probability p
// an individual is from the majority, whose features are perfectly
// correlated ((x, x) with x ~ U[-1,1]); otherwise from the minority, whose
// features are iid U[-1,1]^2. Under beta = (1, 0) both populations have the
// same reward distribution.
struct PopulationModel {
  double p = 0.9;
};

std::vector<TaggedContext> gen_disparity_contexts(int k, const PopulationModel& model,
                                                  Rng& rng);

/**
 * Interval of parameter values consistent with rewards y = x1 + beta2*x2 +
 * eta, |eta| <= 1, starting from the prior support [-eps, eps]. Tracks the
 * first round S at which the interval strictly shrinks below the prior;
 * until then an observer who knows the prior has learned nothing that
 * distinguishes beta2 values.
 */
struct PosteriorTracker {
  double eps = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  long t = 0;                     // observations absorbed
  std::optional<long> first_shrink;  // S

  explicit PosteriorTracker(double eps_) : eps(eps_), lo(-eps_), hi(eps_) {}
};

// Absorbs one observation of a 2-d context. Contexts with x2 = 0 constrain
// nothing; otherwise the consistent set is [min(l, u), max(l, u)] with
// l = (y - x1 - 1)/x2 and u = (y - x1 + 1)/x2, intersected with the current
// interval. Never empties when the data truly come from the model.
void posterior_update(PosteriorTracker& tracker, double x1, double x2, double y);

// One simulated lower-bound trial: beta = (1, beta2) with beta2 ~ U[-eps,eps],
// contexts U[-1,1]^2, noise U[-1,1]. Returns S, or max_rounds if the interval
// never shrinks within the budget.
long run_posterior_trial(double eps, long max_rounds, Rng& rng);

// Regular n-gon inscribed in the unit circle, one vertex at angle 0.
// Supplies the vertices analytically. Requires n >= 3.
Polytope regular_polygon(int n);

// lambda_min of the uniform second moment on the regular n-gon:
// (2 + cos(2 pi / n)) / 12. (1/6 for the square, 1/4 in the disk limit.)
double regular_polygon_lambda(int n);

// Discretized unit-circle instance: n evenly spaced extremal directions.
// With beta aligned to a vertex the instance gap is ||beta||(1 - cos(2pi/n)),
// which vanishes quadratically in 1/n, so the gap-exploiting rule's
// separation horizon blows up while per-round fairness still holds.
GapInstance circle_instance(int n, const Vector& beta,
                            double noise_scale = 1.0);

}  // namespace fairbandit

#endif
