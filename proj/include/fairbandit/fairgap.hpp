#ifndef FAIRBANDIT_FAIRGAP_HPP
#define FAIRBANDIT_FAIRGAP_HPP

#include "fairbandit/estimator.hpp"
#include "fairbandit/polytope.hpp"
#include "fairbandit/types.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace fairbandit {

// Best and second-best vertices under the linear score `direction`; ties
// break toward the lexicographically smaller vertex. Requires >= 2 vertices.
std::pair<Vector, Vector> top_two(const std::vector<Vector>& vertices,
                                  const Vector& direction);

// Reward gap between the best and second-best extremal points under beta;
// exactly 0 when the maximum is attained by two or more vertices.
double gap(const Polytope& p, const Vector& beta);

// A polytope bandit instance: true parameter, its extremal reward gap, the
// uniform second-moment floor lambda, and the noise scale R.
struct GapInstance {
  Polytope polytope;
  Vector beta;
  double gap = 0.0;
  double lambda = 0.0;
  double noise_scale = 1.0;
};

// Bundles an instance, computing the gap from the vertices. lambda may come
// from a closed form or from lambda_uniform.
GapInstance make_gap_instance(Polytope polytope, Vector beta, double lambda,
                              double noise_scale);

enum class KappaForm {
  radius_squared,  // kappa_t = 1 - sqrt(2 r^2 ln(2 d t / delta_t) / (t lambda))
  radius_linear,   // kappa_t = 1 - sqrt(2 r   ln(2 d t / delta_t) / (t lambda))
};

/**
 * Parameters of the gap-exploiting fair rule. lambda is the smallest
 * eigenvalue of the uniform second moment E[x x^T] on the polytope and
 * noise_scale is the sub-Gaussian parameter R of the observation noise; both
 * are inputs of the procedure. epsilon > 0 switches uniform sampling to
 * hit-and-run (approximate fairness); epsilon = 0 keeps the exact sampler.
 */
struct FairGapParams {
  double delta = 0.05;
  double exploration_threshold = 2.0;  // C in: C r^2 ln(2dt/delta)/lambda >= t
  double decay_exponent = 1.0;         // c in delta_t = min(delta, 1/t^(1+c))
  int burn_in = -1;                    // hit-and-run steps; -1 = 1000 * d^3
  double epsilon = 0.0;
  double lambda = 0.0;
  double noise_scale = 1.0;
  KappaForm kappa_form = KappaForm::radius_squared;
};

struct FairGapRound {
  Vector action;
  bool deterministic = false;  // true only when the two top intervals separate
  // Diagnostics for re-checking the separation decision: estimated rewards of
  // the two leading vertices and the interval halfwidth at this round. Zero
  // on warm-up/exploration rounds before the width is defined.
  double top_value = 0.0;
  double second_value = 0.0;
  double width = 0.0;
};

/**
 * One round of the gap-exploiting rule at round number t (1-based).
 *
 * Warm-up (C r^2 ln(2dt/delta)/lambda >= t) and nonpositive kappa_t explore:
 * the action is a uniform draw from the polytope, observe(action) is folded
 * into `state`. Otherwise the rule compares the two leading vertices of the
 * current estimate; if their width-w_t intervals are disjoint the best
 * vertex is played deterministically and `state` is left untouched (no
 * feedback is consumed), else the round explores. With params.epsilon > 0
 * uniform draws come from hit-and-run with the configured burn-in.
 */
FairGapRound fairgap_round(DesignState& state, const Polytope& p, long t,
                           const FairGapParams& params,
                           const std::function<double(const Vector&)>& observe,
                           Rng& rng);

// Approximately-fair variant: requires params.epsilon > 0 and runs the same
// rule at failure probability delta/2 with hit-and-run sampling. epsilon = 0
// falls back to fairgap_round unchanged.
FairGapRound approx_fairgap_round(DesignState& state, const Polytope& p, long t,
                                  const FairGapParams& params,
                                  const std::function<double(const Vector&)>& observe,
                                  Rng& rng);

// Total-variation budget per round for the approximate variant over a
// horizon of T rounds: min(epsilon / T, delta / (2 T^2)).
double approx_sampling_accuracy(double epsilon, double delta, long horizon);

// Width of the per-round confidence interval on vertex rewards once past
// warm-up; decreasing in t for t >= 3.
double fairgap_width(const Polytope& p, long t, const FairGapParams& params);

// Separation horizon implied by the analysis: after
//   L = 8 r^4 R^2 ln(2T/delta) / (kappa^2 lambda^2 gap^2)
// exploration rounds the rule plays deterministically (kappa evaluated at T).
double fairgap_separation_bound(const Polytope& p, double instance_gap,
                                long horizon, const FairGapParams& params);

}  // namespace fairbandit

#endif
