#include "fairbandit/fairgap.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fairbandit {

namespace {

bool lex_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

double delta_at(long t, const FairGapParams& params) {
  return std::min(params.delta,
                  std::pow(static_cast<double>(t), -(1.0 + params.decay_exponent)));
}

double kappa_at(const Polytope& p, long t, const FairGapParams& params) {
  double r = p.radius();
  double r_factor =
      params.kappa_form == KappaForm::radius_squared ? r * r : r;
  double log_term = std::log(2.0 * p.dim() * static_cast<double>(t) / delta_at(t, params));
  return 1.0 - std::sqrt(2.0 * r_factor * log_term /
                         (static_cast<double>(t) * params.lambda));
}

void check_params(const FairGapParams& params) {
  if (!(params.delta > 0.0 && params.delta <= 1.0))
    throw std::invalid_argument("fairgap: delta must be in (0, 1]");
  if (!(params.lambda > 0.0))
    throw std::invalid_argument("fairgap: lambda must be positive");
  if (!(params.decay_exponent > 0.0))
    throw std::invalid_argument("fairgap: decay exponent must be positive");
  if (params.epsilon < 0.0)
    throw std::invalid_argument("fairgap: epsilon must be nonnegative");
}

int effective_burn_in(const Polytope& p, const FairGapParams& params) {
  if (params.burn_in > 0) return params.burn_in;
  int d = p.dim();
  return 1000 * d * d * d;
}

Vector draw_uniform(const Polytope& p, const FairGapParams& params, Rng& rng) {
  if (params.epsilon > 0.0)
    return hit_and_run(p, p.interior_point(), effective_burn_in(p, params), rng);
  return sample_uniform(p, rng);
}

}  // namespace

std::pair<Vector, Vector> top_two(const std::vector<Vector>& vertices,
                                  const Vector& direction) {
  if (vertices.size() < 2)
    throw std::invalid_argument("top_two: need at least two vertices");
  // Vertex lists come lexicographically sorted, but re-deriving the order
  // keeps the tie-break independent of the input arrangement.
  int best = 0, second = -1;
  for (int i = 1; i < static_cast<int>(vertices.size()); ++i) {
    double vi = direction.dot(vertices[i]);
    double vb = direction.dot(vertices[best]);
    bool better = vi > vb || (vi == vb && lex_less(vertices[i], vertices[best]));
    if (better) {
      second = best;
      best = i;
    } else if (second < 0 || vi > direction.dot(vertices[second]) ||
               (vi == direction.dot(vertices[second]) &&
                lex_less(vertices[i], vertices[second]))) {
      second = i;
    }
  }
  return {vertices[best], vertices[second]};
}

double gap(const Polytope& p, const Vector& beta) {
  auto [first, second] = top_two(p.vertices(), beta);
  return beta.dot(first) - beta.dot(second);
}

GapInstance make_gap_instance(Polytope polytope, Vector beta, double lambda,
                              double noise_scale) {
  double instance_gap = gap(polytope, beta);
  return GapInstance{std::move(polytope), std::move(beta), instance_gap, lambda,
                     noise_scale};
}

double fairgap_width(const Polytope& p, long t, const FairGapParams& params) {
  double kappa = kappa_at(p, t, params);
  if (kappa <= 0.0) return std::numeric_limits<double>::infinity();
  double r = p.radius();
  double log_term = std::log(2.0 * static_cast<double>(t) / delta_at(t, params));
  return r * r * params.noise_scale * std::sqrt(2.0 * log_term) /
         (kappa * params.lambda * std::sqrt(static_cast<double>(t)));
}

FairGapRound fairgap_round(DesignState& state, const Polytope& p, long t,
                           const FairGapParams& params,
                           const std::function<double(const Vector&)>& observe,
                           Rng& rng) {
  check_params(params);
  if (t < 1) throw std::invalid_argument("fairgap_round: t must be >= 1");
  if (state.dim() != p.dim())
    throw std::invalid_argument("fairgap_round: state/polytope dimension mismatch");

  FairGapRound round;
  double r = p.radius();
  double warmup = params.exploration_threshold * r * r *
                  std::log(2.0 * p.dim() * static_cast<double>(t) / params.delta) /
                  params.lambda;
  bool explore = warmup >= static_cast<double>(t);

  if (!explore) {
    double width = fairgap_width(p, t, params);  // infinite when kappa_t <= 0
    Vector beta_hat = state.estimate();
    auto [first, second] = top_two(p.vertices(), beta_hat);
    round.top_value = beta_hat.dot(first);
    round.second_value = beta_hat.dot(second);
    round.width = width;
    if (round.top_value - round.second_value > 2.0 * width) {
      // Intervals of width w around the two leading estimates are disjoint:
      // play the leader outright, consume no feedback.
      round.action = first;
      round.deterministic = true;
      return round;
    }
  }

  round.action = draw_uniform(p, params, rng);
  round.deterministic = false;
  state.update(round.action, observe(round.action), NormPolicy::none);
  return round;
}

FairGapRound approx_fairgap_round(DesignState& state, const Polytope& p, long t,
                                  const FairGapParams& params,
                                  const std::function<double(const Vector&)>& observe,
                                  Rng& rng) {
  if (params.epsilon == 0.0) return fairgap_round(state, p, t, params, observe, rng);
  // Half the failure budget pays for the sampling inaccuracy.
  FairGapParams halved = params;
  halved.delta = params.delta / 2.0;
  return fairgap_round(state, p, t, halved, observe, rng);
}

double approx_sampling_accuracy(double epsilon, double delta, long horizon) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("approx_sampling_accuracy: epsilon must be positive");
  if (horizon < 1)
    throw std::invalid_argument("approx_sampling_accuracy: horizon must be >= 1");
  double T = static_cast<double>(horizon);
  return std::min(epsilon / T, delta / (2.0 * T * T));
}

double fairgap_separation_bound(const Polytope& p, double instance_gap,
                                long horizon, const FairGapParams& params) {
  if (!(instance_gap > 0.0))
    throw std::invalid_argument("fairgap_separation_bound: gap must be positive");
  double r = p.radius();
  double kappa = kappa_at(p, horizon, params);
  if (kappa <= 0.0) return std::numeric_limits<double>::infinity();
  double log_term = std::log(2.0 * static_cast<double>(horizon) / params.delta);
  double num = 8.0 * std::pow(r, 4) * params.noise_scale * params.noise_scale * log_term;
  double den = kappa * kappa * params.lambda * params.lambda * instance_gap * instance_gap;
  return num / den;
}

}  // namespace fairbandit
