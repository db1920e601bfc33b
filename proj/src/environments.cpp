#include "fairbandit/environments.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fairbandit {

double NoiseModel::sub_gaussian_parameter() const {
  switch (kind) {
    case NoiseKind::none: return 0.0;
    case NoiseKind::gaussian: return scale;
    case NoiseKind::uniform: return std::sqrt(1.0 / 3.0);
  }
  return scale;
}

double observe_reward(const LinearEnvironment& env, const Vector& x, Rng& rng) {
  double mean = env.beta.dot(x);
  switch (env.noise.kind) {
    case NoiseKind::none:
      return mean;
    case NoiseKind::gaussian: {
      std::normal_distribution<double> gauss(0.0, env.noise.scale);
      return mean + gauss(rng);
    }
    case NoiseKind::uniform: {
      std::uniform_real_distribution<double> unif(-1.0, 1.0);
      return mean + unif(rng);
    }
  }
  return mean;
}

std::vector<Vector> gen_contexts_uniform(int k, int d, Rng& rng) {
  if (k < 1 || d < 1)
    throw std::invalid_argument("gen_contexts_uniform: k and d must be >= 1");
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<Vector> contexts(k, Vector(d));
  for (Vector& x : contexts) {
    for (int i = 0; i < d; ++i) x[i] = unif(rng);
  }
  return contexts;
}

std::vector<Vector> gen_contexts_unit(int k, int d, Rng& rng) {
  std::vector<Vector> contexts = gen_contexts_uniform(k, d, rng);
  double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (Vector& x : contexts) x *= scale;
  return contexts;
}

Vector sample_unit_ball(int d, Rng& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Vector x(d);
  do {
    for (int i = 0; i < d; ++i) x[i] = unif(rng);
  } while (x.squaredNorm() > 1.0);
  return x;
}

std::vector<TaggedContext> gen_disparity_contexts(int k, const PopulationModel& model,
                                                  Rng& rng) {
  if (!(model.p >= 0.0 && model.p <= 1.0))
    throw std::invalid_argument("gen_disparity_contexts: p must be in [0, 1]");
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<TaggedContext> contexts;
  contexts.reserve(k);
  for (int i = 0; i < k; ++i) {
    TaggedContext ctx;
    ctx.majority = coin(rng) < model.p;
    ctx.x = Vector(2);
    if (ctx.majority) {
      double v = unif(rng);
      ctx.x << v, v;
    } else {
      ctx.x << unif(rng), unif(rng);
    }
    contexts.push_back(std::move(ctx));
  }
  return contexts;
}

void posterior_update(PosteriorTracker& tracker, double x1, double x2, double y) {
  ++tracker.t;
  if (x2 == 0.0) return;
  double l = (y - x1 - 1.0) / x2;
  double u = (y - x1 + 1.0) / x2;
  if (l > u) std::swap(l, u);
  double lo = std::max(tracker.lo, l);
  double hi = std::min(tracker.hi, u);
  if (lo > hi)
    throw std::domain_error("posterior_update: inconsistent observation for the model");
  bool shrunk = lo > tracker.lo || hi < tracker.hi;
  tracker.lo = lo;
  tracker.hi = hi;
  if (shrunk && !tracker.first_shrink) tracker.first_shrink = tracker.t;
}

long run_posterior_trial(double eps, long max_rounds, Rng& rng) {
  if (!(eps > 0.0 && eps < 0.5))
    throw std::invalid_argument("run_posterior_trial: eps must be in (0, 0.5)");
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double beta2 = eps * unif(rng);
  PosteriorTracker tracker(eps);
  for (long t = 1; t <= max_rounds; ++t) {
    double x1 = unif(rng);
    double x2 = unif(rng);
    double y = x1 + beta2 * x2 + unif(rng);
    posterior_update(tracker, x1, x2, y);
    if (tracker.first_shrink) return *tracker.first_shrink;
  }
  return max_rounds;
}

Polytope regular_polygon(int n) {
  if (n < 3) throw std::invalid_argument("regular_polygon: need n >= 3");
  const double pi = std::numbers::pi;
  Matrix A(n, 2);
  Vector b = Vector::Constant(n, std::cos(pi / n));
  std::vector<Vector> vertices;
  vertices.reserve(n);
  for (int i = 0; i < n; ++i) {
    // Facet i joins vertices i and i+1; its outward normal bisects them.
    double facet_angle = 2.0 * pi * (i + 0.5) / n;
    A(i, 0) = std::cos(facet_angle);
    A(i, 1) = std::sin(facet_angle);
    double vertex_angle = 2.0 * pi * i / n;
    Vector v(2);
    v << std::cos(vertex_angle), std::sin(vertex_angle);
    vertices.push_back(std::move(v));
  }
  return Polytope::with_vertices(std::move(A), std::move(b), std::move(vertices));
}

double regular_polygon_lambda(int n) {
  if (n < 3) throw std::invalid_argument("regular_polygon_lambda: need n >= 3");
  return (2.0 + std::cos(2.0 * std::numbers::pi / n)) / 12.0;
}

GapInstance circle_instance(int n, const Vector& beta, double noise_scale) {
  if (beta.size() != 2)
    throw std::invalid_argument("circle_instance: beta must be 2-dimensional");
  return make_gap_instance(regular_polygon(n), beta, regular_polygon_lambda(n),
                           noise_scale);
}

}  // namespace fairbandit
