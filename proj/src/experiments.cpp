#include "fairbandit/experiments.hpp"

#include "fairbandit/environments.hpp"
#include "fairbandit/fairgap.hpp"
#include "fairbandit/metrics.hpp"
#include "fairbandit/polytope.hpp"
#include "fairbandit/ridgefair.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fairbandit {

namespace {

using TrialSeries = std::map<std::string, std::vector<double>>;

NoiseModel noise_from(const ExperimentConfig& cfg) {
  NoiseKind kind = cfg.noise == "gaussian"  ? NoiseKind::gaussian
                   : cfg.noise == "uniform" ? NoiseKind::uniform
                                            : NoiseKind::none;
  return NoiseModel{kind, cfg.noise_scale};
}

std::vector<double> parse_list(const std::string& raw, const std::string& key) {
  std::vector<double> values;
  std::istringstream in(raw);
  std::string token;
  while (std::getline(in, token, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("config key " + key + ": not a number: \"" + token + "\"");
    }
    if (used != token.size())
      throw std::invalid_argument("config key " + key + ": bad entry \"" + token + "\"");
    values.push_back(v);
  }
  if (values.empty())
    throw std::invalid_argument("config key " + key + ": empty list");
  return values;
}

Vector parse_beta(const ExperimentConfig& cfg, int expected_dim) {
  std::vector<double> values = parse_list(cfg.beta, "beta");
  if (static_cast<int>(values.size()) != expected_dim)
    throw std::invalid_argument("config key beta: expected " +
                                std::to_string(expected_dim) + " entries");
  Vector beta(expected_dim);
  for (int i = 0; i < expected_dim; ++i) beta[i] = values[i];
  return beta;
}

Vector draw_noise(const NoiseModel& nm, int k, Rng& rng) {
  Vector eta = Vector::Zero(k);
  if (nm.kind == NoiseKind::gaussian) {
    std::normal_distribution<double> gauss(0.0, nm.scale);
    for (int i = 0; i < k; ++i) eta[i] = gauss(rng);
  } else if (nm.kind == NoiseKind::uniform) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int i = 0; i < k; ++i) eta[i] = unif(rng);
  }
  return eta;
}

Vector unit_sphere(int d, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(d);
  do {
    for (int i = 0; i < d; ++i) v[i] = gauss(rng);
  } while (v.norm() < 1e-12);
  return v / v.norm();
}

// ---------------------------------------------------------------------------
// ucb-mistreatment / fair-vs-ucb / disparity

TrialSeries ucb_mistreatment_trial(const ExperimentConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Vector beta(cfg.d);
  for (int i = 0; i < cfg.d; ++i) beta[i] = unif(rng);
  NoiseModel nm = noise_from(cfg);

  DesignState state(cfg.d, cfg.gamma);
  std::vector<double> cum(cfg.horizon);
  double total = 0.0;
  RoundRecord record;
  for (long t = 1; t <= cfg.horizon; ++t) {
    std::vector<Vector> contexts = gen_contexts_uniform(cfg.k, cfg.d, rng);
    std::vector<int> selected = ucb_baseline_round(state, contexts);
    Vector eta = draw_noise(nm, cfg.k, rng);
    record.t = t;
    record.selected = selected;
    record.contexts.assign(cfg.k, {});
    for (int i = 0; i < cfg.k; ++i)
      record.contexts[i].true_reward = beta.dot(contexts[i]);
    for (int j : selected)
      state.update(contexts[j], record.contexts[j].true_reward + eta[j],
                   NormPolicy::none);
    total += mistreatment_count(record);
    cum[t - 1] = total;
  }
  return {{"cum_mistreatment", std::move(cum)}};
}

TrialSeries fair_vs_ucb_trial(const ExperimentConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Vector beta(cfg.d);
  for (int i = 0; i < cfg.d; ++i) beta[i] = unif(rng);
  NoiseModel nm = noise_from(cfg);
  double scale = 1.0 / std::sqrt(static_cast<double>(cfg.d));
  RidgeFairVariant variant = RidgeFairVariant::at_most_k();

  DesignState ucb_state(cfg.d, cfg.gamma);
  DesignState fair_state(cfg.d, cfg.gamma);
  std::vector<double> ucb_cum(cfg.horizon), fair_cum(cfg.horizon);
  double ucb_total = 0.0, fair_total = 0.0;
  RoundRecord record;
  for (long t = 1; t <= cfg.horizon; ++t) {
    std::vector<Vector> contexts = gen_contexts_uniform(cfg.k, cfg.d, rng);
    Vector eta = draw_noise(nm, cfg.k, rng);
    std::vector<Vector> scaled = contexts;
    for (Vector& x : scaled) x *= scale;

    std::vector<int> ucb_selected = ucb_baseline_round(ucb_state, contexts);
    record.t = t;
    record.selected = ucb_selected;
    record.contexts.assign(cfg.k, {});
    for (int i = 0; i < cfg.k; ++i)
      record.contexts[i].true_reward = beta.dot(contexts[i]);
    for (int j : ucb_selected)
      ucb_state.update(contexts[j], record.contexts[j].true_reward + eta[j],
                       NormPolicy::none);
    ucb_total += mistreatment_count(record);
    ucb_cum[t - 1] = ucb_total;

    RidgeFairRound fair =
        ridgefair_round(fair_state, scaled, cfg.delta, variant, rng,
                        nm.sub_gaussian_parameter());
    record.selected = fair.selected;
    for (int i = 0; i < cfg.k; ++i)
      record.contexts[i].true_reward = beta.dot(scaled[i]);
    for (int j : fair.selected)
      fair_state.update(scaled[j], record.contexts[j].true_reward + eta[j]);
    fair_total += mistreatment_count(record);
    fair_cum[t - 1] = fair_total;
  }
  return {{"cum_mistreatment_ucb", std::move(ucb_cum)},
          {"cum_mistreatment_ridgefair", std::move(fair_cum)}};
}

TrialSeries disparity_trial(const ExperimentConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  Vector beta(2);
  beta << 1.0, 0.0;
  NoiseModel nm = noise_from(cfg);
  PopulationModel model{cfg.p};

  DesignState state(2, cfg.gamma);
  std::vector<double> mist_major(cfg.horizon), mist_minor(cfg.horizon);
  std::vector<double> present_major(cfg.horizon), present_minor(cfg.horizon);
  RoundRecord record;
  for (long t = 1; t <= cfg.horizon; ++t) {
    std::vector<TaggedContext> tagged = gen_disparity_contexts(cfg.k, model, rng);
    std::vector<Vector> contexts;
    contexts.reserve(cfg.k);
    for (const TaggedContext& c : tagged) contexts.push_back(c.x);
    std::vector<int> selected = ucb_baseline_round(state, contexts);
    Vector eta = draw_noise(nm, cfg.k, rng);
    record.t = t;
    record.selected = selected;
    record.contexts.assign(cfg.k, {});
    for (int i = 0; i < cfg.k; ++i) {
      record.contexts[i].true_reward = beta.dot(contexts[i]);
      record.contexts[i].population = tagged[i].majority ? 0 : 1;
    }
    for (int j : selected)
      state.update(contexts[j], record.contexts[j].true_reward + eta[j],
                   NormPolicy::none);

    RidgeFairVariant unused = RidgeFairVariant::at_most_k();
    TrialSummary step = summarize_trial(std::span(&record, 1), unused);
    mist_major[t - 1] = static_cast<double>(step.majority_mistreated);
    mist_minor[t - 1] = static_cast<double>(step.minority_mistreated);
    present_major[t - 1] = static_cast<double>(step.majority_present);
    present_minor[t - 1] = static_cast<double>(step.minority_present);
  }
  return {{"mistreated_majority", std::move(mist_major)},
          {"mistreated_minority", std::move(mist_minor)},
          {"present_majority", std::move(present_major)},
          {"present_minority", std::move(present_minor)}};
}

// ---------------------------------------------------------------------------
// ridgefair-regret

TrialSeries ridgefair_regret_trial(const ExperimentConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  Vector beta = unit_sphere(cfg.d, rng);
  NoiseModel nm = noise_from(cfg);
  RidgeFairVariant variant = RidgeFairVariant::exactly(cfg.m);

  DesignState state(cfg.d, cfg.gamma);
  std::vector<RoundRecord> records;
  records.reserve(cfg.horizon);
  for (long t = 1; t <= cfg.horizon; ++t) {
    std::vector<Vector> contexts = gen_contexts_unit(cfg.k, cfg.d, rng);
    RidgeFairRound round = ridgefair_round(state, contexts, cfg.delta, variant,
                                           rng, nm.sub_gaussian_parameter());
    Vector eta = draw_noise(nm, cfg.k, rng);
    RoundRecord record;
    record.t = t;
    record.selected = round.selected;
    record.contexts.assign(cfg.k, {});
    for (int i = 0; i < cfg.k; ++i) {
      record.contexts[i].true_reward = beta.dot(contexts[i]);
      record.contexts[i].marginal = marginal_probability(round.dist, i);
      record.contexts[i].lower = round.intervals[i].lower();
      record.contexts[i].upper = round.intervals[i].upper();
    }
    for (int j : round.selected)
      state.update(contexts[j], record.contexts[j].true_reward + eta[j]);
    records.push_back(std::move(record));
  }
  TrialSummary summary = summarize_trial(records, variant);
  return {{"cum_regret", std::move(summary.cum_regret)}};
}

// ---------------------------------------------------------------------------
// fairgap-regret / gap-sweep / circle-demo

struct GapRunStats {
  std::vector<double> cum_regret;
  long first_deterministic = -1;  // round index, -1 when never
  long deterministic_plays = 0;
  bool all_deterministic_optimal = true;
  double regret_after_first = 0.0;
};

GapRunStats run_gap_instance(const GapInstance& instance, const NoiseModel& nm,
                             const ExperimentConfig& cfg, double uniform_mean,
                             Rng& rng, bool keep_series) {
  const Polytope& p = instance.polytope;
  FairGapParams params;
  params.delta = cfg.delta;
  params.decay_exponent = cfg.decay_exponent;
  params.burn_in = cfg.burn_in;
  params.epsilon = cfg.fairness_epsilon;
  params.lambda = instance.lambda;
  params.noise_scale = nm.sub_gaussian_parameter();

  LinearEnvironment env{instance.beta, nm};
  DesignState state(p.dim(), cfg.gamma);
  auto observe = [&](const Vector& x) { return observe_reward(env, x, rng); };

  auto [x_star, x_second] = top_two(p.vertices(), instance.beta);
  double optimum = instance.beta.dot(x_star);

  GapRunStats stats;
  if (keep_series) stats.cum_regret.reserve(cfg.horizon);
  double total = 0.0;
  for (long t = 1; t <= cfg.horizon; ++t) {
    FairGapRound round =
        approx_fairgap_round(state, p, t, params, observe, rng);
    if (round.deterministic) {
      total += optimum - instance.beta.dot(round.action);
      ++stats.deterministic_plays;
      if (stats.first_deterministic < 0) stats.first_deterministic = t;
      if ((round.action - x_star).lpNorm<Eigen::Infinity>() > 1e-12)
        stats.all_deterministic_optimal = false;
    } else {
      total += optimum - uniform_mean;
    }
    if (keep_series) stats.cum_regret.push_back(total);
  }
  if (stats.first_deterministic > 0 && keep_series) {
    stats.regret_after_first =
        total - stats.cum_regret[stats.first_deterministic - 1];
  }
  if (!keep_series) stats.cum_regret.push_back(total);
  return stats;
}

// Instance shared by every trial of a run; built once so Monte-Carlo lambda
// estimates (file-loaded polytopes) are common to all trials.
struct GapSetup {
  GapInstance instance;
  double uniform_mean = 0.0;
};

GapSetup make_gap_setup(const ExperimentConfig& cfg, const Vector& beta) {
  double subg = noise_from(cfg).sub_gaussian_parameter();
  if (cfg.polytope_file.empty()) {
    // Uniform second moment of the box [-1,1]^d is I/3 and the uniform mean
    // reward vanishes by symmetry.
    return {make_gap_instance(Polytope::box(cfg.d), beta, 1.0 / 3.0, subg), 0.0};
  }
  Polytope p = Polytope::load_file(cfg.polytope_file);
  if (p.dim() != cfg.d)
    throw std::invalid_argument("config key polytope: dimension disagrees with d");
  Rng rng(derive_seed(cfg.seed, 0x706f6c79));  // fixed side stream
  LambdaEstimate lambda = lambda_uniform(p, 100000, rng);
  Vector mean = Vector::Zero(p.dim());
  for (int i = 0; i < 100000; ++i) mean += sample_uniform(p, rng);
  mean /= 100000.0;
  GapSetup setup{make_gap_instance(std::move(p), beta, lambda.value, subg),
                 beta.dot(mean)};
  return setup;
}

TrialSeries fairgap_regret_trial(const GapSetup& setup, const ExperimentConfig& cfg,
                                 std::uint64_t seed) {
  Rng rng(seed);
  GapRunStats stats = run_gap_instance(setup.instance, noise_from(cfg), cfg,
                                       setup.uniform_mean, rng, true);
  return {{"cum_regret", std::move(stats.cum_regret)},
          {"first_deterministic_round",
           {static_cast<double>(stats.first_deterministic)}},
          {"deterministic_plays", {static_cast<double>(stats.deterministic_plays)}},
          {"all_deterministic_optimal",
           {stats.all_deterministic_optimal ? 1.0 : 0.0}},
          {"regret_after_first_deterministic", {stats.regret_after_first}}};
}

TrialSeries gap_sweep_trial(const std::vector<GapSetup>& setups,
                            const std::vector<double>& gaps,
                            const ExperimentConfig& cfg, std::uint64_t seed) {
  TrialSeries series;
  for (std::size_t g = 0; g < setups.size(); ++g) {
    Rng rng(derive_seed(seed, g));
    GapRunStats stats = run_gap_instance(setups[g].instance, noise_from(cfg), cfg,
                                         setups[g].uniform_mean, rng, true);
    std::ostringstream name;
    name << "gap" << gaps[g];
    std::vector<double>& cum = series["cum_regret_" + name.str()];
    cum = std::move(stats.cum_regret);
    series["final_regret_" + name.str()] = {cum.empty() ? 0.0 : cum.back()};
  }
  return series;
}

TrialSeries circle_demo_trial(const GapSetup& circle, const GapSetup& box,
                              const ExperimentConfig& cfg, std::uint64_t seed) {
  Rng circle_rng(derive_seed(seed, 0));
  Rng box_rng(derive_seed(seed, 1));
  GapRunStats on_circle = run_gap_instance(circle.instance, noise_from(cfg), cfg,
                                           circle.uniform_mean, circle_rng, false);
  GapRunStats on_box = run_gap_instance(box.instance, noise_from(cfg), cfg,
                                        box.uniform_mean, box_rng, false);
  return {{"deterministic_plays_circle",
           {static_cast<double>(on_circle.deterministic_plays)}},
          {"deterministic_plays_box",
           {static_cast<double>(on_box.deterministic_plays)}},
          {"first_deterministic_box",
           {static_cast<double>(on_box.first_deterministic)}}};
}

// ---------------------------------------------------------------------------
// lowerbound-posterior

TrialSeries lowerbound_trial(const ExperimentConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  long S = run_posterior_trial(cfg.eps, cfg.horizon, rng);
  return {{"S", {static_cast<double>(S)}}};
}

// ---------------------------------------------------------------------------
// runner

void run_pool(int trials, const std::function<void(int)>& body);

std::vector<ResultRow> extra_rows(const ExperimentConfig& cfg, RunResult& result);

void check_cross_fields(const ExperimentConfig& cfg) {
  const std::string& tag = cfg.experiment;
  if (tag == "ucb-mistreatment" || tag == "fair-vs-ucb" || tag == "disparity" ||
      tag == "ridgefair-regret") {
    if (cfg.k < 1 || cfg.d < 1)
      throw std::invalid_argument("config: experiment needs positive k and d");
  }
  if (tag == "disparity" && cfg.d != 2)
    throw std::invalid_argument("config: disparity model is 2-dimensional");
  if (tag == "ridgefair-regret" && cfg.m > cfg.k)
    throw std::invalid_argument("config: m must be at most k");
  if (tag == "circle-demo" && cfg.d != 2)
    throw std::invalid_argument("config: circle-demo is 2-dimensional");
}

}  // namespace

int worker_count(int trials) {
  int workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (const char* env = std::getenv("FAIRBANDIT_THREADS")) {
    try {
      std::size_t used = 0;
      int requested = std::stoi(env, &used);
      if (used != std::string(env).size() || requested < 1)
        throw std::invalid_argument("bad");
      workers = requested;
    } catch (const std::exception&) {
      throw std::invalid_argument(
          "FAIRBANDIT_THREADS must be a positive integer");
    }
  }
  return std::min(workers, std::max(1, trials));
}

namespace {

void run_pool(int trials, const std::function<void(int)>& body) {
  int workers = worker_count(trials);
  if (workers == 1) {
    for (int i = 0; i < trials; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> failures(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = next.fetch_add(1); i < trials; i = next.fetch_add(1)) body(i);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
}

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  if (n == 0) return 0.0;
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<ResultRow> extra_rows(const ExperimentConfig& cfg, RunResult& result) {
  std::vector<ResultRow> rows;
  const std::string& tag = cfg.experiment;
  auto push = [&](long t, const std::string& metric, double value) {
    rows.push_back({tag, -1, t, metric, value});
  };

  if (tag == "disparity") {
    // Per-capita mistreatment probability as a ratio of sums across trials,
    // which stays defined when a population is absent from some rounds.
    const auto& mist_major = result.trial_series.at("mistreated_majority");
    const auto& mist_minor = result.trial_series.at("mistreated_minority");
    const auto& pres_major = result.trial_series.at("present_majority");
    const auto& pres_minor = result.trial_series.at("present_minority");
    double all_mist_major = 0, all_mist_minor = 0, all_pres_major = 0,
           all_pres_minor = 0;
    for (long t = 0; t < cfg.horizon; ++t) {
      double mm = 0, mn = 0, pm = 0, pn = 0;
      for (int i = 0; i < cfg.trials; ++i) {
        mm += mist_major[i][t];
        mn += mist_minor[i][t];
        pm += pres_major[i][t];
        pn += pres_minor[i][t];
      }
      push(t + 1, "mistreat_prob_majority", pm > 0 ? mm / pm : 0.0);
      push(t + 1, "mistreat_prob_minority", pn > 0 ? mn / pn : 0.0);
      all_mist_major += mm;
      all_mist_minor += mn;
      all_pres_major += pm;
      all_pres_minor += pn;
    }
    push(0, "overall_mistreat_prob_majority",
         all_pres_major > 0 ? all_mist_major / all_pres_major : 0.0);
    push(0, "overall_mistreat_prob_minority",
         all_pres_minor > 0 ? all_mist_minor / all_pres_minor : 0.0);
  } else if (tag == "gap-sweep") {
    for (double g : parse_list(cfg.gaps, "gaps")) {
      std::ostringstream name;
      name << "final_regret_gap" << g;
      const auto& finals = result.trial_series.at(name.str());
      std::vector<double> values;
      values.reserve(finals.size());
      for (const auto& s : finals) values.push_back(s[0]);
      std::ostringstream out;
      out << "median_final_regret_gap" << g;
      push(0, out.str(), median_of(std::move(values)));
    }
  } else if (tag == "lowerbound-posterior") {
    const auto& s_values = result.trial_series.at("S");
    double mean = 0.0;
    for (const auto& s : s_values) mean += s[0];
    mean /= static_cast<double>(s_values.size());
    push(0, "mean_S", mean);
    for (long t = 1; t <= 30; ++t) {
      long surviving = 0;
      for (const auto& s : s_values)
        if (s[0] >= static_cast<double>(t)) ++surviving;
      push(t, "survival", static_cast<double>(surviving) /
                              static_cast<double>(s_values.size()));
    }
  } else if (tag == "fairgap-regret") {
    const auto& first = result.trial_series.at("first_deterministic_round");
    const auto& optimal = result.trial_series.at("all_deterministic_optimal");
    const auto& after = result.trial_series.at("regret_after_first_deterministic");
    int clean = 0;
    for (int i = 0; i < cfg.trials; ++i) {
      bool separated = first[i][0] > 0;
      bool flat = std::abs(after[i][0]) < 1e-9;
      if (separated && optimal[i][0] == 1.0 && flat) ++clean;
    }
    push(0, "clean_trial_fraction",
         static_cast<double>(clean) / static_cast<double>(cfg.trials));
  } else if (tag == "circle-demo") {
    const auto& circle = result.trial_series.at("deterministic_plays_circle");
    const auto& box = result.trial_series.at("deterministic_plays_box");
    int circle_zero = 0, box_positive = 0;
    for (int i = 0; i < cfg.trials; ++i) {
      if (circle[i][0] == 0.0) ++circle_zero;
      if (box[i][0] > 0.0) ++box_positive;
    }
    push(0, "circle_never_deterministic_fraction",
         static_cast<double>(circle_zero) / static_cast<double>(cfg.trials));
    push(0, "box_separated_fraction",
         static_cast<double>(box_positive) / static_cast<double>(cfg.trials));
  }
  return rows;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
  check_cross_fields(cfg);

  std::function<TrialSeries(int)> trial;
  // Setups shared across trials are built eagerly so configuration errors
  // surface before any work or output.
  std::optional<GapSetup> gap_setup;
  std::optional<GapSetup> box_setup;
  std::vector<GapSetup> sweep_setups;
  std::vector<double> sweep_gaps;

  const std::string& tag = cfg.experiment;
  if (tag == "ucb-mistreatment") {
    trial = [&cfg](int i) {
      return ucb_mistreatment_trial(cfg, derive_seed(cfg.seed, i));
    };
  } else if (tag == "fair-vs-ucb") {
    trial = [&cfg](int i) {
      return fair_vs_ucb_trial(cfg, derive_seed(cfg.seed, i));
    };
  } else if (tag == "disparity") {
    trial = [&cfg](int i) {
      return disparity_trial(cfg, derive_seed(cfg.seed, i));
    };
  } else if (tag == "ridgefair-regret") {
    trial = [&cfg](int i) {
      return ridgefair_regret_trial(cfg, derive_seed(cfg.seed, i));
    };
  } else if (tag == "fairgap-regret") {
    Vector beta = parse_beta(cfg, cfg.d);
    gap_setup = make_gap_setup(cfg, beta);
    if (!(gap_setup->instance.gap > 0.0))
      throw std::invalid_argument("config: fairgap-regret needs a unique optimum");
    trial = [&](int i) {
      return fairgap_regret_trial(*gap_setup, cfg, derive_seed(cfg.seed, i));
    };
  } else if (tag == "gap-sweep") {
    sweep_gaps = parse_list(cfg.gaps, "gaps");
    for (double g : sweep_gaps) {
      if (!(g > 0.0 && g <= 1.5))
        throw std::invalid_argument("config key gaps: entries must be in (0, 1.5]");
      // Constant-optimum family: optimal reward 1.5 and uniform-mean reward 0
      // for every gap, so regret differences reflect separation alone.
      Vector beta(2);
      beta << 1.5 - g / 2.0, g / 2.0;
      sweep_setups.push_back(make_gap_setup(cfg, beta));
    }
    trial = [&](int i) {
      return gap_sweep_trial(sweep_setups, sweep_gaps, cfg,
                             derive_seed(cfg.seed, i));
    };
  } else if (tag == "lowerbound-posterior") {
    trial = [&cfg](int i) {
      return lowerbound_trial(cfg, derive_seed(cfg.seed, i));
    };
  } else if (tag == "circle-demo") {
    Vector beta = parse_beta(cfg, 2);
    double subg = noise_from(cfg).sub_gaussian_parameter();
    gap_setup = GapSetup{
        circle_instance(cfg.circle_n, beta, subg), 0.0};
    Vector box_beta(2);
    box_beta << 1.0, 0.5;
    box_setup = GapSetup{
        make_gap_instance(Polytope::box(2), box_beta, 1.0 / 3.0, subg), 0.0};
    trial = [&](int i) {
      return circle_demo_trial(*gap_setup, *box_setup, cfg,
                               derive_seed(cfg.seed, i));
    };
  } else {
    throw std::invalid_argument("run_experiment: unknown experiment " + tag);
  }

  std::vector<TrialSeries> all(cfg.trials);
  run_pool(cfg.trials, [&](int i) { all[i] = trial(i); });

  RunResult result;
  for (const auto& [metric, series] : all[0]) {
    const std::size_t expected = series.size();
    auto& slot = result.trial_series[metric];
    slot.reserve(cfg.trials);
    for (int i = 0; i < cfg.trials; ++i) {
      auto it = all[i].find(metric);
      if (it == all[i].end() || it->second.size() != expected)
        throw std::logic_error("run_experiment: inconsistent series across trials");
      slot.push_back(std::move(it->second));
    }
  }

  for (const auto& [metric, per_trial] : result.trial_series) {
    std::size_t length = per_trial[0].size();
    RunResult::Aggregate agg;
    agg.mean.resize(length);
    agg.std_error.resize(length);
    for (std::size_t t = 0; t < length; ++t) {
      double mean = 0.0;
      for (const auto& series : per_trial) mean += series[t];
      mean /= static_cast<double>(per_trial.size());
      double var = 0.0;
      for (const auto& series : per_trial) {
        double dev = series[t] - mean;
        var += dev * dev;
      }
      agg.mean[t] = mean;
      agg.std_error[t] =
          per_trial.size() > 1
              ? std::sqrt(var / (static_cast<double>(per_trial.size()) - 1.0) /
                          static_cast<double>(per_trial.size()))
              : 0.0;
    }
    result.aggregates[metric] = std::move(agg);
  }

  result.extra = extra_rows(cfg, result);
  return result;
}

std::vector<ResultRow> per_trial_rows(const ExperimentConfig& cfg,
                                      const RunResult& result) {
  std::vector<ResultRow> rows;
  for (const auto& [metric, per_trial] : result.trial_series) {
    for (int i = 0; i < static_cast<int>(per_trial.size()); ++i) {
      const auto& series = per_trial[i];
      if (series.size() == 1) {
        rows.push_back({cfg.experiment, i, 0, metric, series[0]});
        continue;
      }
      for (std::size_t t = 0; t < series.size(); ++t) {
        bool keep = (t % static_cast<std::size_t>(cfg.stride) == 0) ||
                    t + 1 == series.size();
        if (keep)
          rows.push_back({cfg.experiment, i, static_cast<long>(t) + 1, metric,
                          series[t]});
      }
    }
  }
  return rows;
}

std::vector<ResultRow> aggregate_rows(const ExperimentConfig& cfg,
                                      const RunResult& result) {
  std::vector<ResultRow> rows;
  for (const auto& [metric, agg] : result.aggregates) {
    bool scalar = agg.mean.size() == 1;
    for (std::size_t t = 0; t < agg.mean.size(); ++t) {
      long round = scalar ? 0 : static_cast<long>(t) + 1;
      rows.push_back({cfg.experiment, -1, round, metric + ".mean", agg.mean[t]});
      rows.push_back(
          {cfg.experiment, -1, round, metric + ".stderr", agg.std_error[t]});
    }
  }
  rows.insert(rows.end(), result.extra.begin(), result.extra.end());
  return rows;
}

void write_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  out << "experiment,trial,t,metric,value\n";
  char buffer[64];
  for (const ResultRow& row : rows) {
    std::snprintf(buffer, sizeof(buffer), "%.10g", row.value);
    out << row.experiment << ',' << row.trial << ',' << row.t << ','
        << row.metric << ',' << buffer << '\n';
  }
  if (!out) throw std::runtime_error("write_csv: failed writing " + path);
}

std::vector<ResultRow> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "experiment,trial,t,metric,value")
    throw std::runtime_error("read_csv: missing or wrong header in " + path);
  std::vector<ResultRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::array<std::string, 5> fields;
    std::size_t start = 0;
    for (int f = 0; f < 4; ++f) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string::npos)
        throw std::runtime_error("read_csv: malformed line " +
                                 std::to_string(line_no));
      fields[f] = line.substr(start, comma - start);
      start = comma + 1;
    }
    fields[4] = line.substr(start);
    ResultRow row;
    row.experiment = fields[0];
    row.trial = std::stol(fields[1]);
    row.t = std::stol(fields[2]);
    row.metric = fields[3];
    row.value = std::stod(fields[4]);
    rows.push_back(std::move(row));
  }
  return rows;
}

RunResult run_and_write(const ExperimentConfig& cfg, const std::string& out_dir) {
  RunResult result = run_experiment(cfg);
  std::filesystem::create_directories(out_dir);
  write_csv(per_trial_rows(cfg, result),
            (std::filesystem::path(out_dir) / "results.csv").string());
  write_csv(aggregate_rows(cfg, result),
            (std::filesystem::path(out_dir) / "aggregate.csv").string());
  return result;
}

}  // namespace fairbandit
