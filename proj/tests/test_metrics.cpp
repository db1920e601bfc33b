#include <doctest.h>

#include "fairbandit/environments.hpp"
#include "fairbandit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace fairbandit;

namespace {

ContextOutcome outcome(double reward, double marginal, int population = 0) {
  return {reward, marginal, reward - 1.0, reward + 1.0, population};
}

RoundRecord round_of(std::vector<ContextOutcome> contexts,
                     std::vector<int> selected) {
  RoundRecord record;
  record.t = 1;
  record.contexts = std::move(contexts);
  record.selected = std::move(selected);
  return record;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("regret of a split selection against the single best") {
  // Best reward 1.0; the distribution takes each of {1.0, 0.5} with
  // probability one half, so each round loses 1.0 - 0.75 = 0.25.
  std::vector<RoundRecord> records{
      round_of({outcome(1.0, 0.5), outcome(0.5, 0.5)}, {0}),
      round_of({outcome(1.0, 0.5), outcome(0.5, 0.5)}, {1})};
  auto series = pseudo_regret(records, RidgeFairVariant::exactly(1));
  REQUIRE(series.size() == 2);
  CHECK(series[0] == doctest::Approx(0.25));
  CHECK(series[1] == doctest::Approx(0.5));
}

TEST_CASE("exact-m regret compares against the top-m sum") {
  // Optimal pair 1.0 + 0.8; achieved 1.0 + 0.5*(0.8 + 0.2) = 1.5.
  std::vector<RoundRecord> records{round_of(
      {outcome(1.0, 1.0), outcome(0.8, 0.5), outcome(0.2, 0.5)}, {0, 1})};
  auto series = pseudo_regret(records, RidgeFairVariant::exactly(2));
  REQUIRE(series.size() == 1);
  CHECK(series[0] == doctest::Approx(0.3));
}

TEST_CASE("at-most regret counts only positive rewards as opportunity") {
  // Optimal = 1.0 + 0.3; taking everything also collects the -0.5.
  std::vector<RoundRecord> records{round_of(
      {outcome(1.0, 1.0), outcome(-0.5, 1.0), outcome(0.3, 1.0)}, {0, 1, 2})};
  auto series = pseudo_regret(records, RidgeFairVariant::at_most_k());
  CHECK(series[0] == doctest::Approx(0.5));

  std::vector<RoundRecord> ideal{round_of(
      {outcome(1.0, 1.0), outcome(-0.5, 0.0), outcome(0.3, 1.0)}, {0, 2})};
  CHECK(pseudo_regret(ideal, RidgeFairVariant::at_most_k())[0] ==
        doctest::Approx(0.0));
}

TEST_CASE("mistreatment counts unselected contexts beaten by a selection") {
  CHECK(mistreatment_count(round_of(
            {outcome(0.5, 1.0), outcome(1.0, 0.0)}, {0})) == 1);
  CHECK(mistreatment_count(round_of(
            {outcome(0.5, 1.0), outcome(1.0, 1.0)}, {0, 1})) == 0);
  CHECK(mistreatment_count(round_of(
            {outcome(0.5, 0.0), outcome(1.0, 0.0)}, {})) == 0);
  // Both unselected contexts beat the chosen worst.
  CHECK(mistreatment_count(round_of({outcome(0.1, 1.0), outcome(0.5, 0.0),
                                     outcome(0.9, 0.0), outcome(0.05, 0.0)},
                                    {0})) == 2);
  // Ties are not mistreatment: strictly smaller is required.
  CHECK(mistreatment_count(round_of(
            {outcome(0.5, 1.0), outcome(0.5, 0.0)}, {0})) == 0);
}

TEST_CASE("fairness audit flags inverted marginals") {
  RoundRecord bad = round_of({outcome(1.0, 0.3), outcome(0.9, 0.7)}, {1});
  auto violations = audit_round_fairness(bad);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].better == 0);
  CHECK(violations[0].worse == 1);

  RoundRecord good = round_of({outcome(1.0, 0.7), outcome(0.9, 0.3)}, {0});
  CHECK(audit_round_fairness(good).empty());

  // Equal rewards with unequal marginals violate in one direction.
  RoundRecord tied = round_of({outcome(0.5, 0.2), outcome(0.5, 0.8)}, {1});
  auto tied_violations = audit_round_fairness(tied);
  REQUIRE(tied_violations.size() == 1);
  CHECK(tied_violations[0].better == 0);

  // Marginal differences below tolerance are ignored.
  RoundRecord hairline =
      round_of({outcome(1.0, 0.5), outcome(0.9, 0.5 + 1e-13)}, {1});
  CHECK(audit_round_fairness(hairline).empty());
}

TEST_CASE("analytic regret matches averaged realized regret") {
  // Monte-Carlo cross-check of the marginal bookkeeping: realize the
  // selection distribution many times and compare the average shortfall.
  Rng rng(81);
  DesignState state(2, 1.0);
  Vector beta(2);
  beta << 0.8, -0.3;
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < 6; ++i) {
    Vector x = sample_unit_ball(2, rng);
    state.update(x, beta.dot(x) + gauss(rng));
  }
  std::vector<Vector> contexts;
  for (int i = 0; i < 5; ++i) contexts.push_back(sample_unit_ball(2, rng));

  const int m = 2;
  RidgeFairRound reference =
      ridgefair_round(state, contexts, 0.2, RidgeFairVariant::exactly(m), rng);
  RoundRecord record;
  record.t = 1;
  record.selected = reference.selected;
  double optimal = 0.0;
  std::vector<double> rewards;
  for (int i = 0; i < 5; ++i) {
    double r = beta.dot(contexts[static_cast<std::size_t>(i)]);
    rewards.push_back(r);
    ContextOutcome outcome;
    outcome.true_reward = r;
    outcome.marginal = marginal_probability(reference.dist, i);
    record.contexts.push_back(outcome);
  }
  std::vector<double> sorted = rewards;
  std::sort(sorted.rbegin(), sorted.rend());
  optimal = sorted[0] + sorted[1];

  double analytic =
      pseudo_regret({&record, 1}, RidgeFairVariant::exactly(m)).back();

  // Rebuild the same chains the round used from its published intervals.
  std::vector<ScoredInterval> scored;
  for (int j = 0; j < 5; ++j)
    scored.push_back({j, reference.intervals[static_cast<std::size_t>(j)].lower(),
                      reference.intervals[static_cast<std::size_t>(j)].upper()});
  ChainPartition partition = chains(scored);

  const int draws = 40000;
  double realized = 0.0;
  double realized_sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    PickResult pick = pick_exact(partition, m, rng);
    double got = 0.0;
    for (int j : pick.selected) got += rewards[static_cast<std::size_t>(j)];
    realized += optimal - got;
    realized_sq += (optimal - got) * (optimal - got);
  }
  realized /= draws;
  realized_sq /= draws;
  double sem = std::sqrt(std::max(0.0, realized_sq - realized * realized) / draws);
  CHECK(std::abs(realized - analytic) < 3.0 * sem + 1e-9);
}

TEST_CASE("optimistic baseline keeps everyone at cold start") {
  DesignState state(2, 1.0);
  Rng rng(82);
  std::vector<Vector> contexts;
  for (int i = 0; i < 6; ++i) contexts.push_back(sample_unit_ball(2, rng));
  std::vector<int> selected = ucb_baseline_round(state, contexts);
  CHECK(selected.size() == 6);  // optimism admits everyone before data
}

TEST_CASE("optimistic baseline eventually drops a clearly bad context") {
  Rng rng(83);
  Vector beta(2);
  beta << -1.0, 1.0;
  std::normal_distribution<double> gauss(0.0, 0.3);
  DesignState state(2, 1.0);
  std::vector<Vector> contexts(2, Vector::Zero(2));
  contexts[0] << 0.9, 0.0;   // reward -0.9
  contexts[1] << 0.0, 0.9;   // reward +0.9
  bool dropped = false;
  for (int t = 0; t < 500 && !dropped; ++t) {
    std::vector<int> selected = ucb_baseline_round(state, contexts);
    for (int i : selected) {
      const Vector& x = contexts[static_cast<std::size_t>(i)];
      state.update(x, beta.dot(x) + gauss(rng), NormPolicy::none);
    }
    dropped = !std::binary_search(selected.begin(), selected.end(), 0);
  }
  CHECK(dropped);
  // The good context never leaves.
  CHECK(std::binary_search(ucb_baseline_round(state, contexts).begin(),
                           ucb_baseline_round(state, contexts).end(), 1));
}

TEST_CASE("trial summaries split mistreatment by population") {
  std::vector<RoundRecord> records;
  RoundRecord r1 = round_of({outcome(0.5, 1.0, 0), outcome(1.0, 0.0, 1)}, {0});
  RoundRecord r2 = round_of({outcome(0.9, 1.0, 1), outcome(0.2, 0.0, 0)}, {0});
  r2.t = 2;
  records.push_back(r1);
  records.push_back(r2);
  TrialSummary summary = summarize_trial(records, RidgeFairVariant::at_most_k());
  CHECK(summary.cum_mistreatment.back() == doctest::Approx(1.0));
  CHECK(summary.minority_mistreated == 1);
  CHECK(summary.majority_mistreated == 0);
  CHECK(summary.majority_present == 2);
  CHECK(summary.minority_present == 2);
  CHECK(summary.cum_regret.size() == 2);
}

TEST_CASE("selection rounds pass the fairness audit at the stated rate") {
  // Runs of the chained selection rule audited with true rewards: only
  // confidence failures can invert a marginal, so the fraction of runs with
  // any violation stays within delta plus three binomial sigmas.
  const int trials = 60;
  const double delta = 0.05;
  Rng rng(84);
  std::normal_distribution<double> gauss(0.0, 1.0);
  int violated = 0;
  for (int trial = 0; trial < trials; ++trial) {
    DesignState state(2, 1.0);
    Vector beta = sample_unit_ball(2, rng);
    bool bad = false;
    for (long t = 1; t <= 150; ++t) {
      std::vector<Vector> contexts;
      for (int i = 0; i < 4; ++i) contexts.push_back(sample_unit_ball(2, rng));
      RidgeFairRound round = ridgefair_round(state, contexts, delta,
                                             RidgeFairVariant::exactly(2), rng);
      RoundRecord record;
      record.t = t;
      record.selected = round.selected;
      for (int i = 0; i < 4; ++i) {
        ContextOutcome o;
        o.true_reward = beta.dot(contexts[static_cast<std::size_t>(i)]);
        o.marginal = marginal_probability(round.dist, i);
        record.contexts.push_back(o);
      }
      if (!audit_round_fairness(record).empty()) bad = true;
      for (int i : round.selected) {
        const Vector& x = contexts[static_cast<std::size_t>(i)];
        state.update(x, beta.dot(x) + gauss(rng));
      }
    }
    if (bad) ++violated;
  }
  double fraction = static_cast<double>(violated) / trials;
  CHECK(fraction <= delta + 3.0 * std::sqrt(delta * (1 - delta) / trials));
}

}  // TEST_SUITE
