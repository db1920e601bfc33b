#ifndef FAIRBANDIT_METRICS_HPP
#define FAIRBANDIT_METRICS_HPP

#include "fairbandit/estimator.hpp"
#include "fairbandit/ridgefair.hpp"
#include "fairbandit/types.hpp"

#include <span>
#include <string>
#include <vector>

namespace fairbandit {

// Per-context outcome of one selection round, enough to audit it later
// without the raw vectors: the true expected reward beta.x, the analytic
// marginal selection probability, the interval the algorithm believed, and
// an optional population tag.
struct ContextOutcome {
  double true_reward = 0.0;
  double marginal = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  int population = 0;
};

struct RoundRecord {
  long t = 0;
  std::vector<ContextOutcome> contexts;
  std::vector<int> selected;  // ascending context indices
  std::string algorithm;
};

// Cumulative pseudo-regret series: per round, the best feasible expected
// reward under the variant (top reward for exactly-1, top-m sum for
// exactly-m, the positive part sum for at-most-k) minus the expected reward
// of the analytic selection distribution, sum(marginal * true_reward).
std::vector<double> pseudo_regret(std::span<const RoundRecord> records,
                                  const RidgeFairVariant& variant);

// Number of mistreated contexts in the round: unselected i such that some
// selected j has strictly smaller true expected reward.
int mistreatment_count(const RoundRecord& record);

// A round-fairness violation: `better` has true reward >= `worse` yet a
// smaller marginal.
struct ViolatingPair {
  int better = 0;
  int worse = 0;
};

// All ordered pairs violating weak meritocracy at tolerance tol on the
// marginals (rewards compare exactly). Empty when the round was fair.
std::vector<ViolatingPair> audit_round_fairness(const RoundRecord& record,
                                                double tol = 1e-12);

// Generic optimistic baseline: select every context whose upper confidence
// bound estimate + z * ||x||_{V^-1} is positive. z = 2 approximates a 95%
// normal bound. Deterministic given the state.
std::vector<int> ucb_baseline_round(const DesignState& state,
                                    const std::vector<Vector>& contexts,
                                    double z = 2.0);

struct TrialSummary {
  std::vector<double> cum_regret;
  std::vector<double> cum_mistreatment;
  long majority_mistreated = 0;
  long minority_mistreated = 0;
  long majority_present = 0;
  long minority_present = 0;
  std::vector<long> violation_rounds;  // rounds with a nonempty audit
};

TrialSummary summarize_trial(std::span<const RoundRecord> records,
                             const RidgeFairVariant& variant);

}  // namespace fairbandit

#endif
