#include "fairbandit/metrics.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace fairbandit {

namespace {

double optimal_expected_reward(const RoundRecord& record,
                               const RidgeFairVariant& variant) {
  std::vector<double> rewards;
  rewards.reserve(record.contexts.size());
  for (const ContextOutcome& c : record.contexts) rewards.push_back(c.true_reward);
  if (!variant.is_exact()) {
    double total = 0.0;
    for (double r : rewards)
      if (r > 0.0) total += r;
    return total;
  }
  int m = std::min<int>(variant.quota(), static_cast<int>(rewards.size()));
  std::partial_sort(rewards.begin(), rewards.begin() + m, rewards.end(),
                    std::greater<>());
  double total = 0.0;
  for (int i = 0; i < m; ++i) total += rewards[i];
  return total;
}

}  // namespace

std::vector<double> pseudo_regret(std::span<const RoundRecord> records,
                                  const RidgeFairVariant& variant) {
  std::vector<double> cumulative;
  cumulative.reserve(records.size());
  double total = 0.0;
  for (const RoundRecord& record : records) {
    double achieved = 0.0;
    for (const ContextOutcome& c : record.contexts)
      achieved += c.marginal * c.true_reward;
    total += optimal_expected_reward(record, variant) - achieved;
    cumulative.push_back(total);
  }
  return cumulative;
}

int mistreatment_count(const RoundRecord& record) {
  if (record.selected.empty()) return 0;
  double worst_selected = std::numeric_limits<double>::infinity();
  for (int j : record.selected)
    worst_selected = std::min(worst_selected, record.contexts[j].true_reward);
  int count = 0;
  for (int i = 0; i < static_cast<int>(record.contexts.size()); ++i) {
    if (std::binary_search(record.selected.begin(), record.selected.end(), i))
      continue;
    if (record.contexts[i].true_reward > worst_selected) ++count;
  }
  return count;
}

std::vector<ViolatingPair> audit_round_fairness(const RoundRecord& record,
                                                double tol) {
  std::vector<ViolatingPair> violations;
  const auto& cs = record.contexts;
  for (int i = 0; i < static_cast<int>(cs.size()); ++i) {
    for (int j = 0; j < static_cast<int>(cs.size()); ++j) {
      if (i == j) continue;
      if (cs[i].true_reward >= cs[j].true_reward &&
          cs[i].marginal < cs[j].marginal - tol) {
        violations.push_back({i, j});
      }
    }
  }
  return violations;
}

std::vector<int> ucb_baseline_round(const DesignState& state,
                                    const std::vector<Vector>& contexts,
                                    double z) {
  Vector beta_hat = state.estimate();
  auto llt = state.gram().llt();
  std::vector<int> selected;
  for (int i = 0; i < static_cast<int>(contexts.size()); ++i) {
    const Vector& x = contexts[i];
    double shape = std::sqrt(std::max(0.0, x.dot(llt.solve(x))));
    if (beta_hat.dot(x) + z * shape > 0.0) selected.push_back(i);
  }
  return selected;
}

TrialSummary summarize_trial(std::span<const RoundRecord> records,
                             const RidgeFairVariant& variant) {
  TrialSummary summary;
  summary.cum_regret = pseudo_regret(records, variant);
  summary.cum_mistreatment.reserve(records.size());
  double mistreated = 0.0;
  for (const RoundRecord& record : records) {
    mistreated += mistreatment_count(record);
    summary.cum_mistreatment.push_back(mistreated);
    for (int i = 0; i < static_cast<int>(record.contexts.size()); ++i) {
      bool majority = record.contexts[i].population == 0;
      (majority ? summary.majority_present : summary.minority_present) += 1;
      if (std::binary_search(record.selected.begin(), record.selected.end(), i))
        continue;
      bool worse_selected = false;
      for (int j : record.selected) {
        if (record.contexts[j].true_reward < record.contexts[i].true_reward) {
          worse_selected = true;
          break;
        }
      }
      if (worse_selected)
        (majority ? summary.majority_mistreated : summary.minority_mistreated) += 1;
    }
    if (!audit_round_fairness(record).empty())
      summary.violation_rounds.push_back(record.t);
  }
  return summary;
}

}  // namespace fairbandit
