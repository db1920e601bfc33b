#include "fairbandit/ridgefair.hpp"

#include <algorithm>
#include <stdexcept>

namespace fairbandit {

double marginal_probability(const SelectionDistribution& dist, int index) {
  for (const auto& entry : dist.entries) {
    if (std::binary_search(entry.members.begin(), entry.members.end(), index)) {
      return static_cast<double>(entry.take) /
             static_cast<double>(entry.members.size());
    }
  }
  return 0.0;
}

RidgeFairVariant RidgeFairVariant::exactly(int j, bool permissive) {
  if (j < 1) throw std::invalid_argument("RidgeFairVariant::exactly: j must be >= 1");
  RidgeFairVariant v;
  v.exact_ = true;
  v.quota_ = j;
  v.permissive_ = permissive;
  return v;
}

RidgeFairVariant RidgeFairVariant::at_most_k() { return {}; }

namespace {

// Uniform random m-subset of `members`, ascending. Partial Fisher-Yates.
std::vector<int> sample_subset(const std::vector<int>& members, int m, Rng& rng) {
  std::vector<int> pool = members;
  for (int i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(m);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

PickResult pick_exact(const ChainPartition& partition, int m, Rng& rng) {
  if (m < 1) throw std::invalid_argument("pick_exact: m must be >= 1");
  if (static_cast<std::size_t>(m) > partition.total_members())
    throw std::invalid_argument("pick_exact: m exceeds the number of contexts");

  PickResult result;
  int remaining = m;
  for (const Chain& chain : partition.chains) {
    int size = static_cast<int>(chain.members.size());
    if (size <= remaining) {
      result.dist.entries.push_back({chain.members, size});
      result.selected.insert(result.selected.end(), chain.members.begin(),
                             chain.members.end());
      remaining -= size;
    } else {
      result.dist.entries.push_back({chain.members, remaining});
      std::vector<int> drawn = sample_subset(chain.members, remaining, rng);
      result.selected.insert(result.selected.end(), drawn.begin(), drawn.end());
      remaining = 0;
    }
    if (remaining == 0) break;
  }
  std::sort(result.selected.begin(), result.selected.end());
  return result;
}

PickResult pick_at_most(const ChainPartition& partition) {
  PickResult result;
  for (const Chain& chain : partition.chains) {
    if (chain.max_upper <= 0.0) break;  // chains are ordered by max upper
    result.dist.entries.push_back(
        {chain.members, static_cast<int>(chain.members.size())});
    result.selected.insert(result.selected.end(), chain.members.begin(),
                           chain.members.end());
  }
  std::sort(result.selected.begin(), result.selected.end());
  return result;
}

RidgeFairRound ridgefair_round(const DesignState& state,
                               const std::vector<Vector>& contexts,
                               double delta_round,
                               const RidgeFairVariant& variant, Rng& rng,
                               double noise_scale) {
  if (contexts.empty())
    throw std::invalid_argument("ridgefair_round: empty choice set");

  RidgeFairRound round;
  round.intervals.reserve(contexts.size());
  std::vector<ScoredInterval> scored;
  scored.reserve(contexts.size());
  Vector beta_hat = state.estimate();
  for (std::size_t i = 0; i < contexts.size(); ++i) {
    double center = beta_hat.dot(contexts[i]);
    double halfwidth = state.confidence_width(contexts[i], delta_round, noise_scale);
    round.intervals.push_back({center, halfwidth});
    scored.push_back({static_cast<int>(i), center - halfwidth, center + halfwidth});
  }

  ChainPartition partition = chains(scored);
  PickResult picked;
  if (variant.is_exact()) {
    if (variant.quota() > static_cast<int>(contexts.size())) {
      if (!variant.permissive())
        throw std::invalid_argument(
            "ridgefair_round: quota exceeds the choice set (permissive mode selects all)");
      for (const Chain& chain : partition.chains) {
        picked.dist.entries.push_back(
            {chain.members, static_cast<int>(chain.members.size())});
        picked.selected.insert(picked.selected.end(), chain.members.begin(),
                               chain.members.end());
      }
      std::sort(picked.selected.begin(), picked.selected.end());
    } else {
      picked = pick_exact(partition, variant.quota(), rng);
    }
  } else {
    picked = pick_at_most(partition);
  }
  round.selected = std::move(picked.selected);
  round.dist = std::move(picked.dist);
  return round;
}

}  // namespace fairbandit
