#include "fairbandit/chaining.hpp"

#include <algorithm>
#include <stdexcept>

namespace fairbandit {

bool linked(const ScoredInterval& a, const ScoredInterval& b) {
  return a.lower <= b.upper && b.lower <= a.upper;
}

std::size_t ChainPartition::total_members() const {
  std::size_t n = 0;
  for (const Chain& c : chains) n += c.members.size();
  return n;
}

ChainPartition chains(std::span<const ScoredInterval> intervals) {
  for (const ScoredInterval& iv : intervals) {
    if (iv.lower > iv.upper)
      throw std::invalid_argument("chains: interval with lower > upper");
  }
  ChainPartition partition;
  if (intervals.empty()) return partition;

  std::vector<ScoredInterval> sorted(intervals.begin(), intervals.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const ScoredInterval& a, const ScoredInterval& b) {
              if (a.lower != b.lower) return a.lower < b.lower;
              if (a.upper != b.upper) return a.upper < b.upper;
              return a.index < b.index;
            });

  // Sweep: a new component starts exactly when the next lower bound clears
  // the running maximum upper bound of the current one.
  Chain current{{sorted[0].index}, sorted[0].lower, sorted[0].upper};
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const ScoredInterval& iv = sorted[i];
    if (iv.lower <= current.max_upper) {
      current.members.push_back(iv.index);
      current.max_upper = std::max(current.max_upper, iv.upper);
    } else {
      partition.chains.push_back(std::move(current));
      current = Chain{{iv.index}, iv.lower, iv.upper};
    }
  }
  partition.chains.push_back(std::move(current));

  // Components on the line are totally ordered, so this reverses the sweep
  // order; the comparator keeps the (unreachable with closed intervals)
  // equal-max-upper case deterministic via lowest member index.
  for (Chain& c : partition.chains) std::sort(c.members.begin(), c.members.end());
  std::sort(partition.chains.begin(), partition.chains.end(),
            [](const Chain& a, const Chain& b) {
              if (a.max_upper != b.max_upper) return a.max_upper > b.max_upper;
              return a.members.front() < b.members.front();
            });
  return partition;
}

const Chain& top_chain(const ChainPartition& partition) {
  if (partition.empty())
    throw std::invalid_argument("top_chain: empty partition");
  return partition.chains.front();
}

}  // namespace fairbandit
