#ifndef FAIRBANDIT_TESTS_CLOSURE_ORACLE_HPP
#define FAIRBANDIT_TESTS_CLOSURE_ORACLE_HPP

#include "fairbandit/chaining.hpp"
#include "fairbandit/types.hpp"

#include <algorithm>
#include <random>
#include <vector>

// Reference partition for the interval-chaining sweep: build the overlap
// graph explicitly, take connected components by breadth-first search, and
// order them by max upper bound. Deliberately quadratic and graph-based so
// it shares nothing with the sweep implementation under test.
namespace closure_oracle {

inline fairbandit::ChainPartition
components(const std::vector<fairbandit::ScoredInterval>& intervals) {
  using fairbandit::Chain;
  using fairbandit::ChainPartition;
  const int k = static_cast<int>(intervals.size());
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (fairbandit::linked(intervals[static_cast<std::size_t>(i)],
                             intervals[static_cast<std::size_t>(j)])) {
        adj[static_cast<std::size_t>(i)].push_back(j);
        adj[static_cast<std::size_t>(j)].push_back(i);
      }
  std::vector<bool> seen(static_cast<std::size_t>(k), false);
  ChainPartition partition;
  for (int root = 0; root < k; ++root) {
    if (seen[static_cast<std::size_t>(root)]) continue;
    std::vector<int> component{root};
    seen[static_cast<std::size_t>(root)] = true;
    for (std::size_t head = 0; head < component.size(); ++head)
      for (int next : adj[static_cast<std::size_t>(component[head])])
        if (!seen[static_cast<std::size_t>(next)]) {
          seen[static_cast<std::size_t>(next)] = true;
          component.push_back(next);
        }
    Chain chain;
    chain.min_lower = intervals[static_cast<std::size_t>(component.front())].lower;
    chain.max_upper = intervals[static_cast<std::size_t>(component.front())].upper;
    for (int member : component) {
      const auto& iv = intervals[static_cast<std::size_t>(member)];
      chain.members.push_back(iv.index);
      chain.min_lower = std::min(chain.min_lower, iv.lower);
      chain.max_upper = std::max(chain.max_upper, iv.upper);
    }
    std::sort(chain.members.begin(), chain.members.end());
    partition.chains.push_back(std::move(chain));
  }
  std::stable_sort(partition.chains.begin(), partition.chains.end(),
                   [](const Chain& a, const Chain& b) {
                     if (a.max_upper != b.max_upper) return a.max_upper > b.max_upper;
                     return a.members.front() < b.members.front();
                   });
  return partition;
}

inline bool same_partition(const fairbandit::ChainPartition& a,
                           const fairbandit::ChainPartition& b) {
  if (a.chains.size() != b.chains.size()) return false;
  for (std::size_t i = 0; i < a.chains.size(); ++i)
    if (a.chains[i].members != b.chains[i].members) return false;
  return true;
}

// Endpoints from a coarse lattice (gridded) force exact ties and touching
// endpoints; the continuous generator exercises generic positions.
inline std::vector<fairbandit::ScoredInterval>
random_intervals(int k, fairbandit::Rng& rng, bool gridded) {
  std::uniform_int_distribution<int> grid(0, 11);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  std::vector<fairbandit::ScoredInterval> intervals;
  intervals.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    double lo, hi;
    if (gridded) {
      lo = 0.25 * grid(rng);
      hi = lo + 0.25 * (grid(rng) % 5);
    } else {
      lo = unif(rng);
      hi = lo + std::abs(unif(rng));
    }
    intervals.push_back({i, lo, hi});
  }
  return intervals;
}

}  // namespace closure_oracle

#endif
