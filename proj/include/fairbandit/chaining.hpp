#ifndef FAIRBANDIT_CHAINING_HPP
#define FAIRBANDIT_CHAINING_HPP

#include <span>
#include <vector>

namespace fairbandit {

// Closed confidence interval [lower, upper] attached to the context it
// scores; `index` identifies the context within the round.
struct ScoredInterval {
  int index = 0;
  double lower = 0.0;
  double upper = 0.0;
};

// Two intervals are linked when they overlap; endpoints touching counts.
bool linked(const ScoredInterval& a, const ScoredInterval& b);

struct Chain {
  std::vector<int> members;  // context indices, ascending
  double min_lower = 0.0;
  double max_upper = 0.0;
};

// Chains ordered by max_upper descending. Chains are the connected
// components of the link relation, so intervals in distinct chains never
// overlap and every member of an earlier chain lies strictly above every
// member of a later one.
struct ChainPartition {
  std::vector<Chain> chains;

  bool empty() const { return chains.empty(); }
  std::size_t total_members() const;
};

// Partitions intervals into chains via a sweep over lower bounds, O(k log k).
// Empty input gives an empty partition. Throws if some lower > upper.
ChainPartition chains(std::span<const ScoredInterval> intervals);

// First chain of a nonempty partition (the one containing the running
// maximum upper bound). Throws on an empty partition.
const Chain& top_chain(const ChainPartition& partition);

}  // namespace fairbandit

#endif
