#ifndef FAIRBANDIT_RIDGEFAIR_HPP
#define FAIRBANDIT_RIDGEFAIR_HPP

#include "fairbandit/chaining.hpp"
#include "fairbandit/estimator.hpp"
#include "fairbandit/types.hpp"

#include <vector>

namespace fairbandit {

/**
 * Distribution over selected sets produced by one round of chained
 * selection: an ordered list of chains, each either taken whole
 * (take == members.size()) or contributing a uniform random subset of size
 * `take`. At most one entry is partial and it is the last listed. The
 * marginal selection probability of a member is 1 for a whole chain and
 * take/|chain| for the partial one; unlisted contexts have marginal 0.
 */
struct SelectionDistribution {
  struct Entry {
    std::vector<int> members;
    int take = 0;
  };
  std::vector<Entry> entries;
};

// Marginal selection probability of context `index` under `dist`.
double marginal_probability(const SelectionDistribution& dist, int index);

// Selection mode for a round: pick exactly j contexts, or pick every context
// whose chain reaches above zero (at most all of them, no quota).
class RidgeFairVariant {
 public:
  // Requires j >= 1. With `permissive`, a round offering fewer than j
  // contexts selects all of them instead of failing.
  static RidgeFairVariant exactly(int j, bool permissive = false);
  static RidgeFairVariant at_most_k();

  bool is_exact() const { return exact_; }
  int quota() const { return quota_; }
  bool permissive() const { return permissive_; }

 private:
  bool exact_ = false;
  int quota_ = 0;
  bool permissive_ = false;
};

struct PickResult {
  std::vector<int> selected;  // ascending
  SelectionDistribution dist;
};

// Exactly-m selection: consume chains from the top; a chain that fits within
// the remaining quota is taken whole, the first that does not contributes a
// uniform random subset of the remaining size. Throws if m < 1 or m exceeds
// the number of members.
PickResult pick_exact(const ChainPartition& partition, int m, Rng& rng);

// At-most-k selection: every chain whose max upper bound is positive is
// taken whole (equivalently, every context chained to one with a positive
// upper confidence bound). Deterministic.
PickResult pick_at_most(const ChainPartition& partition);

struct RidgeFairRound {
  std::vector<int> selected;
  SelectionDistribution dist;
  std::vector<ConfidenceInterval> intervals;  // one per offered context
};

/**
 * One selection round: confidence intervals at failure probability
 * delta_round, chain partition, then the variant's pick. Does not update the
 * design state; the caller folds in whichever rewards it observes.
 */
RidgeFairRound ridgefair_round(const DesignState& state,
                               const std::vector<Vector>& contexts,
                               double delta_round,
                               const RidgeFairVariant& variant, Rng& rng,
                               double noise_scale = 1.0);

}  // namespace fairbandit

#endif
