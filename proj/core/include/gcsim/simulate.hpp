#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gcsim/types.hpp"

namespace gcsim {

// Outcome of stepping a policy by one access. A miss carries the LoadOp.
// A hit may carry voluntary evictions: a layered policy promoting the item
// into its front layer can push the front layer's victim out of the cache
// entirely. Loads on hits stay forbidden, and no cost is charged.
struct StepResult {
  std::optional<LoadOp> load;          // engaged iff the access missed
  std::vector<ItemId> hit_evictions;   // sorted; must be empty on a miss

  bool hit() const { return !load.has_value(); }
};

// A replacement policy stepped one access at a time. Policies own their
// metadata (recency, marks, partitions) and report the exact resident set.
// Instances are independent; distinct simulations never share state.
class Policy {
 public:
  virtual ~Policy() = default;

  // Serves one access. Demand-driven: every LoadOp is triggered by a miss
  // and includes the requested item.
  virtual StepResult on_access(const ItemId& item, std::size_t position) = 0;

  // Exact resident set, sorted. For layered policies, the union of layers.
  virtual std::vector<ItemId> contents() const = 0;

  virtual std::size_t capacity() const = 0;
  virtual std::unique_ptr<Policy> clone() const = 0;
  virtual std::string name() const = 0;
};

// Runs the policy over the trace from an empty cache, enforcing every LoadOp
// and capacity invariant. Throws PolicyViolation if the policy misbehaves.
SimResult simulate(Policy& policy, const Trace& trace, const BlockMap& map,
                   std::size_t capacity);

struct ReplayOutcome {
  std::optional<SimResult> result;  // engaged iff the schedule is feasible
  std::size_t position = 0;         // first violating access otherwise
  std::string reason;

  bool ok() const { return result.has_value(); }
};

// Replays the exact LoadOps of an offline schedule at the given cache size.
ReplayOutcome replay_schedule(const OfflineSchedule& schedule,
                              const Trace& trace, const BlockMap& map,
                              std::size_t capacity);

}  // namespace gcsim
