#include "gcsim/simulate.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "gcsim/errors.hpp"

namespace gcsim {
namespace {

bool is_sorted_unique(const std::vector<ItemId>& v) {
  return std::is_sorted(v.begin(), v.end()) &&
         std::adjacent_find(v.begin(), v.end()) == v.end();
}

// Returns a reason string when the op breaks a model invariant, empty when
// it is admissible from the given resident set.
std::string check_load_op(const LoadOp& op, const ItemId& requested,
                          std::size_t position, const BlockMap& map,
                          std::size_t capacity,
                          const std::set<ItemId>& resident) {
  if (op.at_access != position) return "load op indexed at wrong position";
  if (op.loaded.empty()) return "empty load set";
  if (!is_sorted_unique(op.loaded) || !is_sorted_unique(op.evicted))
    return "load/evict sets not canonical";
  for (const auto& item : op.loaded) {
    if (!map.contains(item)) return "loaded item outside block map";
    if (item.block != op.loaded.front().block) return "load outside block";
  }
  if (!std::binary_search(op.loaded.begin(), op.loaded.end(), requested))
    return "load omits requested item";
  for (const auto& item : op.evicted) {
    if (std::binary_search(op.loaded.begin(), op.loaded.end(), item))
      return "load and evict overlap";
    if (!resident.contains(item)) return "evicting non-resident item";
  }
  std::size_t after = resident.size() - op.evicted.size();
  for (const auto& item : op.loaded)
    if (!resident.contains(item)) ++after;
  if (after > capacity) return "capacity exceeded after evictions";
  return {};
}

void apply_load_op(const LoadOp& op, std::set<ItemId>& resident) {
  for (const auto& item : op.evicted) resident.erase(item);
  for (const auto& item : op.loaded) resident.insert(item);
}

}  // namespace

SimResult simulate(Policy& policy, const Trace& trace, const BlockMap& map,
                   std::size_t capacity) {
  if (capacity < 1) throw ConfigError("cache capacity must be >= 1");
  if (auto violations = validate_block_map(map); !violations.empty())
    throw ConfigError("invalid block map: " + violations.front());
  if (policy.capacity() != capacity)
    throw ConfigError("policy configured for capacity " +
                      std::to_string(policy.capacity()) + ", simulating " +
                      std::to_string(capacity));
  for (const auto& item : trace.accesses)
    if (!map.contains(item))
      throw DomainError("trace access " + to_string(item) +
                        " not in block map");

  SimResult result;
  result.per_access.reserve(trace.size());
  std::set<ItemId> resident;
  std::unordered_set<ItemId> requested_before;

  for (std::size_t pos = 0; pos < trace.size(); ++pos) {
    const ItemId& item = trace.accesses[pos];
    bool resident_now = resident.contains(item);
    StepResult step = policy.on_access(item, pos);

    if (resident_now) {
      if (!step.hit())
        throw PolicyViolation("policy loaded on a hit at position " +
                              std::to_string(pos));
      for (const auto& v : step.hit_evictions) {
        if (v == item)
          throw PolicyViolation("policy evicted the item it is hitting at "
                                "position " +
                                std::to_string(pos));
        if (resident.erase(v) == 0)
          throw PolicyViolation("hit eviction of non-resident item at "
                                "position " +
                                std::to_string(pos));
      }
      ++result.hits;
      if (!requested_before.contains(item)) ++result.spatial_hits;
      result.per_access.emplace_back(std::nullopt);
    } else {
      if (step.hit())
        throw PolicyViolation("policy claimed hit on absent item at position " +
                              std::to_string(pos));
      if (!step.hit_evictions.empty())
        throw PolicyViolation("hit evictions reported on a miss at position " +
                              std::to_string(pos));
      std::string reason =
          check_load_op(*step.load, item, pos, map, capacity, resident);
      if (!reason.empty())
        throw PolicyViolation(reason + " at position " + std::to_string(pos));
      apply_load_op(*step.load, resident);
      ++result.misses;
      result.per_access.emplace_back(std::move(step.load));
    }
    requested_before.insert(item);
  }
  result.temporal_hits = result.hits - result.spatial_hits;
  return result;
}

ReplayOutcome replay_schedule(const OfflineSchedule& schedule,
                              const Trace& trace, const BlockMap& map,
                              std::size_t capacity) {
  ReplayOutcome outcome;
  auto fail = [&](std::size_t pos, std::string reason) {
    outcome.position = pos;
    outcome.reason = std::move(reason);
    return outcome;
  };
  if (capacity < 1) return fail(0, "capacity must be >= 1");
  for (std::size_t i = 1; i < schedule.ops.size(); ++i)
    if (schedule.ops[i - 1].at_access >= schedule.ops[i].at_access)
      return fail(schedule.ops[i].at_access,
                  "schedule positions not strictly increasing");

  SimResult result;
  result.per_access.reserve(trace.size());
  std::set<ItemId> resident;
  std::unordered_set<ItemId> requested_before;
  std::size_t next_op = 0;

  for (std::size_t pos = 0; pos < trace.size(); ++pos) {
    const ItemId& item = trace.accesses[pos];
    if (!map.contains(item)) return fail(pos, "trace access not in block map");
    bool has_op =
        next_op < schedule.ops.size() && schedule.ops[next_op].at_access == pos;
    if (resident.contains(item)) {
      if (has_op) return fail(pos, "load op at hit position");
      ++result.hits;
      if (!requested_before.contains(item)) ++result.spatial_hits;
      result.per_access.emplace_back(std::nullopt);
    } else {
      if (!has_op) return fail(pos, "miss without load op");
      const LoadOp& op = schedule.ops[next_op++];
      std::string reason = check_load_op(op, item, pos, map, capacity, resident);
      if (!reason.empty()) return fail(pos, reason);
      apply_load_op(op, resident);
      ++result.misses;
      result.per_access.emplace_back(op);
    }
    requested_before.insert(item);
  }
  if (next_op != schedule.ops.size())
    return fail(trace.size(), "schedule has ops past the trace end");
  result.temporal_hits = result.hits - result.spatial_hits;
  outcome.result = std::move(result);
  return outcome;
}

}  // namespace gcsim
