#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "gcsim/rational.hpp"
#include "gcsim/types.hpp"

namespace gcsim {

// Caps for the exhaustive searches. Offline GC caching is NP-hard, so the
// oracles only handle desk-scale instances; callers may widen the caps.
struct OracleBudget {
  std::size_t max_trace_len = 14;
  std::size_t max_capacity = 5;
  std::uint32_t max_block_size = 4;
  std::size_t max_items = 64;       // bitmask state representation
  std::size_t max_states = 1 << 22; // memo entries before giving up
};

// Minimum-miss schedule for the GC cost model via memoized search over
// (position, resident set) states. Among equal-cost schedules returns the
// lexicographically first by (position, loaded set). `prune` enables the
// dominance rule that eviction victims with no future request are taken
// before any live victim; disabling it gives the plain exhaustive search
// used to cross-check the rule on tiny instances.
OfflineSchedule opt_gc(const Trace& trace, const BlockMap& map,
                       std::size_t capacity, const OracleBudget& budget = {},
                       bool prune = true);

// Classic furthest-in-future eviction; optimal when every item is its own
// block. Ignores block structure entirely.
OfflineSchedule belady(const Trace& trace, std::size_t capacity);

// Variable-size caching instance (the source problem of the reduction).
struct VarSizeInstance {
  std::map<std::string, Rational> sizes;  // item -> positive size
  Rational capacity;
  std::vector<std::string> accesses;
};

struct VarSizeBudget {
  std::size_t max_trace_len = 12;
  std::size_t max_distinct_items = 5;
};

// Minimum fault count where a fault loads one whole item of its size.
std::size_t opt_varsize(const VarSizeInstance& inst,
                        const VarSizeBudget& budget = {});

}  // namespace gcsim
