#pragma once

#include <string>
#include <vector>

#include "gcsim/oracle.hpp"
#include "gcsim/types.hpp"

namespace gcsim {

struct ScaledInstance {
  VarSizeInstance instance;  // integral sizes
  long long scale = 1;
};

// Multiplies all sizes and the capacity by the LCM of the size denominators;
// optimal fault counts are unchanged.
ScaledInstance scale_instance(const VarSizeInstance& inst);

// GC instance produced by the reduction: one block per variable-size item,
// with an active set of that item's scaled size.
struct GcInstance {
  BlockMap map;
  Trace trace;
  std::size_t capacity = 0;
  std::vector<std::string> block_names;  // block id -> source item
};

// Transforms a variable-size caching instance into a GC instance of equal
// optimal cost. Each original access to an item of scaled size z becomes z
// round-robin rounds over the block's z active items.
GcInstance reduce(const VarSizeInstance& inst);

struct ReductionCheck {
  std::size_t varsize_opt = 0;
  std::size_t gc_opt = 0;
  bool equal = false;
};

// Runs both brute-force oracles and reports whether the optima agree.
ReductionCheck verify_reduction(const VarSizeInstance& inst,
                                const VarSizeBudget& vs_budget = {},
                                const OracleBudget& gc_budget = {
                                    .max_trace_len = 64,
                                    .max_capacity = 16,
                                    .max_block_size = 8,
                                });

}  // namespace gcsim
