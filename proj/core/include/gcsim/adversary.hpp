#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gcsim/locality.hpp"
#include "gcsim/simulate.hpp"
#include "gcsim/types.hpp"

namespace gcsim {

// Worst-case trace plus the offline schedule certifying the claimed optimal
// cost at cache size opt_capacity. Cycle 0 is a warm-up that fills both
// caches; the steady_* counters exclude it.
struct AdversaryOutput {
  Trace trace;
  BlockMap map;
  OfflineSchedule schedule;
  std::string policy_spec;
  std::size_t online_capacity = 0;  // k
  std::size_t opt_capacity = 0;     // h
  std::size_t cycles = 0;
  std::size_t claimed_online_misses = 0;  // whole trace, warm-up included
  std::size_t steady_online_misses = 0;
  std::size_t steady_opt_misses = 0;
  double formula_value = 0;
  std::vector<std::uint32_t> f_per_block;  // general construction only
  bool nonuniform_f = false;

  double measured_ratio() const {
    return steady_opt_misses == 0
               ? 0.0
               : static_cast<double>(steady_online_misses) /
                     static_cast<double>(steady_opt_misses);
  }
};

// Item-policy construction: whole fresh blocks until k-h+1 items are
// accessed, then h-B adaptive accesses to pool items absent from the online
// cache. When B does not divide k-h+1 the final block's unaccessed items
// are consumed as extra adaptive accesses, keeping cycles block-aligned.
AdversaryOutput gen_item_adversary(const std::string& policy_spec,
                                   std::size_t k, std::size_t h,
                                   std::uint32_t B, std::size_t cycles);

// Block-policy construction: one item from each of k/B - h + 1 fresh
// blocks, then h-1 adaptive accesses. Requires B | k and k >= B*h.
AdversaryOutput gen_block_adversary(const std::string& policy_spec,
                                    std::size_t k, std::size_t h,
                                    std::uint32_t B, std::size_t cycles);

// General construction: drains each fresh block while the online cache
// still has an unloaded item (measuring F per block), then h - max F
// adaptive accesses. Requires B | (k-h+1).
AdversaryOutput gen_general_adversary(const std::string& policy_spec,
                                      std::size_t k, std::size_t h,
                                      std::uint32_t B, std::size_t cycles);

// Fault-rate construction from the locality model.
struct LocalityAdversaryOutput {
  Trace trace;
  BlockMap map;
  std::string policy_spec;
  std::size_t cache_size = 0;  // k
  std::size_t phases = 0;
  std::size_t phase_len = 0;
  std::size_t online_faults = 0;
  std::size_t nonadversarial_reps = 0;  // g-budget fallback picks
  double fault_rate = 0;
  double bound = 0;            // fault_lb at the same functions
  std::size_t pool_items = 0;  // k + 1
  std::size_t pool_blocks = 0;
  std::function<double(std::size_t)> declared_f;
  std::function<double(std::size_t)> declared_g;
};

// Emits `phases` phases of length f^-1(k+1) - 2; repetition j starts at
// access f^-1(j+1) - 1 of its phase and repeatedly requests one item
// chosen, g-budget permitting, to be absent from the online cache. The
// emitted trace is validated against the declared locality functions
// before returning.
LocalityAdversaryOutput gen_locality_adversary(
    const std::string& policy_spec, std::size_t k,
    const std::function<double(double)>& f_inverse,
    const std::function<double(double)>& g, const BlockMap& map,
    std::size_t phases);

}  // namespace gcsim
