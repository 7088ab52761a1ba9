#pragma once

#include <list>
#include <random>
#include <set>
#include <unordered_map>
#include <vector>

#include "gcsim/policies.hpp"
#include "gcsim/simulate.hpp"
#include "gcsim/types.hpp"

namespace gctest {

struct Instance {
  gcsim::BlockMap map;
  gcsim::Trace trace;
  std::size_t capacity = 1;
};

// Seeded random instance within the brute-force oracle budgets.
inline Instance random_instance(std::mt19937_64& rng, std::size_t max_trace,
                                std::uint32_t max_B, std::uint32_t max_blocks,
                                std::size_t max_k, bool force_k_ge_B = true) {
  Instance inst;
  inst.map.max_block_size =
      std::uniform_int_distribution<std::uint32_t>(1, max_B)(rng);
  auto nblocks =
      std::uniform_int_distribution<std::uint32_t>(1, max_blocks)(rng);
  for (std::uint32_t b = 0; b < nblocks; ++b)
    inst.map.blocks[b] = std::uniform_int_distribution<std::uint32_t>(
        1, inst.map.max_block_size)(rng);
  std::size_t kmin = force_k_ge_B ? inst.map.max_block_size : 1;
  inst.capacity = std::uniform_int_distribution<std::size_t>(
      kmin, std::max(kmin, max_k))(rng);
  std::vector<gcsim::ItemId> universe;
  for (const auto& [id, sz] : inst.map.blocks)
    for (std::uint32_t i = 0; i < sz; ++i) universe.push_back({id, i});
  auto len = std::uniform_int_distribution<std::size_t>(1, max_trace)(rng);
  std::uniform_int_distribution<std::size_t> pick(0, universe.size() - 1);
  for (std::size_t i = 0; i < len; ++i)
    inst.trace.accesses.push_back(universe[pick(rng)]);
  return inst;
}

// Independent classic LRU, for B=1 degeneracy checks. Deliberately written
// against std containers only, with no shared code with the policies.
inline std::size_t classic_lru_misses(const std::vector<gcsim::ItemId>& trace,
                                      std::size_t capacity) {
  std::list<gcsim::ItemId> order;  // front = most recent
  std::unordered_map<gcsim::ItemId, std::list<gcsim::ItemId>::iterator> pos;
  std::size_t misses = 0;
  for (const auto& x : trace) {
    auto it = pos.find(x);
    if (it != pos.end()) {
      order.splice(order.begin(), order, it->second);
      continue;
    }
    ++misses;
    if (order.size() == capacity) {
      pos.erase(order.back());
      order.pop_back();
    }
    order.push_front(x);
    pos[x] = order.begin();
  }
  return misses;
}

inline gcsim::SimResult run(const std::string& spec, const Instance& inst) {
  auto policy = gcsim::make_policy(spec, inst.capacity, inst.map);
  return gcsim::simulate(*policy, inst.trace, inst.map, inst.capacity);
}

inline gcsim::Trace make_trace(
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& items) {
  gcsim::Trace t;
  for (auto [b, i] : items) t.accesses.push_back({b, i});
  return t;
}

}  // namespace gctest
