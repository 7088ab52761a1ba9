#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gcsim {

// One unit-size datum, identified by its block and position within it.
struct ItemId {
  std::uint32_t block = 0;
  std::uint32_t index = 0;

  friend auto operator<=>(const ItemId&, const ItemId&) = default;
};

std::string to_string(const ItemId& item);   // "block.index", e.g. "7.0"
ItemId parse_item(const std::string& text);  // inverse of to_string

// Partition of the item universe into blocks of up to max_block_size items.
struct BlockMap {
  std::uint32_t max_block_size = 1;                // B
  std::map<std::uint32_t, std::uint32_t> blocks;   // block id -> item count

  bool contains(const ItemId& item) const {
    auto it = blocks.find(item.block);
    return it != blocks.end() && item.index < it->second;
  }
  std::uint32_t block_size(std::uint32_t block) const {
    auto it = blocks.find(block);
    return it == blocks.end() ? 0 : it->second;
  }
  std::vector<ItemId> block_items(std::uint32_t block) const;
  std::size_t total_items() const;
};

// All invariant violations, empty when the map is well formed.
std::vector<std::string> validate_block_map(const BlockMap& map);

struct Trace {
  std::vector<ItemId> accesses;

  std::size_t size() const { return accesses.size(); }
};

// One unit-cost load: a subset of a single block plus an eviction set.
struct LoadOp {
  std::size_t at_access = 0;
  std::vector<ItemId> loaded;   // sorted, non-empty, single block, has request
  std::vector<ItemId> evicted;  // sorted, disjoint from loaded

  friend bool operator==(const LoadOp&, const LoadOp&) = default;
};

struct SimResult {
  std::size_t misses = 0;
  std::size_t hits = 0;
  std::size_t spatial_hits = 0;   // hits on items never requested before
  std::size_t temporal_hits = 0;  // hits - spatial_hits
  std::vector<std::optional<LoadOp>> per_access;  // nullopt marks a hit

  friend bool operator==(const SimResult&, const SimResult&) = default;
};

// A full per-access load plan claimed feasible for some cache size.
struct OfflineSchedule {
  std::vector<LoadOp> ops;  // strictly increasing at_access
  std::size_t claimed_cost = 0;
};

}  // namespace gcsim

template <>
struct std::hash<gcsim::ItemId> {
  std::size_t operator()(const gcsim::ItemId& it) const noexcept {
    return std::hash<std::uint64_t>{}(
        (static_cast<std::uint64_t>(it.block) << 32) | it.index);
  }
};
