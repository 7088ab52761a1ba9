#pragma once

#include <cstdint>
#include <list>
#include <memory>
#include <random>
#include <set>
#include <unordered_map>
#include <vector>

#include "gcsim/simulate.hpp"
#include "gcsim/types.hpp"

namespace gcsim {

// Loads only the requested item; evicts the least-recently-used item.
class ItemLru final : public Policy {
 public:
  ItemLru(std::size_t capacity, const BlockMap& map);

  StepResult on_access(const ItemId& item, std::size_t position) override;
  std::vector<ItemId> contents() const override;
  std::size_t capacity() const override { return capacity_; }
  std::unique_ptr<Policy> clone() const override;
  std::string name() const override { return "item-lru"; }

 private:
  std::size_t capacity_;
  const BlockMap* map_;
  std::list<ItemId> lru_;  // front = most recent
  std::unordered_map<ItemId, std::list<ItemId>::iterator> where_;
};

// Loads and evicts whole blocks; block recency refreshed by every access
// to any of the block's items.
class BlockLru final : public Policy {
 public:
  BlockLru(std::size_t capacity, const BlockMap& map);

  StepResult on_access(const ItemId& item, std::size_t position) override;
  std::vector<ItemId> contents() const override;
  std::size_t capacity() const override { return capacity_; }
  std::unique_ptr<Policy> clone() const override;
  std::string name() const override { return "block-lru"; }

 private:
  std::size_t capacity_;
  const BlockMap* map_;
  std::size_t resident_items_ = 0;
  std::list<std::uint32_t> lru_;  // block ids, front = most recent
  std::unordered_map<std::uint32_t, std::list<std::uint32_t>::iterator> where_;
};

struct IblpConfig {
  std::size_t elem_size = 0;        // item-granularity layer
  std::size_t block_size_part = 0;  // block-granularity layer, multiple of B
};

// Item-granularity LRU layer in front of a block-granularity LRU layer.
// The element partition serves every access; the block partition only sees
// accesses that miss in the element partition, so hot items cannot reorder
// its LRU list. Layers are neither inclusive nor exclusive of each other.
class Iblp final : public Policy {
 public:
  Iblp(IblpConfig config, const BlockMap& map);

  StepResult on_access(const ItemId& item, std::size_t position) override;
  std::vector<ItemId> contents() const override;
  std::size_t capacity() const override {
    return config_.elem_size + config_.block_size_part;
  }
  std::unique_ptr<Policy> clone() const override;
  std::string name() const override;

  const IblpConfig& config() const { return config_; }
  std::vector<ItemId> element_contents() const;
  std::vector<ItemId> block_contents() const;

 private:
  bool element_probe(const ItemId& item);  // hit test + recency/insert
  bool block_probe(const ItemId& item);    // hit test + recency on miss path

  IblpConfig config_;
  const BlockMap* map_;
  std::list<ItemId> elem_lru_;
  std::unordered_map<ItemId, std::list<ItemId>::iterator> elem_where_;
  std::size_t block_resident_items_ = 0;
  std::list<std::uint32_t> block_lru_;
  std::unordered_map<std::uint32_t, std::list<std::uint32_t>::iterator>
      block_where_;
};

// Randomized marking adapted to block granularity: a miss pulls in as much
// of the accessed block as unmarked space allows, marking only the request.
class GcMarking final : public Policy {
 public:
  GcMarking(std::size_t capacity, const BlockMap& map, std::uint64_t seed);

  StepResult on_access(const ItemId& item, std::size_t position) override;
  std::vector<ItemId> contents() const override;
  std::size_t capacity() const override { return capacity_; }
  std::unique_ptr<Policy> clone() const override;
  std::string name() const override;

  std::vector<ItemId> marked_contents() const;

 private:
  std::size_t capacity_;
  const BlockMap* map_;
  std::uint64_t seed_;
  std::set<ItemId> resident_;
  std::set<ItemId> marked_;
  std::mt19937_64 rng_;
};

// Builds a policy from a CLI selection string:
//   item-lru | block-lru | iblp:<elem>,<blockpart> | gc-marking:<seed>
// Throws ConfigError for a known policy with bad parameters and ParseError
// for an unknown policy name.
std::unique_ptr<Policy> make_policy(const std::string& spec,
                                    std::size_t capacity, const BlockMap& map);

// Supported selection strings, for usage messages.
std::vector<std::string> policy_specs();

}  // namespace gcsim
