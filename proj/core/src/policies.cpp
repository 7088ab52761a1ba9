#include "gcsim/policies.hpp"

#include <algorithm>
#include <charconv>

#include "gcsim/errors.hpp"

namespace gcsim {
namespace {

std::vector<ItemId> sorted(std::vector<ItemId> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// Equiprobable n-subset of a sorted candidate list, returned sorted.
std::vector<ItemId> sample_subset(std::vector<ItemId> candidates,
                                  std::size_t n, std::mt19937_64& rng) {
  if (n >= candidates.size()) return candidates;
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, candidates.size() - 1);
    std::swap(candidates[i], candidates[pick(rng)]);
  }
  candidates.resize(n);
  std::sort(candidates.begin(), candidates.end());
  return candidates;
}

}  // namespace

// ---------------------------------------------------------------- ItemLru

ItemLru::ItemLru(std::size_t capacity, const BlockMap& map)
    : capacity_(capacity), map_(&map) {
  if (capacity_ < 1) throw ConfigError("item-lru needs capacity >= 1");
}

StepResult ItemLru::on_access(const ItemId& item, std::size_t position) {
  if (auto it = where_.find(item); it != where_.end()) {
    lru_.splice(lru_.begin(), lru_, it->second);
    return {};
  }
  LoadOp op;
  op.at_access = position;
  op.loaded = {item};
  if (lru_.size() == capacity_) {
    ItemId victim = lru_.back();
    op.evicted = {victim};
    where_.erase(victim);
    lru_.pop_back();
  }
  lru_.push_front(item);
  where_[item] = lru_.begin();
  StepResult step;
  step.load = std::move(op);
  return step;
}

std::vector<ItemId> ItemLru::contents() const {
  return sorted({lru_.begin(), lru_.end()});
}

std::unique_ptr<Policy> ItemLru::clone() const {
  auto copy = std::make_unique<ItemLru>(capacity_, *map_);
  copy->lru_ = lru_;
  for (auto it = copy->lru_.begin(); it != copy->lru_.end(); ++it)
    copy->where_[*it] = it;
  return copy;
}

// --------------------------------------------------------------- BlockLru

BlockLru::BlockLru(std::size_t capacity, const BlockMap& map)
    : capacity_(capacity), map_(&map) {
  if (capacity_ < map.max_block_size)
    throw ConfigError("block-lru needs capacity >= B");
}

StepResult BlockLru::on_access(const ItemId& item, std::size_t position) {
  if (auto it = where_.find(item.block); it != where_.end()) {
    lru_.splice(lru_.begin(), lru_, it->second);
    return {};
  }
  std::size_t incoming = map_->block_size(item.block);
  LoadOp op;
  op.at_access = position;
  op.loaded = map_->block_items(item.block);
  while (resident_items_ + incoming > capacity_) {
    std::uint32_t victim = lru_.back();
    for (const auto& v : map_->block_items(victim)) op.evicted.push_back(v);
    resident_items_ -= map_->block_size(victim);
    where_.erase(victim);
    lru_.pop_back();
  }
  lru_.push_front(item.block);
  where_[item.block] = lru_.begin();
  resident_items_ += incoming;
  std::sort(op.evicted.begin(), op.evicted.end());
  StepResult step;
  step.load = std::move(op);
  return step;
}

std::vector<ItemId> BlockLru::contents() const {
  std::vector<ItemId> out;
  out.reserve(resident_items_);
  for (std::uint32_t block : lru_)
    for (const auto& item : map_->block_items(block)) out.push_back(item);
  return sorted(std::move(out));
}

std::unique_ptr<Policy> BlockLru::clone() const {
  auto copy = std::make_unique<BlockLru>(capacity_, *map_);
  copy->lru_ = lru_;
  copy->resident_items_ = resident_items_;
  for (auto it = copy->lru_.begin(); it != copy->lru_.end(); ++it)
    copy->where_[*it] = it;
  return copy;
}

// ------------------------------------------------------------------- Iblp

Iblp::Iblp(IblpConfig config, const BlockMap& map)
    : config_(config), map_(&map) {
  if (config_.elem_size + config_.block_size_part < 1)
    throw ConfigError("iblp needs a nonempty partition");
  if (config_.block_size_part % map.max_block_size != 0)
    throw ConfigError("iblp block partition must be a multiple of B");
}

std::string Iblp::name() const {
  return "iblp:" + std::to_string(config_.elem_size) + "," +
         std::to_string(config_.block_size_part);
}

bool Iblp::element_probe(const ItemId& item) {
  if (config_.elem_size == 0) return false;
  auto it = elem_where_.find(item);
  if (it == elem_where_.end()) return false;
  elem_lru_.splice(elem_lru_.begin(), elem_lru_, it->second);
  return true;
}

bool Iblp::block_probe(const ItemId& item) {
  if (config_.block_size_part == 0) return false;
  auto it = block_where_.find(item.block);
  if (it == block_where_.end()) return false;
  block_lru_.splice(block_lru_.begin(), block_lru_, it->second);
  return true;
}

StepResult Iblp::on_access(const ItemId& item, std::size_t position) {
  if (element_probe(item)) return {};  // front layer hit, back layer untouched

  bool back_hit = block_probe(item);

  // The element partition behaves as a standalone item-granularity LRU: it
  // inserts on each of its misses, whether the access hits the block layer
  // or misses outright.
  std::optional<ItemId> elem_victim;
  if (config_.elem_size > 0) {
    if (elem_lru_.size() == config_.elem_size) {
      elem_victim = elem_lru_.back();
      elem_where_.erase(*elem_victim);
      elem_lru_.pop_back();
    }
    elem_lru_.push_front(item);
    elem_where_[item] = elem_lru_.begin();
  }

  if (back_hit) {
    StepResult step;
    if (elem_victim && !block_where_.contains(elem_victim->block))
      step.hit_evictions = {*elem_victim};  // promotion pushed it out entirely
    return step;
  }

  // Overall miss: the whole block enters the block partition and the
  // requested item enters the element partition.
  LoadOp op;
  op.at_access = position;
  std::vector<ItemId> gone;
  if (config_.block_size_part > 0) {
    op.loaded = map_->block_items(item.block);
    std::size_t incoming = map_->block_size(item.block);
    while (block_resident_items_ + incoming > config_.block_size_part) {
      std::uint32_t victim = block_lru_.back();
      for (const auto& v : map_->block_items(victim)) gone.push_back(v);
      block_resident_items_ -= map_->block_size(victim);
      block_where_.erase(victim);
      block_lru_.pop_back();
    }
    block_lru_.push_front(item.block);
    block_where_[item.block] = block_lru_.begin();
    block_resident_items_ += incoming;
  } else {
    op.loaded = {item};
  }
  if (elem_victim) gone.push_back(*elem_victim);

  // Partition-level victims leave the cache only if the other layer does
  // not still hold them.
  for (const auto& v : sorted(std::move(gone))) {
    if (!op.evicted.empty() && op.evicted.back() == v) continue;
    if (block_where_.contains(v.block)) continue;
    if (elem_where_.contains(v)) continue;
    op.evicted.push_back(v);
  }
  StepResult step;
  step.load = std::move(op);
  return step;
}

std::vector<ItemId> Iblp::contents() const {
  std::vector<ItemId> out(elem_lru_.begin(), elem_lru_.end());
  for (std::uint32_t block : block_lru_)
    for (const auto& item : map_->block_items(block)) out.push_back(item);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<ItemId> Iblp::element_contents() const {
  return sorted({elem_lru_.begin(), elem_lru_.end()});
}

std::vector<ItemId> Iblp::block_contents() const {
  std::vector<ItemId> out;
  for (std::uint32_t block : block_lru_)
    for (const auto& item : map_->block_items(block)) out.push_back(item);
  return sorted(std::move(out));
}

std::unique_ptr<Policy> Iblp::clone() const {
  auto copy = std::make_unique<Iblp>(config_, *map_);
  copy->elem_lru_ = elem_lru_;
  for (auto it = copy->elem_lru_.begin(); it != copy->elem_lru_.end(); ++it)
    copy->elem_where_[*it] = it;
  copy->block_lru_ = block_lru_;
  copy->block_resident_items_ = block_resident_items_;
  for (auto it = copy->block_lru_.begin(); it != copy->block_lru_.end(); ++it)
    copy->block_where_[*it] = it;
  return copy;
}

// -------------------------------------------------------------- GcMarking

GcMarking::GcMarking(std::size_t capacity, const BlockMap& map,
                     std::uint64_t seed)
    : capacity_(capacity), map_(&map), seed_(seed), rng_(seed) {
  if (capacity_ < map.max_block_size)
    throw ConfigError("gc-marking needs capacity >= B");
}

std::string GcMarking::name() const {
  return "gc-marking:" + std::to_string(seed_);
}

StepResult GcMarking::on_access(const ItemId& item, std::size_t position) {
  if (resident_.contains(item)) {
    marked_.insert(item);
    return {};
  }

  std::vector<ItemId> incoming;
  for (const auto& candidate : map_->block_items(item.block))
    if (!resident_.contains(candidate)) incoming.push_back(candidate);

  std::size_t free_slots = capacity_ - resident_.size();
  std::vector<ItemId> unmarked;
  for (const auto& r : resident_)
    if (!marked_.contains(r)) unmarked.push_back(r);

  // An eviction is unavoidable and every resident is marked: clear marks.
  if (free_slots == 0 && unmarked.empty()) {
    marked_.clear();
    unmarked.assign(resident_.begin(), resident_.end());
  }

  // Load as much of the block as free plus unmarked space allows; marked
  // items are never displaced by spatial-only neighbors.
  std::size_t room = free_slots + unmarked.size();
  std::size_t n_load = std::min(incoming.size(), room);

  LoadOp op;
  op.at_access = position;
  std::vector<ItemId> others;
  for (const auto& cand : incoming)
    if (cand != item) others.push_back(cand);
  op.loaded = sample_subset(std::move(others), n_load - 1, rng_);
  op.loaded.push_back(item);
  std::sort(op.loaded.begin(), op.loaded.end());

  std::size_t need = n_load > free_slots ? n_load - free_slots : 0;
  op.evicted = sample_subset(std::move(unmarked), need, rng_);

  for (const auto& v : op.evicted) {
    resident_.erase(v);
    marked_.erase(v);
  }
  for (const auto& l : op.loaded) resident_.insert(l);
  marked_.insert(item);
  StepResult step;
  step.load = std::move(op);
  return step;
}

std::vector<ItemId> GcMarking::contents() const {
  return {resident_.begin(), resident_.end()};
}

std::vector<ItemId> GcMarking::marked_contents() const {
  return {marked_.begin(), marked_.end()};
}

std::unique_ptr<Policy> GcMarking::clone() const {
  auto copy = std::make_unique<GcMarking>(capacity_, *map_, seed_);
  copy->resident_ = resident_;
  copy->marked_ = marked_;
  copy->rng_ = rng_;
  return copy;
}

// ------------------------------------------------------------ make_policy

std::vector<std::string> policy_specs() {
  return {"item-lru", "block-lru", "iblp:<elem>,<blockpart>",
          "gc-marking:<seed>"};
}

std::unique_ptr<Policy> make_policy(const std::string& spec,
                                    std::size_t capacity,
                                    const BlockMap& map) {
  auto usage = [&](const std::string& why) {
    std::string msg = why + "; supported policies:";
    for (const auto& s : policy_specs()) msg += " " + s;
    return UsageError(msg);
  };
  auto parse_ull = [&](const std::string& text) {
    unsigned long long v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || p != text.data() + text.size())
      throw usage("bad number '" + text + "' in policy '" + spec + "'");
    return v;
  };

  if (spec == "item-lru") return std::make_unique<ItemLru>(capacity, map);
  if (spec == "block-lru") return std::make_unique<BlockLru>(capacity, map);
  if (spec.starts_with("iblp:")) {
    std::string args = spec.substr(5);
    auto comma = args.find(',');
    if (comma == std::string::npos)
      throw usage("policy '" + spec + "' needs iblp:<elem>,<blockpart>");
    IblpConfig config;
    config.elem_size = parse_ull(args.substr(0, comma));
    config.block_size_part = parse_ull(args.substr(comma + 1));
    if (config.elem_size + config.block_size_part != capacity)
      throw ConfigError("iblp partitions must sum to the cache capacity");
    return std::make_unique<Iblp>(config, map);
  }
  if (spec.starts_with("gc-marking:")) {
    std::uint64_t seed = parse_ull(spec.substr(11));
    return std::make_unique<GcMarking>(capacity, map, seed);
  }
  throw usage("unknown policy '" + spec + "'");
}

}  // namespace gcsim
