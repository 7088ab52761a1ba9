#include "gcsim/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "gcsim/bounds.hpp"
#include "gcsim/errors.hpp"
#include "gcsim/policies.hpp"

namespace gcsim {
namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

// Shared state for the competitive constructions: the minted block map, the
// online policy under adaptive attack, and the offline schedule being
// certified at size h.
class Construction {
 public:
  Construction(const std::string& policy_spec, std::size_t k, std::size_t h,
               std::uint32_t B)
      : h_(h), block_size_(B) {
    out_.map.max_block_size = B;
    out_.policy_spec = policy_spec;
    out_.online_capacity = k;
    out_.opt_capacity = h;
    policy_ = make_policy(policy_spec, k, out_.map);
  }

  std::uint32_t mint(std::uint32_t size) {
    std::uint32_t id = next_block_++;
    out_.map.blocks[id] = size;
    for (std::uint32_t i = 0; i < size; ++i) upcoming_.push_back({id, i});
    return id;
  }

  void ensure_upcoming(std::size_t n) {
    while (upcoming_.size() < n) mint(block_size_);
  }

  std::vector<ItemId> peek_upcoming(std::size_t n) {
    ensure_upcoming(n);
    return {upcoming_.begin(), upcoming_.begin() + static_cast<long>(n)};
  }

  void consume_upcoming(std::size_t n) {
    upcoming_.erase(upcoming_.begin(),
                    upcoming_.begin() + static_cast<long>(n));
  }

  std::vector<ItemId> block_items(std::uint32_t block) const {
    return out_.map.block_items(block);
  }

  // Feeds one access to the online policy; returns whether it missed.
  bool emit(const ItemId& item) {
    StepResult step = policy_->on_access(item, out_.trace.size());
    out_.trace.accesses.push_back(item);
    bool miss = !step.hit();
    if (miss) ++out_.claimed_online_misses;
    return miss;
  }

  // Adds one offline LoadOp, evicting lexicographically smallest residents
  // outside `needed` down to capacity h.
  void opt_load(const std::vector<ItemId>& loaded,
                const std::set<ItemId>& needed) {
    LoadOp op;
    op.at_access = out_.trace.size();
    op.loaded = loaded;
    std::size_t incoming = 0;
    for (const auto& it : loaded)
      if (!ropt_.contains(it)) ++incoming;
    std::size_t over =
        ropt_.size() + incoming > h_ ? ropt_.size() + incoming - h_ : 0;
    for (auto it = ropt_.begin(); over > 0 && it != ropt_.end();) {
      if (!needed.contains(*it)) {
        op.evicted.push_back(*it);
        it = ropt_.erase(it);
        --over;
      } else {
        ++it;
      }
    }
    if (over > 0)
      throw ConstructionFailure("offline eviction infeasible at position " +
                                std::to_string(out_.trace.size()));
    for (const auto& it : loaded) ropt_.insert(it);
    loaded_blocks_.insert(loaded.front().block);
    out_.schedule.ops.push_back(std::move(op));
  }

  bool block_loaded(std::uint32_t block) const {
    return loaded_blocks_.contains(block);
  }

  struct RunTally {
    std::size_t opt_misses = 0;
    std::size_t online_misses = 0;
  };

  // Emits a run of never-accessed items; the offline cache loads each whole
  // block at its first access, retaining `pinned` plus any still-queued
  // items of already-loaded blocks.
  RunTally emit_fresh_run(const std::vector<ItemId>& items,
                          const std::set<ItemId>& pinned) {
    RunTally tally;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (!block_loaded(items[i].block)) {
        std::set<ItemId> needed = pinned;
        for (std::size_t j = i + 1; j < items.size(); ++j)
          needed.insert(items[j]);
        for (const auto& queued : upcoming_)
          if (block_loaded(queued.block) || queued.block == items[i].block)
            needed.insert(queued);
        opt_load(block_items(items[i].block), needed);
        ++tally.opt_misses;
      }
      if (emit(items[i])) ++tally.online_misses;
    }
    return tally;
  }

  static std::optional<ItemId> first_absent(
      const std::vector<ItemId>& pool, const std::vector<ItemId>& contents) {
    for (const auto& item : pool)
      if (!std::binary_search(contents.begin(), contents.end(), item))
        return item;
    return std::nullopt;
  }

  std::vector<ItemId> pool_with(const std::vector<ItemId>& extra) const {
    std::vector<ItemId> pool(ropt_.begin(), ropt_.end());
    pool.insert(pool.end(), extra.begin(), extra.end());
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    return pool;
  }

  void assert_resident(const ItemId& item, const char* what) const {
    if (!ropt_.contains(item))
      throw ConstructionFailure(std::string(what) +
                                ": item not offline-resident");
  }

  void record_f(std::uint32_t f) { out_.f_per_block.push_back(f); }
  void mark_nonuniform_f() { out_.nonuniform_f = true; }

  Policy& policy() { return *policy_; }
  const std::set<ItemId>& ropt() const { return ropt_; }
  const std::deque<ItemId>& upcoming() const { return upcoming_; }

  AdversaryOutput take_output() {
    out_.schedule.claimed_cost = out_.schedule.ops.size();
    return std::move(out_);
  }

 private:
  std::size_t h_;
  std::uint32_t block_size_;
  std::uint32_t next_block_ = 0;
  AdversaryOutput out_;
  std::unique_ptr<Policy> policy_;
  std::deque<ItemId> upcoming_;
  std::set<ItemId> ropt_;
  std::set<std::uint32_t> loaded_blocks_;
};

// Accesses block items the online policy has not yet loaded, smallest
// first, until the whole block has been loaded. Returns the touched items
// in access order; their count is the policy's F for this block.
std::vector<ItemId> drain_block(Policy& policy, std::uint32_t block,
                                std::uint32_t block_size, std::size_t& pos) {
  std::vector<ItemId> touched;
  std::set<ItemId> loaded_ever;
  while (true) {
    std::optional<ItemId> next;
    for (std::uint32_t idx = 0; idx < block_size; ++idx) {
      ItemId cand{block, idx};
      if (!loaded_ever.contains(cand)) {
        next = cand;
        break;
      }
    }
    if (!next) break;
    StepResult step = policy.on_access(*next, pos++);
    touched.push_back(*next);
    loaded_ever.insert(*next);
    if (!step.hit())
      for (const auto& l : step.load->loaded)
        if (l.block == block) loaded_ever.insert(l);
  }
  return touched;
}

}  // namespace

AdversaryOutput gen_item_adversary(const std::string& policy_spec,
                                   std::size_t k, std::size_t h,
                                   std::uint32_t B, std::size_t cycles) {
  if (B < 1 || h <= B || k <= h)
    throw DomainError("gen_item_adversary needs k > h > B >= 1");
  if (cycles < 1) throw DomainError("gen_item_adversary needs cycles >= 1");

  Construction c(policy_spec, k, h, B);

  // Warm-up: fill both caches with whole fresh blocks (block-aligned).
  {
    std::size_t n = ceil_div(k, B) * B;
    std::vector<ItemId> items = c.peek_upcoming(n);
    c.consume_upcoming(n);
    c.emit_fresh_run(items, {});
  }

  std::size_t steady_online = 0, steady_opt = 0;
  for (std::size_t cycle = 1; cycle <= cycles; ++cycle) {
    std::size_t n2 = k - h + 1;
    std::vector<ItemId> step2 = c.peek_upcoming(n2);

    // Decide the adaptive accesses against a lookahead clone.
    auto sim = c.policy().clone();
    std::size_t simpos = 0;
    for (const auto& it : step2) sim->on_access(it, simpos++);
    std::vector<ItemId> pool = c.pool_with(step2);
    std::vector<ItemId> picks;
    for (std::size_t j = 0; j < h - B; ++j) {
      auto pick = Construction::first_absent(pool, sim->contents());
      if (!pick)
        throw ConstructionFailure(
            "gen_item_adversary: every pool item online-resident (cycle " +
            std::to_string(cycle) + ", pick " + std::to_string(j + 1) + ")");
      picks.push_back(*pick);
      sim->on_access(*pick, simpos++);
    }

    // Commit the cycle.
    c.consume_upcoming(n2);
    std::set<ItemId> pinned(picks.begin(), picks.end());
    auto tally = c.emit_fresh_run(step2, pinned);
    std::size_t online = tally.online_misses;
    for (const auto& p : picks) {
      c.assert_resident(p, "gen_item_adversary pick");
      if (!c.emit(p))
        throw ConstructionFailure(
            "gen_item_adversary: pick unexpectedly hit online cache");
      ++online;
    }
    // Consume the loaded-but-unaccessed tail of the final partial block as
    // extra adaptive accesses, realigning the stream to a block boundary.
    // Against a prefetching target these may hit; that only lowers the
    // measured ratio.
    while (!c.upcoming().empty() &&
           c.block_loaded(c.upcoming().front().block)) {
      ItemId tail = c.upcoming().front();
      c.consume_upcoming(1);
      c.assert_resident(tail, "gen_item_adversary carried item");
      if (c.emit(tail)) ++online;
    }
    steady_online += online;
    steady_opt += tally.opt_misses;
  }

  AdversaryOutput result = c.take_output();
  result.cycles = cycles;
  result.steady_online_misses = steady_online;
  result.steady_opt_misses = steady_opt;
  result.formula_value =
      bounds::lb_item(static_cast<long long>(k), static_cast<long long>(h), B)
          .value();
  return result;
}

AdversaryOutput gen_block_adversary(const std::string& policy_spec,
                                    std::size_t k, std::size_t h,
                                    std::uint32_t B, std::size_t cycles) {
  if (B < 1 || h < 1 || k % B != 0)
    throw DomainError("gen_block_adversary needs B | k and h >= 1; nearest valid k: " +
                      std::to_string(k < B ? B : k - k % B));
  if (k <= B * (h - 1))
    throw DomainError(
        "gen_block_adversary: k <= B(h-1), block-policy ratio unbounded");
  if (k / B < h) throw DomainError("gen_block_adversary needs k/B >= h");
  if (cycles < 1) throw DomainError("gen_block_adversary needs cycles >= 1");

  Construction c(policy_spec, k, h, B);

  // Warm-up: one item from each of k/B fresh blocks.
  for (std::size_t i = 0; i < k / B; ++i) {
    ItemId item{c.mint(B), 0};
    c.consume_upcoming(B);  // only the first item is ever accessed
    c.opt_load({item}, {});
    c.emit(item);
  }

  std::size_t steady_online = 0, steady_opt = 0;
  for (std::size_t cycle = 1; cycle <= cycles; ++cycle) {
    std::size_t nblocks = k / B - h + 1;
    std::vector<ItemId> step2;
    for (std::size_t i = 0; i < nblocks; ++i) {
      step2.push_back({c.mint(B), 0});
      c.consume_upcoming(B);
    }

    auto sim = c.policy().clone();
    std::size_t simpos = 0;
    for (const auto& it : step2) sim->on_access(it, simpos++);
    std::vector<ItemId> pool = c.pool_with(step2);
    std::vector<ItemId> picks;
    for (std::size_t j = 0; j + 1 < h; ++j) {
      auto pick = Construction::first_absent(pool, sim->contents());
      if (!pick)
        throw ConstructionFailure(
            "gen_block_adversary: every pool item online-resident (cycle " +
            std::to_string(cycle) + ", pick " + std::to_string(j + 1) + ")");
      picks.push_back(*pick);
      sim->on_access(*pick, simpos++);
    }

    std::set<ItemId> pinned(picks.begin(), picks.end());
    std::size_t online = 0;
    for (const auto& it : step2) {
      c.opt_load({it}, pinned);
      if (c.emit(it)) ++online;
    }
    for (const auto& p : picks) {
      c.assert_resident(p, "gen_block_adversary pick");
      if (c.emit(p)) ++online;
    }
    steady_online += online;
    steady_opt += nblocks;
  }

  AdversaryOutput result = c.take_output();
  result.cycles = cycles;
  result.steady_online_misses = steady_online;
  result.steady_opt_misses = steady_opt;
  auto formula =
      bounds::lb_block(static_cast<long long>(k), static_cast<long long>(h), B);
  result.formula_value = formula ? formula->value() : 0.0;
  return result;
}

AdversaryOutput gen_general_adversary(const std::string& policy_spec,
                                      std::size_t k, std::size_t h,
                                      std::uint32_t B, std::size_t cycles) {
  if (B < 1 || k <= h || h < 1)
    throw DomainError("gen_general_adversary needs k > h >= 1");
  if ((k - h + 1) % B != 0) {
    std::size_t rem = (k - h + 1) % B;  // h+rem makes k-h+1 divisible
    std::string nearby = std::to_string(h + rem);
    if (h + rem > B) nearby += " or " + std::to_string(h + rem - B);
    throw DomainError(
        "gen_general_adversary needs B | (k-h+1); nearest valid h: " + nearby);
  }
  if (cycles < 1) throw DomainError("gen_general_adversary needs cycles >= 1");

  Construction c(policy_spec, k, h, B);

  // Warm-up: drain ceil(k/B) fresh blocks.
  for (std::size_t i = 0; i < ceil_div(k, B); ++i) {
    std::uint32_t id = c.mint(B);
    c.consume_upcoming(B);
    auto sim = c.policy().clone();
    std::size_t simpos = 0;
    std::vector<ItemId> touched = drain_block(*sim, id, B, simpos);
    c.opt_load(touched, {});
    for (const auto& t : touched) c.emit(t);
  }

  std::size_t steady_online = 0, steady_opt = 0;
  for (std::size_t cycle = 1; cycle <= cycles; ++cycle) {
    std::size_t nblocks = (k - h + 1) / B;

    // Full-cycle lookahead on a clone: learn each block's touched set, the
    // per-block F, and the adaptive picks.
    auto sim = c.policy().clone();
    std::size_t simpos = 0;
    std::vector<std::vector<ItemId>> touched_sets;
    std::vector<ItemId> all_block_items;
    for (std::size_t b = 0; b < nblocks; ++b) {
      std::uint32_t id = c.mint(B);
      c.consume_upcoming(B);
      for (std::uint32_t idx = 0; idx < B; ++idx)
        all_block_items.push_back({id, idx});
      touched_sets.push_back(drain_block(*sim, id, B, simpos));
    }

    std::uint32_t f_max = 0;
    std::uint32_t f_min = B + 1;
    for (const auto& t : touched_sets) {
      auto f = static_cast<std::uint32_t>(t.size());
      f_max = std::max(f_max, f);
      f_min = std::min(f_min, f);
      c.record_f(f);
    }
    if (f_min != f_max) c.mark_nonuniform_f();
    if (f_max >= h)
      throw ConstructionFailure(
          "gen_general_adversary: measured F >= h in cycle " +
          std::to_string(cycle));

    {
      // The described step-3 candidate set has exactly k+1 items.
      std::set<ItemId> described(all_block_items.begin(),
                                 all_block_items.end());
      described.insert(c.ropt().begin(), c.ropt().end());
      if (described.size() != k + 1)
        throw ConstructionFailure(
            "gen_general_adversary: candidate set is not k+1 items");
    }

    // Picks come from what the offline cache actually holds: its residents
    // plus the touched items it loads this cycle.
    std::vector<ItemId> touched_flat;
    for (const auto& t : touched_sets)
      touched_flat.insert(touched_flat.end(), t.begin(), t.end());
    std::vector<ItemId> pool = c.pool_with(touched_flat);
    std::vector<ItemId> picks;
    for (std::size_t j = 0; j + f_max < h; ++j) {
      auto pick = Construction::first_absent(pool, sim->contents());
      if (!pick)
        throw ConstructionFailure(
            "gen_general_adversary: every pool item online-resident (cycle " +
            std::to_string(cycle) + ", pick " + std::to_string(j + 1) + ")");
      picks.push_back(*pick);
      sim->on_access(*pick, simpos++);
    }

    // Commit.
    std::set<ItemId> pinned(picks.begin(), picks.end());
    std::size_t online = 0;
    for (const auto& touched : touched_sets) {
      std::set<ItemId> needed = pinned;
      for (const auto& t : touched) needed.insert(t);
      c.opt_load(touched, needed);
      for (const auto& t : touched)
        if (c.emit(t)) ++online;
    }
    for (const auto& p : picks) {
      c.assert_resident(p, "gen_general_adversary pick");
      if (c.emit(p)) ++online;
    }
    steady_online += online;
    steady_opt += nblocks;
  }

  AdversaryOutput result = c.take_output();
  result.cycles = cycles;
  result.steady_online_misses = steady_online;
  result.steady_opt_misses = steady_opt;
  std::uint32_t f_rep =
      result.f_per_block.empty()
          ? 1
          : *std::max_element(result.f_per_block.begin(),
                              result.f_per_block.end());
  result.formula_value =
      bounds::lb_general(static_cast<long long>(k), static_cast<long long>(h),
                         B, f_rep)
          .value();
  return result;
}

LocalityAdversaryOutput gen_locality_adversary(
    const std::string& policy_spec, std::size_t k,
    const std::function<double(double)>& f_inverse,
    const std::function<double(double)>& g, const BlockMap& map,
    std::size_t phases) {
  if (k < 2) throw DomainError("gen_locality_adversary needs k >= 2");
  if (phases < 1)
    throw DomainError("gen_locality_adversary needs phases >= 1");

  auto fi = [&](std::size_t m) {
    return static_cast<long long>(
        std::llround(f_inverse(static_cast<double>(m))));
  };
  long long p = fi(k + 1) - 2;
  if (p < static_cast<long long>(k))
    throw DomainError(
        "gen_locality_adversary: phase too short, f^-1(k+1)-2 < k");

  // Repetition start offsets (1-based within a phase); segment 0 opens it.
  std::vector<long long> starts{1};
  for (std::size_t j = 1; j <= k - 1; ++j) starts.push_back(fi(j + 1) - 1);
  for (std::size_t j = 1; j < starts.size(); ++j)
    if (starts[j] <= starts[j - 1])
      throw DomainError(
          "gen_locality_adversary: repetition starts not strictly increasing");
  if (starts.back() > p)
    throw DomainError(
        "gen_locality_adversary: last repetition starts past phase end");

  long long g_budget =
      static_cast<long long>(std::floor(g(static_cast<double>(p)) + 1e-9));
  if (g_budget < 1) throw DomainError("gen_locality_adversary: g(p) below 1");

  // Pool: k+1 items packed into as few blocks as possible.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> by_size(
      map.blocks.begin(), map.blocks.end());
  std::sort(by_size.begin(), by_size.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::vector<ItemId> pool;
  std::size_t pool_blocks = 0;
  std::size_t blocks_for_phase = 0;  // fewest blocks covering k items
  for (const auto& [id, count] : by_size) {
    if (pool.size() >= k + 1) break;
    ++pool_blocks;
    if (pool.size() < k) ++blocks_for_phase;
    for (std::uint32_t i = 0; i < count && pool.size() < k + 1; ++i)
      pool.push_back({id, i});
  }
  if (pool.size() < k + 1)
    throw DomainError("gen_locality_adversary: map has fewer than k+1 items");
  // A phase touches k distinct items; they must fit within the per-window
  // block budget g(p).
  if (blocks_for_phase > static_cast<std::size_t>(g_budget))
    throw ConstructionFailure(
        "gen_locality_adversary: a phase's k items do not fit in g(p) blocks");
  std::sort(pool.begin(), pool.end());

  LocalityAdversaryOutput out;
  out.map = map;
  out.policy_spec = policy_spec;
  out.cache_size = k;
  out.phases = phases;
  out.phase_len = static_cast<std::size_t>(p);
  out.pool_items = k + 1;
  out.pool_blocks = pool_blocks;

  auto policy = make_policy(policy_spec, k, map);
  for (std::size_t phase = 0; phase < phases; ++phase) {
    std::set<ItemId> used_items;
    std::set<std::uint32_t> used_blocks;
    for (std::size_t seg = 0; seg < k; ++seg) {
      long long seg_len =
          (seg + 1 < k ? starts[seg + 1] : p + 1) - starts[seg];
      auto contents = policy->contents();
      std::optional<ItemId> choice;
      std::optional<ItemId> fallback;
      for (const auto& cand : pool) {
        if (used_items.contains(cand)) continue;
        bool budget_ok =
            used_blocks.contains(cand.block) ||
            used_blocks.size() < static_cast<std::size_t>(g_budget);
        if (!budget_ok) continue;
        if (!fallback) fallback = cand;
        if (!std::binary_search(contents.begin(), contents.end(), cand)) {
          choice = cand;
          break;
        }
      }
      if (!choice) {
        if (!fallback)
          throw ConstructionFailure(
              "gen_locality_adversary: no admissible item (phase " +
              std::to_string(phase + 1) + ", repetition " +
              std::to_string(seg) + ")");
        choice = fallback;
        ++out.nonadversarial_reps;
      }
      used_items.insert(*choice);
      used_blocks.insert(choice->block);
      for (long long i = 0; i < seg_len; ++i) {
        StepResult step = policy->on_access(*choice, out.trace.size());
        out.trace.accesses.push_back(*choice);
        if (!step.hit()) ++out.online_faults;
      }
    }
  }
  out.fault_rate = static_cast<double>(out.online_faults) /
                   static_cast<double>(out.trace.size());
  out.bound = bounds::fault_lb(static_cast<long long>(k), f_inverse, g);

  // Declared locality functions: the floor-inverse of f plus one (a window
  // straddling a repetition start holds one item beyond the inverse), both
  // capped by the pool.
  std::size_t pool_items = out.pool_items;
  auto declared_f = [f_inverse, pool_items](std::size_t n) {
    std::size_t m = 0;
    while (m < pool_items &&
           std::llround(f_inverse(static_cast<double>(m + 1))) <=
               static_cast<long long>(n))
      ++m;
    return static_cast<double>(std::min(pool_items, m + 1));
  };
  std::size_t pb = out.pool_blocks;
  auto g_fn = g;
  auto declared_g = [g_fn, declared_f, pb](std::size_t n) {
    double cap = std::floor(g_fn(static_cast<double>(n)) + 1e-9) + 1.0;
    return std::min({static_cast<double>(pb), declared_f(n), cap});
  };
  out.declared_f = declared_f;
  out.declared_g = declared_g;

  if (auto violation =
          validate_against(out.trace, out.map, out.declared_f, out.declared_g,
                           LocalityBudget{.all_mode_cap = 100000}))
    throw ConstructionFailure(
        "gen_locality_adversary: emitted trace violates declared " +
        violation->function + " at window " +
        std::to_string(violation->window));
  return out;
}

}  // namespace gcsim
