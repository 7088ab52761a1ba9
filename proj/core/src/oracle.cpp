#include "gcsim/oracle.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <limits>
#include <map>
#include <unordered_map>

#include "gcsim/errors.hpp"

namespace gcsim {
namespace {

using Mask = std::uint64_t;

struct StateKey {
  std::size_t pos;
  Mask mask;
  bool operator==(const StateKey&) const = default;
};

struct StateKeyHash {
  std::size_t operator()(const StateKey& k) const noexcept {
    return std::hash<std::uint64_t>{}(k.mask * 0x9e3779b97f4a7c15ULL ^ k.pos);
  }
};

struct Choice {
  std::size_t cost = std::numeric_limits<std::size_t>::max();
  Mask loaded = 0;
  Mask evicted = 0;
};

// Lexicographically ordered r-combinations of the set bits in `pool`.
void for_each_combination(const std::vector<int>& pool, std::size_t r,
                          std::size_t start, Mask acc,
                          const std::function<void(Mask)>& fn) {
  if (r == 0) {
    fn(acc);
    return;
  }
  for (std::size_t i = start; i + r <= pool.size(); ++i)
    for_each_combination(pool, r - 1, i + 1, acc | (Mask{1} << pool[i]), fn);
}

class GcSearch {
 public:
  GcSearch(const Trace& trace, const BlockMap& map, std::size_t capacity,
           const OracleBudget& budget, bool prune)
      : trace_(trace), capacity_(capacity), budget_(budget), prune_(prune) {
    // Dense indices over every item reachable from the trace: all items of
    // every accessed block (only those can ever be loaded).
    std::map<std::uint32_t, std::uint32_t> touched;
    for (const auto& a : trace.accesses) touched[a.block] = map.block_size(a.block);
    for (const auto& [block, count] : touched)
      for (std::uint32_t i = 0; i < count; ++i) {
        index_of_[{block, i}] = static_cast<int>(items_.size());
        items_.push_back({block, i});
      }
    if (items_.size() > budget.max_items)
      throw BudgetExceeded("opt_gc: item universe exceeds " +
                           std::to_string(budget.max_items));
    block_bits_.resize(items_.size());
    for (std::size_t i = 0; i < items_.size(); ++i) {
      Mask bits = 0;
      for (std::size_t j = 0; j < items_.size(); ++j)
        if (items_[j].block == items_[i].block) bits |= Mask{1} << j;
      block_bits_[i] = bits;
    }
    // alive_[p] = items requested at any position >= p.
    alive_.assign(trace.size() + 1, 0);
    for (std::size_t p = trace.size(); p-- > 0;)
      alive_[p] = alive_[p + 1] | bit(index(trace.accesses[p]));
  }

  OfflineSchedule run() {
    solve(0, 0);
    OfflineSchedule schedule;
    std::size_t pos = 0;
    Mask mask = 0;
    while (pos < trace_.size()) {
      int x = index(trace_.accesses[pos]);
      if (mask & bit(x)) {
        ++pos;
        continue;
      }
      const Choice& c = memo_.at({pos, mask});
      LoadOp op;
      op.at_access = pos;
      op.loaded = items_of(c.loaded);
      op.evicted = items_of(c.evicted);
      schedule.ops.push_back(std::move(op));
      mask = (mask & ~c.evicted) | c.loaded;
      ++pos;
    }
    schedule.claimed_cost = schedule.ops.size();
    return schedule;
  }

 private:
  static Mask bit(int i) { return Mask{1} << i; }
  int index(const ItemId& item) const { return index_of_.at(item); }

  std::vector<ItemId> items_of(Mask mask) const {
    std::vector<ItemId> out;
    while (mask) {
      int i = std::countr_zero(mask);
      out.push_back(items_[i]);
      mask &= mask - 1;
    }
    return out;
  }

  std::size_t solve(std::size_t pos, Mask mask) {
    while (pos < trace_.size() && (mask & bit(index(trace_.accesses[pos]))))
      ++pos;
    if (pos == trace_.size()) return 0;
    StateKey key{pos, mask};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second.cost;
    if (memo_.size() >= budget_.max_states)
      throw BudgetExceeded("opt_gc: state budget exhausted");
    memo_.emplace(key, Choice{});  // reserve; filled below

    int x = index(trace_.accesses[pos]);
    Mask future = alive_[pos + 1];

    // Candidate co-loads: non-resident block mates. Loading a mate that is
    // never requested again only burns capacity, so the pruned search skips
    // those subsets.
    Mask extras = block_bits_[x] & ~mask & ~bit(x);
    if (prune_) extras &= future;
    std::vector<int> extra_idx;
    for (Mask m = extras; m; m &= m - 1)
      extra_idx.push_back(std::countr_zero(m));

    std::vector<Mask> load_sets;
    for (Mask sub = extras;; sub = (sub - 1) & extras) {
      load_sets.push_back(sub | bit(x));
      if (sub == 0) break;
    }
    std::sort(load_sets.begin(), load_sets.end(),
              [&](Mask a, Mask b) { return items_of(a) < items_of(b); });

    Choice best;
    auto consider = [&](Mask loaded, Mask evicted) {
      std::size_t sub =
          solve(pos + 1, (mask & ~evicted) | loaded);
      if (sub + 1 < best.cost) best = {sub + 1, loaded, evicted};
    };

    for (Mask loaded : load_sets) {
      std::size_t after = std::popcount(mask | loaded);
      std::size_t e = after > capacity_ ? after - capacity_ : 0;
      if (e > static_cast<std::size_t>(std::popcount(mask))) continue;  // cannot fit even evicting all
      if (e == 0) {
        consider(loaded, 0);
        continue;
      }
      Mask dead = mask & ~future;
      if (prune_ && static_cast<std::size_t>(std::popcount(dead)) >= e) {
        // Victims with no future request dominate all others; take the
        // lexicographically first e of them.
        Mask evicted = 0;
        Mask m = dead;
        for (std::size_t i = 0; i < e; ++i) {
          evicted |= m & (~m + 1);
          m &= m - 1;
        }
        consider(loaded, evicted);
      } else if (prune_) {
        std::size_t rest = e - std::popcount(dead);
        std::vector<int> live_idx;
        for (Mask m = mask & future; m; m &= m - 1)
          live_idx.push_back(std::countr_zero(m));
        for_each_combination(live_idx, rest, 0, dead,
                             [&](Mask ev) { consider(loaded, ev); });
      } else {
        std::vector<int> all_idx;
        for (Mask m = mask; m; m &= m - 1)
          all_idx.push_back(std::countr_zero(m));
        for_each_combination(all_idx, e, 0, 0,
                             [&](Mask ev) { consider(loaded, ev); });
      }
    }
    memo_[key] = best;
    return best.cost;
  }

  const Trace& trace_;
  std::size_t capacity_;
  OracleBudget budget_;
  bool prune_;
  std::vector<ItemId> items_;
  std::map<ItemId, int> index_of_;
  std::vector<Mask> block_bits_;
  std::vector<Mask> alive_;
  std::unordered_map<StateKey, Choice, StateKeyHash> memo_;
};

}  // namespace

OfflineSchedule opt_gc(const Trace& trace, const BlockMap& map,
                       std::size_t capacity, const OracleBudget& budget,
                       bool prune) {
  if (capacity < 1) throw DomainError("opt_gc: capacity must be >= 1");
  if (!validate_block_map(map).empty())
    throw DomainError("opt_gc: invalid block map");
  for (const auto& a : trace.accesses)
    if (!map.contains(a))
      throw DomainError("opt_gc: trace access outside block map");
  if (trace.size() > budget.max_trace_len)
    throw BudgetExceeded("opt_gc: trace longer than budget");
  if (capacity > budget.max_capacity)
    throw BudgetExceeded("opt_gc: capacity above budget");
  if (map.max_block_size > budget.max_block_size)
    throw BudgetExceeded("opt_gc: block size above budget");
  return GcSearch(trace, map, capacity, budget, prune).run();
}

OfflineSchedule belady(const Trace& trace, std::size_t capacity) {
  if (capacity < 1) throw DomainError("belady: capacity must be >= 1");
  constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();

  // next_occ[p] = next position after p requesting the same item.
  std::vector<std::size_t> next_occ(trace.size(), kNever);
  std::map<ItemId, std::size_t> last_seen;
  for (std::size_t p = trace.size(); p-- > 0;) {
    auto it = last_seen.find(trace.accesses[p]);
    if (it != last_seen.end()) next_occ[p] = it->second;
    last_seen[trace.accesses[p]] = p;
  }

  OfflineSchedule schedule;
  std::map<ItemId, std::size_t> next_use;  // resident item -> next request
  for (std::size_t pos = 0; pos < trace.size(); ++pos) {
    const ItemId& item = trace.accesses[pos];
    if (auto it = next_use.find(item); it != next_use.end()) {
      it->second = next_occ[pos];
      continue;
    }
    LoadOp op;
    op.at_access = pos;
    op.loaded = {item};
    if (next_use.size() == capacity) {
      auto victim = next_use.begin();
      for (auto it = next_use.begin(); it != next_use.end(); ++it)
        if (it->second > victim->second) victim = it;
      op.evicted = {victim->first};
      next_use.erase(victim);
    }
    next_use[item] = next_occ[pos];
    schedule.ops.push_back(std::move(op));
  }
  schedule.claimed_cost = schedule.ops.size();
  return schedule;
}

std::size_t opt_varsize(const VarSizeInstance& inst,
                        const VarSizeBudget& budget) {
  if (inst.accesses.size() > budget.max_trace_len)
    throw BudgetExceeded("opt_varsize: trace longer than budget");

  std::vector<std::string> names;
  std::vector<Rational> sizes;
  std::map<std::string, int> index_of;
  for (const auto& name : inst.accesses) {
    if (index_of.contains(name)) continue;
    auto it = inst.sizes.find(name);
    if (it == inst.sizes.end())
      throw DomainError("opt_varsize: access to item without a size: " + name);
    index_of[name] = static_cast<int>(names.size());
    names.push_back(name);
    sizes.push_back(it->second);
  }
  if (names.size() > budget.max_distinct_items)
    throw BudgetExceeded("opt_varsize: too many distinct items");
  for (const auto& s : sizes) {
    if (!(Rational(0) < s)) throw DomainError("opt_varsize: sizes must be > 0");
    if (inst.capacity < s)
      throw DomainError("opt_varsize: item larger than the cache");
  }

  std::size_t n = names.size();
  std::vector<Rational> mask_size(std::size_t{1} << n);
  for (std::size_t m = 1; m < mask_size.size(); ++m) {
    int low = std::countr_zero(m);
    mask_size[m] = mask_size[m & (m - 1)] + sizes[low];
  }

  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> solve =
      [&](std::size_t pos, std::size_t mask) -> std::size_t {
    while (pos < inst.accesses.size() &&
           (mask >> index_of[inst.accesses[pos]]) & 1)
      ++pos;
    if (pos == inst.accesses.size()) return 0;
    auto key = std::make_pair(pos, mask);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    int x = index_of[inst.accesses[pos]];
    std::size_t best = kInf;
    // Evict any subset that makes the loaded item fit.
    for (std::size_t keep = mask;; keep = (keep - 1) & mask) {
      if (mask_size[keep] + sizes[x] <= inst.capacity) {
        std::size_t sub = solve(pos + 1, keep | (std::size_t{1} << x));
        best = std::min(best, sub + 1);
      }
      if (keep == 0) break;
    }
    memo[key] = best;
    return best;
  };
  return solve(0, 0);
}

}  // namespace gcsim
