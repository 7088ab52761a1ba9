#include "gcsim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "gcsim/adversary.hpp"
#include "gcsim/bounds.hpp"
#include "gcsim/errors.hpp"
#include "gcsim/oracle.hpp"
#include "gcsim/policies.hpp"
#include "gcsim/simulate.hpp"

namespace gcsim {
namespace {

long long param(const ExperimentSpec& spec, const std::string& name,
                long long fallback) {
  auto it = spec.parameters.find(name);
  if (it == spec.parameters.end()) return fallback;
  try {
    return std::stoll(it->second);
  } catch (const std::exception&) {
    throw UsageError("experiment parameter " + name + "=" + it->second +
                     " is not an integer");
  }
}

std::vector<long long> log_spaced(long long lo, long long hi, int points) {
  std::vector<long long> out;
  double llo = std::log(static_cast<double>(lo));
  double lhi = std::log(static_cast<double>(hi));
  for (int i = 0; i < points; ++i) {
    double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    auto v = static_cast<long long>(std::llround(std::exp(llo + t * (lhi - llo))));
    if (out.empty() || v > out.back()) out.push_back(v);
  }
  return out;
}

std::string num(double v) { return csv_num(v); }

ExperimentResult run_fig4(const ExperimentSpec& spec) {
  long long k = param(spec, "k", 1280000);
  long long B = param(spec, "B", 64);
  long long hmin = param(spec, "hmin", B);
  long long hmax = param(spec, "hmax", k / 2);
  int points = static_cast<int>(param(spec, "points", 40));

  ExperimentResult res;
  res.table.comments = {std::string("gcsim v") + kVersion,
                        "experiment=fig4 k=" + std::to_string(k) +
                            " B=" + std::to_string(B) +
                            " hmin=" + std::to_string(hmin) +
                            " hmax=" + std::to_string(hmax) +
                            " points=" + std::to_string(points)};
  res.table.header = {"h",           "st_bound",     "lb_envelope",
                      "ub_optimal_split", "ub_item_only", "ub_block_only"};
  for (long long h : log_spaced(hmin, hmax, points)) {
    auto ub = bounds::optimal_partition(k, B, h);
    res.table.rows.push_back({std::to_string(h),
                              num(bounds::st_bound(k, h).value()),
                              num(bounds::lb_envelope(k, h, B).value()),
                              num(ub.ratio.value()),
                              num(bounds::ub_elem_part(k, h).value()),
                              num(bounds::ub_block_part(k, h, B).value())});
  }
  res.summary = "fig4: " + std::to_string(res.table.rows.size()) + " rows";
  return res;
}

ExperimentResult run_fig6(const ExperimentSpec& spec) {
  long long k = param(spec, "k", 1280000);
  long long B = param(spec, "B", 64);
  long long fixed_elem = param(spec, "elem", k / 2);
  long long fixed_bp = k - fixed_elem;
  long long hmin = param(spec, "hmin", B);
  long long hmax = param(spec, "hmax", fixed_elem - 1);
  int points = static_cast<int>(param(spec, "points", 40));

  ExperimentResult res;
  res.table.comments = {std::string("gcsim v") + kVersion,
                        "experiment=fig6 k=" + std::to_string(k) +
                            " B=" + std::to_string(B) +
                            " elem=" + std::to_string(fixed_elem) +
                            " blockpart=" + std::to_string(fixed_bp)};
  res.table.header = {"h", "ub_fixed_split", "ub_optimal_split"};
  for (long long h : log_spaced(hmin, hmax, points)) {
    auto best = bounds::optimal_partition(k, B, h);
    res.table.rows.push_back(
        {std::to_string(h),
         num(bounds::ub_iblp(fixed_elem, fixed_bp, B, h).value()),
         num(best.ratio.value())});
  }
  res.summary = "fig6: " + std::to_string(res.table.rows.size()) + " rows";
  return res;
}

// Integer h where the bound curve crosses the augmentation line k/h.
template <typename Bound>
long long crossing(long long k, Bound bound) {
  long long lo = 2, hi = k / 2;
  auto above = [&](long long h) {
    return bound(h) > Rational(k) / Rational(h);
  };
  if (above(lo)) return lo;
  while (hi - lo > 1) {
    long long mid = lo + (hi - lo) / 2;
    (above(mid) ? hi : lo) = mid;
  }
  return hi;
}

ExperimentResult run_table1(const ExperimentSpec& spec) {
  long long k = param(spec, "k", 1280000);
  long long B = param(spec, "B", 64);

  ExperimentResult res;
  res.table.comments = {std::string("gcsim v") + kVersion,
                        "experiment=table1 k=" + std::to_string(k) +
                            " B=" + std::to_string(B)};
  res.table.header = {"setting", "quantity", "value"};

  auto lb = [&](long long h) { return bounds::lb_envelope(k, h, B); };
  auto ub = [&](long long h) { return bounds::optimal_partition(k, B, h).ratio; };

  res.table.rows.push_back(
      {"constant-augmentation", "lb_at_k_eq_2h", num(lb(k / 2).value())});
  res.table.rows.push_back(
      {"constant-augmentation", "ub_at_k_eq_2h", num(ub(k / 2).value())});
  long long h_lb = crossing(k, lb);
  long long h_ub = crossing(k, ub);
  res.table.rows.push_back({"ratio-equals-augmentation", "lb_crossing_aug",
                            num(static_cast<double>(k) /
                                static_cast<double>(h_lb))});
  res.table.rows.push_back({"ratio-equals-augmentation", "ub_crossing_aug",
                            num(static_cast<double>(k) /
                                static_cast<double>(h_ub))});
  res.table.rows.push_back(
      {"constant-ratio", "lb_at_k_eq_Bh", num(lb(k / B).value())});
  res.table.rows.push_back(
      {"constant-ratio", "ub_at_k_eq_Bh", num(ub(k / B).value())});
  res.summary = "table1: six cells";
  return res;
}

ExperimentResult run_table2(const ExperimentSpec& spec) {
  long long B = param(spec, "B", 64);
  long long elem = param(spec, "elem", 64000);
  long long bp = param(spec, "blockpart", elem);
  long long h = elem + bp;  // lower bound compared at the full cache size
  long long p2 = param(spec, "p", 3);

  ExperimentResult res;
  res.table.comments = {std::string("gcsim v") + kVersion,
                        "experiment=table2 B=" + std::to_string(B) +
                            " elem=" + std::to_string(elem) +
                            " blockpart=" + std::to_string(bp) +
                            " p2=" + std::to_string(p2)};
  res.table.header = {"f",          "g",        "p",
                      "lower_bound", "elem_ub", "block_ub", "combined_ub"};

  auto add_row = [&](long long p, double gshrink, const std::string& fname,
                     const std::string& gname) {
    auto fe = static_cast<double>(p);
    bounds::Fn f_inv = [fe](double x) { return std::pow(x, fe); };
    bounds::Fn g_fn = [fe, gshrink](double x) {
      return std::pow(x, 1.0 / fe) / gshrink;
    };
    bounds::Fn g_inv = [fe, gshrink](double y) {
      return std::pow(gshrink * y, fe);
    };
    double lower = bounds::fault_lb(h, f_inv, g_fn);
    double elem_window = std::pow(static_cast<double>(elem + 1), fe) - 2;
    double elem_ub = static_cast<double>(elem - 1) / elem_window;
    double eff = static_cast<double>(bp) / static_cast<double>(B);
    double block_ub = (eff - 1) / (g_inv(eff + 1) - 2);
    double combined = bounds::fault_ub_iblp(elem, bp, B, f_inv, g_inv);
    res.table.rows.push_back({fname, gname, std::to_string(p), num(lower),
                              num(elem_ub), num(block_ub), num(combined)});
  };

  for (long long p : {2LL, p2}) {
    std::string fname = "x^(1/" + std::to_string(p) + ")";
    add_row(p, 1.0, fname, fname);
    add_row(p, std::sqrt(static_cast<double>(B)), fname,
            fname + "/sqrt(B)");
    add_row(p, static_cast<double>(B), fname, fname + "/B");
  }
  res.summary = "table2: six rows";
  return res;
}

ExperimentResult run_adversary_sweep(const ExperimentSpec& spec) {
  auto cycles = static_cast<std::size_t>(param(spec, "cycles", 100));

  ExperimentResult res;
  res.table.comments = {std::string("gcsim v") + kVersion,
                        "experiment=adversary-sweep cycles=" +
                            std::to_string(cycles)};
  res.table.header = {"adversary", "policy",        "k",
                      "h",         "B",             "cycles",
                      "online",    "opt",           "measured_ratio",
                      "formula"};
  auto add = [&](const std::string& kind, const AdversaryOutput& out) {
    res.table.rows.push_back(
        {kind, out.policy_spec, std::to_string(out.online_capacity),
         std::to_string(out.opt_capacity),
         std::to_string(out.map.max_block_size), std::to_string(out.cycles),
         std::to_string(out.steady_online_misses),
         std::to_string(out.steady_opt_misses), num(out.measured_ratio()),
         num(out.formula_value)});
  };
  add("item", gen_item_adversary("item-lru", 8, 4, 2, cycles));
  add("item", gen_item_adversary("item-lru", 9, 4, 2, cycles));
  add("item", gen_item_adversary("item-lru", 12, 6, 3, cycles));
  add("block", gen_block_adversary("block-lru", 8, 2, 2, cycles));
  add("block", gen_block_adversary("block-lru", 16, 3, 4, cycles));
  add("general", gen_general_adversary("item-lru", 9, 4, 2, cycles));
  add("general", gen_general_adversary("block-lru", 9, 4, 2, cycles));
  res.summary =
      "adversary-sweep: " + std::to_string(res.table.rows.size()) + " rows";
  return res;
}

struct RandomInstance {
  BlockMap map;
  Trace trace;
  std::size_t capacity;
};

RandomInstance random_instance(std::mt19937_64& rng, std::size_t max_trace,
                               std::uint32_t max_B, std::uint32_t max_blocks,
                               std::size_t max_k) {
  RandomInstance inst;
  std::uniform_int_distribution<std::uint32_t> bdist(1, max_B);
  inst.map.max_block_size = bdist(rng);
  std::uniform_int_distribution<std::uint32_t> nblocks(1, max_blocks);
  std::uint32_t count = nblocks(rng);
  for (std::uint32_t b = 0; b < count; ++b) {
    std::uniform_int_distribution<std::uint32_t> size(
        1, inst.map.max_block_size);
    inst.map.blocks[b] = size(rng);
  }
  std::uniform_int_distribution<std::size_t> kdist(
      inst.map.max_block_size, std::max<std::size_t>(inst.map.max_block_size,
                                                     max_k));
  inst.capacity = kdist(rng);
  std::uniform_int_distribution<std::size_t> len(1, max_trace);
  std::size_t n = len(rng);
  std::vector<ItemId> universe;
  for (const auto& [id, sz] : inst.map.blocks)
    for (std::uint32_t i = 0; i < sz; ++i) universe.push_back({id, i});
  std::uniform_int_distribution<std::size_t> pick(0, universe.size() - 1);
  for (std::size_t i = 0; i < n; ++i)
    inst.trace.accesses.push_back(universe[pick(rng)]);
  return inst;
}

ExperimentResult run_opt_vs_policies(const ExperimentSpec& spec) {
  auto count = static_cast<std::size_t>(param(spec, "count", 200));
  std::mt19937_64 rng(spec.seed);

  ExperimentResult res;
  res.table.comments = {std::string("gcsim v") + kVersion,
                        "experiment=opt-vs-policies count=" +
                            std::to_string(count) +
                            " seed=" + std::to_string(spec.seed)};
  res.table.header = {"instance", "k",      "B",        "trace_len",
                      "opt",      "policy", "misses",   "violation"};
  std::size_t violations = 0;
  for (std::size_t i = 0; i < count; ++i) {
    RandomInstance inst = random_instance(rng, 12, 3, 4, 4);
    std::size_t opt =
        opt_gc(inst.trace, inst.map, inst.capacity).claimed_cost;
    std::vector<std::string> specs{"item-lru"};
    if (inst.capacity >= inst.map.max_block_size) {
      specs.push_back("block-lru");
      for (std::uint64_t s = 1; s <= 3; ++s)
        specs.push_back("gc-marking:" + std::to_string(s));
    }
    for (std::size_t bp = 0; bp <= inst.capacity;
         bp += inst.map.max_block_size)
      specs.push_back("iblp:" + std::to_string(inst.capacity - bp) + "," +
                      std::to_string(bp));
    for (const auto& pspec : specs) {
      auto policy = make_policy(pspec, inst.capacity, inst.map);
      SimResult sim = simulate(*policy, inst.trace, inst.map, inst.capacity);
      bool violated = sim.misses < opt;
      if (violated) ++violations;
      res.table.rows.push_back(
          {std::to_string(i), std::to_string(inst.capacity),
           std::to_string(inst.map.max_block_size),
           std::to_string(inst.trace.size()), std::to_string(opt), pspec,
           std::to_string(sim.misses), violated ? "1" : "0"});
    }
  }
  res.summary = "opt-vs-policies: " + std::to_string(count) + " instances, " +
                std::to_string(violations) + " violations";
  return res;
}

}  // namespace

std::vector<std::string> experiment_names() {
  return {"fig4",   "fig6",           "table1",
          "table2", "adversary-sweep", "opt-vs-policies"};
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  if (spec.name == "fig4") return run_fig4(spec);
  if (spec.name == "fig6") return run_fig6(spec);
  if (spec.name == "table1") return run_table1(spec);
  if (spec.name == "table2") return run_table2(spec);
  if (spec.name == "adversary-sweep") return run_adversary_sweep(spec);
  if (spec.name == "opt-vs-policies") return run_opt_vs_policies(spec);
  std::string names;
  for (const auto& n : experiment_names()) names += " " + n;
  throw UsageError("unknown experiment '" + spec.name + "'; available:" +
                   names);
}

}  // namespace gcsim
