// Acceptance suite: runs each gate criterion and prints one line per
// criterion. Invoke with a criterion number to run just that one; the exit
// code is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "gcsim/adversary.hpp"
#include "gcsim/bounds.hpp"
#include "gcsim/experiments.hpp"
#include "gcsim/locality.hpp"
#include "gcsim/oracle.hpp"
#include "gcsim/policies.hpp"
#include "gcsim/reduction.hpp"
#include "gcsim/simulate.hpp"
#include "test_util.hpp"

using namespace gcsim;
using Clock = std::chrono::steady_clock;

namespace {

struct Criterion {
  int id;
  std::string description;
  std::function<bool(std::string&)> run;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::string> iblp_splits(std::size_t k, std::uint32_t B) {
  std::vector<std::string> specs;
  for (std::size_t bp = 0; bp <= k; bp += B) {
    specs.push_back("iblp:" + std::to_string(k - bp) + "," +
                    std::to_string(bp));
    if (B == 0) break;
  }
  return specs;
}

// --- criterion 1: oracle dominance ---------------------------------------
bool oracle_dominance(std::string& detail) {
  auto start = Clock::now();
  std::mt19937_64 rng(1001);
  std::size_t violations = 0, instances = 0, comparisons = 0;
  for (; instances < 200; ++instances) {
    auto inst = gctest::random_instance(rng, 12, 3, 4, 4);
    std::size_t opt = opt_gc(inst.trace, inst.map, inst.capacity).claimed_cost;
    std::vector<std::string> specs{"item-lru"};
    if (inst.capacity >= inst.map.max_block_size) {
      specs.push_back("block-lru");
      for (int s = 1; s <= 3; ++s)
        specs.push_back("gc-marking:" + std::to_string(s));
    }
    for (const auto& split : iblp_splits(inst.capacity, inst.map.max_block_size))
      specs.push_back(split);
    for (const auto& spec : specs) {
      ++comparisons;
      if (gctest::run(spec, inst).misses < opt) ++violations;
    }
  }
  double elapsed = seconds_since(start);
  std::ostringstream os;
  os << instances << " instances, " << comparisons << " comparisons, "
     << violations << " violations, " << std::fixed << elapsed << "s";
  detail = os.str();
  return violations == 0 && elapsed < 30.0;
}

// --- criterion 2: degeneracy to classic caching ---------------------------
bool classic_degeneracy(std::string& detail) {
  std::mt19937_64 rng(1002);
  std::size_t mismatches = 0, instances = 0;
  for (; instances < 100; ++instances) {
    auto inst = gctest::random_instance(rng, 12, 1, 6, 4);
    std::size_t expect =
        gctest::classic_lru_misses(inst.trace.accesses, inst.capacity);
    std::string all_elem = "iblp:" + std::to_string(inst.capacity) + ",0";
    std::string all_block = "iblp:0," + std::to_string(inst.capacity);
    if (gctest::run("item-lru", inst).misses != expect) ++mismatches;
    if (gctest::run("block-lru", inst).misses != expect) ++mismatches;
    if (gctest::run(all_elem, inst).misses != expect) ++mismatches;
    if (gctest::run(all_block, inst).misses != expect) ++mismatches;
    if (opt_gc(inst.trace, inst.map, inst.capacity).claimed_cost !=
        belady(inst.trace, inst.capacity).claimed_cost)
      ++mismatches;
  }
  detail = std::to_string(instances) + " instances, " +
           std::to_string(mismatches) + " mismatches";
  return mismatches == 0;
}

// --- criterion 3: adversary convergence -----------------------------------
bool adversary_convergence(std::string& detail) {
  auto start = Clock::now();
  bool ok = true;
  std::ostringstream os;
  auto check = [&](const char* what, const AdversaryOutput& out,
                   double formula) {
    auto replay =
        replay_schedule(out.schedule, out.trace, out.map, out.opt_capacity);
    bool feasible =
        replay.ok() && replay.result->misses == out.schedule.claimed_cost;
    auto policy = make_policy(out.policy_spec, out.online_capacity, out.map);
    bool resim = simulate(*policy, out.trace, out.map, out.online_capacity)
                     .misses == out.claimed_online_misses;
    double rel = std::abs(out.measured_ratio() - formula) / formula;
    bool pass = feasible && resim && rel <= 0.05;
    os << " [" << what << " ratio=" << out.measured_ratio()
       << " formula=" << formula << " rel=" << rel
       << (pass ? " ok" : " FAIL") << "]";
    ok = ok && pass;
  };
  check("item k=8 h=4 B=2", gen_item_adversary("item-lru", 8, 4, 2, 100),
        bounds::lb_item(8, 4, 2).value());
  check("item k=12 h=6 B=3", gen_item_adversary("item-lru", 12, 6, 3, 100),
        bounds::lb_item(12, 6, 3).value());
  check("block k=8 h=2 B=2", gen_block_adversary("block-lru", 8, 2, 2, 100),
        bounds::lb_block(8, 2, 2)->value());
  double elapsed = seconds_since(start);
  os << " " << elapsed << "s";
  detail = os.str();
  return ok && elapsed < 10.0;
}

// --- criterion 4: reduction equality --------------------------------------
bool reduction_equality(std::string& detail) {
  auto start = Clock::now();
  std::mt19937_64 rng(1004);
  std::size_t unequal = 0, instances = 0;
  for (; instances < 100; ++instances) {
    std::uniform_int_distribution<int> nd(1, 4), sized(1, 3), lend(1, 6);
    int n = nd(rng);
    VarSizeInstance inst;
    std::vector<std::string> names;
    long long maxsz = 1;
    for (int i = 0; i < n; ++i) {
      names.push_back(std::string(1, static_cast<char>('a' + i)));
      long long z = sized(rng);
      inst.sizes[names.back()] = z;
      maxsz = std::max(maxsz, z);
    }
    inst.capacity =
        Rational(maxsz + std::uniform_int_distribution<int>(0, 3)(rng));
    int len = lend(rng);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int i = 0; i < len; ++i) inst.accesses.push_back(names[pick(rng)]);
    if (!verify_reduction(inst).equal) ++unequal;
  }
  double elapsed = seconds_since(start);
  std::ostringstream os;
  os << instances << " instances, " << unequal << " unequal, " << elapsed
     << "s";
  detail = os.str();
  return unequal == 0 && elapsed < 60.0;
}

// --- criterion 5: Table 1 reproduction -------------------------------------
long long find_crossing(long long k,
                        const std::function<Rational(long long)>& bound) {
  long long lo = 2, hi = k / 2;
  auto above = [&](long long h) { return bound(h) > Rational(k) / Rational(h); };
  if (above(lo)) return lo;
  while (hi - lo > 1) {
    long long mid = lo + (hi - lo) / 2;
    (above(mid) ? hi : lo) = mid;
  }
  return hi;
}

bool table1_reproduction(std::string& detail) {
  long long k = 1280000, B = 64;
  std::ostringstream os;
  bool ok = true;
  auto expect = [&](const char* what, double value, double target,
                    double tol) {
    double rel = std::abs(value - target) / target;
    bool pass = rel <= tol;
    os << " [" << what << "=" << value << " target=" << target
       << " rel=" << rel << (pass ? " ok" : " FAIL") << "]";
    ok = ok && pass;
  };
  expect("lb@k=2h", bounds::lb_envelope(k, k / 2, B).value(),
         static_cast<double>(B), 0.10);
  expect("lb@k=Bh", bounds::lb_envelope(k, k / B, B).value(), 2.0, 0.10);
  expect("ub@k=2h", bounds::optimal_partition(k, B, k / 2).ratio.value(),
         2.0 * static_cast<double>(B), 0.15);
  expect("ub@k=Bh", bounds::optimal_partition(k, B, k / B).ratio.value(), 3.0,
         0.15);
  long long h_lb =
      find_crossing(k, [&](long long h) { return bounds::lb_envelope(k, h, B); });
  expect("lb-crossing k vs sqrt(B)h",
         std::sqrt(static_cast<double>(B)) * static_cast<double>(h_lb),
         static_cast<double>(k), 0.10);
  long long h_ub = find_crossing(
      k, [&](long long h) { return bounds::optimal_partition(k, B, h).ratio; });
  expect("ub-crossing k vs sqrt(2B)h",
         std::sqrt(2.0 * static_cast<double>(B)) * static_cast<double>(h_ub),
         static_cast<double>(k), 0.10);
  detail = os.str();
  return ok;
}

// --- criterion 6: Fig. 4 consistency ---------------------------------------
bool fig4_consistency(std::string& detail) {
  long long k = 1280000, B = 64;
  std::size_t points = 0;
  bool ok = true;
  double worst_gap = 0;
  for (double hf = 64; hf <= static_cast<double>(k) / 2; hf *= 1.08) {
    auto h = static_cast<long long>(hf);
    ++points;
    Rational lb = bounds::lb_envelope(k, h, B);
    Rational ub = bounds::optimal_partition(k, B, h).ratio;
    Rational st = bounds::st_bound(k, h);
    if (!(lb <= ub)) ok = false;
    if (!(ub <= Rational(3) * lb)) ok = false;
    if (!(st <= lb)) ok = false;
    worst_gap = std::max(worst_gap, ub.value() / lb.value());
  }
  std::ostringstream os;
  os << points << " grid points, max ub/lb=" << worst_gap;
  detail = os.str();
  return ok;
}

// --- criterion 7: LP witness verification ----------------------------------
bool lp_witness(std::string& detail) {
  std::mt19937_64 rng(1007);
  std::size_t checked = 0, failures = 0;
  while (checked < 1000) {
    long long B = std::uniform_int_distribution<long long>(2, 64)(rng);
    long long bp = B * std::uniform_int_distribution<long long>(0, 64)(rng);
    long long h = std::uniform_int_distribution<long long>(2, 500)(rng);
    long long e = h + std::uniform_int_distribution<long long>(1, 300)(rng);
    if (!(Rational(e) <= bounds::iblp_threshold(bp, B))) continue;
    bounds::LpWitness w;
    try {
      w = bounds::iblp_lp_witness(e, bp, B, h);
    } catch (const DomainError&) {
      continue;
    }
    if (w.t < Rational(1) || Rational(B) < w.t) continue;
    ++checked;
    double acc_resid = std::abs(w.accesses.value() - 1.0);
    double use_resid = std::abs(w.cache_usage.value() - static_cast<double>(h));
    double obj = w.objective.value();
    double branch = bounds::ub_iblp(e, bp, B, h).value();
    double obj_rel = std::abs(obj - branch) / branch;
    if (acc_resid > 1e-9 || use_resid > 1e-9 || obj_rel > 1e-9) ++failures;
  }
  // Branch agreement at the threshold, over a sweep.
  std::size_t threshold_failures = 0, threshold_points = 0;
  for (long long B : {2, 4, 8, 16, 64})
    for (long long bp : {0LL, B, 8 * B, 64 * B, 1024 * B}) {
      Rational t = bounds::iblp_threshold(bp, B);
      long long h = 2;
      if (!(Rational(h) < t)) continue;
      ++threshold_points;
      Rational first =
          (Rational(bp) + Rational(B) * (Rational(2) * t - Rational(1)));
      first = first * first /
              (Rational(8 * B) * Rational(B + bp) * (t - Rational(h)));
      Rational second =
          (Rational(2 * B) * t - Rational(B * bp) + Rational(bp) -
           Rational(B * B) - Rational(B)) /
          (Rational(2) * t - Rational(2 * h));
      double rel =
          std::abs(first.value() - second.value()) / std::abs(second.value());
      if (rel > 1e-6) ++threshold_failures;
    }
  detail = std::to_string(checked) + " witnesses, " +
           std::to_string(failures) + " violations; " +
           std::to_string(threshold_points) + " threshold points, " +
           std::to_string(threshold_failures) + " disagreements";
  return failures == 0 && threshold_failures == 0;
}

// --- criterion 8: locality bounds -------------------------------------------
bool locality_bounds(std::string& detail) {
  std::ostringstream os;
  bool ok = true;
  auto fsq = [](double x) { return x * x; };
  auto gsqrt = [](double x) { return std::floor(std::sqrt(x) + 1e-9); };
  for (std::size_t k : {3u, 4u}) {
    BlockMap singles{1, {}};
    for (std::uint32_t b = 0; b < 4 * k; ++b) singles.blocks[b] = 1;
    auto out = gen_locality_adversary("item-lru", k, fsq, gsqrt, singles, 20);
    bool pass = out.fault_rate >= out.bound;
    os << " [k=" << k << " rate=" << out.fault_rate << " bound=" << out.bound
       << (pass ? " ok" : " FAIL") << "]";
    ok = ok && pass;
  }

  long long elem = 64000, B = 64;
  auto f_inv = [](double x) { return x * x; };
  // g = f: the element side binds and tracks 1/elem.
  {
    double binding = bounds::fault_ub_iblp(elem, elem, B, f_inv, f_inv);
    double target = 1.0 / static_cast<double>(elem);
    double rel = std::abs(binding - target) / target;
    bool pass = rel <= 0.10;
    os << " [g=f binding=" << binding << " 1/elem=" << target
       << (pass ? " ok" : " FAIL") << "]";
    ok = ok && pass;
  }
  // g = f/B: the block side binds and tracks 1/(B*bp).
  {
    auto g_inv = [B](double y) {
      return (static_cast<double>(B) * y) * (static_cast<double>(B) * y);
    };
    double binding = bounds::fault_ub_iblp(elem, elem, B, f_inv, g_inv);
    double target = 1.0 / (static_cast<double>(B) * static_cast<double>(elem));
    double rel = std::abs(binding - target) / target;
    bool pass = rel <= 0.10;
    os << " [g=f/B binding=" << binding << " 1/(B*bp)=" << target
       << (pass ? " ok" : " FAIL") << "]";
    ok = ok && pass;
  }
  detail = os.str();
  return ok;
}

// --- criterion 9: policy property suites ------------------------------------
bool policy_properties(std::string& detail) {
  std::ostringstream os;
  bool ok = true;

  {  // layered misses never exceed the element partition's item LRU
    std::mt19937_64 rng(1009);
    std::size_t violations = 0;
    for (int iter = 0; iter < 500; ++iter) {
      auto inst = gctest::random_instance(rng, 20, 3, 4, 6);
      std::uint32_t B = inst.map.max_block_size;
      std::size_t bp = (inst.capacity / B) * B;
      if (bp == inst.capacity) bp -= B;
      std::size_t elem = inst.capacity - bp;
      auto layered = gctest::run(
          "iblp:" + std::to_string(elem) + "," + std::to_string(bp), inst);
      gctest::Instance elem_inst{inst.map, inst.trace, elem};
      if (layered.misses > gctest::run("item-lru", elem_inst).misses)
        ++violations;
    }
    os << " [iblp<=item-lru(elem): " << violations << " violations]";
    ok = ok && violations == 0;
  }

  {  // marking never displaces a marked item while an unmarked one exists
    std::mt19937_64 rng(1001);  // the criterion-1 instance stream
    std::size_t violations = 0;
    for (int iter = 0; iter < 200; ++iter) {
      auto inst = gctest::random_instance(rng, 12, 3, 4, 4);
      if (inst.capacity < inst.map.max_block_size) continue;
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        GcMarking policy(inst.capacity, inst.map, seed);
        for (std::size_t pos = 0; pos < inst.trace.size(); ++pos) {
          auto resident = policy.contents();
          auto marked = policy.marked_contents();
          bool had_unmarked = resident.size() > marked.size();
          StepResult step = policy.on_access(inst.trace.accesses[pos], pos);
          if (!step.hit() && had_unmarked)
            for (const auto& v : step.load->evicted)
              if (std::binary_search(marked.begin(), marked.end(), v))
                ++violations;
        }
      }
    }
    os << " [marking evictions: " << violations << " violations]";
    ok = ok && violations == 0;
  }

  {  // whole-block residency
    std::mt19937_64 rng(1010);
    std::size_t violations = 0;
    for (int iter = 0; iter < 200; ++iter) {
      auto inst = gctest::random_instance(rng, 15, 3, 4, 6);
      auto policy = make_policy("block-lru", inst.capacity, inst.map);
      for (std::size_t pos = 0; pos < inst.trace.size(); ++pos) {
        policy->on_access(inst.trace.accesses[pos], pos);
        std::map<std::uint32_t, std::size_t> counts;
        for (const auto& it : policy->contents()) ++counts[it.block];
        for (const auto& [block, count] : counts)
          if (count != inst.map.block_size(block)) ++violations;
      }
    }
    os << " [block-lru residency: " << violations << " violations]";
    ok = ok && violations == 0;
  }

  {  // fixed seeds reproduce byte-identical outputs
    std::mt19937_64 rng(1011);
    auto inst = gctest::random_instance(rng, 30, 3, 5, 6);
    bool same =
        gctest::run("gc-marking:77", inst) == gctest::run("gc-marking:77", inst);
    ExperimentSpec spec{.name = "opt-vs-policies",
                        .parameters = {{"count", "25"}},
                        .out_path = "",
                        .seed = 9};
    std::string once = csv_to_string(run_experiment(spec).table);
    std::string twice = csv_to_string(run_experiment(spec).table);
    same = same && once == twice && !once.empty();
    os << " [determinism: " << (same ? "ok" : "FAIL") << "]";
    ok = ok && same;
  }
  detail = os.str();
  return ok;
}

// --- criterion 10: locality profile invariants -------------------------------
bool profile_invariants(std::string& detail) {
  std::mt19937_64 rng(1012);
  std::size_t violations = 0;
  for (int iter = 0; iter < 500; ++iter) {
    auto inst = gctest::random_instance(rng, 30, 4, 5, 4);
    auto prof = profile_all(inst.trace, inst.map);
    if (prof.f.front() != 1 || prof.g.front() != 1) ++violations;
    for (std::size_t i = 0; i < prof.f.size(); ++i) {
      if (prof.g[i] > prof.f[i]) ++violations;
      if (prof.f[i] > inst.map.max_block_size * prof.g[i]) ++violations;
      if (i > 0 && (prof.f[i] < prof.f[i - 1] || prof.g[i] < prof.g[i - 1]))
        ++violations;
      if (i > 0 && prof.f[i] > prof.f[i - 1] + 1) ++violations;
    }
    // Rename invariance: shift block ids.
    BlockMap renamed;
    renamed.max_block_size = inst.map.max_block_size;
    for (const auto& [id, count] : inst.map.blocks)
      renamed.blocks[id + 1000] = count;
    Trace mapped;
    for (const auto& a : inst.trace.accesses)
      mapped.accesses.push_back({a.block + 1000, a.index});
    auto prof2 = profile_all(mapped, renamed);
    if (prof.f != prof2.f || prof.g != prof2.g) ++violations;
  }

  LocalityProfile synthetic;
  synthetic.distinct_items = 1U << 30;
  for (std::size_t n = 1; n <= 10000; ++n) {
    synthetic.window_sizes.push_back(n);
    synthetic.f.push_back(static_cast<std::size_t>(
        std::llround(std::sqrt(static_cast<double>(n)))));
    synthetic.g.push_back(synthetic.f.back());
  }
  auto fit = fit_polynomial(synthetic);
  bool fit_ok = std::abs(fit.exponent_p - 2.0) / 2.0 <= 0.05;
  detail = "500 traces, " + std::to_string(violations) +
           " violations; fit p=" + std::to_string(fit.exponent_p);
  return violations == 0 && fit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<Criterion> criteria = {
      {1, "oracle dominance over all policies", oracle_dominance},
      {2, "degeneracy to classic caching at B=1", classic_degeneracy},
      {3, "adversary convergence to the lower-bound formulas",
       adversary_convergence},
      {4, "reduction preserves the optimal cost", reduction_equality},
      {5, "Table 1 reproduction at k=1.28e6, B=64", table1_reproduction},
      {6, "Fig. 4 bound ordering and 3x gap", fig4_consistency},
      {7, "LP witness feasibility and objective match", lp_witness},
      {8, "locality fault-rate bounds", locality_bounds},
      {9, "policy property suites", policy_properties},
      {10, "locality profile invariants and polynomial fit",
       profile_invariants},
  };

  int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failed = 0;
  for (auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    std::string detail;
    bool pass = false;
    try {
      pass = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (!pass) ++failed;
    std::cout << "criterion " << c.id << ": " << (pass ? "PASS" : "FAIL")
              << " - " << c.description << " (" << detail << ")\n";
  }
  return failed;
}
