// gcsim: command-line front end for the granularity-change caching toolkit.

#include <cmath>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gcsim/adversary.hpp"
#include "gcsim/bounds.hpp"
#include "gcsim/errors.hpp"
#include "gcsim/experiments.hpp"
#include "gcsim/io.hpp"
#include "gcsim/locality.hpp"
#include "gcsim/oracle.hpp"
#include "gcsim/policies.hpp"
#include "gcsim/reduction.hpp"
#include "gcsim/simulate.hpp"

namespace {

using gcsim::csv_num;

// Function specs for the locality-model commands:
//   pow:<c>,<p>   x -> c * x^p
//   ipow:<c>,<p>  x -> floor(c * x^p)
//   id            x -> x
gcsim::bounds::Fn parse_fn(const std::string& spec) {
  if (spec == "id") return [](double x) { return x; };
  auto parse_args = [&](const std::string& args) {
    auto comma = args.find(',');
    if (comma == std::string::npos)
      throw gcsim::UsageError("function spec '" + spec +
                              "' needs <c>,<p> arguments");
    return std::make_pair(std::stod(args.substr(0, comma)),
                          std::stod(args.substr(comma + 1)));
  };
  if (spec.rfind("pow:", 0) == 0) {
    auto [c, p] = parse_args(spec.substr(4));
    return [c, p](double x) { return c * std::pow(x, p); };
  }
  if (spec.rfind("ipow:", 0) == 0) {
    auto [c, p] = parse_args(spec.substr(5));
    return [c, p](double x) { return std::floor(c * std::pow(x, p) + 1e-9); };
  }
  throw gcsim::UsageError("unknown function spec '" + spec +
                          "'; use pow:<c>,<p>, ipow:<c>,<p> or id");
}

struct SweepRange {
  long long lo = 0, hi = 0, step = 1;
};

SweepRange parse_sweep(const std::string& text) {
  SweepRange r;
  if (std::sscanf(text.c_str(), "h=%lld:%lld:%lld", &r.lo, &r.hi, &r.step) !=
          3 ||
      r.step <= 0 || r.lo > r.hi)
    throw gcsim::UsageError("bad sweep '" + text + "', expected h=lo:hi:step");
  return r;
}

int cmd_simulate(const std::string& policy_spec, const std::string& trace_path,
                 const std::string& blocks_path, std::size_t k,
                 const std::string& per_access) {
  gcsim::BlockMap map = gcsim::read_block_map(blocks_path);
  gcsim::Trace trace = gcsim::read_trace(trace_path);
  auto policy = gcsim::make_policy(policy_spec, k, map);
  gcsim::SimResult result = gcsim::simulate(*policy, trace, map, k);
  std::cout << "misses=" << result.misses << " hits=" << result.hits
            << " spatial_hits=" << result.spatial_hits << "\n";
  if (!per_access.empty()) {
    gcsim::CsvTable table;
    table.comments = {std::string("gcsim v") + gcsim::kVersion,
                      "policy=" + policy_spec + " k=" + std::to_string(k)};
    table.header = {"pos", "item", "outcome", "loaded", "evicted"};
    for (std::size_t i = 0; i < trace.size(); ++i) {
      const auto& op = result.per_access[i];
      std::string loaded, evicted;
      if (op) {
        for (const auto& it : op->loaded)
          loaded += (loaded.empty() ? "" : " ") + gcsim::to_string(it);
        for (const auto& it : op->evicted)
          evicted += (evicted.empty() ? "" : " ") + gcsim::to_string(it);
      }
      table.rows.push_back({std::to_string(i),
                            gcsim::to_string(trace.accesses[i]),
                            op ? "miss" : "hit", loaded, evicted});
    }
    gcsim::write_csv(per_access, table);
  }
  return 0;
}

int cmd_generate(const std::string& kind, const std::string& policy_spec,
                 std::size_t k, std::size_t h, std::uint32_t B,
                 std::size_t cycles, const std::string& finv_spec,
                 const std::string& g_spec, std::size_t phases,
                 const std::string& blocks_path,
                 const std::string& out_prefix) {
  if (kind == "locality") {
    gcsim::BlockMap map;
    if (!blocks_path.empty()) {
      map = gcsim::read_block_map(blocks_path);
    } else {
      map.max_block_size = 1;  // one item per block
      for (std::uint32_t i = 0; i < 4 * k; ++i) map.blocks[i] = 1;
    }
    auto out = gcsim::gen_locality_adversary(policy_spec, k,
                                             parse_fn(finv_spec),
                                             parse_fn(g_spec), map, phases);
    gcsim::write_trace(out_prefix + ".trace", out.trace);
    gcsim::write_block_map(out_prefix + ".blocks", out.map);
    std::cout << "faults=" << out.online_faults
              << " accesses=" << out.trace.size() << " rate="
              << csv_num(out.fault_rate) << " bound=" << csv_num(out.bound)
              << " nonadversarial=" << out.nonadversarial_reps << "\n";
    return 0;
  }

  gcsim::AdversaryOutput out;
  if (kind == "item")
    out = gcsim::gen_item_adversary(policy_spec, k, h, B, cycles);
  else if (kind == "block")
    out = gcsim::gen_block_adversary(policy_spec, k, h, B, cycles);
  else if (kind == "general")
    out = gcsim::gen_general_adversary(policy_spec, k, h, B, cycles);
  else
    throw gcsim::UsageError("unknown adversary '" + kind +
                            "'; use item, block, general or locality");
  gcsim::write_trace(out_prefix + ".trace", out.trace);
  gcsim::write_block_map(out_prefix + ".blocks", out.map);
  gcsim::write_schedule(out_prefix + ".schedule", out.schedule, h);
  std::cout << "online=" << out.steady_online_misses
            << " opt=" << out.steady_opt_misses << " ratio="
            << csv_num(out.measured_ratio()) << " formula="
            << csv_num(out.formula_value) << "\n";
  if (out.nonuniform_f) std::cout << "warning: non-uniform F across blocks\n";
  return 0;
}

int cmd_oracle(const std::string& trace_path, const std::string& blocks_path,
              std::size_t h, bool use_belady) {
  gcsim::Trace trace = gcsim::read_trace(trace_path);
  gcsim::OfflineSchedule schedule;
  if (use_belady) {
    schedule = gcsim::belady(trace, h);
  } else {
    gcsim::BlockMap map = gcsim::read_block_map(blocks_path);
    schedule = gcsim::opt_gc(trace, map, h);
  }
  std::cout << "cost " << schedule.claimed_cost << "\n";
  gcsim::print_schedule(std::cout, schedule);
  return 0;
}

int cmd_bounds(const std::string& formula, long long k, long long h,
               long long B, long long F, long long elem, long long blockpart,
               const std::string& finv_spec, const std::string& g_spec,
               const std::string& sweep, const std::string& csv_path) {
  namespace b = gcsim::bounds;
  auto evaluate = [&](long long hh) -> double {
    if (formula == "st") return b::st_bound(k, hh).value();
    if (formula == "lb-item") return b::lb_item(k, hh, B).value();
    if (formula == "lb-block") {
      auto r = b::lb_block(k, hh, B);
      return r ? r->value() : std::numeric_limits<double>::infinity();
    }
    if (formula == "lb-general") return b::lb_general(k, hh, B, F).value();
    if (formula == "lb-envelope") return b::lb_envelope(k, hh, B).value();
    if (formula == "ub-elem") return b::ub_elem_part(elem, hh).value();
    if (formula == "ub-block") return b::ub_block_part(blockpart, hh, B).value();
    if (formula == "ub-iblp") return b::ub_iblp(elem, blockpart, B, hh).value();
    if (formula == "optimal-partition")
      return b::optimal_partition(k, B, hh).ratio.value();
    if (formula == "fault-lb")
      return b::fault_lb(k, parse_fn(finv_spec), parse_fn(g_spec));
    if (formula == "fault-ub-iblp")
      return b::fault_ub_iblp(elem, blockpart, B, parse_fn(finv_spec),
                              parse_fn(g_spec));
    throw gcsim::UsageError(
        "unknown formula '" + formula +
        "'; use st, lb-item, lb-block, lb-general, lb-envelope, ub-elem, "
        "ub-block, ub-iblp, optimal-partition, fault-lb or fault-ub-iblp");
  };

  if (sweep.empty()) {
    double v = evaluate(h);
    if (std::isinf(v))
      std::cout << "unbounded\n";
    else
      std::cout << csv_num(v) << "\n";
    return 0;
  }
  SweepRange range = parse_sweep(sweep);
  gcsim::CsvTable table;
  table.comments = {std::string("gcsim v") + gcsim::kVersion,
                    "formula=" + formula + " k=" + std::to_string(k) +
                        " B=" + std::to_string(B) + " sweep=" + sweep};
  table.header = {"h", "value"};
  for (long long hh = range.lo; hh <= range.hi; hh += range.step)
    table.rows.push_back({std::to_string(hh), csv_num(evaluate(hh))});
  if (csv_path.empty())
    std::cout << gcsim::csv_to_string(table);
  else
    gcsim::write_csv(csv_path, table);
  return 0;
}

int cmd_locality(const std::string& trace_path, const std::string& blocks_path,
                 const std::string& windows, const std::string& csv_path) {
  gcsim::Trace trace = gcsim::read_trace(trace_path);
  gcsim::BlockMap map = gcsim::read_block_map(blocks_path);
  gcsim::LocalityProfile prof;
  if (windows == "all") {
    prof = gcsim::profile_all(trace, map);
  } else {
    std::vector<std::size_t> sizes;
    std::string tok;
    std::istringstream ss(windows);
    while (std::getline(ss, tok, ',')) sizes.push_back(std::stoull(tok));
    prof = gcsim::profile(trace, map, sizes);
  }
  gcsim::CsvTable table;
  table.comments = {std::string("gcsim v") + gcsim::kVersion,
                    "trace=" + trace_path + " blocks=" + blocks_path};
  table.header = {"n", "f", "g", "ratio"};
  for (std::size_t i = 0; i < prof.window_sizes.size(); ++i)
    table.rows.push_back(
        {std::to_string(prof.window_sizes[i]), std::to_string(prof.f[i]),
         std::to_string(prof.g[i]),
         csv_num(static_cast<double>(prof.f[i]) /
                 static_cast<double>(prof.g[i]))});
  if (csv_path.empty())
    std::cout << gcsim::csv_to_string(table);
  else
    gcsim::write_csv(csv_path, table);
  return 0;
}

int cmd_reduce(const std::string& in_path, const std::string& out_prefix) {
  gcsim::VarSizeInstance inst = gcsim::read_varsize(in_path);
  gcsim::ScaledInstance scaled = gcsim::scale_instance(inst);
  gcsim::GcInstance gc = gcsim::reduce(scaled.instance);
  gcsim::write_trace(out_prefix + ".trace", gc.trace);
  gcsim::write_block_map(out_prefix + ".blocks", gc.map);
  std::cout << "scale=" << scaled.scale << " B=" << gc.map.max_block_size
            << " capacity=" << gc.capacity
            << " trace_len=" << gc.trace.size() << "\n";
  return 0;
}

int cmd_verify_reduction(const std::string& in_path) {
  gcsim::VarSizeInstance inst = gcsim::read_varsize(in_path);
  gcsim::ReductionCheck check = gcsim::verify_reduction(inst);
  std::cout << "varsize_opt=" << check.varsize_opt
            << " gc_opt=" << check.gc_opt
            << " equal=" << (check.equal ? "yes" : "no") << "\n";
  return check.equal ? 0 : 1;
}

int cmd_experiment(const std::string& name,
                   const std::vector<std::string>& params,
                   const std::string& out, std::uint64_t seed) {
  gcsim::ExperimentSpec spec;
  spec.name = name;
  spec.seed = seed;
  for (const auto& p : params) {
    auto eq = p.find('=');
    if (eq == std::string::npos)
      throw gcsim::UsageError("experiment parameter '" + p +
                              "' is not name=value");
    spec.parameters[p.substr(0, eq)] = p.substr(eq + 1);
  }
  spec.out_path = out.empty() ? name + ".csv" : out;
  gcsim::ExperimentResult result = gcsim::run_experiment(spec);
  gcsim::write_csv(spec.out_path, result.table);
  std::cout << result.summary << " -> " << spec.out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"granularity-change caching laboratory"};
  app.set_help_flag("--help", "print help");  // frees -h / --h for cache sizes
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  std::string format = "csv", global_out;
  app.add_option("--seed", seed, "seed for all randomized components");
  app.add_option("--format", format, "output format (csv)");
  app.add_option("--out", global_out, "default output path for experiments");

  // simulate
  auto* sim = app.add_subcommand("simulate", "run a policy over a trace");
  std::string policy_spec = "item-lru", trace_path, blocks_path, per_access;
  std::size_t k = 0;
  sim->add_option("--policy", policy_spec,
                  "item-lru | block-lru | iblp:<e>,<bp> | gc-marking:<seed>");
  sim->add_option("--k", k, "cache capacity")->required();
  sim->add_option("--trace", trace_path)->required();
  sim->add_option("--blocks", blocks_path)->required();
  sim->add_option("--per-access", per_access, "per-access CSV output");

  // generate
  auto* gen = app.add_subcommand("generate", "emit an adversarial trace");
  std::string adversary = "item", gen_policy = "item-lru", out_prefix = "adv";
  std::string finv_spec = "pow:1,2", g_spec = "ipow:1,0.5";
  std::size_t gk = 0, gh = 0, cycles = 100, phases = 20;
  std::uint32_t gB = 1;
  std::string gen_blocks;
  gen->add_option("--adversary", adversary, "item | block | general | locality");
  gen->add_option("--policy", gen_policy, "target policy");
  gen->add_option("--k", gk, "online cache size")->required();
  gen->add_option("--h", gh, "offline cache size");
  gen->add_option("--B", gB, "block size");
  gen->add_option("--cycles", cycles);
  gen->add_option("--finv", finv_spec, "f^-1 spec (locality)");
  gen->add_option("--g", g_spec, "g spec (locality)");
  gen->add_option("--phases", phases, "phases (locality)");
  gen->add_option("--blocks", gen_blocks, "block map file (locality)");
  gen->add_option("--out-prefix", out_prefix);

  // oracle
  auto* ora = app.add_subcommand("oracle", "brute-force offline optimum");
  std::string o_trace, o_blocks;
  std::size_t o_h = 0;
  bool o_belady = false;
  ora->add_option("--trace", o_trace)->required();
  ora->add_option("--blocks", o_blocks);
  ora->add_option("--h", o_h, "offline cache size")->required();
  ora->add_flag("--belady", o_belady, "classic furthest-in-future instead");

  // bounds
  auto* bnd = app.add_subcommand("bounds", "evaluate a closed-form bound");
  std::string formula, sweep, bounds_csv;
  long long bk = 0, bh = 0, bB = 1, bF = 1, belem = 0, bbp = 0;
  std::string b_finv = "pow:1,2", b_g = "pow:1,0.5";
  bnd->add_option("--formula", formula)->required();
  bnd->add_option("--k", bk);
  bnd->add_option("--h", bh);
  bnd->add_option("--B", bB);
  bnd->add_option("--F", bF);
  bnd->add_option("--elem", belem);
  bnd->add_option("--blockpart", bbp);
  bnd->add_option("--finv", b_finv);
  bnd->add_option("--g", b_g);
  bnd->add_option("--sweep", sweep, "h=lo:hi:step");
  bnd->add_option("--csv", bounds_csv);

  // locality
  auto* loc = app.add_subcommand("locality", "working-set profile of a trace");
  std::string l_trace, l_blocks, l_windows = "all", l_csv;
  loc->add_option("--trace", l_trace)->required();
  loc->add_option("--blocks", l_blocks)->required();
  loc->add_option("--windows", l_windows, "comma list or 'all'");
  loc->add_option("--csv", l_csv);

  // reduce / verify-reduction
  auto* red = app.add_subcommand("reduce",
                                 "variable-size instance -> GC instance");
  std::string r_in, r_prefix = "reduced";
  red->add_option("--in", r_in)->required();
  red->add_option("--out-prefix", r_prefix);
  auto* ver = app.add_subcommand("verify-reduction",
                                 "compare both brute-force optima");
  std::string v_in;
  ver->add_option("--in", v_in)->required();

  // experiment
  auto* exp = app.add_subcommand("experiment", "run a named reproduction");
  std::string e_name, e_out;
  std::vector<std::string> e_params;
  exp->add_option("name", e_name, "fig4 | fig6 | table1 | table2 | "
                                  "adversary-sweep | opt-vs-policies")
      ->required();
  exp->add_option("--param", e_params, "name=value overrides");
  exp->add_option("--out", e_out, "output CSV path");

  for (auto* sub : app.get_subcommands({}))
    sub->set_help_flag("--help", "print help");

  try {
    app.parse(argc, argv);
    if (format != "csv")
      throw gcsim::UsageError("unsupported format '" + format +
                              "'; only csv is available");
    if (e_out.empty()) e_out = global_out;
    if (*sim)
      return cmd_simulate(policy_spec, trace_path, blocks_path, k, per_access);
    if (*gen)
      return cmd_generate(adversary, gen_policy, gk, gh, gB, cycles, finv_spec,
                          g_spec, phases, gen_blocks, out_prefix);
    if (*ora) return cmd_oracle(o_trace, o_blocks, o_h, o_belady);
    if (*bnd)
      return cmd_bounds(formula, bk, bh, bB, bF, belem, bbp, b_finv, b_g,
                        sweep, bounds_csv);
    if (*loc) return cmd_locality(l_trace, l_blocks, l_windows, l_csv);
    if (*red) return cmd_reduce(r_in, r_prefix);
    if (*ver) return cmd_verify_reduction(v_in);
    if (*exp) return cmd_experiment(e_name, e_params, e_out, seed);
    return 2;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const gcsim::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const gcsim::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
