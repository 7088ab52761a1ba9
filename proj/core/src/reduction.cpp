#include "gcsim/reduction.hpp"

#include <numeric>

#include "gcsim/errors.hpp"

namespace gcsim {

ScaledInstance scale_instance(const VarSizeInstance& inst) {
  long long lcm = 1;
  for (const auto& [name, size] : inst.sizes) {
    if (!(Rational(0) < size))
      throw DomainError("scale_instance: sizes must be positive");
    lcm = std::lcm(lcm, static_cast<long long>(size.den()));
  }
  ScaledInstance scaled;
  scaled.scale = lcm;
  scaled.instance.capacity = inst.capacity * Rational(lcm);
  scaled.instance.accesses = inst.accesses;
  for (const auto& [name, size] : inst.sizes)
    scaled.instance.sizes[name] = size * Rational(lcm);
  return scaled;
}

GcInstance reduce(const VarSizeInstance& inst) {
  for (const auto& [name, size] : inst.sizes)
    if (size.den() != 1)
      throw DomainError("reduce expects a scaled (integral) instance");

  GcInstance gc;
  // Integral item sizes make every cache usage integral, so a fractional
  // capacity rounds down without changing the optimum.
  gc.capacity = static_cast<std::size_t>(inst.capacity.floor());

  std::map<std::string, std::uint32_t> block_of;
  std::uint32_t max_active = 1;
  for (const auto& [name, size] : inst.sizes) {
    auto z = static_cast<std::uint32_t>(size.num());
    std::uint32_t id = static_cast<std::uint32_t>(gc.block_names.size());
    block_of[name] = id;
    gc.block_names.push_back(name);
    gc.map.blocks[id] = z;
    max_active = std::max(max_active, z);
  }
  gc.map.max_block_size = max_active;

  // Each access to an item of size z becomes z round-robin rounds over the
  // block's z active items; the repetitions force whole-active-set loads.
  for (const auto& name : inst.accesses) {
    auto it = inst.sizes.find(name);
    if (it == inst.sizes.end())
      throw DomainError("reduce: access to item without a size: " + name);
    auto z = static_cast<std::uint32_t>(it->second.num());
    std::uint32_t block = block_of[name];
    for (std::uint32_t round = 0; round < z; ++round)
      for (std::uint32_t index = 0; index < z; ++index)
        gc.trace.accesses.push_back({block, index});
  }
  return gc;
}

ReductionCheck verify_reduction(const VarSizeInstance& inst,
                                const VarSizeBudget& vs_budget,
                                const OracleBudget& gc_budget) {
  ReductionCheck check;
  check.varsize_opt = opt_varsize(inst, vs_budget);
  GcInstance gc = reduce(scale_instance(inst).instance);
  check.gc_opt =
      opt_gc(gc.trace, gc.map, gc.capacity, gc_budget).claimed_cost;
  check.equal = check.varsize_opt == check.gc_opt;
  return check;
}

}  // namespace gcsim
