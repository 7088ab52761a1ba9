#pragma once

#include <functional>
#include <optional>

#include "gcsim/rational.hpp"

namespace gcsim::bounds {

using Fn = std::function<double(double)>;

// Classic deterministic paging lower bound: k / (k - h + 1).
Rational st_bound(long long k, long long h);

// Item-policy lower bound: B (k - B + 1) / (k - h + 1).
Rational lb_item(long long k, long long h, long long B);

// Block-policy lower bound: k / (k - B(h-1)); nullopt when the ratio is
// unbounded (k <= B(h-1)).
std::optional<Rational> lb_block(long long k, long long h, long long B);

// General lower bound for a policy that takes F distinct consecutive
// accesses to load a whole block: (F(k-h+1) + B(h-F)) / (k-h+1).
Rational lb_general(long long k, long long h, long long B, long long F);

// min over F in {1, min(B, h)} of lb_general; the ratio is minimized at an
// extreme F.
Rational lb_envelope(long long k, long long h, long long B);

// Element-partition upper bound (temporal locality only): e / (e - h).
Rational ub_elem_part(long long elem, long long h);

// Block-partition upper bound (spatial locality only):
// min(B, (bp + 2Bh - B) / (bp + B)).
Rational ub_block_part(long long blockpart, long long h, long long B);

// Threshold between the two branches of the layered-policy bound.
Rational iblp_threshold(long long blockpart, long long B);

// Two-case competitive upper bound for the layered policy.
Rational ub_iblp(long long elem, long long blockpart, long long B,
                 long long h);
// Same, at a rational element-layer size (used to probe branch continuity).
Rational ub_iblp_at(const Rational& elem, long long blockpart, long long B,
                    long long h);

// Optimizer's witness from the first-branch analysis: r = temporal-hit
// fraction, s = loading-miss fraction, t = items loaded per spatial miss.
struct LpWitness {
  Rational r, s, t;
  Rational objective;   // 1 / (1 - r - s(t-1))
  Rational cache_usage; // r*elem + s*(t + (bp/B + 1) t(t-1)/2)
  Rational accesses;    // r + s*t
};

LpWitness iblp_lp_witness(long long elem, long long blockpart, long long B,
                          long long h);

struct PartitionChoice {
  long long elem = 0;
  long long blockpart = 0;
  Rational ratio;
};

// Best element/block split of a cache of size k against an optimal cache of
// size h: exact integer scan up to `scan_cap`, closed-form candidates above.
PartitionChoice optimal_partition(long long k, long long B, long long h,
                                  long long scan_cap = 65536);

// Fault-rate lower bound from the locality model:
// g(f^-1(k+1) - 2) / (f^-1(k+1) - 2).
double fault_lb(long long k, const Fn& f_inverse, const Fn& g);

// Fault-rate upper bound for the layered policy: min of the two partition
// rates. The block partition uses g^-1 with effective size bp/B; passing
// `literal_statement` evaluates the f^-1 variant instead.
double fault_ub_iblp(long long elem, long long blockpart, long long B,
                     const Fn& f_inverse, const Fn& g_inverse,
                     bool literal_statement = false);

}  // namespace gcsim::bounds
