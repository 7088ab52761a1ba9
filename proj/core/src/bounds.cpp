#include "gcsim/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "gcsim/errors.hpp"

namespace gcsim::bounds {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

Rational rat(long long v) { return Rational(v); }

}  // namespace

Rational st_bound(long long k, long long h) {
  require(k >= h && h >= 1, "st_bound needs k >= h >= 1");
  return Rational(k, k - h + 1);
}

Rational lb_item(long long k, long long h, long long B) {
  require(k > h && h >= B && B >= 1, "lb_item needs k > h >= B >= 1");
  return Rational(B * (k - B + 1), k - h + 1);
}

std::optional<Rational> lb_block(long long k, long long h, long long B) {
  require(B >= 1 && k >= B && h >= 1, "lb_block needs k >= B >= 1, h >= 1");
  if (k <= B * (h - 1)) return std::nullopt;  // ratio unbounded
  return Rational(k, k - B * (h - 1));
}

Rational lb_general(long long k, long long h, long long B, long long F) {
  require(k > h && h >= F && F >= 1 && F <= B,
          "lb_general needs k > h >= F >= 1 and F <= B");
  return Rational(F * (k - h + 1) + B * (h - F), k - h + 1);
}

Rational lb_envelope(long long k, long long h, long long B) {
  require(k > h && h >= 1 && B >= 1, "lb_envelope needs k > h >= 1, B >= 1");
  Rational low = lb_general(k, h, B, 1);
  Rational high = lb_general(k, h, B, std::min(B, h));
  return std::min(low, high);
}

Rational ub_elem_part(long long elem, long long h) {
  require(elem > h && h >= 1, "ub_elem_part needs elem > h >= 1");
  return Rational(elem, elem - h);
}

Rational ub_block_part(long long bp, long long h, long long B) {
  require(bp >= B && B >= 1 && h >= 1, "ub_block_part needs bp >= B >= 1");
  return std::min(rat(B), Rational(bp + 2 * B * h - B, bp + B));
}

Rational iblp_threshold(long long bp, long long B) {
  require(B >= 1 && bp >= 0, "iblp_threshold needs B >= 1, bp >= 0");
  return Rational(2 * B * bp - bp + 2 * B * B + B, 2 * B);
}

Rational ub_iblp_at(const Rational& elem, long long bp, long long B,
                    long long h) {
  require(B >= 1 && bp >= 0 && h >= 1, "ub_iblp needs B >= 1, bp >= 0, h >= 1");
  require(rat(h) < elem, "ub_iblp needs elem > h");
  Rational e = elem;
  if (e <= iblp_threshold(bp, B)) {
    Rational num = (rat(bp) + rat(B) * (rat(2) * e - rat(1)));
    return num * num /
           (rat(8 * B) * rat(B + bp) * (e - rat(h)));
  }
  return (rat(2 * B) * e - rat(B * bp) + rat(bp) - rat(B * B) - rat(B)) /
         (rat(2) * e - rat(2 * h));
}

Rational ub_iblp(long long elem, long long bp, long long B, long long h) {
  return ub_iblp_at(rat(elem), bp, B, h);
}

LpWitness iblp_lp_witness(long long elem, long long bp, long long B,
                          long long h) {
  require(B >= 1 && bp >= 0 && h >= 1 && elem > h,
          "iblp_lp_witness needs B >= 1, bp >= 0, elem > h >= 1");
  require(rat(elem) <= iblp_threshold(bp, B),
          "iblp_lp_witness applies to the first-branch regime only");
  Rational e = rat(elem), P = rat(bp), b = rat(B), H = rat(h);

  LpWitness w;
  w.r = (P + b * (rat(4) * H - rat(2) * e - rat(1))) /
        (P + b * (rat(2) * e - rat(1)));
  require(Rational(0) <= w.r, "iblp_lp_witness: r < 0 outside proof regime");
  Rational one_minus_r = rat(1) - w.r;
  Rational denom = P - P * w.r + b * (rat(2) * H - rat(1) + w.r - rat(2) * e * w.r);
  w.s = (b + P) * one_minus_r * one_minus_r / denom;
  w.t = denom / ((b + P) * one_minus_r);
  w.objective = rat(1) / (rat(1) - w.r - w.s * (w.t - rat(1)));
  // Triangle usage pattern: each extra item outlives its predecessor by
  // bp/B + 1 accesses.
  Rational usage =
      w.t + (P / b + rat(1)) * w.t * (w.t - rat(1)) / rat(2);
  w.cache_usage = w.r * e + w.s * usage;
  w.accesses = w.r + w.s * w.t;
  return w;
}

PartitionChoice optimal_partition(long long k, long long B, long long h,
                                  long long scan_cap) {
  require(k > h && h >= 1 && B >= 1, "optimal_partition needs k > h >= 1");
  auto evaluate = [&](long long e) {
    return PartitionChoice{e, k - e, ub_iblp(e, k - e, B, h)};
  };
  PartitionChoice best = evaluate(k);  // item-only split always valid

  if (B == 1) return best;  // no spatial locality to exploit

  if (k <= scan_cap) {
    for (long long e = h + 1; e < k; ++e) {
      PartitionChoice c = evaluate(e);
      if (c.ratio < best.ratio) best = c;
    }
    return best;
  }

  // Closed-form regime split: below the boundary the item-only split wins.
  Rational boundary = Rational(3 * B * h - h - B * B - B, B - 1);
  if (rat(k) < boundary) return best;

  Rational e_star =
      Rational(k * k + 4 * B * h * k - h * k + 4 * B * B * h - 3 * B * h -
                   B * B,
               2 * B * k + k + 2 * B * h - h + 2 * B * B - 3 * B);
  for (long long e : {e_star.floor(), e_star.ceil()}) {
    if (e <= h || e > k) continue;
    PartitionChoice c = evaluate(e);
    if (c.ratio < best.ratio) best = c;
  }
  return best;
}

double fault_lb(long long k, const Fn& f_inverse, const Fn& g) {
  require(k >= 1, "fault_lb needs k >= 1");
  double window = f_inverse(static_cast<double>(k + 1)) - 2.0;
  require(window >= 1.0, "fault_lb needs f^-1(k+1) >= 3");
  double rate = g(window) / window;
  require(std::isfinite(rate), "fault_lb: g undefined at the window");
  return rate;
}

double fault_ub_iblp(long long elem, long long bp, long long B,
                     const Fn& f_inverse, const Fn& g_inverse,
                     bool literal_statement) {
  require(elem >= 2, "fault_ub_iblp needs elem >= 2");
  require(B >= 1 && bp >= 2 * B, "fault_ub_iblp needs bp/B >= 2");
  double elem_window = f_inverse(static_cast<double>(elem + 1)) - 2.0;
  require(elem_window > 0, "fault_ub_iblp: f^-1 window not positive");
  double elem_rate = static_cast<double>(elem - 1) / elem_window;

  double eff = static_cast<double>(bp) / static_cast<double>(B);
  const Fn& block_fn = literal_statement ? f_inverse : g_inverse;
  double block_window = block_fn(eff + 1.0) - 2.0;
  require(block_window > 0, "fault_ub_iblp: block window not positive");
  double block_rate = (eff - 1.0) / block_window;
  return std::min(elem_rate, block_rate);
}

}  // namespace gcsim::bounds
