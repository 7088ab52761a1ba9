#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "gcsim/bounds.hpp"
#include "gcsim/errors.hpp"

using namespace gcsim;
using namespace gcsim::bounds;

namespace {

double sq(double x) { return x * x; }

}  // namespace

TEST_CASE("st_bound") {
  CHECK(st_bound(20, 10) == Rational(20, 11));
  CHECK(st_bound(7, 7) == Rational(7));
  CHECK(st_bound(2000000, 1000000).value() == doctest::Approx(2.0).epsilon(1e-5));
  CHECK_THROWS_AS(st_bound(5, 6), DomainError);
}

TEST_CASE("lb_item") {
  CHECK(lb_item(8, 4, 2) == Rational(14, 5));  // 2.8
  for (long long k : {10, 50, 200})
    for (long long h = 1; h < k; ++h)
      CHECK(lb_item(k, h, 1) == st_bound(k, h));
  CHECK(lb_item(1280000, 640000, 64).value() ==
        doctest::Approx(128.0).epsilon(0.01));
  CHECK_THROWS_AS(lb_item(8, 8, 2), DomainError);
}

TEST_CASE("lb_block") {
  auto r = lb_block(128, 8, 4);
  REQUIRE(r.has_value());
  CHECK(*r == Rational(128, 100));
  CHECK(!lb_block(14, 8, 2).has_value());  // k = B(h-1): unbounded
  for (long long h = 1; h <= 8; ++h) CHECK(*lb_block(16, h, 1) == st_bound(16, h));
  CHECK_THROWS_AS(lb_block(1, 1, 2), DomainError);
}

TEST_CASE("lb_general and its envelope") {
  // F = B reduces exactly to the item bound.
  for (long long k : {9, 33, 200})
    for (long long B : {2, 3, 8})
      for (long long h = B; h < k; h += 3)
        CHECK(lb_general(k, h, B, B) == lb_item(k, h, B));

  // Table-1 anchors at k = 1.28e6, B = 64.
  CHECK(lb_general(1280000, 640000, 64, 1).value() ==
        doctest::Approx(65.0).epsilon(0.001));
  CHECK(lb_general(1280000, 20000, 64, 1).value() ==
        doctest::Approx(2.0158).epsilon(0.001));

  // The envelope picks F = 1 exactly when k - h + 1 > B.
  for (long long k = 12; k <= 60; k += 7)
    for (long long h = 4; h < k; h += 3) {
      long long B = 4;
      if (h < B) continue;
      Rational f1 = lb_general(k, h, B, 1);
      Rational fb = lb_general(k, h, B, std::min(B, h));
      CHECK(lb_envelope(k, h, B) == std::min(f1, fb));
      if (k - h + 1 > B) CHECK(f1 <= fb);
      if (k - h + 1 < B && h >= B) CHECK(fb <= f1);
      if (k - h + 1 == B && h >= B) CHECK(f1 == fb);
    }
}

TEST_CASE("ub_elem_part") {
  CHECK(ub_elem_part(20, 10) == Rational(2));
  CHECK(ub_elem_part(11, 10) == Rational(11));
  double prev = ub_elem_part(11, 10).value();
  for (long long e = 12; e < 200; ++e) {
    double cur = ub_elem_part(e, 10).value();
    CHECK(cur < prev);  // monotone decreasing toward 1
    prev = cur;
  }
  CHECK(prev == doctest::Approx(1.0).epsilon(0.06));
  CHECK_THROWS_AS(ub_elem_part(10, 10), DomainError);
}

TEST_CASE("ub_block_part") {
  long long h = 1000, B = 4;
  CHECK(ub_block_part(B * h, h, B).value() ==
        doctest::Approx(3.0).epsilon(0.01));  // (3h-1)/(h+1)
  CHECK(ub_block_part(100000000, 10, 4).value() ==
        doctest::Approx(1.0).epsilon(0.01));
  CHECK(ub_block_part(4, 1000, 4) == Rational(4));  // capped at B
  CHECK_THROWS_AS(ub_block_part(2, 10, 4), DomainError);
}

TEST_CASE("ub_iblp branches") {
  // thresh = (2*4*100 - 100 + 32 + 4) / 8 = 92; elem = 100 > 92.
  CHECK(iblp_threshold(100, 4) == Rational(92));
  CHECK(ub_iblp(100, 100, 4, 50) == Rational(480, 100));

  // Exact continuity at the threshold, over a parameter sweep.
  for (long long B : {2, 3, 8, 64})
    for (long long bp : {0, 16, 128, 4096}) {
      Rational t = iblp_threshold(bp, B);
      long long h = 2;
      if (!(Rational(h) < t)) continue;
      Rational first = (Rational(bp) + Rational(B) * (Rational(2) * t - 1)) *
                       (Rational(bp) + Rational(B) * (Rational(2) * t - 1)) /
                       (Rational(8 * B) * Rational(B + bp) * (t - Rational(h)));
      CHECK(ub_iblp_at(t, bp, B, h) == first);
      // Evaluate the closed second branch at the same rational point.
      Rational second =
          (Rational(2 * B) * t - Rational(B * bp) + Rational(bp) -
           Rational(B * B) - Rational(B)) /
          (Rational(2) * t - Rational(2 * h));
      CHECK(first == second);
    }
  CHECK_THROWS_AS(ub_iblp(50, 100, 4, 50), DomainError);
}

TEST_CASE("ub_iblp with no block partition tracks the element-only bound") {
  // Second branch at B=1, bp=0 gives (e-1)/(e-h); the element-only bound is
  // e/(e-h). Record the slack: exactly 1/(e-h).
  for (long long e : {20, 100, 1000}) {
    long long h = 10;
    Rational layered = ub_iblp(e, 0, 1, h);
    Rational elem_only = ub_elem_part(e, h);
    CHECK(elem_only - layered == Rational(1, e - h));
  }
}

TEST_CASE("lp witness satisfies both constraints and matches the bound") {
  std::mt19937_64 rng(31);
  int checked = 0;
  while (checked < 300) {
    long long B = std::uniform_int_distribution<long long>(2, 64)(rng);
    long long bp = B * std::uniform_int_distribution<long long>(0, 64)(rng);
    long long h = std::uniform_int_distribution<long long>(2, 400)(rng);
    long long e = h + std::uniform_int_distribution<long long>(1, 200)(rng);
    if (!(Rational(e) <= iblp_threshold(bp, B))) continue;
    LpWitness w;
    try {
      w = iblp_lp_witness(e, bp, B, h);
    } catch (const DomainError&) {
      continue;  // outside the proof regime (r < 0)
    }
    if (w.t < Rational(1) || Rational(B) < w.t) continue;
    ++checked;
    CHECK(w.accesses == Rational(1));            // 1 >= r + st, tight
    CHECK(w.cache_usage == Rational(h));         // h >= r e + s usage, tight
    CHECK(Rational(0) <= w.r);
    CHECK(w.r <= Rational(1));
    CHECK(Rational(0) <= w.s);
    CHECK(w.objective == ub_iblp(e, bp, B, h));  // first branch everywhere here
  }
}

TEST_CASE("optimal_partition spec anchors") {
  long long k = 1280000, B = 64;
  auto at_bh = optimal_partition(k, B, k / B);
  double approx = static_cast<double>(k) *
                  (k + 2.0 * B * (k / B)) / sq(static_cast<double>(k - k / B));
  CHECK(at_bh.ratio.value() == doctest::Approx(approx).epsilon(0.02));
  CHECK(at_bh.ratio.value() == doctest::Approx(3.0).epsilon(0.05));

  auto at_2h = optimal_partition(k, B, k / 2);
  CHECK(at_2h.ratio.value() == doctest::Approx(2.0 * B).epsilon(0.01));
  CHECK(at_2h.elem == k);  // item-only regime
  CHECK(at_2h.blockpart == 0);

  auto b1 = optimal_partition(1000, 1, 100);
  CHECK(b1.elem == 1000);
  CHECK(b1.blockpart == 0);
}

TEST_CASE("optimal_partition beats every alternative integer split") {
  for (long long k : {40, 100, 200, 333})
    for (long long B : {2, 4, 7})
      for (long long h : {k / 10 + 1, k / 3, k / 2}) {
        if (h < 1 || h >= k) continue;
        auto best = optimal_partition(k, B, h);
        for (long long e = h + 1; e <= k; ++e)
          CHECK(best.ratio <= ub_iblp(e, k - e, B, h));
      }
}

TEST_CASE("upper bound dominates lower bound across the sweep") {
  long long k = 1280000, B = 64;
  for (long long h = 64; h <= k / 2; h = h * 5 / 4) {
    auto ub = optimal_partition(k, B, h).ratio;
    auto lb = lb_envelope(k, h, B);
    CHECK(lb <= ub);
    CHECK(ub <= Rational(3) * lb);
    CHECK(st_bound(k, h) <= lb);
  }
}

TEST_CASE("fault_lb") {
  auto fsq_inv = [](double x) { return x * x; };
  auto gsq = [](double x) { return std::sqrt(x); };
  long long k = 100;
  double window = sq(k + 1.0) - 2;
  CHECK(fault_lb(k, fsq_inv, gsq) ==
        doctest::Approx(1.0 / (k + 1)).epsilon(0.001));
  CHECK(fault_lb(k, fsq_inv, gsq) == doctest::Approx(std::sqrt(window) / window));

  // Maximum spatial locality scales the bound down by B.
  double B = 16;
  auto g_b = [B](double x) { return std::sqrt(x) / B; };
  CHECK(fault_lb(k, fsq_inv, g_b) ==
        doctest::Approx(fault_lb(k, fsq_inv, gsq) / B));

  // No locality at all: every access faults.
  auto ident = [](double x) { return x; };
  CHECK(fault_lb(3, ident, ident) == doctest::Approx(1.0));
  CHECK_THROWS_AS(fault_lb(1, ident, ident), DomainError);
}

TEST_CASE("fault_ub_iblp") {
  auto f_inv = [](double x) { return x * x; };
  auto g_inv_same = f_inv;
  long long e = 64000, B = 64;
  double elem_side = fault_ub_iblp(e, e, B, f_inv, g_inv_same);
  CHECK(elem_side == doctest::Approx(1.0 / e).epsilon(0.01));

  auto g_inv_b = [B](double y) { return sq(B * y); };
  double block_side = fault_ub_iblp(e, e, B, f_inv, g_inv_b);
  CHECK(block_side == doctest::Approx(1.0 / (static_cast<double>(B) * e))
                          .epsilon(0.01));

  // Literal-statement variant uses f^-1 on the block side as well.
  double literal = fault_ub_iblp(e, e, B, f_inv, g_inv_b, true);
  CHECK(literal == doctest::Approx(1.0 / e).epsilon(0.01));

  CHECK_THROWS_AS(fault_ub_iblp(1, 128, 64, f_inv, g_inv_same), DomainError);
  CHECK_THROWS_AS(fault_ub_iblp(10, 64, 64, f_inv, g_inv_same), DomainError);
}

TEST_CASE("fault lower bound never exceeds the layered upper bound at "
          "matching sizes") {
  auto f_inv = [](double x) { return x * x; };
  auto g = [](double x) { return std::sqrt(x); };
  auto g_inv = f_inv;
  for (long long e : {128, 1024, 8192}) {
    long long k = 2 * e;
    CHECK(fault_lb(k, f_inv, g) <= fault_ub_iblp(e, e, 8, f_inv, g_inv));
  }
}
