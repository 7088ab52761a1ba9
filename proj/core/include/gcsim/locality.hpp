#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gcsim/types.hpp"

namespace gcsim {

// Extended working-set functions: f(n) is the maximum number of distinct
// items in any window of n consecutive accesses, g(n) the same for blocks.
struct LocalityProfile {
  std::vector<std::size_t> window_sizes;
  std::vector<std::size_t> f;
  std::vector<std::size_t> g;
  std::size_t distinct_items = 0;
  std::size_t distinct_blocks = 0;
  std::uint32_t max_block_size = 1;
};

struct LocalityBudget {
  std::size_t all_mode_cap = 20000;  // trace length ceiling for profile_all
};

// Exact sliding-window maxima for the requested window sizes.
LocalityProfile profile(const Trace& trace, const BlockMap& map,
                        const std::vector<std::size_t>& window_sizes);

// Every window size 1..trace length. Quadratic; gated by the budget cap.
LocalityProfile profile_all(const Trace& trace, const BlockMap& map,
                            const LocalityBudget& budget = {});

struct LocalityViolation {
  std::size_t window = 0;
  std::size_t measured = 0;
  double declared = 0;
  std::string function;  // "f" or "g"
};

// Checks measured f, g against declared functions pointwise over every
// window size; nullopt means the trace is consistent with the declaration.
std::optional<LocalityViolation> validate_against(
    const Trace& trace, const BlockMap& map,
    const std::function<double(std::size_t)>& f_declared,
    const std::function<double(std::size_t)>& g_declared,
    const LocalityBudget& budget = {});

struct PolyFit {
  double coefficient = 0;       // c in f(n) ~ c * n^(1/p)
  double exponent_p = 0;        // p
  double max_rel_residual = 0;
};

// Least-squares fit of f(n) ~ c * n^(1/p) in log-log space, using only
// window sizes before working-set saturation. Throws DegenerateFit when f
// is constant over the usable range.
PolyFit fit_polynomial(const LocalityProfile& profile);

// f(n)/g(n) at a computed window size; lies in [1, B].
double spatial_ratio(const LocalityProfile& profile, std::size_t n);

}  // namespace gcsim
