#include "gcsim/locality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "gcsim/errors.hpp"

namespace gcsim {
namespace {

// Max distinct keys over every window of length n, one two-pointer sweep.
template <typename Key>
std::size_t window_max_distinct(const std::vector<Key>& seq, std::size_t n) {
  std::unordered_map<Key, std::size_t> counts;
  std::size_t best = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    ++counts[seq[i]];
    if (i + 1 > n) {
      auto it = counts.find(seq[i - n]);
      if (--it->second == 0) counts.erase(it);
    }
    if (i + 1 >= n) best = std::max(best, counts.size());
  }
  return best;
}

LocalityProfile make_profile(const Trace& trace, const BlockMap& map,
                             std::vector<std::size_t> sizes) {
  if (trace.accesses.empty())
    throw DomainError("locality profile needs a nonempty trace");
  for (std::size_t n : sizes)
    if (n == 0 || n > trace.size())
      throw DomainError("window size outside [1, trace length]");
  for (const auto& a : trace.accesses)
    if (!map.contains(a))
      throw DomainError("trace access outside block map");

  std::vector<std::uint64_t> item_keys;
  std::vector<std::uint32_t> block_keys;
  item_keys.reserve(trace.size());
  block_keys.reserve(trace.size());
  for (const auto& a : trace.accesses) {
    item_keys.push_back((std::uint64_t{a.block} << 32) | a.index);
    block_keys.push_back(a.block);
  }

  LocalityProfile prof;
  prof.max_block_size = map.max_block_size;
  prof.window_sizes = std::move(sizes);
  prof.f.reserve(prof.window_sizes.size());
  prof.g.reserve(prof.window_sizes.size());
  for (std::size_t n : prof.window_sizes) {
    prof.f.push_back(window_max_distinct(item_keys, n));
    prof.g.push_back(window_max_distinct(block_keys, n));
  }
  prof.distinct_items = window_max_distinct(item_keys, trace.size());
  prof.distinct_blocks = window_max_distinct(block_keys, trace.size());
  return prof;
}

}  // namespace

LocalityProfile profile(const Trace& trace, const BlockMap& map,
                        const std::vector<std::size_t>& window_sizes) {
  return make_profile(trace, map, window_sizes);
}

LocalityProfile profile_all(const Trace& trace, const BlockMap& map,
                            const LocalityBudget& budget) {
  if (trace.size() > budget.all_mode_cap)
    throw BudgetExceeded("profile all-mode capped at " +
                         std::to_string(budget.all_mode_cap) + " accesses");
  std::vector<std::size_t> sizes(trace.size());
  std::iota(sizes.begin(), sizes.end(), 1);
  return make_profile(trace, map, std::move(sizes));
}

std::optional<LocalityViolation> validate_against(
    const Trace& trace, const BlockMap& map,
    const std::function<double(std::size_t)>& f_declared,
    const std::function<double(std::size_t)>& g_declared,
    const LocalityBudget& budget) {
  if (trace.accesses.empty()) return std::nullopt;  // vacuously consistent
  LocalityProfile prof = profile_all(trace, map, budget);
  for (std::size_t i = 0; i < prof.window_sizes.size(); ++i) {
    std::size_t n = prof.window_sizes[i];
    if (static_cast<double>(prof.f[i]) > f_declared(n))
      return LocalityViolation{n, prof.f[i], f_declared(n), "f"};
    if (static_cast<double>(prof.g[i]) > g_declared(n))
      return LocalityViolation{n, prof.g[i], g_declared(n), "g"};
  }
  return std::nullopt;
}

PolyFit fit_polynomial(const LocalityProfile& prof) {
  // Only pre-saturation points carry shape information.
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < prof.window_sizes.size(); ++i) {
    if (prof.f[i] >= prof.distinct_items && prof.distinct_items > 1) break;
    xs.push_back(std::log(static_cast<double>(prof.window_sizes[i])));
    ys.push_back(std::log(static_cast<double>(prof.f[i])));
  }
  if (xs.size() < 3)
    throw DomainError("fit_polynomial needs >= 3 pre-saturation windows");
  bool constant = std::all_of(ys.begin(), ys.end(),
                              [&](double y) { return y == ys.front(); });
  if (constant) throw DegenerateFit("working-set function is constant");

  double xm = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  double ym = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - xm) * (ys[i] - ym);
    sxx += (xs[i] - xm) * (xs[i] - xm);
  }
  double slope = sxy / sxx;
  if (slope <= 0) throw DegenerateFit("non-increasing working-set function");

  PolyFit fit;
  fit.exponent_p = 1.0 / slope;
  fit.coefficient = std::exp(ym - slope * xm);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double predicted = fit.coefficient * std::exp(slope * xs[i]);
    double actual = std::exp(ys[i]);
    fit.max_rel_residual =
        std::max(fit.max_rel_residual, std::abs(predicted - actual) / actual);
  }
  return fit;
}

double spatial_ratio(const LocalityProfile& prof, std::size_t n) {
  for (std::size_t i = 0; i < prof.window_sizes.size(); ++i)
    if (prof.window_sizes[i] == n)
      return static_cast<double>(prof.f[i]) / static_cast<double>(prof.g[i]);
  throw DomainError("spatial_ratio: window size " + std::to_string(n) +
                    " not computed");
}

}  // namespace gcsim
