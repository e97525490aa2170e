#pragma once

// Locality-preservation measures over curve-index pairs i < j.
//
//   CurveL      sum |i - j| / d(C(i), C(j))
//   ComposedL   sum |i - j| / d(C_l(i), C_l(j))      (target side of a mapping)
//   KernelCount #{ d(C_l(i), C_l(j)) <= K_l  and  d(C_m(i), C_m(j)) <= K_m }
//
// d is Euclidean. Reports carry raw sums and the number of pairs evaluated;
// averaging is left to the caller.
//
// Exact mode walks every pair in (i, j) lexicographic order. Sampled mode
// draws `pairs` distinct pair ranks from [0, n(n-1)/2) with Floyd's
// algorithm on Rng(seed), sorts them, and evaluates them in that order, so a
// sample that covers every pair reproduces the exact sum bit for bit.

#include <sfcmap/curve.hpp>
#include <sfcmap/error.hpp>
#include <sfcmap/mapping.hpp>
#include <sfcmap/random.hpp>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

namespace sfcmap {

struct Exact {};

struct Sampled {
  std::uint64_t seed = 0;
  std::uint64_t pairs = 0;
};

using LocalityMode = std::variant<Exact, Sampled>;

struct LocalityLimits {
  /// Largest point count accepted in exact mode.
  std::uint64_t exact_points = 4096;
  /// Largest number of sampled pairs held in memory at once.
  std::uint64_t sampled_pairs = std::uint64_t{1} << 27;
};

enum class MeasureKind { CurveL, ComposedL, KernelCount };

constexpr std::string_view to_string(MeasureKind kind) noexcept {
  switch (kind) {
    case MeasureKind::CurveL: return "eq1";
    case MeasureKind::ComposedL: return "eq2";
    case MeasureKind::KernelCount: return "eq3";
  }
  return "unknown";
}

struct KernelSpec {
  std::uint64_t source_side = 0;  // K_m
  std::uint64_t target_side = 0;  // K_l
};

struct LocalityReport {
  MeasureKind kind = MeasureKind::CurveL;
  double value = 0.0;        // sum for CurveL / ComposedL, count for KernelCount
  std::uint64_t count = 0;   // KernelCount only
  std::uint64_t pairs = 0;   // pairs evaluated
  bool exact = false;        // every pair was evaluated
  std::optional<std::uint64_t> seed;
};

namespace detail {

constexpr std::uint64_t pair_total(std::uint64_t n) noexcept {
  return n < 2 ? 0 : (n % 2 == 0 ? (n / 2) * (n - 1) : n * ((n - 1) / 2));
}

// Rank of the first pair (i, i+1) in row i.
constexpr std::uint64_t row_start(std::uint64_t n, std::uint64_t i) noexcept {
  return pair_total(n) - pair_total(n - i);
}

inline std::pair<std::uint64_t, std::uint64_t> pair_of_rank(std::uint64_t n, std::uint64_t r) {
  std::uint64_t lo = 0, hi = n - 2;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo + 1) / 2;
    if (row_start(n, mid) <= r) lo = mid;
    else hi = mid - 1;
  }
  return {lo, lo + 1 + (r - row_start(n, lo))};
}

inline std::vector<std::uint64_t> sample_ranks(std::uint64_t total, std::uint64_t k,
                                               std::uint64_t seed) {
  Rng rng(seed);
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(k));
  for (std::uint64_t j = total - k; j < total; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> ranks(chosen.begin(), chosen.end());
  std::sort(ranks.begin(), ranks.end());
  return ranks;
}

// Calls fn(i, j) for the pairs selected by `mode` and fills the bookkeeping
// fields of `report`.
template <typename Fn>
void for_each_pair(std::uint64_t n, const LocalityMode& mode, const LocalityLimits& limits,
                   LocalityReport& report, Fn&& fn) {
  const std::uint64_t total = pair_total(n);
  const auto* sampled = std::get_if<Sampled>(&mode);
  if (sampled) report.seed = sampled->seed;

  const bool full = !sampled || sampled->pairs >= total;
  if (full) {
    if (n > limits.exact_points)
      throw Error(ErrorCode::CapacityExceeded,
                  std::to_string(n) + " points exceed the exact-evaluation limit of " +
                      std::to_string(limits.exact_points) + "; use sampled mode");
    for (std::uint64_t i = 0; i + 1 < n; ++i)
      for (std::uint64_t j = i + 1; j < n; ++j) fn(i, j);
    report.pairs = total;
    report.exact = true;
    return;
  }

  if (sampled->pairs > limits.sampled_pairs)
    throw Error(ErrorCode::CapacityExceeded,
                std::to_string(sampled->pairs) + " sampled pairs exceed the limit of " +
                    std::to_string(limits.sampled_pairs));
  for (const std::uint64_t r : sample_ranks(total, sampled->pairs, sampled->seed)) {
    const auto [i, j] = pair_of_rank(n, r);
    fn(i, j);
  }
  report.pairs = sampled->pairs;
  report.exact = false;
}

inline double ratio_term(std::uint64_t i, std::uint64_t j, std::uint64_t squared) {
  assert(squared > 0 && "distinct curve positions map to distinct points");
  return static_cast<double>(j - i) / std::sqrt(static_cast<double>(squared));
}

inline bool within(std::uint64_t squared, std::uint64_t side) {
  return static_cast<unsigned __int128>(squared) <=
         static_cast<unsigned __int128>(side) * static_cast<unsigned __int128>(side);
}

}  // namespace detail

inline LocalityReport curve_locality(const CurveSpec& spec, const LocalityMode& mode,
                                     const LocalityLimits& limits = {}) {
  LocalityReport report;
  report.kind = MeasureKind::CurveL;
  const std::uint64_t n = spec.length();
  const bool full = std::holds_alternative<Exact>(mode) ||
                    std::get<Sampled>(mode).pairs >= detail::pair_total(n);
  double sum = 0.0;
  if (full && n <= limits.exact_points) {
    const Traversal curve(spec);
    detail::for_each_pair(n, mode, limits, report, [&](std::uint64_t i, std::uint64_t j) {
      sum += detail::ratio_term(i, j, squared_distance(curve[i], curve[j]));
    });
  } else {
    Coord a(spec.dimension()), b(spec.dimension());
    detail::for_each_pair(n, mode, limits, report, [&](std::uint64_t i, std::uint64_t j) {
      index_to_coord(spec, i, a);
      index_to_coord(spec, j, b);
      sum += detail::ratio_term(i, j, squared_distance(a, b));
    });
  }
  report.value = sum;
  return report;
}

inline LocalityReport composed_locality(const Mapping& mapping, const LocalityMode& mode,
                                        const LocalityLimits& limits = {}) {
  LocalityReport report;
  report.kind = MeasureKind::ComposedL;
  double sum = 0.0;
  detail::for_each_pair(mapping.size(), mode, limits, report,
                        [&](std::uint64_t i, std::uint64_t j) {
                          sum += detail::ratio_term(
                              i, j,
                              squared_distance(mapping.target_coord(i), mapping.target_coord(j)));
                        });
  report.value = sum;
  return report;
}

inline LocalityReport kernel_locality(const Mapping& mapping, const KernelSpec& kernel,
                                      const LocalityMode& mode,
                                      const LocalityLimits& limits = {}) {
  LocalityReport report;
  report.kind = MeasureKind::KernelCount;
  std::uint64_t count = 0;
  detail::for_each_pair(
      mapping.size(), mode, limits, report, [&](std::uint64_t i, std::uint64_t j) {
        if (detail::within(squared_distance(mapping.target_coord(i), mapping.target_coord(j)),
                           kernel.target_side) &&
            detail::within(squared_distance(mapping.source_coord(i), mapping.source_coord(j)),
                           kernel.source_side))
          ++count;
      });
  report.count = count;
  report.value = static_cast<double>(count);
  return report;
}

}  // namespace sfcmap
