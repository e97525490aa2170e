#pragma once

#include <sfcmap/dataset/manifest.hpp>
#include <sfcmap/error.hpp>
#include <sfcmap/random.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace sfcmap::dataset {

using SplitFractions = std::array<double, 3>;  // train, validation, test

struct SplitOptions {
  SplitFractions fractions{0.7, 0.1, 0.2};
  std::uint64_t seed = 0;
  bool stratify = true;  // split each class label separately
};

inline void validate_fractions(std::span<const double> fractions) {
  if (fractions.size() != 3)
    throw Error(ErrorCode::BadFractions, "expected 3 fractions (train, validation, test), got " +
                                             std::to_string(fractions.size()));
  double sum = 0.0;
  for (const double f : fractions) {
    if (!(f > 0.0) || !std::isfinite(f))
      throw Error(ErrorCode::BadFractions, "fractions must be positive");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw Error(ErrorCode::BadFractions, "fractions sum to " + std::to_string(sum) + ", not 1");
}

/// Largest-remainder apportionment of n items: floor each quota n * f_k,
/// then hand the leftover items to the largest fractional parts (ties go to
/// the earlier split).
inline std::array<std::size_t, 3> apportion(std::size_t n, const SplitFractions& fractions) {
  validate_fractions(fractions);
  std::array<std::size_t, 3> counts{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (int k = 0; k < 3; ++k) {
    const double quota = static_cast<double>(n) * fractions[k];
    // Absorb representation error such as 100 * 0.29 = 28.999999999999996.
    const double whole = std::floor(quota + 1e-9);
    counts[k] = static_cast<std::size_t>(whole);
    remainder[k] = std::max(0.0, quota - whole);
    assigned += counts[k];
  }
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return remainder[a] > remainder[b]; });
  for (std::size_t r = 0; assigned < n; ++r, ++assigned) ++counts[order[r % 3]];
  return counts;
}

/// Assigns train/validation/test to every entry. The result depends only on
/// the seed and the (label, id) pairs, never on input order: each group is
/// sorted by id, shuffled with Rng(seed) and cut by apportion().
inline void assign_splits(Manifest& manifest, const SplitOptions& options) {
  validate_fractions(options.fractions);
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < manifest.size(); ++i)
    groups[options.stratify ? manifest[i].label : std::string{}].push_back(i);

  Rng rng(options.seed);
  for (auto& [label, members] : groups) {
    std::stable_sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      return manifest[a].id < manifest[b].id;
    });
    rng.shuffle(members);
    const auto counts = apportion(members.size(), options.fractions);
    std::size_t next = 0;
    for (int k = 0; k < 3; ++k) {
      for (std::size_t c = 0; c < counts[k]; ++c, ++next) {
        auto& entry = manifest[members[next]];
        entry.split = static_cast<Split>(k);
        entry.split_seed = options.seed;
      }
    }
  }
}

inline std::array<std::size_t, 3> split_sizes(const Manifest& manifest) {
  std::array<std::size_t, 3> sizes{};
  for (const auto& e : manifest)
    if (e.split) ++sizes[static_cast<std::size_t>(*e.split)];
  return sizes;
}

}  // namespace sfcmap::dataset
