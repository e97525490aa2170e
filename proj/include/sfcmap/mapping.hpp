#pragma once

#include <sfcmap/curve.hpp>
#include <sfcmap/error.hpp>
#include <sfcmap/grid.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <thread>
#include <vector>

namespace sfcmap {

/// Bijection between two grids of equal cell count, obtained by walking a
/// source curve and a target curve in lockstep: the cell visited at position
/// i of the source curve is paired with the cell visited at position i of
/// the target curve.
class Mapping {
 public:
  Mapping(const CurveSpec& source, const CurveSpec& target,
          std::size_t limit = kDefaultMaterializationLimit)
      : source_(check_lengths(source, target), limit), target_(target, limit) {
    const std::size_t n = source_.size();
    const GridShape src_shape = shape_of(source);
    const GridShape tgt_shape = shape_of(target);
    forward_.resize(n);
    inverse_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto s = static_cast<std::size_t>(linear_offset(src_shape, source_[i]));
      const auto t = static_cast<std::size_t>(linear_offset(tgt_shape, target_[i]));
      forward_[s] = t;
      inverse_[t] = s;
    }
  }

  const CurveSpec& source() const noexcept { return source_.spec(); }
  const CurveSpec& target() const noexcept { return target_.spec(); }
  GridShape source_shape() const noexcept { return shape_of(source()); }
  GridShape target_shape() const noexcept { return shape_of(target()); }
  std::size_t size() const noexcept { return forward_.size(); }

  /// Source coordinate C_m(i) and target coordinate C_l(i) at curve position i.
  std::span<const coord_t> source_coord(std::size_t i) const noexcept { return source_[i]; }
  std::span<const coord_t> target_coord(std::size_t i) const noexcept { return target_[i]; }

  const Traversal& source_traversal() const noexcept { return source_; }
  const Traversal& target_traversal() const noexcept { return target_; }

  /// Source linear offset -> target linear offset, and back.
  std::span<const std::size_t> forward() const noexcept { return forward_; }
  std::span<const std::size_t> inverse() const noexcept { return inverse_; }

 private:
  static const CurveSpec& check_lengths(const CurveSpec& source, const CurveSpec& target) {
    if (source.length() != target.length())
      throw Error(ErrorCode::LengthMismatch,
                  "source " + to_string(source) + " has " + std::to_string(source.length()) +
                      " points, target " + to_string(target) + " has " +
                      std::to_string(target.length()));
    return source;
  }

  Traversal source_;
  Traversal target_;
  std::vector<std::size_t> forward_;
  std::vector<std::size_t> inverse_;
};

inline Mapping compose(const CurveSpec& source, const CurveSpec& target,
                       std::size_t limit = kDefaultMaterializationLimit) {
  return Mapping(source, target, limit);
}

namespace detail {

// out[dst] = in[gather[dst]] for every channel.
template <typename T>
BasicChannelGrid<T> permute(const BasicChannelGrid<T>& in, GridShape out_shape,
                            std::span<const std::size_t> gather) {
  BasicChannelGrid<T> out(out_shape, in.channels());
  const std::size_t n = gather.size();
  auto dst = out.raw();
  const auto src = in.values();
  for (std::size_t c = 0; c < in.channels(); ++c) {
    const std::size_t base = c * n;
    for (std::size_t t = 0; t < n; ++t) dst[base + t] = src[base + gather[t]];
  }
  return out;
}

}  // namespace detail

/// Relabels a source-shaped grid into the target grid (any channel count).
template <typename T>
BasicChannelGrid<T> encode(const BasicChannelGrid<T>& grid, const Mapping& mapping) {
  if (grid.shape() != mapping.source_shape())
    throw Error(ErrorCode::ShapeMismatch, "grid shape " + to_string(grid.shape()) +
                                              " does not match mapping source " +
                                              to_string(mapping.source_shape()));
  return detail::permute(grid, mapping.target_shape(), mapping.inverse());
}

/// Inverse of encode: brings a target-shaped grid (e.g. a saliency map) back.
template <typename T>
BasicChannelGrid<T> decode(const BasicChannelGrid<T>& grid, const Mapping& mapping) {
  if (grid.shape() != mapping.target_shape())
    throw Error(ErrorCode::ShapeMismatch, "grid shape " + to_string(grid.shape()) +
                                              " does not match mapping target " +
                                              to_string(mapping.target_shape()));
  return detail::permute(grid, mapping.source_shape(), mapping.forward());
}

/// Item-wise encode over a batch. Items are split into contiguous blocks, one
/// per worker; output order always matches input order. A shape mismatch is
/// reported with the offending item index as the error location.
template <typename T>
std::vector<BasicChannelGrid<T>> encode_stream(std::span<const BasicChannelGrid<T>> grids,
                                               const Mapping& mapping, unsigned jobs = 1) {
  for (std::size_t i = 0; i < grids.size(); ++i)
    if (grids[i].shape() != mapping.source_shape())
      throw Error(ErrorCode::ShapeMismatch,
                  "batch item shape " + to_string(grids[i].shape()) +
                      " does not match mapping source " + to_string(mapping.source_shape()),
                  i);

  std::vector<BasicChannelGrid<T>> out(grids.size());
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(jobs, grids.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < grids.size(); ++i) out[i] = encode(grids[i], mapping);
    return out;
  }

  const std::size_t block = (grids.size() + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * block;
    const std::size_t end = std::min(grids.size(), begin + block);
    pool.emplace_back([&, begin, end] {
      for (std::size_t i = begin; i < end; ++i) out[i] = encode(grids[i], mapping);
    });
  }
  pool.clear();  // joins
  return out;
}

template <typename T>
std::vector<BasicChannelGrid<T>> encode_stream(const std::vector<BasicChannelGrid<T>>& grids,
                                               const Mapping& mapping, unsigned jobs = 1) {
  return encode_stream(std::span<const BasicChannelGrid<T>>(grids), mapping, jobs);
}

}  // namespace sfcmap
