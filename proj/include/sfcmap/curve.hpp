#pragma once

// Discrete space-filling curves on the hypercube lattice [0, 2^p)^m.
//
// Every family shares one bit layout: a curve index is read as p groups of
// m bits, most significant group first, and within a group the first axis
// owns the most significant bit. Z-order uses the layout directly, the
// Gray-coded curve applies it to the binary-reflected Gray code of the
// index, and the Hilbert curve applies it to the "transposed" Hilbert index
// of Skilling's iterative algorithm.

#include <sfcmap/error.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sfcmap {

using curve_index = std::uint64_t;
using coord_t = std::uint32_t;
using Coord = std::vector<coord_t>;

/// Upper bound on points held in memory by traversal() and compose().
inline constexpr std::size_t kDefaultMaterializationLimit = std::size_t{1} << 26;

enum class CurveFamily { Hilbert, ZOrder, GrayCoded };

constexpr std::string_view to_string(CurveFamily family) noexcept {
  switch (family) {
    case CurveFamily::Hilbert: return "hilbert";
    case CurveFamily::ZOrder: return "zorder";
    case CurveFamily::GrayCoded: return "gray";
  }
  return "unknown";
}

/// Accepts the canonical names plus a few common aliases ("morton", "z").
inline CurveFamily parse_family(std::string_view name) {
  if (name == "hilbert") return CurveFamily::Hilbert;
  if (name == "zorder" || name == "z" || name == "morton") return CurveFamily::ZOrder;
  if (name == "gray" || name == "graycoded") return CurveFamily::GrayCoded;
  throw Error(ErrorCode::InvalidSpec, "unknown curve family '" + std::string(name) + "'");
}

/// One discrete curve: family, dimension m >= 1 and order p >= 1. The grid
/// side is N = 2^p and the curve visits all N^m lattice points.
class CurveSpec {
 public:
  static constexpr unsigned kMaxIndexBits = 63;
  static constexpr unsigned kMaxOrder = 32;

  CurveSpec(CurveFamily family, unsigned dimension, unsigned order)
      : family_(family), dimension_(dimension), order_(order) {
    if (dimension == 0) throw Error(ErrorCode::InvalidSpec, "curve dimension must be >= 1");
    if (order == 0) throw Error(ErrorCode::InvalidSpec, "curve order must be >= 1");
    if (order > kMaxOrder)
      throw Error(ErrorCode::InvalidSpec,
                  "curve order " + std::to_string(order) + " exceeds coordinate width");
    if (static_cast<std::uint64_t>(dimension) * order > kMaxIndexBits)
      throw Error(ErrorCode::InvalidSpec, "curve length 2^" +
                                              std::to_string(std::uint64_t{dimension} * order) +
                                              " exceeds the index range");
  }

  CurveFamily family() const noexcept { return family_; }
  unsigned dimension() const noexcept { return dimension_; }
  unsigned order() const noexcept { return order_; }
  std::uint64_t side() const noexcept { return std::uint64_t{1} << order_; }
  std::uint64_t length() const noexcept { return std::uint64_t{1} << (dimension_ * order_); }

  friend bool operator==(const CurveSpec&, const CurveSpec&) = default;

 private:
  CurveFamily family_;
  unsigned dimension_;
  unsigned order_;
};

inline std::string to_string(const CurveSpec& spec) {
  return std::string(to_string(spec.family())) + ":" + std::to_string(spec.dimension()) + ":" +
         std::to_string(spec.order());
}

namespace detail {

// Spreads the index bits into m words of p bits (layout described above).
inline void deinterleave(curve_index h, unsigned m, unsigned p, std::span<coord_t> out) {
  std::fill(out.begin(), out.end(), coord_t{0});
  for (unsigned b = 0; b < p; ++b) {
    for (unsigned k = 0; k < m; ++k) {
      const unsigned bit = b * m + (m - 1 - k);
      out[k] |= static_cast<coord_t>((h >> bit) & 1u) << b;
    }
  }
}

inline curve_index interleave(std::span<const coord_t> in, unsigned m, unsigned p) {
  curve_index h = 0;
  for (unsigned b = 0; b < p; ++b) {
    for (unsigned k = 0; k < m; ++k) {
      const unsigned bit = b * m + (m - 1 - k);
      h |= static_cast<curve_index>((in[k] >> b) & 1u) << bit;
    }
  }
  return h;
}

constexpr curve_index gray_encode(curve_index i) noexcept { return i ^ (i >> 1); }

constexpr curve_index gray_decode(curve_index g) noexcept {
  for (unsigned shift = 1; shift < 64; shift <<= 1) g ^= g >> shift;
  return g;
}

// Skilling, "Programming the Hilbert curve" (AIP Conf. Proc. 707, 2004).
inline void hilbert_transpose_to_axes(std::span<coord_t> x, unsigned p) {
  const unsigned n = static_cast<unsigned>(x.size());
  const std::uint64_t limit = std::uint64_t{2} << (p - 1);

  // Gray decode by H ^ (H/2).
  coord_t t = x[n - 1] >> 1;
  for (unsigned i = n - 1; i > 0; --i) x[i] ^= x[i - 1];
  x[0] ^= t;

  // Undo excess work.
  for (std::uint64_t q = 2; q != limit; q <<= 1) {
    const coord_t lower = static_cast<coord_t>(q - 1);
    for (unsigned i = n; i-- > 0;) {
      if (x[i] & q) {
        x[0] ^= lower;
      } else {
        t = (x[0] ^ x[i]) & lower;
        x[0] ^= t;
        x[i] ^= t;
      }
    }
  }
}

inline void hilbert_axes_to_transpose(std::span<coord_t> x, unsigned p) {
  const unsigned n = static_cast<unsigned>(x.size());
  const std::uint64_t top = std::uint64_t{1} << (p - 1);

  for (std::uint64_t q = top; q > 1; q >>= 1) {
    const coord_t lower = static_cast<coord_t>(q - 1);
    for (unsigned i = 0; i < n; ++i) {
      if (x[i] & q) {
        x[0] ^= lower;
      } else {
        const coord_t t = (x[0] ^ x[i]) & lower;
        x[0] ^= t;
        x[i] ^= t;
      }
    }
  }

  for (unsigned i = 1; i < n; ++i) x[i] ^= x[i - 1];
  coord_t t = 0;
  for (std::uint64_t q = top; q > 1; q >>= 1)
    if (x[n - 1] & q) t ^= static_cast<coord_t>(q - 1);
  for (unsigned i = 0; i < n; ++i) x[i] ^= t;
}

inline void check_index(const CurveSpec& spec, curve_index i) {
  if (i >= spec.length())
    throw Error(ErrorCode::IndexOutOfRange, "index " + std::to_string(i) +
                                                " outside curve of length " +
                                                std::to_string(spec.length()));
}

inline void check_coord(const CurveSpec& spec, std::span<const coord_t> c) {
  if (c.size() != spec.dimension())
    throw Error(ErrorCode::CoordOutOfRange, "coordinate has " + std::to_string(c.size()) +
                                                " components, curve dimension is " +
                                                std::to_string(spec.dimension()));
  for (std::size_t k = 0; k < c.size(); ++k)
    if (c[k] >= spec.side())
      throw Error(ErrorCode::CoordOutOfRange, "component " + std::to_string(k) + " = " +
                                                  std::to_string(c[k]) + " >= side " +
                                                  std::to_string(spec.side()));
}

}  // namespace detail

/// Writes C(i) into `out`, which must hold spec.dimension() components.
inline void index_to_coord(const CurveSpec& spec, curve_index i, std::span<coord_t> out) {
  detail::check_index(spec, i);
  if (out.size() != spec.dimension())
    throw Error(ErrorCode::CoordOutOfRange, "output span does not match curve dimension");
  const unsigned m = spec.dimension();
  const unsigned p = spec.order();
  switch (spec.family()) {
    case CurveFamily::ZOrder:
      detail::deinterleave(i, m, p, out);
      break;
    case CurveFamily::GrayCoded:
      detail::deinterleave(detail::gray_encode(i), m, p, out);
      break;
    case CurveFamily::Hilbert:
      detail::deinterleave(i, m, p, out);
      detail::hilbert_transpose_to_axes(out, p);
      break;
  }
}

inline Coord index_to_coord(const CurveSpec& spec, curve_index i) {
  Coord c(spec.dimension());
  index_to_coord(spec, i, c);
  return c;
}

inline curve_index coord_to_index(const CurveSpec& spec, std::span<const coord_t> c) {
  detail::check_coord(spec, c);
  const unsigned m = spec.dimension();
  const unsigned p = spec.order();
  switch (spec.family()) {
    case CurveFamily::ZOrder:
      return detail::interleave(c, m, p);
    case CurveFamily::GrayCoded:
      return detail::gray_decode(detail::interleave(c, m, p));
    case CurveFamily::Hilbert: {
      Coord x(c.begin(), c.end());
      detail::hilbert_axes_to_transpose(x, p);
      return detail::interleave(x, m, p);
    }
  }
  return 0;
}

inline curve_index coord_to_index(const CurveSpec& spec, std::initializer_list<coord_t> c) {
  return coord_to_index(spec, std::span<const coord_t>(c.begin(), c.size()));
}

/// The full curve C(0), C(1), ..., C(N^m - 1), stored flat with stride m.
class Traversal {
 public:
  Traversal(const CurveSpec& spec, std::size_t limit = kDefaultMaterializationLimit)
      : spec_(spec) {
    if (spec.length() > limit)
      throw Error(ErrorCode::CapacityExceeded, "curve " + to_string(spec) + " has " +
                                                   std::to_string(spec.length()) +
                                                   " points, materialization limit is " +
                                                   std::to_string(limit));
    const std::size_t m = spec.dimension();
    const std::size_t n = static_cast<std::size_t>(spec.length());
    coords_.resize(n * m);
    for (std::size_t i = 0; i < n; ++i)
      index_to_coord(spec, i, std::span<coord_t>(coords_.data() + i * m, m));
  }

  const CurveSpec& spec() const noexcept { return spec_; }
  std::size_t size() const noexcept { return coords_.size() / spec_.dimension(); }

  std::span<const coord_t> operator[](std::size_t i) const noexcept {
    const std::size_t m = spec_.dimension();
    return {coords_.data() + i * m, m};
  }

  std::span<const coord_t> flat() const noexcept { return coords_; }

 private:
  CurveSpec spec_;
  std::vector<coord_t> coords_;
};

inline Traversal traversal(const CurveSpec& spec,
                           std::size_t limit = kDefaultMaterializationLimit) {
  return Traversal(spec, limit);
}

/// Squared Euclidean distance between two lattice points of equal dimension.
inline std::uint64_t squared_distance(std::span<const coord_t> a, std::span<const coord_t> b) {
  std::uint64_t sum = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const std::int64_t d = static_cast<std::int64_t>(a[k]) - static_cast<std::int64_t>(b[k]);
    sum += static_cast<std::uint64_t>(d * d);
  }
  return sum;
}

}  // namespace sfcmap
