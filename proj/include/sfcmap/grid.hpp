#pragma once

#include <sfcmap/curve.hpp>
#include <sfcmap/error.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

namespace sfcmap {

/// Hypercube grid geometry: `dimension` axes of `side` cells each.
struct GridShape {
  unsigned dimension = 0;
  std::uint64_t side = 0;

  std::uint64_t cells() const {
    std::uint64_t n = 1;
    for (unsigned k = 0; k < dimension; ++k) n *= side;
    return n;
  }

  friend bool operator==(const GridShape&, const GridShape&) = default;
};

inline std::string to_string(const GridShape& shape) {
  std::string out;
  for (unsigned k = 0; k < shape.dimension; ++k) {
    if (k) out += "x";
    out += std::to_string(shape.side);
  }
  return out;
}

inline GridShape shape_of(const CurveSpec& spec) {
  return {spec.dimension(), spec.side()};
}

/// Row-major (lexicographic) offset of a coordinate; axis 0 varies slowest.
inline std::uint64_t linear_offset(const GridShape& shape, std::span<const coord_t> c) {
  std::uint64_t off = 0;
  for (unsigned k = 0; k < shape.dimension; ++k) off = off * shape.side + c[k];
  return off;
}

inline void coord_of_offset(const GridShape& shape, std::uint64_t off, std::span<coord_t> out) {
  for (unsigned k = shape.dimension; k-- > 0;) {
    out[k] = static_cast<coord_t>(off % shape.side);
    off /= shape.side;
  }
}

enum class ElementKind { Binary, Scalar };

template <typename T>
struct element_traits;

template <>
struct element_traits<std::uint8_t> {
  static constexpr ElementKind kind = ElementKind::Binary;
  static bool valid(std::uint8_t v) noexcept { return v <= 1; }
};

template <>
struct element_traits<float> {
  static constexpr ElementKind kind = ElementKind::Scalar;
  static bool valid(float v) noexcept { return std::isfinite(v); }
};

/// Dense multi-channel grid stored channel-major, then row-major over
/// coordinates: value(c, x) lives at c * cells + linear_offset(x).
/// Binary grids hold only 0/1; scalar grids hold finite floats.
template <typename T>
class BasicChannelGrid {
 public:
  using value_type = T;
  static constexpr ElementKind kind = element_traits<T>::kind;

  BasicChannelGrid() = default;

  BasicChannelGrid(GridShape shape, std::size_t channels)
      : shape_(shape), channels_(channels) {
    validate_geometry();
    values_.assign(channels_ * cells(), T{0});
  }

  BasicChannelGrid(GridShape shape, std::size_t channels, std::vector<T> values)
      : shape_(shape), channels_(channels), values_(std::move(values)) {
    validate_geometry();
    if (values_.size() != channels_ * cells())
      throw Error(ErrorCode::ShapeMismatch, "expected " + std::to_string(channels_ * cells()) +
                                                " values, got " + std::to_string(values_.size()));
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (!element_traits<T>::valid(values_[i]))
        throw Error(ErrorCode::InvalidValue, "invalid element value", i);
  }

  const GridShape& shape() const noexcept { return shape_; }
  std::size_t channels() const noexcept { return channels_; }
  std::size_t cells() const noexcept { return static_cast<std::size_t>(shape_.cells()); }

  std::span<const T> values() const noexcept { return values_; }
  std::span<const T> channel(std::size_t c) const noexcept {
    return std::span<const T>(values_).subspan(c * cells(), cells());
  }

  T at(std::size_t c, std::uint64_t offset) const { return values_[c * cells() + offset]; }
  T at(std::size_t c, std::span<const coord_t> x) const { return at(c, linear_offset(shape_, x)); }

  void set(std::size_t c, std::uint64_t offset, T v) {
    if (!element_traits<T>::valid(v))
      throw Error(ErrorCode::InvalidValue, "invalid element value", offset);
    values_[c * cells() + offset] = v;
  }
  void set(std::size_t c, std::span<const coord_t> x, T v) { set(c, linear_offset(shape_, x), v); }

  /// Unchecked mutable access for bulk writers that uphold the value invariant.
  std::span<T> raw() noexcept { return values_; }

  friend bool operator==(const BasicChannelGrid&, const BasicChannelGrid&) = default;

 private:
  void validate_geometry() const {
    if (shape_.dimension == 0 || shape_.side == 0)
      throw Error(ErrorCode::ShapeMismatch, "grid must have positive dimension and side");
    if (channels_ == 0) throw Error(ErrorCode::ShapeMismatch, "grid must have >= 1 channel");
  }

  GridShape shape_{};
  std::size_t channels_ = 0;
  std::vector<T> values_;
};

using BinaryGrid = BasicChannelGrid<std::uint8_t>;
using ScalarGrid = BasicChannelGrid<float>;

}  // namespace sfcmap
