#pragma once

// binvox voxel files (Patrick Min's format).
//
//   #binvox 1
//   dim D H W
//   translate tx ty tz
//   scale s
//   data
//   <(value, count) byte pairs, count in 1..255>
//
// Voxel order in the payload is index = x * (W*H) + z * W + y. Grids here
// use coordinates (x, y, z) in row-major order, so z is the fastest axis.

#include <sfcmap/error.hpp>
#include <sfcmap/grid.hpp>

#include <array>
#include <bit>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sfcmap::voxel {

struct BinvoxModel {
  BinaryGrid grid;
  std::array<double, 3> translate{0.0, 0.0, 0.0};
  double scale = 1.0;
};

namespace detail {

inline std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) words.push_back(line.substr(start, i - start));
  }
  return words;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

inline std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace detail

inline BinvoxModel read_binvox(std::string_view bytes) {
  std::size_t pos = 0;
  auto next_line = [&](std::size_t& start) -> std::string_view {
    start = pos;
    const std::size_t nl = bytes.find('\n', pos);
    if (nl == std::string_view::npos)
      throw Error(ErrorCode::BadHeader, "unterminated header line", start);
    pos = nl + 1;
    return bytes.substr(start, nl - start);
  };

  if (bytes.substr(0, 7) != "#binvox") throw Error(ErrorCode::BadMagic, "missing '#binvox' magic", 0);
  std::size_t line_start = 0;
  next_line(line_start);

  std::array<std::uint64_t, 3> dims{0, 0, 0};
  bool have_dims = false;
  BinvoxModel model;
  for (;;) {
    const auto words = detail::split_words(next_line(line_start));
    if (words.empty()) continue;
    if (words[0] == "data") break;
    if (words[0] == "dim") {
      if (words.size() != 4) throw Error(ErrorCode::BadHeader, "dim needs 3 values", line_start);
      for (int k = 0; k < 3; ++k)
        if (!detail::parse_number(words[k + 1], dims[k]) || dims[k] == 0)
          throw Error(ErrorCode::BadHeader, "bad dim value", line_start);
      have_dims = true;
    } else if (words[0] == "translate") {
      if (words.size() != 4) throw Error(ErrorCode::BadHeader, "translate needs 3 values", line_start);
      for (int k = 0; k < 3; ++k)
        if (!detail::parse_number(words[k + 1], model.translate[k]))
          throw Error(ErrorCode::BadHeader, "bad translate value", line_start);
    } else if (words[0] == "scale") {
      if (words.size() != 2 || !detail::parse_number(words[1], model.scale))
        throw Error(ErrorCode::BadHeader, "bad scale line", line_start);
    } else {
      throw Error(ErrorCode::BadHeader, "unknown header keyword '" + std::string(words[0]) + "'",
                  line_start);
    }
  }
  if (!have_dims) throw Error(ErrorCode::BadHeader, "missing dim line", line_start);
  if (dims[0] != dims[1] || dims[1] != dims[2])
    throw Error(ErrorCode::BadHeader, "only cubic grids are supported", line_start);
  if (dims[0] > 1024) throw Error(ErrorCode::BadHeader, "dim exceeds 1024", line_start);

  const std::uint64_t n = dims[0];
  const std::uint64_t total = n * n * n;
  model.grid = BinaryGrid(GridShape{3, n}, 1);
  auto values = model.grid.raw();

  std::uint64_t index = 0;
  while (index < total) {
    if (pos + 2 > bytes.size())
      throw Error(ErrorCode::TruncatedPayload,
                  "payload ends after " + std::to_string(index) + " of " + std::to_string(total) +
                      " voxels",
                  bytes.size());
    const auto value = static_cast<std::uint8_t>(bytes[pos]);
    const auto count = static_cast<std::uint8_t>(bytes[pos + 1]);
    if (index + count > total)
      throw Error(ErrorCode::RunOverflow, "run of " + std::to_string(count) + " passes the end",
                  pos);
    if (value != 0) {
      for (std::uint64_t i = index; i < index + count; ++i) {
        // i = x * n*n + z * n + y
        const std::uint64_t x = i / (n * n);
        const std::uint64_t z = (i / n) % n;
        const std::uint64_t y = i % n;
        values[static_cast<std::size_t>((x * n + y) * n + z)] = 1;
      }
    }
    index += count;
    pos += 2;
  }
  return model;
}

/// Serializes a mono-channel cubic binary grid with a power-of-two side.
inline std::string write_binvox(const BinaryGrid& grid, const std::array<double, 3>& translate = {},
                                double scale = 1.0) {
  const GridShape& shape = grid.shape();
  if (shape.dimension != 3 || grid.channels() != 1 || !std::has_single_bit(shape.side))
    throw Error(ErrorCode::UnsupportedShape,
                "binvox output needs a 1-channel cubic grid with power-of-two side, got " +
                    to_string(shape) + " x " + std::to_string(grid.channels()));
  const std::uint64_t n = shape.side;
  std::string out = "#binvox 1\ndim " + std::to_string(n) + " " + std::to_string(n) + " " +
                    std::to_string(n) + "\ntranslate " + detail::format_double(translate[0]) + " " +
                    detail::format_double(translate[1]) + " " +
                    detail::format_double(translate[2]) + "\nscale " +
                    detail::format_double(scale) + "\ndata\n";

  const auto values = grid.values();
  const std::uint64_t total = n * n * n;
  std::uint8_t current = 0;
  unsigned run = 0;
  for (std::uint64_t i = 0; i < total; ++i) {
    const std::uint64_t x = i / (n * n);
    const std::uint64_t z = (i / n) % n;
    const std::uint64_t y = i % n;
    const std::uint8_t v = values[static_cast<std::size_t>((x * n + y) * n + z)];
    if (run > 0 && (v != current || run == 255)) {
      out.push_back(static_cast<char>(current));
      out.push_back(static_cast<char>(run));
      run = 0;
    }
    current = v;
    ++run;
  }
  if (run > 0) {
    out.push_back(static_cast<char>(current));
    out.push_back(static_cast<char>(run));
  }
  return out;
}

inline std::string write_binvox(const BinvoxModel& model) {
  return write_binvox(model.grid, model.translate, model.scale);
}

}  // namespace sfcmap::voxel
