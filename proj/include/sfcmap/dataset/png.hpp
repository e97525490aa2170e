#pragma once

// Renders 2-D grids as PNG images (8-bit, no interlace, filter 0, zlib level 9).
//
// One channel: grayscale. Binary cells are 0/255; scalar cells are scaled
// linearly from [min, max] to [0, 255] (a constant grid is black, or white
// when the constant is positive).
//
// Several channels: RGB. A cell takes the colour of the highest-numbered
// channel that is set (non-zero), black if none is. The default palette
// follows the residue channel order: blue, purple, magenta, light red,
// dark red, brown, dark green, light green.

#include <sfcmap/dataset/tensor_file.hpp>
#include <sfcmap/error.hpp>
#include <sfcmap/grid.hpp>

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sfcmap::dataset {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline const std::vector<Rgb>& default_palette() {
  static const std::vector<Rgb> palette{
      {0, 0, 255},     {128, 0, 128}, {255, 0, 255}, {255, 102, 102},
      {139, 0, 0},     {139, 69, 19}, {0, 100, 0},   {144, 238, 144},
  };
  return palette;
}

/// Parses "#rrggbb,#rrggbb,..." (the leading '#' is optional).
inline std::vector<Rgb> parse_palette(std::string_view text) {
  std::vector<Rgb> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    std::string_view item = text.substr(pos, comma - pos);
    if (!item.empty() && item.front() == '#') item.remove_prefix(1);
    if (item.size() != 6 || item.find_first_not_of("0123456789abcdefABCDEF") != std::string_view::npos)
      throw Error(ErrorCode::InvalidSpec, "bad colour '" + std::string(item) + "'");
    const auto v = static_cast<std::uint32_t>(std::stoul(std::string(item), nullptr, 16));
    out.push_back({static_cast<std::uint8_t>(v >> 16), static_cast<std::uint8_t>(v >> 8),
                   static_cast<std::uint8_t>(v)});
    pos = comma + 1;
  }
  return out;
}

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<char>((v >> s) & 0xffu));
}

inline void put_chunk(std::string& out, const char* type, std::string_view data) {
  put_u32(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t start = out.size();
  out.append(type, 4);
  out.append(data);
  const auto crc = crc32(0L, reinterpret_cast<const Bytef*>(out.data() + start),
                         static_cast<uInt>(out.size() - start));
  put_u32(out, static_cast<std::uint32_t>(crc));
}

// rows: height rows of width * components bytes each (unfiltered).
inline std::string encode_png(std::uint32_t width, std::uint32_t height, int components,
                              const std::vector<std::uint8_t>& pixels) {
  std::string raw;
  const std::size_t stride = static_cast<std::size_t>(width) * components;
  raw.reserve((stride + 1) * height);
  for (std::uint32_t y = 0; y < height; ++y) {
    raw.push_back(0);
    raw.append(reinterpret_cast<const char*>(pixels.data() + y * stride), stride);
  }
  uLongf packed_size = compressBound(static_cast<uLong>(raw.size()));
  std::string packed(packed_size, '\0');
  if (compress2(reinterpret_cast<Bytef*>(packed.data()), &packed_size,
                reinterpret_cast<const Bytef*>(raw.data()), static_cast<uLong>(raw.size()),
                9) != Z_OK)
    throw Error(ErrorCode::Io, "zlib compression failed");
  packed.resize(packed_size);

  std::string out("\x89PNG\r\n\x1a\n", 8);
  std::string ihdr;
  put_u32(ihdr, width);
  put_u32(ihdr, height);
  ihdr.push_back(8);                                       // bit depth
  ihdr.push_back(static_cast<char>(components == 1 ? 0 : 2));  // gray / RGB
  ihdr.append(3, '\0');                                    // deflate, filter 0, no interlace
  put_chunk(out, "IHDR", ihdr);
  put_chunk(out, "IDAT", packed);
  put_chunk(out, "IEND", {});
  return out;
}

}  // namespace detail

template <typename T>
std::string render_png(const BasicChannelGrid<T>& grid, const std::vector<Rgb>& palette = default_palette()) {
  const GridShape& shape = grid.shape();
  if (shape.dimension != 2)
    throw Error(ErrorCode::UnsupportedShape,
                "PNG export needs a 2-D grid, got " + std::to_string(shape.dimension) + "-D");
  const auto side = static_cast<std::uint32_t>(shape.side);
  const std::size_t cells = grid.cells();

  if (grid.channels() == 1) {
    std::vector<std::uint8_t> gray(cells, 0);
    const auto values = grid.channel(0);
    if constexpr (element_traits<T>::kind == ElementKind::Binary) {
      for (std::size_t i = 0; i < cells; ++i) gray[i] = values[i] ? 255 : 0;
    } else {
      const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
      const double min = *lo, max = *hi;
      for (std::size_t i = 0; i < cells; ++i) {
        if (max > min)
          gray[i] = static_cast<std::uint8_t>(std::lround((values[i] - min) / (max - min) * 255.0));
        else
          gray[i] = values[i] > 0 ? 255 : 0;
      }
    }
    return detail::encode_png(side, side, 1, gray);
  }

  if (palette.size() < grid.channels())
    throw Error(ErrorCode::InvalidSpec, "palette has " + std::to_string(palette.size()) +
                                            " colours for " + std::to_string(grid.channels()) +
                                            " channels");
  std::vector<std::uint8_t> rgb(cells * 3, 0);
  for (std::size_t c = 0; c < grid.channels(); ++c) {
    const auto values = grid.channel(c);
    for (std::size_t i = 0; i < cells; ++i) {
      if (values[i] == T{0}) continue;
      rgb[i * 3] = palette[c].r;
      rgb[i * 3 + 1] = palette[c].g;
      rgb[i * 3 + 2] = palette[c].b;
    }
  }
  return detail::encode_png(side, side, 3, rgb);
}

inline std::string render_png(const AnyGrid& grid, const std::vector<Rgb>& palette = default_palette()) {
  return std::visit([&](const auto& g) { return render_png(g, palette); }, grid);
}

}  // namespace sfcmap::dataset
