#include <sfcmap/dataset/png.hpp>

#include <gtest/gtest.h>
#include <zlib.h>

#include <algorithm>
#include <random>

using namespace sfcmap;
using namespace sfcmap::dataset;

namespace {

struct Image {
  std::uint32_t width = 0, height = 0;
  int color_type = -1;
  std::vector<std::uint8_t> pixels;  // unfiltered rows
};

std::uint32_t be32(const std::string& s, std::size_t at) {
  return (std::uint32_t(std::uint8_t(s[at])) << 24) | (std::uint32_t(std::uint8_t(s[at + 1])) << 16) |
         (std::uint32_t(std::uint8_t(s[at + 2])) << 8) | std::uint32_t(std::uint8_t(s[at + 3]));
}

// Reads back what render_png produces: one IDAT, filter type 0 on every row.
Image decode(const std::string& png) {
  Image img;
  EXPECT_EQ(png.substr(0, 8), std::string("\x89PNG\r\n\x1a\n", 8));
  std::string idat;
  std::size_t at = 8;
  while (at + 12 <= png.size()) {
    const auto len = be32(png, at);
    const std::string type = png.substr(at + 4, 4);
    const std::string data = png.substr(at + 8, len);
    const auto crc = crc32(0L, reinterpret_cast<const Bytef*>(png.data() + at + 4), len + 4);
    EXPECT_EQ(be32(png, at + 8 + len), crc) << type;
    if (type == "IHDR") {
      img.width = be32(data, 0);
      img.height = be32(data, 4);
      EXPECT_EQ(data[8], 8);
      img.color_type = data[9];
    } else if (type == "IDAT") {
      idat += data;
    }
    at += 12 + len;
  }
  const int components = img.color_type == 2 ? 3 : 1;
  const std::size_t stride = std::size_t(img.width) * components;
  std::string raw((stride + 1) * img.height, '\0');
  uLongf raw_size = raw.size();
  EXPECT_EQ(uncompress(reinterpret_cast<Bytef*>(raw.data()), &raw_size,
                       reinterpret_cast<const Bytef*>(idat.data()), idat.size()),
            Z_OK);
  EXPECT_EQ(raw_size, raw.size());
  for (std::uint32_t y = 0; y < img.height; ++y) {
    EXPECT_EQ(raw[y * (stride + 1)], 0);
    img.pixels.insert(img.pixels.end(), raw.begin() + y * (stride + 1) + 1, raw.begin() + (y + 1) * (stride + 1));
  }
  return img;
}

}  // namespace

TEST(PngTest, EmptyBinaryIsBlack) {
  const auto img = decode(render_png(BinaryGrid(GridShape{2, 16}, 1)));
  EXPECT_EQ(img.width, 16u);
  EXPECT_EQ(img.height, 16u);
  EXPECT_EQ(img.color_type, 0);
  EXPECT_EQ(img.pixels, std::vector<std::uint8_t>(256, 0));
}

TEST(PngTest, SinglePixelAtOrigin) {
  BinaryGrid g(GridShape{2, 8}, 1);
  g.set(0, Coord{0, 0}, 1);
  const auto img = decode(render_png(g));
  EXPECT_EQ(img.pixels[0], 255);
  EXPECT_EQ(std::count(img.pixels.begin(), img.pixels.end(), 255), 1);

  // Axis 0 is the row: (1, 0) is the first pixel of the second row.
  BinaryGrid h(GridShape{2, 8}, 1);
  h.set(0, Coord{1, 0}, 1);
  EXPECT_EQ(decode(render_png(h)).pixels[8], 255);
}

TEST(PngTest, ScalarScaledToFullRange) {
  ScalarGrid g(GridShape{2, 2}, 1, {-1.0f, 0.0f, 1.0f, 0.5f});
  EXPECT_EQ(decode(render_png(g)).pixels, (std::vector<std::uint8_t>{0, 128, 255, 191}));
}

TEST(PngTest, MultiChannelUsesPalette) {
  std::mt19937 rng(2);
  BinaryGrid g(GridShape{2, 32}, 8);
  for (auto& v : g.raw()) v = (rng() % 9) == 0;
  const auto img = decode(render_png(g));
  ASSERT_EQ(img.color_type, 2);
  const auto& palette = default_palette();
  for (std::size_t i = 0; i < img.pixels.size(); i += 3) {
    const Rgb px{img.pixels[i], img.pixels[i + 1], img.pixels[i + 2]};
    const bool known = px == Rgb{} || std::find(palette.begin(), palette.end(), px) != palette.end();
    ASSERT_TRUE(known) << i;
  }
  // Highest set channel wins.
  BinaryGrid two(GridShape{2, 2}, 8);
  two.set(1, Coord{0, 0}, 1);
  two.set(6, Coord{0, 0}, 1);
  const auto out = decode(render_png(two));
  EXPECT_EQ((Rgb{out.pixels[0], out.pixels[1], out.pixels[2]}), palette[6]);
}

TEST(PngTest, PaletteParsing) {
  EXPECT_EQ(parse_palette("#ff0000,00ff7f"), (std::vector<Rgb>{{255, 0, 0}, {0, 255, 127}}));
  EXPECT_THROW(parse_palette("#ff00"), Error);
  EXPECT_THROW(parse_palette("red"), Error);
  EXPECT_THROW(render_png(BinaryGrid(GridShape{2, 2}, 3), parse_palette("#000000")), Error);
}

TEST(PngTest, RejectsNonImageShapes) {
  try {
    render_png(BinaryGrid(GridShape{1, 16}, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedShape);
  }
  EXPECT_THROW(render_png(BinaryGrid(GridShape{3, 4}, 1)), Error);
}
