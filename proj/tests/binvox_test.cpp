#include <sfcmap/voxel/binvox.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace sfcmap;
using namespace sfcmap::voxel;

namespace {

std::string header(int n) {
  return "#binvox 1\ndim " + std::to_string(n) + " " + std::to_string(n) + " " + std::to_string(n) +
         "\ntranslate 0 0 0\nscale 1\ndata\n";
}

ErrorCode code_of(std::string_view bytes, std::optional<std::size_t>* where = nullptr) {
  try {
    read_binvox(bytes);
  } catch (const Error& e) {
    if (where) *where = e.location();
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::Io;
}

}  // namespace

TEST(BinvoxTest, HandAssembledEmptyCube) {
  std::string bytes = header(2);
  bytes += std::string("\x00\x08", 2);
  const auto model = read_binvox(bytes);
  EXPECT_EQ(model.grid.shape(), (GridShape{3, 2}));
  EXPECT_EQ(model.grid, BinaryGrid(GridShape{3, 2}, 1));
  EXPECT_DOUBLE_EQ(model.scale, 1.0);
}

TEST(BinvoxTest, PayloadAxisOrder) {
  // 2^3 cube; run sets payload index 1 only, which is (x=0, z=0, y=1).
  std::string bytes = "#binvox 1\ndim 2 2 2\ntranslate 0.5 -1 2\nscale 0.25\ndata\n";
  bytes += std::string("\x00\x01\x01\x01\x00\x06", 6);
  const auto model = read_binvox(bytes);
  EXPECT_EQ(model.grid.at(0, Coord{0, 1, 0}), 1);
  EXPECT_EQ(model.grid.at(0, Coord{0, 0, 1}), 0);
  EXPECT_EQ(model.translate, (std::array<double, 3>{0.5, -1.0, 2.0}));
  EXPECT_DOUBLE_EQ(model.scale, 0.25);

  BinaryGrid g(GridShape{3, 2}, 1);
  g.set(0, Coord{0, 0, 1}, 1);  // (x=0, y=0, z=1) -> payload index 2
  const auto out = write_binvox(g);
  EXPECT_EQ(out.substr(out.size() - 6), std::string("\x00\x02\x01\x01\x00\x05", 6));
}

TEST(BinvoxTest, RoundTripRandomGrids) {
  std::mt19937_64 rng(64);
  for (int k = 0; k < 100; ++k) {
    std::bernoulli_distribution bit(0.02 + 0.0096 * k);
    BinaryGrid g(GridShape{3, 64}, 1);
    for (auto& v : g.raw()) v = bit(rng);
    const auto model = read_binvox(write_binvox(g, {1.5, 2.0, -3.25}, 0.125));
    ASSERT_EQ(model.grid, g) << k;
    EXPECT_EQ(model.translate, (std::array<double, 3>{1.5, 2.0, -3.25}));
    EXPECT_EQ(model.scale, 0.125);
  }
}

TEST(BinvoxTest, LongRunsAreSplit) {
  BinaryGrid full(GridShape{3, 8}, 1, std::vector<std::uint8_t>(512, 1));
  const auto bytes = write_binvox(full);
  EXPECT_EQ(bytes.substr(header(8).size()), std::string("\x01\xff\x01\xff\x01\x02", 6));
  EXPECT_EQ(read_binvox(bytes).grid, full);
}

TEST(BinvoxTest, NonzeroValuesReadAsOccupied) {
  std::string bytes = header(2);
  bytes += std::string("\x07\x08", 2);
  EXPECT_EQ(read_binvox(bytes).grid, BinaryGrid(GridShape{3, 2}, 1, std::vector<std::uint8_t>(8, 1)));
}

TEST(BinvoxTest, Errors) {
  std::optional<std::size_t> where;
  EXPECT_EQ(code_of("#voxbin 1\n", &where), ErrorCode::BadMagic);
  EXPECT_EQ(where, std::optional<std::size_t>{0});

  EXPECT_EQ(code_of("#binvox 1\ndim 2 2\ndata\n", &where), ErrorCode::BadHeader);
  EXPECT_EQ(where, std::optional<std::size_t>{10});
  EXPECT_EQ(code_of("#binvox 1\ndim 2 2 4\ndata\n"), ErrorCode::BadHeader);
  EXPECT_EQ(code_of("#binvox 1\ndata\n"), ErrorCode::BadHeader);
  EXPECT_EQ(code_of("#binvox 1\ndim 2 2 2\nfoo 1\ndata\n"), ErrorCode::BadHeader);

  const std::string h = header(2);
  EXPECT_EQ(code_of(h + std::string("\x00\x04", 2), &where), ErrorCode::TruncatedPayload);
  EXPECT_EQ(where, std::optional<std::size_t>{h.size() + 2});
  EXPECT_EQ(code_of(h + std::string("\x00\x04\x01\x05", 4), &where), ErrorCode::RunOverflow);
  EXPECT_EQ(where, std::optional<std::size_t>{h.size() + 2});
}

TEST(BinvoxTest, WriterRejectsUnsupportedGrids) {
  EXPECT_THROW(write_binvox(BinaryGrid(GridShape{3, 4}, 2)), Error);
  EXPECT_THROW(write_binvox(BinaryGrid(GridShape{2, 4}, 1)), Error);
  EXPECT_THROW(write_binvox(BinaryGrid(GridShape{3, 6}, 1)), Error);
}
