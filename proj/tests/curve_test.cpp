#include <sfcmap/curve.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <random>
#include <set>
#include <vector>

using namespace sfcmap;

namespace {

// Naive de-interleave: index bits are consumed LSB first, cycling from the
// last axis to the first, one bit level per cycle.
Coord naive_deinterleave(std::uint64_t i, unsigned m, unsigned p) {
  Coord c(m, 0);
  unsigned level = 0, axis = m - 1;
  for (unsigned bit = 0; bit < m * p; ++bit) {
    if ((i >> bit) & 1) c[axis] |= coord_t{1} << level;
    if (axis == 0) {
      axis = m - 1;
      ++level;
    } else {
      --axis;
    }
  }
  return c;
}

// Classic 2-D Hilbert index -> (x, y) conversion (rotate-and-flip form).
std::array<std::uint32_t, 2> classic_d2xy(std::uint32_t n, std::uint64_t d) {
  std::uint32_t x = 0, y = 0;
  for (std::uint32_t s = 1; s < n; s *= 2) {
    const std::uint32_t rx = 1 & static_cast<std::uint32_t>(d / 2);
    const std::uint32_t ry = 1 & static_cast<std::uint32_t>(d ^ rx);
    if (ry == 0) {
      if (rx == 1) {
        x = s - 1 - x;
        y = s - 1 - y;
      }
      std::swap(x, y);
    }
    x += s * rx;
    y += s * ry;
    d /= 4;
  }
  return {x, y};
}

std::uint64_t sq_step(const Traversal& t, std::size_t i) { return squared_distance(t[i], t[i + 1]); }

std::uint64_t linear_offset_of(const Coord& c, const CurveSpec& spec) {
  std::uint64_t off = 0;
  for (auto v : c) off = off * spec.side() + v;
  return off;
}

void expect_bijection(const CurveSpec& spec) {
  Coord c(spec.dimension());
  std::vector<bool> seen(spec.length(), false);
  for (std::uint64_t i = 0; i < spec.length(); ++i) {
    index_to_coord(spec, i, c);
    ASSERT_EQ(coord_to_index(spec, c), i) << to_string(spec);
    seen[linear_offset_of(c, spec)] = true;
  }
  EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) << to_string(spec);
}

}  // namespace

TEST(CurveSpecTest, DerivedSizes) {
  const CurveSpec spec(CurveFamily::Hilbert, 3, 6);
  EXPECT_EQ(spec.side(), 64u);
  EXPECT_EQ(spec.length(), 262144u);
}

TEST(CurveSpecTest, RejectsInvalidParameters) {
  EXPECT_THROW(CurveSpec(CurveFamily::Hilbert, 0, 2), Error);
  EXPECT_THROW(CurveSpec(CurveFamily::Hilbert, 2, 0), Error);
  EXPECT_THROW(CurveSpec(CurveFamily::ZOrder, 1, 33), Error);
  EXPECT_THROW(CurveSpec(CurveFamily::ZOrder, 8, 8), Error);  // 2^64 points
  EXPECT_NO_THROW(CurveSpec(CurveFamily::ZOrder, 3, 21));
  try {
    CurveSpec(CurveFamily::GrayCoded, 16, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidSpec);
  }
}

TEST(CurveSpecTest, FamilyNamesRoundTrip) {
  for (auto f : {CurveFamily::Hilbert, CurveFamily::ZOrder, CurveFamily::GrayCoded})
    EXPECT_EQ(parse_family(to_string(f)), f);
  EXPECT_EQ(parse_family("morton"), CurveFamily::ZOrder);
  EXPECT_THROW(parse_family("peano"), Error);
}

TEST(IndexToCoordTest, HilbertBaseCaseStartsAtOrigin) {
  const CurveSpec spec(CurveFamily::Hilbert, 2, 1);
  EXPECT_EQ(index_to_coord(spec, 0), (Coord{0, 0}));
  EXPECT_EQ(coord_to_index(spec, {0, 0}), 0u);
}

TEST(IndexToCoordTest, HilbertBaseCaseUnitSteps) {
  const CurveSpec spec(CurveFamily::Hilbert, 2, 1);
  std::set<Coord> cells;
  Coord prev = index_to_coord(spec, 0);
  cells.insert(prev);
  for (std::uint64_t i = 1; i < 4; ++i) {
    const Coord c = index_to_coord(spec, i);
    EXPECT_EQ(squared_distance(prev, c), 1u);
    cells.insert(c);
    prev = c;
  }
  EXPECT_EQ(cells, (std::set<Coord>{{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
}

TEST(IndexToCoordTest, ZOrderMatchesNaiveDeinterleave) {
  const CurveSpec small(CurveFamily::ZOrder, 2, 2);
  EXPECT_EQ(index_to_coord(small, 3), (Coord{1, 1}));
  EXPECT_EQ(index_to_coord(small, 3), naive_deinterleave(3, 2, 2));
  for (unsigned m = 1; m <= 4; ++m) {
    for (unsigned p = 1; p <= 4; ++p) {
      const CurveSpec spec(CurveFamily::ZOrder, m, p);
      for (std::uint64_t i = 0; i < spec.length(); ++i)
        ASSERT_EQ(index_to_coord(spec, i), naive_deinterleave(i, m, p)) << m << " " << p << " " << i;
    }
  }
}

TEST(IndexToCoordTest, GrayCodedIsZOrderOfGrayCode) {
  const CurveSpec gray(CurveFamily::GrayCoded, 3, 3);
  for (std::uint64_t i = 0; i < gray.length(); ++i)
    EXPECT_EQ(index_to_coord(gray, i), naive_deinterleave(i ^ (i >> 1), 3, 3));
}

TEST(IndexToCoordTest, OutOfRange) {
  const CurveSpec spec(CurveFamily::Hilbert, 2, 2);
  try {
    index_to_coord(spec, 16);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
  }
}

TEST(CoordToIndexTest, RejectsBadCoordinates) {
  const CurveSpec spec(CurveFamily::Hilbert, 2, 2);
  for (const Coord& bad : {Coord{4, 0}, Coord{0, 7}, Coord{1}, Coord{1, 1, 1}}) {
    try {
      coord_to_index(spec, bad);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::CoordOutOfRange);
    }
  }
}

TEST(CoordToIndexTest, ExhaustiveRoundTripSmallCurves) {
  expect_bijection(CurveSpec(CurveFamily::Hilbert, 3, 2));
  expect_bijection(CurveSpec(CurveFamily::GrayCoded, 2, 2));
  for (auto f : {CurveFamily::Hilbert, CurveFamily::ZOrder, CurveFamily::GrayCoded})
    for (unsigned m = 1; m <= 6; ++m)
      for (unsigned p = 1; m * p <= 14; ++p) expect_bijection(CurveSpec(f, m, p));
}

TEST(CoordToIndexTest, RandomizedRoundTripLargeCurves) {
  std::mt19937_64 rng(1234);
  const std::array<std::pair<unsigned, unsigned>, 6> shapes{
      {{2, 31}, {3, 21}, {4, 15}, {7, 9}, {1, 32}, {21, 3}}};
  for (auto f : {CurveFamily::Hilbert, CurveFamily::ZOrder, CurveFamily::GrayCoded}) {
    for (auto [m, p] : shapes) {
      const CurveSpec spec(f, m, p);
      for (int k = 0; k < 2000; ++k) {
        const std::uint64_t i = rng() % spec.length();
        ASSERT_EQ(coord_to_index(spec, index_to_coord(spec, i)), i) << to_string(spec);
      }
    }
  }
}

TEST(HilbertTest, OneDimensionalCurveIsIdentity) {
  for (unsigned p = 1; p <= 10; ++p) {
    const CurveSpec spec(CurveFamily::Hilbert, 1, p);
    for (std::uint64_t i = 0; i < spec.length(); ++i) ASSERT_EQ(index_to_coord(spec, i)[0], i);
  }
}

TEST(HilbertTest, UnitAdjacency2D) {
  for (unsigned p = 1; p <= 9; ++p) {
    const Traversal t(CurveSpec(CurveFamily::Hilbert, 2, p));
    for (std::size_t i = 0; i + 1 < t.size(); ++i) ASSERT_EQ(sq_step(t, i), 1u) << p << " " << i;
  }
}

TEST(HilbertTest, UnitAdjacency3D) {
  for (unsigned p = 1; p <= 6; ++p) {
    const Traversal t(CurveSpec(CurveFamily::Hilbert, 3, p));
    for (std::size_t i = 0; i + 1 < t.size(); ++i) ASSERT_EQ(sq_step(t, i), 1u) << p << " " << i;
  }
}

TEST(HilbertTest, UnitAdjacencyHigherDimensions) {
  for (auto [m, p] : std::array<std::pair<unsigned, unsigned>, 4>{{{4, 3}, {5, 2}, {6, 2}, {8, 1}}}) {
    const Traversal t(CurveSpec(CurveFamily::Hilbert, m, p));
    for (std::size_t i = 0; i + 1 < t.size(); ++i) ASSERT_EQ(sq_step(t, i), 1u) << m << " " << p;
  }
}

TEST(HilbertTest, TwoDimensionalCurveIsASymmetryOfTheClassicCurve) {
  // The 2-D Hilbert curve is unique up to the 8 symmetries of the square.
  for (unsigned p = 1; p <= 6; ++p) {
    const CurveSpec spec(CurveFamily::Hilbert, 2, p);
    const std::uint32_t n = 1u << p;
    bool matched = false;
    for (int sym = 0; sym < 8 && !matched; ++sym) {
      matched = true;
      for (std::uint64_t i = 0; i < spec.length() && matched; ++i) {
        auto [x, y] = classic_d2xy(n, i);
        if (sym & 1) x = n - 1 - x;
        if (sym & 2) y = n - 1 - y;
        if (sym & 4) std::swap(x, y);
        matched = index_to_coord(spec, i) == Coord{x, y};
      }
    }
    EXPECT_TRUE(matched) << "order " << p;
  }
}

TEST(TraversalTest, CoversLatticeInLexicographicOrderWhenSorted) {
  for (auto f : {CurveFamily::Hilbert, CurveFamily::ZOrder, CurveFamily::GrayCoded}) {
    const CurveSpec spec(f, 3, 3);
    const Traversal t(spec);
    std::vector<Coord> sorted;
    for (std::size_t i = 0; i < t.size(); ++i) sorted.emplace_back(t[i].begin(), t[i].end());
    std::sort(sorted.begin(), sorted.end());
    std::size_t k = 0;
    for (coord_t a = 0; a < 8; ++a)
      for (coord_t b = 0; b < 8; ++b)
        for (coord_t c = 0; c < 8; ++c) EXPECT_EQ(sorted[k++], (Coord{a, b, c}));
  }
}

TEST(TraversalTest, FullSizeCurveIsAPermutationWithUnitSteps) {
  const Traversal t(CurveSpec(CurveFamily::Hilbert, 3, 6));
  ASSERT_EQ(t.size(), 262144u);
  std::vector<bool> seen(t.size(), false);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto c = t[i];
    seen[(c[0] * 64u + c[1]) * 64u + c[2]] = true;
    if (i + 1 < t.size()) {
      ASSERT_EQ(sq_step(t, i), 1u);
    }
  }
  EXPECT_EQ(std::count(seen.begin(), seen.end(), true), 262144);
}

TEST(TraversalTest, ZOrderJumps) {
  const Traversal t(CurveSpec(CurveFamily::ZOrder, 2, 1));
  bool jump = false;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) jump = jump || sq_step(t, i) > 1;
  EXPECT_TRUE(jump);
}

TEST(TraversalTest, CapacityLimit) {
  try {
    Traversal(CurveSpec(CurveFamily::Hilbert, 3, 6), 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CapacityExceeded);
  }
}

TEST(TraversalTest, Deterministic) {
  const CurveSpec spec(CurveFamily::Hilbert, 3, 4);
  const Traversal a(spec), b(spec);
  EXPECT_TRUE(std::equal(a.flat().begin(), a.flat().end(), b.flat().begin(), b.flat().end()));
}

// Pins the orientation chosen for the Hilbert family.
TEST(GoldenTraversalTest, Hilbert2DOrder2) {
  const std::vector<Coord> golden{{0,0}, {1,0}, {1,1}, {0,1}, {0,2}, {0,3}, {1,3}, {1,2}, {2,2}, {2,3}, {3,3}, {3,2}, {3,1}, {2,1}, {2,0}, {3,0}};
  const Traversal t(CurveSpec(CurveFamily::Hilbert, 2, 2));
  ASSERT_EQ(t.size(), golden.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    EXPECT_EQ(Coord(t[i].begin(), t[i].end()), golden[i]) << i;
}

TEST(GoldenTraversalTest, Hilbert3DOrder1) {
  const std::vector<Coord> golden{{0,0,0}, {0,0,1}, {0,1,1}, {0,1,0}, {1,1,0}, {1,1,1}, {1,0,1}, {1,0,0}};
  const Traversal t(CurveSpec(CurveFamily::Hilbert, 3, 1));
  ASSERT_EQ(t.size(), golden.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    EXPECT_EQ(Coord(t[i].begin(), t[i].end()), golden[i]) << i;
}
