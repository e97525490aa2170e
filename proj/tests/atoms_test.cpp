#include <sfcmap/voxel/atoms.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace sfcmap;
using namespace sfcmap::voxel;

namespace {

std::vector<AtomRecord> parse(const std::string& text, ParseOptions options = {}) {
  std::istringstream in(text);
  return parse_atoms(in, options);
}

// Fixed-column records, one per line.
const std::string kAlanine =
    "HEADER    TEST\n"
    "ATOM      1  N   ALA A   1      11.104   6.134  -6.504  1.00  0.00           N\n"
    "ATOM      2  CA  ALA A   1      11.639   6.071  -5.147  1.00  0.00           C\n"
    "ATOM      3  CB  ALA A   1      11.579   4.622  -4.656  1.00  0.00           C\n"
    "HETATM    4 ZN    ZN B   2       1.000   2.000   3.000  1.00  0.00          ZN\n"
    "TER\n"
    "END\n";

}  // namespace

TEST(AtomsTest, EmptyInput) {
  EXPECT_TRUE(parse("").empty());
  EXPECT_TRUE(parse("REMARK nothing here\nEND\n").empty());
}

TEST(AtomsTest, ReadsFixedColumns) {
  const auto atoms = parse(kAlanine);
  ASSERT_EQ(atoms.size(), 3u);
  const auto& ca = atoms[1];
  EXPECT_EQ(ca.serial, 2);
  EXPECT_EQ(ca.name, "CA");
  EXPECT_EQ(ca.residue, "ALA");
  EXPECT_EQ(ca.chain, 'A');
  EXPECT_EQ(ca.element, "C");
  EXPECT_DOUBLE_EQ(ca.position[0], 11.639);
  EXPECT_DOUBLE_EQ(ca.position[1], 6.071);
  EXPECT_DOUBLE_EQ(ca.position[2], -5.147);
}

TEST(AtomsTest, HetatmOnlyWhenAsked) {
  ParseOptions with_het;
  with_het.include_hetatm = true;
  const auto atoms = parse(kAlanine, with_het);
  ASSERT_EQ(atoms.size(), 4u);
  EXPECT_EQ(atoms[3].element, "ZN");
  EXPECT_EQ(atoms[3].chain, 'B');
}

TEST(AtomsTest, MalformedCoordinateReportsLine) {
  const std::string bad =
      "ATOM      1  N   ALA A   1      11.104   6.134  -6.504  1.00  0.00           N\n"
      "ATOM      2  CA  ALA A   1       12.34X  6.071  -5.147  1.00  0.00           C\n";
  try {
    parse(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedRecord);
    EXPECT_EQ(e.location(), std::optional<std::size_t>{2});
  }
  EXPECT_THROW(parse("ATOM      1  N   ALA A   1      11.104\n"), Error);
}

TEST(AtomsTest, ElementFromNameWhenColumnMissing) {
  const auto atoms = parse(
      "ATOM      1  CA  GLY A   1       0.000   0.000   0.000\n"
      "ATOM      2 FE   HEM A   2       1.000   0.000   0.000\n"
      "ATOM      3  OG1 THR A   3       2.000   0.000   0.000\r\n");
  ASSERT_EQ(atoms.size(), 3u);
  EXPECT_EQ(atoms[0].element, "C");
  EXPECT_EQ(atoms[1].element, "FE");
  EXPECT_EQ(atoms[2].element, "O");
  EXPECT_EQ(atoms[2].name, "OG1");
}
