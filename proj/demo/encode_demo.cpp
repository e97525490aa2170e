// Encodes a solid sphere in a 64^3 grid into a 512x512 image and back,
// then prints where a few voxels landed.

#include <sfcmap/sfcmap.hpp>

#include <iostream>

int main() {
  using namespace sfcmap;
  const CurveSpec cube(CurveFamily::Hilbert, 3, 6);
  const CurveSpec plane(CurveFamily::Hilbert, 2, 9);
  const Mapping mapping = compose(cube, plane);

  BinaryGrid grid(shape_of(cube), 1);
  Coord c(3);
  for (std::uint64_t off = 0; off < grid.cells(); ++off) {
    coord_of_offset(grid.shape(), off, c);
    const double dx = c[0] - 31.5, dy = c[1] - 31.5, dz = c[2] - 31.5;
    if (dx * dx + dy * dy + dz * dz <= 16.0 * 16.0) grid.set(0, off, 1);
  }

  const BinaryGrid image = encode(grid, mapping);
  std::cout << "encoded " << to_string(grid.shape()) << " -> " << to_string(image.shape()) << '\n';
  for (std::size_t i : {0u, 1u, 4096u, 262143u}) {
    const auto s = mapping.source_coord(i);
    const auto t = mapping.target_coord(i);
    std::cout << "position " << i << ": voxel (" << s[0] << ',' << s[1] << ',' << s[2]
              << ") -> pixel (" << t[0] << ',' << t[1] << ")\n";
  }
  std::cout << "round trip " << (decode(image, mapping) == grid ? "exact" : "BROKEN") << '\n';
}
