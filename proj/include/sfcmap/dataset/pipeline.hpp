#pragma once

// File-level operations behind the command-line tool: voxelize an input,
// encode a tensor into a lower dimension, decode it back.

#include <sfcmap/curve.hpp>
#include <sfcmap/dataset/tensor_file.hpp>
#include <sfcmap/error.hpp>
#include <sfcmap/mapping.hpp>
#include <sfcmap/voxel/atoms.hpp>
#include <sfcmap/voxel/binvox.hpp>
#include <sfcmap/voxel/pca.hpp>
#include <sfcmap/voxel/raster.hpp>

#include <bit>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>

namespace sfcmap::dataset {

/// Builds each distinct mapping once and shares it between callers and threads.
class MappingCache {
 public:
  std::shared_ptr<const Mapping> get(const CurveSpec& source, const CurveSpec& target) {
    const auto key = std::make_pair(to_string(source), to_string(target));
    std::lock_guard lock(mutex_);
    auto& slot = cache_[key];
    if (!slot) slot = std::make_shared<const Mapping>(source, target);
    return slot;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::string, std::string>, std::shared_ptr<const Mapping>> cache_;
};

/// Curve covering `shape`; its side must be a power of two >= 2.
inline CurveSpec curve_for(const GridShape& shape, CurveFamily family) {
  if (shape.side < 2 || !std::has_single_bit(shape.side))
    throw Error(ErrorCode::UnsupportedShape,
                "grid side " + std::to_string(shape.side) + " is not a power of two >= 2");
  return CurveSpec(family, shape.dimension, static_cast<unsigned>(std::countr_zero(shape.side)));
}

struct EncodeOptions {
  unsigned target_dimension = 2;
  /// Defaults to the order that keeps the cell count, e.g. 64^3 -> 512^2.
  std::optional<unsigned> target_order;
  CurveFamily family = CurveFamily::Hilbert;
};

inline CurveSpec target_curve(const CurveSpec& source, const EncodeOptions& options) {
  if (options.target_dimension == 0)
    throw Error(ErrorCode::InvalidSpec, "target dimension must be >= 1");
  unsigned order = 0;
  if (options.target_order) {
    order = *options.target_order;
  } else {
    const unsigned bits = source.dimension() * source.order();
    if (bits % options.target_dimension != 0)
      throw Error(ErrorCode::LengthMismatch,
                  "2^" + std::to_string(bits) + " cells do not form a " +
                      std::to_string(options.target_dimension) + "-D power-of-two hypercube");
    order = bits / options.target_dimension;
  }
  const CurveSpec target(options.family, options.target_dimension, order);
  if (target.length() != source.length())
    throw Error(ErrorCode::LengthMismatch,
                "source has " + std::to_string(source.length()) + " cells, target " +
                    to_string(target) + " has " + std::to_string(target.length()));
  return target;
}

inline TensorFile encode_tensor(const TensorFile& input, const EncodeOptions& options,
                                MappingCache& cache) {
  const CurveSpec source = curve_for(shape_of(input.grid), options.family);
  const CurveSpec target = target_curve(source, options);
  const auto mapping = cache.get(source, target);
  TensorFile out{std::visit([&](const auto& g) -> AnyGrid { return encode(g, *mapping); }, input.grid),
                 Provenance{source, target}};
  return out;
}

inline TensorFile decode_tensor(const TensorFile& input, MappingCache& cache) {
  if (!input.provenance)
    throw Error(ErrorCode::MissingProvenance, "tensor header carries no source/target curves");
  const auto mapping = cache.get(input.provenance->source, input.provenance->target);
  return TensorFile{
      std::visit([&](const auto& g) -> AnyGrid { return decode(g, *mapping); }, input.grid),
      std::nullopt};
}

enum class SchemeKind { Geometric, Ras8 };

struct VoxelizeOptions {
  voxel::RenderWindow window;
  SchemeKind scheme = SchemeKind::Ras8;
  voxel::ParseOptions parse;
  voxel::RasterOptions raster;
};

struct VoxelizeResult {
  TensorFile tensor;
  std::size_t atoms = 0;
  std::size_t clipped_atoms = 0;
};

inline bool is_binvox_path(const std::string& path) {
  return std::filesystem::path(path).extension() == ".binvox";
}

/// binvox input passes through as one occupancy channel; anything else is
/// read as ATOM records, aligned to its principal axes and rasterized.
inline VoxelizeResult voxelize_file(const std::string& path, const VoxelizeOptions& options) {
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::Io, "no such file '" + path + "'");
  if (is_binvox_path(path)) {
    auto model = voxel::read_binvox(read_file_bytes(path));
    return {TensorFile{std::move(model.grid), std::nullopt}, 0, 0};
  }
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  const auto atoms = voxel::parse_atoms(in, options.parse);
  const auto aligned = voxel::pca_align(atoms, options.window.center());
  const auto scheme = options.scheme == SchemeKind::Ras8 ? voxel::ChannelScheme::ras8()
                                                         : voxel::ChannelScheme::geometric();
  auto raster = voxel::rasterize(aligned, options.window, scheme, options.raster);
  return {TensorFile{std::move(raster.grid), std::nullopt}, atoms.size(), raster.clipped_atoms};
}

}  // namespace sfcmap::dataset
