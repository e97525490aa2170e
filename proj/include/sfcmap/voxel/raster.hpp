#pragma once

#include <sfcmap/error.hpp>
#include <sfcmap/grid.hpp>
#include <sfcmap/voxel/atoms.hpp>
#include <sfcmap/voxel/pca.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sfcmap::voxel {

/// Cubic render volume. Voxel (a, b, c) covers [a, a+1) x [b, b+1) x [c, c+1)
/// in units of `resolution` angstrom; its centre is at (a + 0.5) * resolution.
struct RenderWindow {
  std::uint64_t side = 64;
  double resolution = 1.0;

  void validate() const {
    if (side == 0 || !std::has_single_bit(side))
      throw Error(ErrorCode::InvalidSpec, "window side must be a power of two");
    if (!(resolution > 0.0) || !std::isfinite(resolution))
      throw Error(ErrorCode::InvalidSpec, "window resolution must be positive");
  }

  Vec3 center() const {
    const double c = static_cast<double>(side) * resolution / 2.0;
    return {c, c, c};
  }

  GridShape shape() const { return {3, side}; }
};

enum class Channel : std::uint8_t {
  Aliphatic,
  Aromatic,
  Neutral,
  Acidic,
  Basic,
  GlycineProline,
  AlphaCarbon,
  BetaCarbon,
};

inline constexpr std::size_t kResidueChannels = 8;

inline constexpr std::array<std::string_view, kResidueChannels> kChannelNames{
    "aliphatic", "aromatic", "neutral", "acidic",
    "basic",     "glycine_proline", "alpha_carbon", "beta_carbon"};

/// Which channels each atom lights. `ras8` is the eight-channel residue
/// scheme; `geometric` is a single occupancy channel.
class ChannelScheme {
 public:
  static ChannelScheme ras8() {
    ChannelScheme s;
    s.channels_ = kResidueChannels;
    for (auto r : {"ALA", "VAL", "LEU", "ILE", "MET"}) s.residues_[r] = Channel::Aliphatic;
    for (auto r : {"PHE", "TRP", "TYR"}) s.residues_[r] = Channel::Aromatic;
    for (auto r : {"SER", "THR", "ASN", "GLN", "CYS"}) s.residues_[r] = Channel::Neutral;
    for (auto r : {"ASP", "GLU"}) s.residues_[r] = Channel::Acidic;
    for (auto r : {"LYS", "ARG", "HIS"}) s.residues_[r] = Channel::Basic;
    for (auto r : {"GLY", "PRO"}) s.residues_[r] = Channel::GlycineProline;
    s.carbons_["CA"] = Channel::AlphaCarbon;
    s.carbons_["CB"] = Channel::BetaCarbon;
    return s;
  }

  static ChannelScheme geometric() {
    ChannelScheme s;
    s.channels_ = 1;
    return s;
  }

  std::size_t channels() const noexcept { return channels_; }
  bool is_geometric() const noexcept { return channels_ == 1; }

  std::optional<Channel> residue_channel(std::string_view residue) const {
    const auto it = residues_.find(std::string(residue));
    if (it == residues_.end()) return std::nullopt;
    return it->second;
  }

  /// Alpha/beta carbon class; only carbon atoms qualify ("CA" calcium does not).
  std::optional<Channel> carbon_channel(const AtomRecord& atom) const {
    if (atom.element != "C") return std::nullopt;
    const auto it = carbons_.find(atom.name);
    if (it == carbons_.end()) return std::nullopt;
    return it->second;
  }

  /// Channel indices set by `atom`; may be empty for non-standard residues.
  std::vector<std::size_t> channels_for(const AtomRecord& atom) const {
    if (is_geometric()) return {0};
    std::vector<std::size_t> out;
    if (auto c = residue_channel(atom.residue)) out.push_back(static_cast<std::size_t>(*c));
    if (auto c = carbon_channel(atom)) out.push_back(static_cast<std::size_t>(*c));
    return out;
  }

 private:
  std::size_t channels_ = 1;
  std::map<std::string, Channel, std::less<>> residues_;
  std::map<std::string, Channel, std::less<>> carbons_;
};

/// Van der Waals radii in angstrom (Bondi 1964, H/C/N/O/S as listed there).
inline const std::map<std::string, double, std::less<>>& default_vdw_radii() {
  static const std::map<std::string, double, std::less<>> table{
      {"H", 1.20},  {"C", 1.70},  {"N", 1.55},  {"O", 1.52},  {"S", 1.80},  {"P", 1.80},
      {"F", 1.47},  {"CL", 1.75}, {"BR", 1.85}, {"I", 1.98},  {"SE", 1.90}, {"SI", 2.10},
      {"AS", 1.85}, {"TE", 2.06}, {"LI", 1.82}, {"NA", 2.27}, {"K", 2.75},  {"MG", 1.73},
      {"NI", 1.63}, {"CU", 1.40}, {"ZN", 1.39}, {"GA", 1.87}, {"PD", 1.63}, {"AG", 1.72},
      {"CD", 1.58}, {"IN", 1.93}, {"SN", 2.17}, {"PT", 1.75}, {"AU", 1.66}, {"HG", 1.55},
      {"TL", 1.96}, {"PB", 2.02}, {"U", 1.86},  {"HE", 1.40}, {"NE", 1.54}, {"AR", 1.88},
      {"KR", 2.02}, {"XE", 2.16},
  };
  return table;
}

struct RasterOptions {
  /// Entries here take precedence over the default table.
  std::map<std::string, double, std::less<>> radius_overrides;
  /// Used for elements missing from both tables; unset means UnknownElement.
  std::optional<double> default_radius;
};

struct Rasterization {
  BinaryGrid grid;
  /// Atoms whose centre fell outside the window (their voxels are clipped).
  std::size_t clipped_atoms = 0;
};

inline double vdw_radius(std::string_view element, const RasterOptions& options) {
  if (auto it = options.radius_overrides.find(element); it != options.radius_overrides.end())
    return it->second;
  const auto& table = default_vdw_radii();
  if (auto it = table.find(element); it != table.end()) return it->second;
  if (options.default_radius) return *options.default_radius;
  throw Error(ErrorCode::UnknownElement, "no van der Waals radius for element '" +
                                             std::string(element) + "'");
}

/// Union of van der Waals spheres: a voxel is set in every channel its atom
/// maps to when the voxel centre lies within the atom's radius. Atoms are
/// expected to be in window coordinates already (see pca_align).
inline Rasterization rasterize(std::span<const AtomRecord> atoms, const RenderWindow& window,
                               const ChannelScheme& scheme, const RasterOptions& options = {}) {
  window.validate();
  Rasterization out{BinaryGrid(window.shape(), scheme.channels()), 0};
  const auto side = static_cast<std::int64_t>(window.side);
  const double res = window.resolution;
  const double extent = static_cast<double>(window.side) * res;
  const std::size_t cells = out.grid.cells();
  auto values = out.grid.raw();

  for (const auto& atom : atoms) {
    const double radius = vdw_radius(atom.element, options);
    const auto channels = scheme.channels_for(atom);
    const auto& p = atom.position;
    if (p[0] < 0 || p[1] < 0 || p[2] < 0 || p[0] >= extent || p[1] >= extent || p[2] >= extent)
      ++out.clipped_atoms;
    if (channels.empty()) continue;

    std::array<std::int64_t, 3> lo{}, hi{};
    for (int k = 0; k < 3; ++k) {
      lo[k] = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor((p[k] - radius) / res - 0.5)));
      hi[k] = std::min<std::int64_t>(side - 1, static_cast<std::int64_t>(std::ceil((p[k] + radius) / res - 0.5)));
    }
    const double r2 = radius * radius;
    for (std::int64_t a = lo[0]; a <= hi[0]; ++a) {
      const double dx = (static_cast<double>(a) + 0.5) * res - p[0];
      for (std::int64_t b = lo[1]; b <= hi[1]; ++b) {
        const double dy = (static_cast<double>(b) + 0.5) * res - p[1];
        for (std::int64_t c = lo[2]; c <= hi[2]; ++c) {
          const double dz = (static_cast<double>(c) + 0.5) * res - p[2];
          if (dx * dx + dy * dy + dz * dz > r2) continue;
          const auto offset = static_cast<std::size_t>((a * side + b) * side + c);
          for (const std::size_t ch : channels) values[ch * cells + offset] = 1;
        }
      }
    }
  }
  return out;
}

}  // namespace sfcmap::voxel
