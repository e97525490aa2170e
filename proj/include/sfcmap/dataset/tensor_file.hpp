#pragma once

// Tensor files: a short text header followed by the raw payload.
//
//   SFCTENSOR 1
//   shape <extent> <extent> ...
//   channels <C>
//   kind binary|scalar
//   byteorder little
//   source <family>:<dimension>:<order>     (optional, written by encode)
//   target <family>:<dimension>:<order>     (optional, written by encode)
//   end
//   <payload>
//
// Binary payloads are one byte per element (0 or 1), scalar payloads are
// IEEE-754 float32, little endian. Elements are channel-major, then row-major
// over coordinates, so the payload is exactly C * prod(shape) * element size
// bytes. A 1-D grid of N cells is written with shape "1 N"; every other grid
// lists its side once per axis.

#include <sfcmap/curve.hpp>
#include <sfcmap/error.hpp>
#include <sfcmap/grid.hpp>

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sfcmap::dataset {

struct Provenance {
  CurveSpec source;
  CurveSpec target;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

using AnyGrid = std::variant<BinaryGrid, ScalarGrid>;

struct TensorFile {
  AnyGrid grid;
  std::optional<Provenance> provenance;
};

inline const GridShape& shape_of(const AnyGrid& grid) {
  return std::visit([](const auto& g) -> const GridShape& { return g.shape(); }, grid);
}

inline std::size_t channels_of(const AnyGrid& grid) {
  return std::visit([](const auto& g) { return g.channels(); }, grid);
}

inline std::vector<std::uint64_t> file_extents(const GridShape& shape) {
  if (shape.dimension == 1) return {1, shape.side};
  return std::vector<std::uint64_t>(shape.dimension, shape.side);
}

inline CurveSpec parse_curve_spec(std::string_view text) {
  const auto a = text.find(':');
  const auto b = a == std::string_view::npos ? a : text.find(':', a + 1);
  if (b == std::string_view::npos)
    throw Error(ErrorCode::InvalidSpec, "curve spec must be family:dimension:order, got '" +
                                            std::string(text) + "'");
  unsigned dim = 0, order = 0;
  const auto d = text.substr(a + 1, b - a - 1);
  const auto o = text.substr(b + 1);
  if (std::from_chars(d.data(), d.data() + d.size(), dim).ptr != d.data() + d.size() ||
      std::from_chars(o.data(), o.data() + o.size(), order).ptr != o.data() + o.size())
    throw Error(ErrorCode::InvalidSpec, "bad curve spec '" + std::string(text) + "'");
  return CurveSpec(parse_family(text.substr(0, a)), dim, order);
}

namespace detail {

template <typename T>
void append_payload(std::string& out, std::span<const T> values) {
  if constexpr (sizeof(T) == 1) {
    out.append(reinterpret_cast<const char*>(values.data()), values.size());
  } else {
    static_assert(sizeof(T) == 4);
    const std::size_t start = out.size();
    out.resize(start + values.size() * 4);
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto bits = std::bit_cast<std::uint32_t>(values[i]);
      for (int b = 0; b < 4; ++b) out[start + i * 4 + b] = static_cast<char>((bits >> (8 * b)) & 0xffu);
    }
  }
}

}  // namespace detail

inline std::string write_tensor(const TensorFile& file) {
  const GridShape& shape = shape_of(file.grid);
  std::string out = "SFCTENSOR 1\nshape";
  for (const auto e : file_extents(shape)) out += " " + std::to_string(e);
  out += "\nchannels " + std::to_string(channels_of(file.grid));
  out += std::holds_alternative<BinaryGrid>(file.grid) ? "\nkind binary" : "\nkind scalar";
  out += "\nbyteorder little\n";
  if (file.provenance) {
    out += "source " + to_string(file.provenance->source) + "\n";
    out += "target " + to_string(file.provenance->target) + "\n";
  }
  out += "end\n";
  std::visit([&](const auto& g) { detail::append_payload(out, g.values()); }, file.grid);
  return out;
}

inline TensorFile read_tensor(std::string_view bytes) {
  std::size_t pos = 0;
  std::size_t line_start = 0;
  auto next_line = [&]() -> std::string_view {
    line_start = pos;
    const auto nl = bytes.find('\n', pos);
    if (nl == std::string_view::npos)
      throw Error(ErrorCode::BadHeader, "unterminated header line", line_start);
    pos = nl + 1;
    return bytes.substr(line_start, nl - line_start);
  };
  auto bad = [&](const std::string& what) { return Error(ErrorCode::BadHeader, what, line_start); };

  if (bytes.substr(0, 12) != "SFCTENSOR 1\n")
    throw Error(ErrorCode::BadMagic, "not a tensor file", 0);
  pos = 12;

  std::vector<std::uint64_t> extents;
  std::optional<std::size_t> channels;
  std::optional<ElementKind> kind;
  std::optional<CurveSpec> source, target;
  for (;;) {
    const std::string_view line = next_line();
    if (line == "end") break;
    const auto space = line.find(' ');
    const std::string_view key = line.substr(0, space);
    const std::string_view rest = space == std::string_view::npos ? "" : line.substr(space + 1);
    if (key == "shape") {
      std::istringstream in{std::string(rest)};
      std::uint64_t e = 0;
      while (in >> e) extents.push_back(e);
      if (!in.eof() || extents.empty()) throw bad("bad shape line");
    } else if (key == "channels") {
      std::size_t c = 0;
      if (std::from_chars(rest.data(), rest.data() + rest.size(), c).ptr != rest.data() + rest.size() || c == 0)
        throw bad("bad channel count");
      channels = c;
    } else if (key == "kind") {
      if (rest == "binary") kind = ElementKind::Binary;
      else if (rest == "scalar") kind = ElementKind::Scalar;
      else throw bad("unknown element kind '" + std::string(rest) + "'");
    } else if (key == "byteorder") {
      if (rest != "little") throw bad("unsupported byte order '" + std::string(rest) + "'");
    } else if (key == "source" || key == "target") {
      try {
        (key == "source" ? source : target) = parse_curve_spec(rest);
      } catch (const Error& e) {
        throw bad(e.what());
      }
    } else {
      throw bad("unknown header key '" + std::string(key) + "'");
    }
  }
  if (extents.empty() || !channels || !kind) throw bad("header lacks shape, channels or kind");
  if (source.has_value() != target.has_value()) throw bad("provenance needs both source and target");

  GridShape shape;
  if (extents.size() == 2 && extents[0] == 1 && extents[1] > 1) {
    shape = {1, extents[1]};
  } else {
    for (const auto e : extents)
      if (e != extents[0] || e == 0) throw bad("grid extents must be equal and positive");
    shape = {static_cast<unsigned>(extents.size()), extents[0]};
  }

  const std::size_t payload_at = pos;
  const std::size_t elem = *kind == ElementKind::Binary ? 1 : 4;
  std::size_t expected = *channels * elem;
  for (unsigned k = 0; k < shape.dimension; ++k) {
    if (expected > bytes.size() ||
        __builtin_mul_overflow(expected, static_cast<std::size_t>(shape.side), &expected)) {
      expected = SIZE_MAX;
      break;
    }
  }
  const std::size_t cells = expected / (*channels * elem);
  if (bytes.size() - payload_at < expected)
    throw Error(ErrorCode::TruncatedPayload,
                "payload has " + std::to_string(bytes.size() - payload_at) + " bytes, expected " +
                    std::to_string(expected),
                bytes.size());
  if (bytes.size() - payload_at > expected)
    throw Error(ErrorCode::BadHeader, "trailing bytes after payload", payload_at + expected);

  TensorFile file{BinaryGrid{}, std::nullopt};
  if (source) file.provenance = Provenance{*source, *target};
  const std::string_view payload = bytes.substr(payload_at);
  if (*kind == ElementKind::Binary) {
    std::vector<std::uint8_t> values(payload.begin(), payload.end());
    for (std::size_t i = 0; i < values.size(); ++i)
      if (values[i] > 1) throw Error(ErrorCode::InvalidValue, "binary element is not 0/1", payload_at + i);
    file.grid = BinaryGrid(shape, *channels, std::move(values));
  } else {
    std::vector<float> values(*channels * cells);
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::uint32_t bits = 0;
      for (int b = 0; b < 4; ++b)
        bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(payload[i * 4 + b])) << (8 * b);
      values[i] = std::bit_cast<float>(bits);
      if (!std::isfinite(values[i]))
        throw Error(ErrorCode::InvalidValue, "scalar element is not finite", payload_at + i * 4);
    }
    file.grid = ScalarGrid(shape, *channels, std::move(values));
  }
  return file;
}

inline std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_file_bytes(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

inline TensorFile load_tensor(const std::string& path) { return read_tensor(read_file_bytes(path)); }

inline void save_tensor(const std::string& path, const TensorFile& file) {
  write_file_bytes(path, write_tensor(file));
}

}  // namespace sfcmap::dataset
