#pragma once

// Minimal reader for PDB-style fixed-column ATOM/HETATM records.
//
//   columns  1-6   record name ("ATOM  " / "HETATM")
//            7-11  serial
//           13-16  atom name
//           18-20  residue name
//           22     chain id
//           31-38  x   (8.3 fixed point, angstrom)
//           39-46  y
//           47-54  z
//           77-78  element symbol (optional; otherwise taken from the atom name)
//
// Anything that is not an ATOM (or, when enabled, HETATM) line is ignored.

#include <sfcmap/error.hpp>

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace sfcmap::voxel {

struct AtomRecord {
  std::string element;  // upper case, e.g. "C", "FE"
  std::array<double, 3> position{};
  std::string residue;  // e.g. "ALA"
  std::string name;     // e.g. "CA"
  char chain = ' ';
  long serial = 0;
};

struct ParseOptions {
  bool include_hetatm = false;
};

namespace detail {

inline std::string_view column(std::string_view line, std::size_t first, std::size_t last) {
  // 1-based inclusive columns; short lines yield a shorter (possibly empty) field.
  if (line.size() < first) return {};
  return line.substr(first - 1, std::min(last, line.size()) - (first - 1));
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline bool parse_real(std::string_view field, double& out) {
  field = trim(field);
  if (field.empty()) return false;
  const char* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc{} && ptr == end && std::isfinite(out);
}

inline std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

// Element from the atom-name field: the first alphabetic character. Names that
// start in column 13 (" CA " vs "CA  ") mark two-letter elements.
inline std::string element_from_name(std::string_view raw_name) {
  if (raw_name.size() >= 2 && std::isalpha(static_cast<unsigned char>(raw_name[0])) &&
      std::isalpha(static_cast<unsigned char>(raw_name[1])) && raw_name.size() == 4 &&
      raw_name[3] == ' ' && raw_name[2] == ' ')
    return upper(raw_name.substr(0, 2));
  for (char c : raw_name)
    if (std::isalpha(static_cast<unsigned char>(c))) return upper(std::string_view(&c, 1));
  return {};
}

}  // namespace detail

inline std::vector<AtomRecord> parse_atoms(std::istream& in, const ParseOptions& options = {}) {
  std::vector<AtomRecord> atoms;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string_view view(line);
    const std::string_view record = view.substr(0, std::min<std::size_t>(6, view.size()));
    const bool is_atom = record == "ATOM  " || detail::trim(record) == "ATOM";
    const bool is_het = record == "HETATM";
    if (!is_atom && !(is_het && options.include_hetatm)) continue;

    AtomRecord atom;
    for (int axis = 0; axis < 3; ++axis) {
      const std::size_t first = 31 + 8 * static_cast<std::size_t>(axis);
      if (!detail::parse_real(detail::column(view, first, first + 7), atom.position[axis]))
        throw Error(ErrorCode::MalformedRecord,
                    std::string("unparseable ") + "xyz"[axis] + " coordinate '" +
                        std::string(detail::column(view, first, first + 7)) + "'",
                    line_no);
    }

    const auto serial = detail::trim(detail::column(view, 7, 11));
    if (!serial.empty()) std::from_chars(serial.data(), serial.data() + serial.size(), atom.serial);
    const std::string_view raw_name = detail::column(view, 13, 16);
    atom.name = detail::upper(detail::trim(raw_name));
    atom.residue = detail::upper(detail::trim(detail::column(view, 18, 20)));
    const auto chain = detail::column(view, 22, 22);
    atom.chain = chain.empty() ? ' ' : chain[0];

    const auto element = detail::trim(detail::column(view, 77, 78));
    atom.element = element.empty() ? detail::element_from_name(raw_name) : detail::upper(element);
    if (atom.element.empty())
      throw Error(ErrorCode::MalformedRecord, "cannot determine element symbol", line_no);
    atoms.push_back(std::move(atom));
  }
  return atoms;
}

}  // namespace sfcmap::voxel
