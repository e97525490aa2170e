#pragma once

// Dataset manifests as JSON Lines: one object per entry, e.g.
//
//   {"id":"1aa9_A","label":"hras","source":"pdb/1aa9.pdb","output":"out/1aa9_A.sfct",
//    "shape":[64,64,64],"channels":8,"split":"train","split_seed":7}
//
// "split" and "split_seed" are present once the entry has been assigned.

#include <sfcmap/error.hpp>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace sfcmap::dataset {

enum class Split { Train, Validation, Test };

constexpr std::string_view to_string(Split split) noexcept {
  switch (split) {
    case Split::Train: return "train";
    case Split::Validation: return "validation";
    case Split::Test: return "test";
  }
  return "unknown";
}

inline Split parse_split(std::string_view name) {
  if (name == "train") return Split::Train;
  if (name == "validation") return Split::Validation;
  if (name == "test") return Split::Test;
  throw Error(ErrorCode::MalformedRecord, "unknown split '" + std::string(name) + "'");
}

struct ManifestEntry {
  std::string id;
  std::string label;
  std::string source;
  std::string output;
  std::vector<std::uint64_t> shape;
  std::size_t channels = 1;
  std::optional<Split> split;
  std::optional<std::uint64_t> split_seed;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

using Manifest = std::vector<ManifestEntry>;

inline std::string to_json_line(const ManifestEntry& e) {
  nlohmann::ordered_json j;
  j["id"] = e.id;
  j["label"] = e.label;
  j["source"] = e.source;
  j["output"] = e.output;
  j["shape"] = e.shape;
  j["channels"] = e.channels;
  if (e.split) j["split"] = to_string(*e.split);
  if (e.split_seed) j["split_seed"] = *e.split_seed;
  return j.dump();
}

inline ManifestEntry entry_from_json(std::string_view line, std::size_t line_no) {
  try {
    const auto j = nlohmann::json::parse(line);
    ManifestEntry e;
    e.id = j.at("id").get<std::string>();
    e.label = j.value("label", std::string{});
    e.source = j.value("source", std::string{});
    e.output = j.value("output", std::string{});
    e.shape = j.value("shape", std::vector<std::uint64_t>{});
    e.channels = j.value("channels", std::size_t{1});
    if (j.contains("split")) e.split = parse_split(j.at("split").get<std::string>());
    if (j.contains("split_seed")) e.split_seed = j.at("split_seed").get<std::uint64_t>();
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::MalformedRecord, std::string("bad manifest line: ") + ex.what(), line_no);
  }
}

inline Manifest read_manifest(std::istream& in) {
  Manifest out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(entry_from_json(line, line_no));
  }
  return out;
}

inline void write_manifest(std::ostream& out, const Manifest& manifest) {
  for (const auto& e : manifest) out << to_json_line(e) << '\n';
}

inline Manifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open manifest '" + path + "'");
  return read_manifest(in);
}

inline void save_manifest(const std::string& path, const Manifest& manifest) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write manifest '" + path + "'");
  write_manifest(out, manifest);
}

}  // namespace sfcmap::dataset
