#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sfcmap {

enum class ErrorCode {
  InvalidSpec,
  IndexOutOfRange,
  CoordOutOfRange,
  CapacityExceeded,
  LengthMismatch,
  ShapeMismatch,
  InvalidValue,
  MalformedRecord,
  DegenerateGeometry,
  UnknownElement,
  BadMagic,
  BadHeader,
  TruncatedPayload,
  RunOverflow,
  MissingProvenance,
  BadFractions,
  UnsupportedShape,
  Io,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::CoordOutOfRange: return "CoordOutOfRange";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::UnknownElement: return "UnknownElement";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::TruncatedPayload: return "TruncatedPayload";
    case ErrorCode::RunOverflow: return "RunOverflow";
    case ErrorCode::MissingProvenance: return "MissingProvenance";
    case ErrorCode::BadFractions: return "BadFractions";
    case ErrorCode::UnsupportedShape: return "UnsupportedShape";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Single exception type for the library. `code()` identifies the failure
/// class; `location()` carries a line number, byte offset or batch item
/// index when the failure can be pinned to one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<std::size_t> location = std::nullopt)
      : std::runtime_error(compose(code, what, location)),
        code_(code),
        location_(location) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> location() const noexcept { return location_; }

 private:
  static std::string compose(ErrorCode code, const std::string& what,
                             std::optional<std::size_t> location) {
    std::string out{to_string(code)};
    out += ": ";
    out += what;
    if (location) {
      out += " (at ";
      out += std::to_string(*location);
      out += ")";
    }
    return out;
  }

  ErrorCode code_;
  std::optional<std::size_t> location_;
};

}  // namespace sfcmap
