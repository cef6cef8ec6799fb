#pragma once

#include <stdexcept>
#include <string>

namespace unitwork {

// Every failure the engine reports carries one of these codes so callers
// (and the CLI exit-code mapping) can tell validation problems apart.
enum class Errc {
  empty_label,
  malformed_record,
  empty_event,
  non_monotone_seq,
  unknown_symbol,
  unknown_node,
  unknown_region,
  unknown_group,
  invalid_argument,
  build_failed,
  signature_collision,
  load_failed,
  unsupported_version,
};

inline const char* to_string(Errc code) {
  switch (code) {
    case Errc::empty_label: return "empty_label";
    case Errc::malformed_record: return "malformed_record";
    case Errc::empty_event: return "empty_event";
    case Errc::non_monotone_seq: return "non_monotone_seq";
    case Errc::unknown_symbol: return "unknown_symbol";
    case Errc::unknown_node: return "unknown_node";
    case Errc::unknown_region: return "unknown_region";
    case Errc::unknown_group: return "unknown_group";
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::build_failed: return "build_failed";
    case Errc::signature_collision: return "signature_collision";
    case Errc::load_failed: return "load_failed";
    case Errc::unsupported_version: return "unsupported_version";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace unitwork
