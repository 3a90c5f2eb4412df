#include "eaas/error.hpp"

namespace eaas {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::frame_too_large: return "frame-too-large";
    case Errc::incomplete_frame: return "incomplete-frame";
    case Errc::malformed_frame: return "malformed-frame";
    case Errc::cap_exceeded: return "cap-exceeded";
    case Errc::entropy_unavailable: return "entropy-unavailable";
    case Errc::transport: return "transport";
    case Errc::timeout: return "timeout";
    case Errc::catalog_invalid: return "catalog-invalid";
    case Errc::chain_invalid: return "chain-invalid";
    case Errc::startup: return "startup";
    case Errc::io: return "io";
  }
  return "unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace eaas
