#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eaas {

enum class Errc {
  invalid_argument,
  frame_too_large,
  incomplete_frame,
  malformed_frame,
  cap_exceeded,
  entropy_unavailable,
  transport,
  timeout,
  catalog_invalid,
  chain_invalid,
  startup,
  io,
};

std::string_view to_string(Errc code) noexcept;

// Every failure raised by the library carries one of the codes above. The
// message is prefixed with the code's name so logs stay greppable.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail);

  Errc code() const noexcept { return code_; }

  // Transport failures are the only ones worth retrying on a fresh
  // connection; everything else is a caller or data problem.
  bool retryable() const noexcept { return code_ == Errc::transport; }

 private:
  Errc code_;
};

}  // namespace eaas
