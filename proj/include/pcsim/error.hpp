#ifndef PCSIM_ERROR_HPP
#define PCSIM_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace pcsim {

enum class ErrorCode {
  EmptyCloud,
  NonFinite,
  InvalidCount,
  InvalidParameter,
  CardinalityMismatch,
  SizeLimitExceeded,
  NonConvergence,
  InsufficientPoints,
  ShapeMismatch,
  ParseError,
};

std::string_view error_name(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI, foreign bindings) can map it without parsing messages.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace pcsim

#endif // PCSIM_ERROR_HPP
