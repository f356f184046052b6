#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace choreo {

enum class ErrorCode {
  precondition,
  invalid_input,
  not_found,
  client_failure,
  io,
  infeasible,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library. Callers that need structured
// findings (library loading, timeline validation) get report objects
// instead; this is for hard failures.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace choreo
