#pragma once

#include <stdexcept>
#include <string>

namespace vlmc {

enum class ErrorCode {
  InvalidArgument,  // bad parameter passed by the caller
  Parse,            // malformed input file / JSON
  Validation,       // well-formed input violating a model invariant
  Support,          // empty prior support / tree outside support
  Bound,            // enumeration bound exceeded
  Numeric,          // non-finite intermediate value
  Io,               // file system failure
  Internal,         // broken internal invariant
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace vlmc
