#pragma once

#include <stdexcept>
#include <string>

namespace cft3m {

enum class ErrorCode {
    symmetry_violation,
    nonzero_diagonal,
    duplicate_name,
    unknown_knot,
    not_surjective,
    infinite_index,
    length_mismatch,
    branched_knot,
    infinite_group,
    malformed_input,
};

const char* error_code_name(ErrorCode code);

/// Domain error with a stable machine-readable code; the CLI maps these to
/// diagnostics and exit status 2.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& msg) {
    throw Error(code, msg);
}

} // namespace cft3m
