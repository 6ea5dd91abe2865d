#pragma once

#include <stdexcept>
#include <string>

namespace machclock {

enum class ErrorCode {
    InvalidArgument,
    InvalidDimension,
    SpaceMismatch,
    CutoffTooSmall,
    StepTooLarge,
    PositivityViolation,
    NonHermitian,
    DegenerateInput,
    ConfigError,
    IoError,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
    if (!cond) fail(code, what);
}

} // namespace machclock
