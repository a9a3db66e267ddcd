#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gfe {

/// Error categories raised by the library. The CLI maps them onto exit codes.
enum class ErrorCode {
    // model validation
    CBoundViolated,
    KUnbounded,
    RatioDensityNotNormalized,
    InvalidParameter,
    Diverged,
    // simulation / estimation
    FlowDiverged,
    NoHits,
    BracketFailure,
    DivergentDerivative,
    BoundViolated,
    // closed forms
    OutOfDomain,
    DriftZero,
    // grid solver
    DomainTooSmall,
    CflViolation,
    // ergodicity
    MomentDiverged,
    // plumbing
    ConfigError,
    IoError,
};

std::string_view to_string(ErrorCode code);

enum class ErrorKind { Validation, Estimation, Io };

/// Which family an error code belongs to (drives CLI exit codes 2/3/4).
ErrorKind kind_of(ErrorCode code);

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

}  // namespace gfe
