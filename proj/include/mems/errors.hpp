#pragma once

#include <stdexcept>
#include <string>

namespace mems {

enum class ErrorCode {
    ResolutionTooCoarse,
    DimensionMismatch,
    DimensionNotSupported,
    SingularAssembly,
    TruncationTooLarge,
    EigensolveFailure,
    LengthMismatch,
    TouchdownImminent,
    InsufficientSamples,
    NonFinite,
    BallTooLarge,
    RhoTooLarge,
    NotSupercritical,
    MassAtTouchdown,
    PositivityFailure,
    DomainNotAdmissible,
    NotCertified,
    ConfigInvalid,
    IoFailure,
    FormatVersionMismatch,
    CacheCorrupt,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(std::string(to_string(code)) + ": " + msg), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& msg) {
    throw Error(code, msg);
}

} // namespace mems
