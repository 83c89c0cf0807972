#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vlp {

enum class ErrorCode {
    BehindCamera,
    DegenerateRay,
    NonPositiveDistance,
    ZeroNoise,
    NoVisibleLink,
    InsufficientLeds,
    NonPositivePower,
    GrazingIncidence,
    DegenerateTriangle,
    CollinearLeds,
    InconsistentGeometry,
    NonFiniteResidual,
    GrazingRay,
    CoincidentPoints,
    SingularConfiguration,
    UnknownAlgorithm,
    InvalidArgument,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base class for every failure raised by the library. Carries a machine
/// readable code next to the human message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised when fewer LEDs are usable than an estimator needs. The harness
/// counts these as coverage gaps rather than accuracy failures.
class InsufficientLedsError : public Error {
public:
    InsufficientLedsError(int visible, int required)
        : Error(ErrorCode::InsufficientLeds,
                "insufficient LEDs: " + std::to_string(visible) + " < " + std::to_string(required)),
          visible_(visible),
          required_(required) {}

    int visible() const noexcept { return visible_; }
    int required() const noexcept { return required_; }

private:
    int visible_;
    int required_;
};

}  // namespace vlp
