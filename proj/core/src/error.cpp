#include "vlp/error.hpp"

namespace vlp {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::BehindCamera: return "BehindCamera";
        case ErrorCode::DegenerateRay: return "DegenerateRay";
        case ErrorCode::NonPositiveDistance: return "NonPositiveDistance";
        case ErrorCode::ZeroNoise: return "ZeroNoise";
        case ErrorCode::NoVisibleLink: return "NoVisibleLink";
        case ErrorCode::InsufficientLeds: return "InsufficientLeds";
        case ErrorCode::NonPositivePower: return "NonPositivePower";
        case ErrorCode::GrazingIncidence: return "GrazingIncidence";
        case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
        case ErrorCode::CollinearLeds: return "CollinearLeds";
        case ErrorCode::InconsistentGeometry: return "InconsistentGeometry";
        case ErrorCode::NonFiniteResidual: return "NonFiniteResidual";
        case ErrorCode::GrazingRay: return "GrazingRay";
        case ErrorCode::CoincidentPoints: return "CoincidentPoints";
        case ErrorCode::SingularConfiguration: return "SingularConfiguration";
        case ErrorCode::UnknownAlgorithm: return "UnknownAlgorithm";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace vlp
