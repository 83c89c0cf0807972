#include "vlp/estimate.hpp"

namespace vlp {

std::string_view to_string(Dimension dim) noexcept { return dim == Dimension::Two ? "2d" : "3d"; }

std::string_view to_string(EstimatorMode mode) noexcept {
    switch (mode) {
        case EstimatorMode::Basic: return "basic";
        case EstimatorMode::Compensated: return "compensated";
        case EstimatorMode::CaRssr: return "ca-rssr";
        case EstimatorMode::RssrIdeal: return "rssr-ideal";
        case EstimatorMode::RssrPortable: return "rssr-portable";
    }
    return "unknown";
}

double positioning_error(const PositionEstimate& est, const Vec3& truth, double receiver_plane_z) {
    return (est.position(receiver_plane_z) - truth).norm();
}

}  // namespace vlp
