#pragma once

// Comparison estimators. RSSR fits RSS ratios with an assumed receiver
// orientation; CA-RSSR fits camera-corrected distance ratios. Both are NLLS
// over all visible LEDs, started from the room center. PnP only takes part in
// coverage counting.

#include <string>
#include <string_view>

#include "vlp/estimate.hpp"
#include "vlp/lm_solver.hpp"
#include "vlp/scene.hpp"
#include "vlp/sensing.hpp"

namespace vlp {

/// ideal: the true receiver tilt is known. portable: the PD is assumed to face straight up.
enum class RssrVariant { Ideal, Portable };

struct LedRequirement {
    std::string algorithm;
    int needed_2d = 0;
    int needed_3d = 0;

    int needed(Dimension dim) const noexcept { return dim == Dimension::Two ? needed_2d : needed_3d; }
};

/// Accepts "rssr", "pnp", "ca-rssr", "eca-rssr" (case, '-' and '_' ignored).
/// Throws UnknownAlgorithm.
LedRequirement required_leds(std::string_view algorithm);

struct BaselineConfig {
    double receiver_plane_z = 0.0;  // fixed z in 2D mode
    /// Orientation the portable RSSR variant assumes; identity = facing up.
    Rotation portable_rotation;
    LmOptions lm;
};

/// The ideal variant reads the true rotation from `obs.receiver_truth`; that is
/// the point of the variant. Throws InsufficientLedsError.
PositionEstimate estimate_rssr(const ObservationSet& obs, const Scene& scene, const Receiver& rx, RssrVariant variant,
                               Dimension dim, const BaselineConfig& cfg = {});

PositionEstimate estimate_ca_rssr(const ObservationSet& obs, const Scene& scene, const CameraIntrinsics& intr,
                                  Dimension dim, const BaselineConfig& cfg = {});

}  // namespace vlp
