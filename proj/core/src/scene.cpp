#include "vlp/scene.hpp"

#include <cmath>
#include <set>
#include <string>

#include "vlp/error.hpp"

namespace vlp {

Scene::Scene(Room room, std::vector<LedFixture> leds) : room_(room), leds_(std::move(leds)) {
    if (!(room_.length > 0.0 && room_.width > 0.0 && room_.height > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "room extents must be positive");
    }
    if (leds_.size() < 3) throw Error(ErrorCode::InvalidArgument, "a scene needs at least 3 LEDs");
    std::set<int> ids;
    const auto& first = leds_.front();
    for (const auto& led : leds_) {
        if (!ids.insert(led.id).second) {
            throw Error(ErrorCode::InvalidArgument, "duplicate LED id " + std::to_string(led.id));
        }
        if (!room_.contains(led.position)) {
            throw Error(ErrorCode::InvalidArgument, "LED " + std::to_string(led.id) + " lies outside the room");
        }
        if (std::abs(led.position.z() - first.position.z()) > 1e-12) {
            throw Error(ErrorCode::InvalidArgument, "all LEDs must be mounted at the same height");
        }
        if ((led.normal - Vec3(0.0, 0.0, -1.0)).norm() > 1e-12) {
            throw Error(ErrorCode::InvalidArgument, "LED normals must point straight down");
        }
        if (led.semiangle_deg != first.semiangle_deg || led.transmit_power != first.transmit_power) {
            throw Error(ErrorCode::InvalidArgument, "LEDs must share semi-angle and transmit power");
        }
        if (!(led.transmit_power > 0.0)) throw Error(ErrorCode::InvalidArgument, "transmit power must be positive");
        (void)led.lambertian_order();  // validates the semi-angle
    }
}

Scene Scene::reference() {
    std::vector<LedFixture> leds;
    const double xy[5][2] = {{1.0, 1.0}, {1.0, 4.0}, {4.0, 4.0}, {4.0, 1.0}, {2.5, 2.5}};
    for (int i = 0; i < 5; ++i) {
        LedFixture led;
        led.id = i + 1;
        led.position = Vec3(xy[i][0], xy[i][1], 3.0);
        leds.push_back(led);
    }
    return Scene(Room{5.0, 5.0, 3.0}, std::move(leds));
}

const LedFixture& Scene::led(int id) const {
    for (const auto& led : leds_) {
        if (led.id == id) return led;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown LED id " + std::to_string(id));
}

}  // namespace vlp
