#pragma once

#include <vector>

#include "vlp/optical_channel.hpp"

namespace vlp {

struct Room {
    double length = 5.0;
    double width = 5.0;
    double height = 3.0;

    bool contains(const Vec3& p) const {
        return p.x() >= 0.0 && p.x() <= length && p.y() >= 0.0 && p.y() <= width && p.z() >= 0.0 &&
               p.z() <= height;
    }
};

/// Room plus ceiling LEDs. All LEDs share one height and face straight down;
/// the ratio-based estimators depend on both, so the constructor enforces them.
class Scene {
public:
    Scene(Room room, std::vector<LedFixture> leds);

    /// 5 x 5 x 3 m room with five 2.2 W LEDs at (1,1), (1,4), (4,4), (4,1), (2.5,2.5), 3 m high.
    static Scene reference();

    const Room& room() const noexcept { return room_; }
    const std::vector<LedFixture>& leds() const noexcept { return leds_; }
    /// Throws InvalidArgument for unknown ids.
    const LedFixture& led(int id) const;
    double led_height() const noexcept { return leds_.front().position.z(); }
    double lambertian_order() const { return leds_.front().lambertian_order(); }

private:
    Room room_;
    std::vector<LedFixture> leds_;
};

}  // namespace vlp
