#pragma once

#include "aar/core.hpp"
#include "aar/vision.hpp"

namespace aar {

struct OuterLoopGains {
    double k1 = 1.0, k2 = 2.0, k3 = 0.3, k4 = 3.0, k5 = 1.0;
    double a = -0.5;  // m/s, terminal depth-rate command

    void validate() const;  // throws Config
    static OuterLoopGains table1();
    static OuterLoopGains table2();
};

// v_z is the commanded depth rate: negative closes on the drogue.
struct DesiredCameraVelocity {
    double v_x = 0.0, v_y = 0.0, v_z = 0.0;
};

struct ChannelReferences {
    Vec2 lon = Vec2::Zero();  // [v_y, forward speed]
    double lat = 0.0;         // v_x
};

DesiredCameraVelocity ibvs_outer(const ImageError& e, double depth, const OuterLoopGains& g);

// z_ref <= 0 selects |a| / k3, the depth at which the closing command reaches a.
DesiredCameraVelocity pbvs_outer(const RelativeGeometry& estimate, const OuterLoopGains& g, double z_ref = 0.0);

double pbvs_reference_depth(const OuterLoopGains& g, double z_ref);

ChannelReferences to_channel_references(const DesiredCameraVelocity& v);
DesiredCameraVelocity from_channel_references(const ChannelReferences& r);

}  // namespace aar
