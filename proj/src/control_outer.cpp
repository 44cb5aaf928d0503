#include "aar/control_outer.hpp"

#include <algorithm>
#include <cmath>

namespace aar {

void OuterLoopGains::validate() const
{
    const double k[] = {k1, k2, k3, k4, k5};
    for (int i = 0; i < 5; ++i)
        if (!(k[i] > 0.0) || !std::isfinite(k[i]))
            throw Error(ErrorKind::Config, "gains.k" + std::to_string(i + 1) + ": must be positive");
    if (!(a < 0.0) || !std::isfinite(a))
        throw Error(ErrorKind::Config, "gains.a: must be negative");
}

OuterLoopGains OuterLoopGains::table1() { return {1.0, 2.0, 0.3, 3.0, 1.0, -0.5}; }
OuterLoopGains OuterLoopGains::table2() { return {3.0, 3.0, 0.5, 5.0, 2.0, -0.5}; }

static double closing_command(double depth, double sx, double sy, const OuterLoopGains& g)
{
    // image error eases the closing rate; a caps it from the slow side
    return std::min(-g.k3 * depth + g.k4 * std::abs(sx) + g.k5 * std::abs(sy), g.a);
}

DesiredCameraVelocity ibvs_outer(const ImageError& e, double depth, const OuterLoopGains& g)
{
    return {g.k1 * e.e_x, g.k2 * e.e_y, closing_command(depth, e.e_x, e.e_y, g)};
}

double pbvs_reference_depth(const OuterLoopGains& g, double z_ref)
{
    return z_ref > 0.0 ? z_ref : std::abs(g.a) / g.k3;
}

DesiredCameraVelocity pbvs_outer(const RelativeGeometry& est, const OuterLoopGains& g, double z_ref)
{
    const double zr = pbvs_reference_depth(g, z_ref);
    const double sx = est.position.x() / zr, sy = est.position.y() / zr;
    return {g.k1 * sx, g.k2 * sy, closing_command(est.depth(), sx, sy, g)};
}

ChannelReferences to_channel_references(const DesiredCameraVelocity& v)
{
    // lon output tracks forward speed, which is minus the depth rate
    return {Vec2(v.v_y, -v.v_z), v.v_x};
}

DesiredCameraVelocity from_channel_references(const ChannelReferences& r)
{
    return {r.lat, r.lon(0), -r.lon(1)};
}

}  // namespace aar
