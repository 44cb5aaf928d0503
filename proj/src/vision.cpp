#include "aar/vision.hpp"

#include <cmath>

namespace aar {

const char* error_kind_name(ErrorKind k) noexcept
{
    switch (k) {
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::BehindCamera: return "behind camera";
    case ErrorKind::Diverged: return "integration diverged";
    case ErrorKind::Unstabilizable: return "synthesis impossible";
    case ErrorKind::SolverFailure: return "solver failure";
    case ErrorKind::SynthesisFailure: return "synthesis failure";
    case ErrorKind::Config: return "config error";
    case ErrorKind::Io: return "i/o error";
    }
    return "unknown error";
}

Mat3 camera_rotation()
{
    Mat3 r;
    r << 0, 1, 0,
         0, 0, 1,
         1, 0, 0;
    return r;
}

CameraInstallation CameraInstallation::believed() const
{
    CameraInstallation c = *this;
    c.mount_offset_error.setZero();
    return c;
}

double ImageError::norm() const { return std::hypot(e_x, e_y); }

RelativeGeometry relative_geometry(const Vec3& receiver_pos, const Vec3& drogue_pos,
                                   const CameraInstallation& install)
{
    // receiver-to-tanker rotation is identity at trim
    const Vec3 camera_pos = receiver_pos + install.true_offset();
    return RelativeGeometry{install.frame_rotation * (drogue_pos - camera_pos)};
}

ImagePoint project(const RelativeGeometry& geometry)
{
    const double z = geometry.depth();
    if (!(z > 0.0))
        throw Error(ErrorKind::BehindCamera, "drogue at non-positive depth " + std::to_string(z));
    return {geometry.position.x() / z, geometry.position.y() / z};
}

ImageError image_error(const ImagePoint& point, const ImagePoint& convergence)
{
    return {point.x - convergence.x, point.y - convergence.y};
}

InteractionMatrix interaction_matrix(const ImagePoint& p, double z)
{
    if (!(z > 0.0) || !std::isfinite(z))
        throw Error(ErrorKind::Domain, "interaction matrix needs positive depth, got " + std::to_string(z));
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw Error(ErrorKind::Domain, "interaction matrix needs a finite image point");
    const double x = p.x, y = p.y;
    InteractionMatrix L;
    L << -1.0 / z, 0.0, x / z, x * y, -(1.0 + x * x), y,
         0.0, -1.0 / z, y / z, 1.0 + y * y, -x * y, -x;
    return L;
}

Vec2 image_error_rate(const InteractionMatrix& L, const Vec6& v)
{
    // fixed left-to-right order so the planar forms below agree bit for bit
    Vec2 r = Vec2::Zero();
    for (int i = 0; i < 2; ++i) {
        double s = 0.0;
        for (int j = 0; j < 6; ++j)
            s += L(i, j) * v(j);
        r(i) = s;
    }
    return r;
}

double planar_rate_x(double e_x, double z, double v_x, double v_z, double w_y)
{
    return (-1.0 / z) * v_x + (e_x / z) * v_z + (-(1.0 + e_x * e_x)) * w_y;
}

double planar_rate_y(double e_y, double z, double v_y, double v_z, double w_x)
{
    return (-1.0 / z) * v_y + (e_y / z) * v_z + (1.0 + e_y * e_y) * w_x;
}

}  // namespace aar
