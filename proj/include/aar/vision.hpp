#pragma once

#include "aar/core.hpp"

namespace aar {

// Tanker (x fwd, y right, z down) to camera (x right, y down, z fwd).
Mat3 camera_rotation();

struct CameraInstallation {
    Vec3 mount_offset = Vec3::Zero();        // receiver frame, believed by the controllers
    Vec3 mount_offset_error = Vec3::Zero();  // added to the physical mount only
    Mat3 frame_rotation = camera_rotation();

    Vec3 true_offset() const { return mount_offset + mount_offset_error; }
    CameraInstallation believed() const;
};

struct ImagePoint {
    double x = 0.0;
    double y = 0.0;
};

struct ImageError {
    double e_x = 0.0;
    double e_y = 0.0;
    double norm() const;
};

struct RelativeGeometry {
    Vec3 position = Vec3::Zero();  // camera frame
    double depth() const { return position.z(); }
};

using InteractionMatrix = Mat26;

RelativeGeometry relative_geometry(const Vec3& receiver_pos, const Vec3& drogue_pos,
                                   const CameraInstallation& install);

// Throws ErrorKind::BehindCamera when depth <= 0.
ImagePoint project(const RelativeGeometry& geometry);

ImageError image_error(const ImagePoint& point, const ImagePoint& convergence = {});

// Throws ErrorKind::Domain when depth <= 0 or inputs are not finite.
InteractionMatrix interaction_matrix(const ImagePoint& point, double depth);

Vec2 image_error_rate(const InteractionMatrix& L, const Vec6& relative_velocity);

// x_c-z_c plane (v_y = w_x = w_z = 0) and y_c-z_c plane (v_x = w_y = w_z = 0).
double planar_rate_x(double e_x, double z, double v_x, double v_z, double w_y);
double planar_rate_y(double e_y, double z, double v_y, double v_z, double w_x);

}  // namespace aar
