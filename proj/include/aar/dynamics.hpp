#pragma once

#include "aar/core.hpp"
#include "aar/vision.hpp"

#include <cstdint>
#include <random>

namespace aar {

struct ActuatorLimits {
    double surface = 25.0 * 3.14159265358979323846 / 180.0;  // rad, elevator/aileron/rudder
    double throttle = 0.5;                                   // throttle increment about trim
};

// lon state [x, h, theta, V, alpha, q], inputs [elevator, throttle]
// lat state [y, psi, phi, beta, p, r], inputs [aileron, rudder]
struct PlantModel {
    Mat6 A_lon = Mat6::Zero();
    Mat62 B_lon = Mat62::Zero();
    Mat6 A_lat = Mat6::Zero();
    Mat62 B_lat = Mat62::Zero();
    Mat26 C_lon = Mat26::Zero();
    Mat16 C_lat = Mat16::Zero();
    double trim_airspeed = 150.0;
    Vec3 mount_offset = Vec3::Zero();
    ActuatorLimits limits;
};

namespace lon {
enum : int { x = 0, h = 1, theta = 2, V = 3, alpha = 4, q = 5 };
}
namespace lat {
enum : int { y = 0, psi = 1, phi = 2, beta = 3, p = 4, r = 5 };
}

Mat26 lon_output_matrix(const Vec3& mount_offset);
Mat16 lat_output_matrix(const Vec3& mount_offset);

// Rebuilds C_lon/C_lat from mount_offset.
void refresh_outputs(PlantModel& plant);

// PBH test on eigenvalues with Re >= -tol.
bool stabilizable(const Mat& A, const Mat& B, double tol = 1e-9);

struct ReceiverState {
    Vec6 lon = Vec6::Zero();
    Vec6 lat = Vec6::Zero();
};

struct ControlInput {
    double elevator = 0.0;
    double throttle = 0.0;
    double aileron = 0.0;
    double rudder = 0.0;

    Vec2 lon() const { return {elevator, throttle}; }
    Vec2 lat() const { return {aileron, rudder}; }
    static ControlInput from_channels(const Vec2& lon, const Vec2& lat);
};

struct Saturated {
    ControlInput input;
    bool lon = false;
    bool lat = false;
};

Saturated saturate(const ControlInput& u, const ActuatorLimits& limits);

template <class F, class V>
V rk4_step(F&& f, const V& x, double dt)
{
    const V k1 = f(x);
    const V k2 = f(V(x + 0.5 * dt * k1));
    const V k3 = f(V(x + 0.5 * dt * k2));
    const V k4 = f(V(x + dt * k3));
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

ReceiverState step_receiver(const ReceiverState& state, const ControlInput& input,
                            const PlantModel& plant, double dt);

// Camera velocity in the camera-aligned reference frame. Uses the physical offset.
Vec3 camera_velocity(const ReceiverState& state, const CameraInstallation& install,
                     bool linearized = false);

enum class TurbulenceLevel { Off, I, II };

struct TurbulenceParams {
    double sigma_I = 0.41;   // m/s per axis
    double sigma_II = 0.575;
    double scale_length = 533.0;
    double airspeed = 150.0;
};

class TurbulenceModel {
public:
    TurbulenceModel(TurbulenceLevel level, std::uint64_t seed, const TurbulenceParams& params = {});

    Vec3 sample(double dt);

    TurbulenceLevel level() const { return level_; }
    std::uint64_t seed() const { return seed_; }
    double sigma() const { return sigma_; }
    double time_constant() const { return tau_; }

private:
    double noise();

    TurbulenceLevel level_;
    std::uint64_t seed_;
    double sigma_ = 0.0;
    double tau_ = 1.0;
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    double xu_ = 0.0;
    Vec2 xv_ = Vec2::Zero();
    Vec2 xw_ = Vec2::Zero();
};

// Body-axis gust (u, v, w) in m/s.
Vec3 sample_gust(TurbulenceModel& turbulence, double dt);

struct BowWaveParams {
    bool enabled = false;
    double activation_radius = 4.0;
    double strength = 0.6;
    double decay_exponent = 1.0;
    Vec3 source_offset{7.0, 0.0, 0.0};  // receiver frame, nose pressure center
};

struct DrogueModel {
    Vec3 nominal_position = Vec3::Zero();
    double gust_gain = 0.5;
    double restoring_rate = 0.5;  // 1/s, hose pull toward nominal_position
    double reference_airspeed = 150.0;
    BowWaveParams bow_wave;
};

double bow_wave_magnitude(const BowWaveParams& bow, double separation, double forward_speed,
                          double reference_airspeed);

// Tanker-frame bow-wave push on the drogue from a source at probe_pos.
Vec3 bow_wave_velocity(const DrogueModel& drogue, const Vec3& probe_pos, const Vec3& drogue_pos,
                       double forward_speed);

// Drogue disturbance velocity in the camera-aligned frame.
Vec3 drogue_velocity(const DrogueModel& drogue, const Vec3& probe_pos, const Vec3& drogue_pos,
                     const Vec3& gust, double forward_speed);

}  // namespace aar
