#include "aar/dynamics.hpp"
#include "aar/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace aar {

Mat26 lon_output_matrix(const Vec3& p)
{
    Mat26 c = Mat26::Zero();
    c(0, lon::q) = -p.x();
    c(1, lon::V) = 1.0;
    c(1, lon::q) = p.z();
    return c;
}

Mat16 lat_output_matrix(const Vec3& p)
{
    Mat16 c = Mat16::Zero();
    c(0, lat::p) = -p.z();
    c(0, lat::r) = p.x();
    return c;
}

void refresh_outputs(PlantModel& plant)
{
    plant.C_lon = lon_output_matrix(plant.mount_offset);
    plant.C_lat = lat_output_matrix(plant.mount_offset);
}

bool stabilizable(const Mat& A, const Mat& B, double tol)
{
    return uncontrollable_modes(A, B, tol).empty();
}

ControlInput ControlInput::from_channels(const Vec2& lon, const Vec2& lat)
{
    return {lon(0), lon(1), lat(0), lat(1)};
}

Saturated saturate(const ControlInput& u, const ActuatorLimits& lim)
{
    auto clip = [](double v, double l) { return std::clamp(v, -l, l); };
    Saturated s;
    s.input = {clip(u.elevator, lim.surface), clip(u.throttle, lim.throttle),
               clip(u.aileron, lim.surface), clip(u.rudder, lim.surface)};
    s.lon = s.input.elevator != u.elevator || s.input.throttle != u.throttle;
    s.lat = s.input.aileron != u.aileron || s.input.rudder != u.rudder;
    return s;
}

ReceiverState step_receiver(const ReceiverState& state, const ControlInput& input,
                            const PlantModel& plant, double dt)
{
    if (!(dt > 0.0))
        throw Error(ErrorKind::Domain, "step_receiver needs dt > 0");
    const Vec6 bl = plant.B_lon * input.lon();
    const Vec6 bt = plant.B_lat * input.lat();
    ReceiverState next;
    next.lon = rk4_step([&](const Vec6& x) -> Vec6 { return plant.A_lon * x + bl; }, state.lon, dt);
    next.lat = rk4_step([&](const Vec6& x) -> Vec6 { return plant.A_lat * x + bt; }, state.lat, dt);
    if (!next.lon.allFinite() || !next.lat.allFinite())
        throw Error(ErrorKind::Diverged, "receiver state became non-finite");
    return next;
}

Vec3 camera_velocity(const ReceiverState& s, const CameraInstallation& install, bool linearized)
{
    const Vec3 pc = install.true_offset();
    const double xc = pc.x(), yc = pc.y(), zc = pc.z();
    const double V = s.lon(lon::V), al = s.lon(lon::alpha), q = s.lon(lon::q);
    const double be = s.lat(lat::beta), p = s.lat(lat::p), r = s.lat(lat::r);
    if (linearized)
        return {xc * r - zc * p, -xc * q, V + zc * q};
    return {V * std::sin(be) + xc * r - zc * p,
            V * std::sin(al) * std::cos(be) + yc * p - xc * q,
            V * std::cos(al) * std::cos(be) + zc * q - yc * r};
}

TurbulenceModel::TurbulenceModel(TurbulenceLevel level, std::uint64_t seed, const TurbulenceParams& params)
    : level_(level), seed_(seed), rng_(seed)
{
    if (!(params.scale_length > 0.0) || !(params.airspeed > 0.0))
        throw Error(ErrorKind::Domain, "turbulence scale length and airspeed must be positive");
    sigma_ = level == TurbulenceLevel::I ? params.sigma_I : level == TurbulenceLevel::II ? params.sigma_II : 0.0;
    tau_ = params.scale_length / params.airspeed;
    if (level_ == TurbulenceLevel::Off)
        return;
    // start from the stationary covariance so there is no warm-up transient
    xu_ = sigma_ * noise();
    const double s1 = std::sqrt(tau_ * tau_ * tau_ / 4.0), s2 = std::sqrt(tau_ / 4.0);
    xv_ = {s1 * noise(), s2 * noise()};
    xw_ = {s1 * noise(), s2 * noise()};
}

double TurbulenceModel::noise() { return normal_(rng_); }

Vec3 TurbulenceModel::sample(double dt)
{
    if (!(dt > 0.0))
        throw Error(ErrorKind::Domain, "sample_gust needs dt > 0");
    if (level_ == TurbulenceLevel::Off)
        return Vec3::Zero();
    const double t = tau_, sq = std::sqrt(dt);
    const double nu = noise() * sq, nv = noise() * sq, nw = noise() * sq;

    // H_u = sigma sqrt(2 tau) / (1 + tau s)
    xu_ += -xu_ / t * dt + sigma_ * std::sqrt(2.0 * t) / t * nu;

    // H_v = H_w = sigma sqrt(tau) (1 + sqrt(3) tau s) / (1 + tau s)^2
    auto lateral = [&](Vec2& x, double n) {
        const double x1 = x(0), x2 = x(1);
        x(0) = x1 + dt * x2;
        x(1) = x2 + dt * (-x1 / (t * t) - 2.0 * x2 / t) + n;
        return sigma_ * std::sqrt(t) * (x(0) / (t * t) + std::sqrt(3.0) * x(1) / t);
    };
    const double v = lateral(xv_, nv);
    const double w = lateral(xw_, nw);
    return {xu_, v, w};
}

Vec3 sample_gust(TurbulenceModel& turbulence, double dt) { return turbulence.sample(dt); }

double bow_wave_magnitude(const BowWaveParams& bow, double d, double forward_speed, double reference_airspeed)
{
    if (d >= bow.activation_radius)
        return 0.0;
    const double f = std::pow(1.0 - std::max(d, 0.0) / bow.activation_radius, bow.decay_exponent);
    return bow.strength * f * (forward_speed / reference_airspeed);
}

Vec3 bow_wave_velocity(const DrogueModel& drogue, const Vec3& probe_pos, const Vec3& drogue_pos,
                       double forward_speed)
{
    const BowWaveParams& bw = drogue.bow_wave;
    if (!bw.enabled)
        return Vec3::Zero();
    const Vec3 sep = drogue_pos - probe_pos;
    const double mag = bow_wave_magnitude(bw, sep.norm(), forward_speed, drogue.reference_airspeed);
    if (mag == 0.0)
        return Vec3::Zero();
    // push away from the approach axis; straight up when centred on it
    const Vec3 radial(0.0, sep.y(), sep.z());
    const double n = radial.norm();
    const Vec3 dir = n > 1e-9 ? Vec3(radial / n) : Vec3(0.0, 0.0, -1.0);
    return mag * dir;
}

Vec3 drogue_velocity(const DrogueModel& drogue, const Vec3& probe_pos, const Vec3& drogue_pos,
                     const Vec3& gust, double forward_speed)
{
    const Vec3 v = drogue.gust_gain * gust + bow_wave_velocity(drogue, probe_pos, drogue_pos, forward_speed);
    return camera_rotation() * v;
}

}  // namespace aar
