#include "aar/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace aar {

const char* failure_reason_name(FailureReason r)
{
    switch (r) {
    case FailureReason::None: return "none";
    case FailureReason::Timeout: return "timeout";
    case FailureReason::Overshoot: return "overshoot";
    case FailureReason::VisualLoss: return "visual_loss";
    case FailureReason::Diverged: return "diverged";
    }
    return "unknown";
}

void ScenarioConfig::validate() const
{
    auto fail = [](const std::string& field, const std::string& msg) { throw Error(ErrorKind::Config, field + ": " + msg); };
    gains.validate();
    if (!(capture_radius > 0.0))
        fail("capture_radius", "must be positive");
    if (!(dt > 0.0))
        fail("dt", "must be positive");
    if (!(max_duration >= 10.0 * dt))
        fail("max_duration", "must be at least 10 * dt");
    if (!(visual_loss_hold >= 0.0))
        fail("visual_loss_hold", "must be non-negative");
    if (!(closing_margin >= 0.0))
        fail("closing_margin", "must be non-negative");
    if (!(initial.depth > 0.0))
        fail("initial.depth", "must be positive");
    if (!pose_error.allFinite())
        fail("pose_error", "must be finite");
    if (!(drogue.gust_gain >= 0.0))
        fail("drogue.gust_gain", "must be non-negative");
    if (!(drogue.restoring_rate >= 0.0))
        fail("drogue.restoring_rate", "must be non-negative");
    const auto& bw = drogue.bow_wave;
    if (!(bw.activation_radius > 0.0))
        fail("drogue.bow_wave.activation_radius", "must be positive");
    if (!(bw.strength >= 0.0))
        fail("drogue.bow_wave.strength", "must be non-negative");
    if (!(bw.decay_exponent > 0.0))
        fail("drogue.bow_wave.decay_exponent", "must be positive");
    if (!(turbulence_params.sigma_I >= 0.0) || !(turbulence_params.sigma_II >= 0.0))
        fail("turbulence.sigma", "must be non-negative");
    if (weights)
        weights->validate();
}

CameraInstallation ScenarioConfig::installation() const
{
    CameraInstallation c;
    c.mount_offset = plant.mount_offset;
    c.mount_offset_error = pose_error;
    return c;
}

LqrWeights ScenarioConfig::effective_weights() const
{
    return weights ? *weights : LqrWeights::defaults(plant);
}

std::vector<std::string> ScenarioConfig::warnings() const
{
    std::vector<std::string> w;
    char buf[160];
    if (gains.k1 <= disturbance_bound) {
        std::snprintf(buf, sizeof buf, "k1 = %g does not exceed the drogue velocity bound %g m/s", gains.k1, disturbance_bound);
        w.emplace_back(buf);
    }
    if (gains.k2 <= disturbance_bound) {
        std::snprintf(buf, sizeof buf, "k2 = %g does not exceed the drogue velocity bound %g m/s", gains.k2, disturbance_bound);
        w.emplace_back(buf);
    }
    return w;
}

static bool crossing(const SimRecord& a, const SimRecord& b) { return a.depth > 0.0 && b.depth <= 0.0; }

double peak_error(const SimLog& log, double depth_floor)
{
    double peak = 0.0;
    for (const auto& r : log.records)
        if (r.visual && r.depth >= depth_floor)
            peak = std::max(peak, std::hypot(r.e_x, r.e_y));
    return peak;
}

DockingOutcome detect_docking(const SimLog& log, double capture_radius)
{
    if (log.records.empty())
        throw Error(ErrorKind::Domain, "detect_docking needs a non-empty log");
    DockingOutcome o;
    o.steps = log.records.size();
    for (const auto& r : log.records)
        o.saturated_steps += (r.sat_lon || r.sat_lat) ? 1 : 0;

    const auto& rs = log.records;
    for (std::size_t k = 1; k < rs.size(); ++k) {
        if (!crossing(rs[k - 1], rs[k]))
            continue;
        const SimRecord &a = rs[k - 1], &b = rs[k];
        const double f = a.depth / (a.depth - b.depth);
        const Vec3 p = a.rel + f * (b.rel - a.rel);
        o.crossed = true;
        o.miss_distance = std::hypot(p.x(), p.y());
        o.closing_speed = (a.depth - b.depth) / (b.t - a.t);
        o.time_of_contact = a.t + f * (b.t - a.t);
        o.success = o.miss_distance < capture_radius;
        o.failure_reason = o.success ? FailureReason::None : FailureReason::Overshoot;
        return o;
    }
    o.failure_reason = rs.front().depth <= 0.0 ? FailureReason::VisualLoss : FailureReason::Timeout;
    return o;
}

namespace {

// no linearized trim model means anything this far out; treat as divergence
constexpr double kDivergenceBound = 1e6;

struct Truth {
    Vec6 lon, lat;
    Vec3 receiver;
};

using State = Eigen::Matrix<double, 15, 1>;

State pack(const Truth& s)
{
    State x;
    x << s.lon, s.lat, s.receiver;
    return x;
}

Truth unpack(const State& x) { return {x.segment<6>(0), x.segment<6>(6), x.segment<3>(12)}; }

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg)
{
    cfg.validate();
    return run_scenario(cfg, synthesize_gains(cfg.plant, cfg.effective_weights()));
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, const GainSet& gains)
{
    cfg.validate();
    const PlantModel& plant = cfg.plant;
    const CameraInstallation install = cfg.installation();
    const CameraInstallation believed = install.believed();
    const Mat3 R = install.frame_rotation;
    const double V0 = plant.trim_airspeed;

    DrogueModel drogue = cfg.drogue;
    drogue.reference_airspeed = V0;

    TurbulenceParams tp = cfg.turbulence_params;
    tp.airspeed = V0;
    TurbulenceModel turbulence(cfg.turbulence, cfg.seed, tp);

    Truth s{Vec6::Zero(), Vec6::Zero(), Vec3::Zero()};
    const Vec3 camera0 = s.receiver + install.true_offset();
    Vec3 d = camera0 + R.transpose() * Vec3(cfg.initial.lateral, cfg.initial.vertical, cfg.initial.depth);
    drogue.nominal_position = d;

    ScenarioResult res;
    res.gains = gains;
    res.log.dt = cfg.dt;
    auto& log = res.log.records;
    const auto n_steps = static_cast<std::size_t>(std::floor(cfg.max_duration / cfg.dt + 1e-9));
    log.reserve(n_steps + 1);

    IntegratorState integ;
    DesiredCameraVelocity cmd{0.0, 0.0, cfg.gains.a};
    bool holding = false;
    std::size_t hold_end = 0;
    bool diverged = false;

    for (std::size_t k = 0; k <= n_steps; ++k) {
        SimRecord r;
        r.t = static_cast<double>(k) * cfg.dt;
        r.lon = s.lon;
        r.lat = s.lat;
        r.receiver = s.receiver;
        r.drogue = d;

        const RelativeGeometry geo = relative_geometry(s.receiver, d, install);
        r.rel = geo.position;
        r.depth = geo.depth();
        r.visual = !holding && r.depth > 0.0;
        if (r.visual) {
            const ImageError e = image_error(project(geo), cfg.convergence);
            r.e_x = e.e_x;
            r.e_y = e.e_y;
            if (cfg.controller == ControllerKind::Ibvs)
                cmd = ibvs_outer(e, r.depth, cfg.gains);
            else
                cmd = pbvs_outer(relative_geometry(s.receiver, d, believed), cfg.gains, cfg.pbvs_z_ref);
        } else {
            r.e_x = r.e_y = NAN;
        }
        r.v_des = cmd;
        const ChannelReferences ref = to_channel_references(cmd);
        r.ref_lon = ref.lon;
        r.ref_lat = ref.lat;

        r.u_cmd = inner_control({s.lon, s.lat}, integ, gains);
        const Saturated sat = saturate(r.u_cmd, plant.limits);
        r.u_sat = sat.input;
        r.sat_lon = sat.lon;
        r.sat_lat = sat.lat;
        r.meas_lon = plant.C_lon * s.lon;
        r.meas_lat = (plant.C_lat * s.lat)(0);
        r.v_cam = camera_velocity({s.lon, s.lat}, install);
        r.integ = integ;
        r.gust = turbulence.sample(cfg.dt);

        const double forward = V0 + s.lon(lon::V);
        const Vec3 source = s.receiver + drogue.bow_wave.source_offset;
        r.bow_wave = drogue.bow_wave.enabled
            ? bow_wave_magnitude(drogue.bow_wave, (d - source).norm(), forward, V0) : 0.0;
        log.push_back(r);

        if (log.size() >= 2 && crossing(log[log.size() - 2], log.back())) {
            const DockingOutcome o = detect_docking(res.log, cfg.capture_radius);
            if (o.success)
                break;
            holding = true;
            hold_end = k + static_cast<std::size_t>(std::llround(cfg.visual_loss_hold / cfg.dt));
        }
        if (holding && k >= hold_end)
            break;
        if (k == n_steps)
            break;

        integ = update_integrator(integ, r.meas_lon, r.meas_lat, ref.lon, ref.lat, cfg.dt, sat.lon, sat.lat);

        const Vec2 ul = sat.input.lon(), ut = sat.input.lat();
        Vec6 gl = Vec6::Zero(), gt = Vec6::Zero();
        // gusts perturb the aerodynamic angles seen by the force and moment rows
        gl.segment<3>(3) = plant.A_lon.col(lon::alpha).segment<3>(3) * (r.gust.z() / V0);
        gt.segment<3>(3) = plant.A_lat.col(lat::beta).segment<3>(3) * (r.gust.y() / V0);
        const Vec6 fl = plant.B_lon * ul + gl, ft = plant.B_lat * ut + gt;
        auto f = [&](const State& x) -> State {
            const Truth t = unpack(x);
            State dx;
            dx.segment<6>(0) = plant.A_lon * t.lon + fl;
            dx.segment<6>(6) = plant.A_lat * t.lat + ft;
            dx.segment<3>(12) = R.transpose() * camera_velocity({t.lon, t.lat}, install);
            return dx;
        };
        const State next = rk4_step(f, pack(s), cfg.dt);
        if (!next.allFinite() || next.cwiseAbs().maxCoeff() > kDivergenceBound) {
            diverged = true;
            break;
        }
        const Vec3 vd = R.transpose() * drogue_velocity(drogue, source, d, r.gust, forward);
        d += cfg.dt * (vd + cfg.drogue_bias - drogue.restoring_rate * (d - drogue.nominal_position));
        s = unpack(next);
    }

    res.outcome = detect_docking(res.log, cfg.capture_radius);
    if (diverged && !res.outcome.success) {
        res.outcome.failure_reason = FailureReason::Diverged;
        res.outcome.success = false;
    }
    res.outcome.closing_ok = res.outcome.crossed && res.outcome.closing_speed >= std::abs(cfg.gains.a) - cfg.closing_margin;
    res.outcome.peak_error = peak_error(res.log, cfg.peak_depth_floor);
    return res;
}

TrackingTrace track_constant_reference(const PlantModel& plant, const GainSet& gains, const ChannelReferences& ref,
                                       const Vec3& drogue_velocity, double duration, double dt)
{
    if (!(dt > 0.0) || !(duration >= dt))
        throw Error(ErrorKind::Domain, "track_constant_reference needs dt > 0 and duration >= dt");
    const Vec3 b = camera_rotation() * drogue_velocity;
    ChannelReferences r = ref;
    r.lon += Vec2(b.y(), b.z());
    r.lat += b.x();

    ReceiverState x;
    IntegratorState q;
    TrackingTrace tr;
    const auto n = static_cast<std::size_t>(std::floor(duration / dt + 1e-9));
    for (std::size_t k = 0; k <= n; ++k) {
        const Vec2 ml = plant.C_lon * x.lon;
        const double mt = (plant.C_lat * x.lat)(0);
        tr.t.push_back(static_cast<double>(k) * dt);
        tr.error.push_back(std::sqrt((ml - r.lon).squaredNorm() + (mt - r.lat) * (mt - r.lat)));
        if (k == n)
            break;
        const ControlInput u = inner_control(x, q, gains);
        q = update_integrator(q, ml, mt, r.lon, r.lat, dt, false);
        x = step_receiver(x, u, plant, dt);
    }
    return tr;
}

BatchSummary summarize(std::vector<BatchEntry> entries)
{
    std::sort(entries.begin(), entries.end(), [](const BatchEntry& a, const BatchEntry& b) {
        if (a.seed != b.seed)
            return a.seed < b.seed;
        return a.error < b.error;
    });
    BatchSummary s;
    s.runs = entries.size();
    std::vector<double> miss;
    for (const auto& e : entries) {
        if (!e.outcome) {
            ++s.errors;
            continue;
        }
        s.successes += e.outcome->success ? 1 : 0;
        if (e.outcome->crossed)
            miss.push_back(e.outcome->miss_distance);
    }
    s.success_rate = s.runs ? static_cast<double>(s.successes) / static_cast<double>(s.runs) : 0.0;
    if (!miss.empty()) {
        std::sort(miss.begin(), miss.end());
        double sum = 0.0;
        for (double m : miss)
            sum += m;
        const std::size_t n = miss.size();
        s.miss_mean = sum / static_cast<double>(n);
        s.miss_min = miss.front();
        s.miss_max = miss.back();
        s.miss_median = n % 2 ? miss[n / 2] : 0.5 * (miss[n / 2 - 1] + miss[n / 2]);
    }
    s.entries = std::move(entries);
    return s;
}

BatchSummary run_batch(const ScenarioConfig& cfg, const std::vector<std::uint64_t>& seeds)
{
    if (seeds.empty())
        throw Error(ErrorKind::Domain, "run_batch needs at least one seed");
    cfg.validate();
    const GainSet gains = synthesize_gains(cfg.plant, cfg.effective_weights());
    std::vector<BatchEntry> entries;
    entries.reserve(seeds.size());
    for (std::uint64_t seed : seeds) {
        BatchEntry e;
        e.seed = seed;
        try {
            ScenarioConfig c = cfg;
            c.seed = seed;
            e.outcome = run_scenario(c, gains).outcome;
        } catch (const std::exception& ex) {
            e.error = ex.what();
        }
        entries.push_back(std::move(e));
    }
    return summarize(std::move(entries));
}

}  // namespace aar
