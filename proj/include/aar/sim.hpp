#pragma once

#include "aar/control_inner.hpp"
#include "aar/control_outer.hpp"
#include "aar/dynamics.hpp"
#include "aar/vision.hpp"

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace aar {

enum class ControllerKind { Ibvs, Pbvs };

// Drogue start relative to the camera, camera axes: right, down, ahead.
struct InitialOffset {
    double lateral = 2.0;
    double vertical = 1.0;
    double depth = 20.0;
};

struct ScenarioConfig {
    std::string name = "scenario";
    std::string plant_path;
    PlantModel plant;
    ControllerKind controller = ControllerKind::Ibvs;
    OuterLoopGains gains = OuterLoopGains::table1();
    std::string gain_label = "table1";
    double pbvs_z_ref = 0.0;  // <= 0: |a| / k3
    std::optional<LqrWeights> weights;
    TurbulenceLevel turbulence = TurbulenceLevel::Off;
    std::uint64_t seed = 1;
    TurbulenceParams turbulence_params;
    DrogueModel drogue;
    Vec3 drogue_bias = Vec3::Zero();  // constant drogue velocity, tanker frame
    Vec3 pose_error = Vec3::Zero();
    InitialOffset initial;
    ImagePoint convergence;
    double capture_radius = 0.15;
    double closing_margin = 0.1;
    double max_duration = 60.0;
    double dt = 0.01;
    double visual_loss_hold = 0.5;
    double peak_depth_floor = 0.1;  // peak image error ignores the last decimetre
    double disturbance_bound = 0.6;

    void validate() const;  // throws Config naming the field
    CameraInstallation installation() const;
    LqrWeights effective_weights() const;
    std::vector<std::string> warnings() const;
};

struct SimRecord {
    double t = 0.0;
    Vec6 lon = Vec6::Zero();
    Vec6 lat = Vec6::Zero();
    ControlInput u_cmd, u_sat;
    bool sat_lon = false, sat_lat = false;
    double e_x = 0.0, e_y = 0.0;  // NaN once the drogue is behind the camera
    bool visual = true;
    double depth = 0.0;
    Vec3 rel = Vec3::Zero();  // camera-frame drogue position
    DesiredCameraVelocity v_des;
    Vec2 ref_lon = Vec2::Zero();
    double ref_lat = 0.0;
    Vec2 meas_lon = Vec2::Zero();
    double meas_lat = 0.0;
    Vec3 v_cam = Vec3::Zero();
    IntegratorState integ;
    Vec3 gust = Vec3::Zero();
    Vec3 drogue = Vec3::Zero();
    Vec3 receiver = Vec3::Zero();
    double bow_wave = 0.0;
};

struct SimLog {
    double dt = 0.01;
    std::vector<SimRecord> records;
};

enum class FailureReason { None, Timeout, Overshoot, VisualLoss, Diverged };
const char* failure_reason_name(FailureReason r);

struct DockingOutcome {
    bool success = false;
    bool crossed = false;
    double miss_distance = NAN;
    double closing_speed = NAN;
    double time_of_contact = NAN;
    FailureReason failure_reason = FailureReason::Timeout;
    bool closing_ok = false;
    double peak_error = 0.0;
    std::size_t steps = 0;
    std::size_t saturated_steps = 0;
};

DockingOutcome detect_docking(const SimLog& log, double capture_radius);

struct ScenarioResult {
    SimLog log;
    DockingOutcome outcome;
    GainSet gains;
};

ScenarioResult run_scenario(const ScenarioConfig& config);
ScenarioResult run_scenario(const ScenarioConfig& config, const GainSet& gains);

double peak_error(const SimLog& log, double depth_floor);

// Linear inner loop (no saturation) tracking fixed channel references while the
// drogue drifts at a constant tanker-frame velocity the camera has to match.
struct TrackingTrace {
    std::vector<double> t;
    std::vector<double> error;  // |measured - reference| over the three channel components
};
TrackingTrace track_constant_reference(const PlantModel& plant, const GainSet& gains, const ChannelReferences& ref,
                                       const Vec3& drogue_velocity, double duration, double dt);

struct BatchEntry {
    std::uint64_t seed = 0;
    std::optional<DockingOutcome> outcome;
    std::string error;
};

struct BatchSummary {
    std::vector<BatchEntry> entries;  // sorted by seed
    std::size_t runs = 0;
    std::size_t successes = 0;
    std::size_t errors = 0;
    double success_rate = 0.0;
    double miss_mean = NAN, miss_median = NAN, miss_min = NAN, miss_max = NAN;
};

BatchSummary run_batch(const ScenarioConfig& config, const std::vector<std::uint64_t>& seeds);
BatchSummary summarize(std::vector<BatchEntry> entries);

// CSV with a schema comment line, a provenance comment line and a header row.
extern const char* const kLogSchema;
void write_csv(const SimLog& log, std::ostream& out, const std::string& provenance);
void write_outcome(const DockingOutcome& o, const ScenarioConfig& c, std::ostream& out, const std::string& provenance);
void write_batch_summary(const BatchSummary& s, std::ostream& out, const std::string& provenance);

}  // namespace aar
