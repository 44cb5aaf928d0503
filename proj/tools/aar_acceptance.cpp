// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include "aar/config.hpp"
#include "aar/control_inner.hpp"
#include "aar/control_outer.hpp"
#include "aar/linalg.hpp"
#include "aar/sim.hpp"
#include "aar/vision.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace aar;

namespace {

constexpr double kJacobianRelTol = 1e-12;
constexpr double kJacobianTimeS = 1.0;
constexpr int kSamples = 1000;
constexpr double kDecayTol = 0.02;
constexpr double kDecayTimeS = 1.0;
constexpr double kRiccatiRelTol = 1e-8;
constexpr double kScalingTol = 1e-8;
constexpr double kScalarTol = 1e-10;
constexpr double kTrackingTol = 1e-3;    // m/s
constexpr double kTrackingAfterS = 20.0;
constexpr double kClosingMargin = 0.1;   // m/s
constexpr double kNominalTimeS = 5.0;
constexpr int kSeeds = 20;
constexpr double kRateLevelI = 0.9;
constexpr double kRateLevelII = 0.8;
constexpr double kBatchTimeS = 120.0;
constexpr double kMonotoneSlack = 1e-4;  // allowed rise in |e| after the peak
constexpr double kMetricFraction = 0.1;  // final metric offset vs its maximum

const std::string kConfigs = AAR_SOURCE_DIR "/configs";

int failures = 0;

void report(bool ok, const char* name, const std::string& detail)
{
    std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    failures += ok ? 0 : 1;
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...)
{
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Guards each criterion so an exception is reported as a failure, not a crash.
void criterion(const char* name, const std::function<void()>& body)
{
    try {
        body();
    } catch (const std::exception& e) {
        report(false, name, std::string("error: ") + e.what());
    }
}

void interaction_matrix_check()
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> xy(-2.0, 2.0), z(0.05, 50.0);
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int i = 0; i < kSamples; ++i) {
        const double x = xy(rng), y = xy(rng), d = z(rng);
        const Mat26 L = interaction_matrix({x, y}, d);
        const double ref[2][6] = {{-1.0 / d, 0.0, x / d, x * y, -(1.0 + x * x), y},
                                  {0.0, -1.0 / d, y / d, 1.0 + y * y, -x * y, -x}};
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 6; ++c)
                if (ref[r][c] != 0.0)
                    worst = std::max(worst, std::abs(L(r, c) - ref[r][c]) / std::abs(ref[r][c]));
                else
                    worst = std::max(worst, std::abs(L(r, c)));
    }
    const double t = seconds_since(t0);
    report(worst < kJacobianRelTol && t < kJacobianTimeS, "interaction-matrix",
           fmt("max rel err %.2e (< %.0e), %.3f s (< %.0f s)", worst, kJacobianRelTol, t, kJacobianTimeS));
}

void decomposition_check()
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> xy(-1.5, 1.5), z(0.1, 40.0), v(-5.0, 5.0);
    int mismatches = 0;
    for (int i = 0; i < kSamples; ++i) {
        const double ex = xy(rng), ey = xy(rng), d = z(rng);
        const Mat26 L = interaction_matrix({ex, ey}, d);
        Vec6 a = Vec6::Zero(), b = Vec6::Zero();
        a(0) = v(rng), a(2) = v(rng), a(4) = v(rng);
        b(1) = v(rng), b(2) = v(rng), b(3) = v(rng);
        mismatches += image_error_rate(L, a)(0) != planar_rate_x(ex, d, a(0), a(2), a(4));
        mismatches += image_error_rate(L, b)(1) != planar_rate_y(ey, d, b(1), b(2), b(3));
    }
    report(mismatches == 0, "decomposition-consistency", fmt("%d inexact of %d comparisons", mismatches, 2 * kSamples));
}

void decay_check()
{
    const auto t0 = std::chrono::steady_clock::now();
    const OuterLoopGains g = OuterLoopGains::table1();
    const double z = 10.0, dt = 1e-3;
    double worst = 0.0;
    for (int axis = 0; axis < 2; ++axis)
        for (double v_z : {-0.5, 0.0, 0.5}) {
            const double k = axis == 0 ? g.k1 : g.k2;
            const double lambda = (k - v_z) / z, e0 = axis == 0 ? 0.2 : -0.15;
            auto f = [&](double e) {
                return axis == 0 ? planar_rate_x(e, z, k * e, v_z, 0.0) : planar_rate_y(e, z, k * e, v_z, 0.0);
            };
            double e = e0;
            const auto steps = static_cast<int>(std::llround(5.0 / lambda / dt));
            for (int s = 1; s <= steps; ++s) {
                const double a = f(e), b = f(e + 0.5 * dt * a), c = f(e + 0.5 * dt * b), d = f(e + dt * c);
                e += dt / 6.0 * (a + 2 * b + 2 * c + d);
                const double want = std::abs(e0) * std::exp(-lambda * s * dt);
                worst = std::max(worst, std::abs(std::abs(e) / want - 1.0));
            }
        }
    const double t = seconds_since(t0);
    report(worst < kDecayTol && t < kDecayTimeS, "outer-loop-decay",
           fmt("worst ratio deviation %.2e (< %.2f) over 5 time constants, e_x and e_y, %.3f s", worst, kDecayTol, t));
}

void riccati_check()
{
    const PlantModel p = default_plant();
    const LqrWeights w = LqrWeights::defaults(p);
    const GainSet k = synthesize_gains(p, w);
    bool ok = true;
    std::string detail;
    for (const ChannelGains* c : {&k.lon, &k.lat}) {
        const double bound = kRiccatiRelTol * (1.0 + c->P.norm());
        double abscissa = -INFINITY;
        for (const auto& e : c->closed_loop)
            abscissa = std::max(abscissa, e.real());
        ok = ok && c->residual < bound && abscissa < 0.0;
        detail += fmt("%s res %.1e/%.1e max Re %.3f; ", c == &k.lon ? "lon" : "lat", c->residual, bound, abscissa);
    }
    double scale_err = 0.0;
    for (Channel ch : {Channel::Lon, Channel::Lat}) {
        const AugmentedPlant a = augment(p, ch);
        const Mat& Q = ch == Channel::Lon ? w.Q_lon : w.Q_lat;
        const Mat& R = ch == Channel::Lon ? w.R_lon : w.R_lat;
        const Mat K0 = solve_care(a.A, a.B, Q, R).K;
        for (double alpha : {0.01, 7.0, 100.0})
            scale_err = std::max(scale_err, (solve_care(a.A, a.B, alpha * Q, alpha * R).K - K0).norm() / (1.0 + K0.norm()));
    }
    const Mat one = Mat::Constant(1, 1, 1.0);
    const double scalar = solve_care(-one, one, one, one).P(0, 0);
    const double scalar_err = std::abs(scalar - (std::sqrt(2.0) - 1.0));
    ok = ok && scale_err < kScalingTol && scalar_err < kScalarTol;
    detail += fmt("scaling %.1e (< %.0e); scalar err %.1e (< %.0e)", scale_err, kScalingTol, scalar_err, kScalarTol);
    report(ok, "riccati-quality", detail);
}

void rejection_check()
{
    const PlantModel p = default_plant();
    const GainSet k = synthesize_gains(p, LqrWeights::defaults(p));
    ChannelReferences ref;
    ref.lon = Vec2(0.1, 0.5);
    ref.lat = -0.2;
    const Vec3 bias(0.3, 0.2, -0.1);
    const TrackingTrace tr = track_constant_reference(p, k, ref, bias, 30.0, 0.01);
    double worst = 0.0;
    for (std::size_t i = 0; i < tr.t.size(); ++i)
        if (tr.t[i] >= kTrackingAfterS)
            worst = std::max(worst, tr.error[i]);
    report(worst < kTrackingTol, "constant-disturbance",
           fmt("drogue bias (%.1f, %.1f, %.1f) m/s: max tracking error after %.0f s = %.2e m/s (< %.0e)", bias.x(),
               bias.y(), bias.z(), kTrackingAfterS, worst, kTrackingTol));
}

void nominal_check()
{
    const ScenarioConfig c = load_scenario(kConfigs + "/nominal.json");
    const auto t0 = std::chrono::steady_clock::now();
    const ScenarioResult r = run_scenario(c);
    const double t = seconds_since(t0);
    const DockingOutcome& o = r.outcome;
    const double need = std::abs(c.gains.a) - kClosingMargin;
    report(o.success && o.miss_distance < c.capture_radius && o.closing_speed >= need && t < kNominalTimeS,
           "nominal-docking",
           fmt("miss %.4f m (< %.2f), closing %.3f m/s (>= %.2f), %.2f s (< %.0f s)", o.miss_distance,
               c.capture_radius, o.closing_speed, need, t, kNominalTimeS));
}

void turbulence_check()
{
    ScenarioConfig c = load_scenario(kConfigs + "/nominal.json");
    std::vector<std::uint64_t> seeds;
    for (int s = 1; s <= kSeeds; ++s)
        seeds.push_back(static_cast<std::uint64_t>(s));
    const auto t0 = std::chrono::steady_clock::now();
    c.turbulence = TurbulenceLevel::I;
    const BatchSummary a = run_batch(c, seeds);
    c.turbulence = TurbulenceLevel::II;
    const BatchSummary b = run_batch(c, seeds);
    const double t = seconds_since(t0);
    report(a.success_rate >= kRateLevelI && b.success_rate >= kRateLevelII && t < kBatchTimeS,
           "turbulence-robustness",
           fmt("level I %zu/%zu (>= %.0f%%), level II %zu/%zu (>= %.0f%%), %.1f s (< %.0f s)", a.successes, a.runs,
               100 * kRateLevelI, b.successes, b.runs, 100 * kRateLevelII, t, kBatchTimeS));
}

struct Settling {
    double worst_rise = 0.0;  // largest increase of |e| after the peak
    double metric_max = 0.0, metric_final = NAN;
};

// Visual records at or beyond the depth floor only.
Settling settling(const SimLog& log, double floor)
{
    Settling s;
    double peak = -1.0, prev = NAN;
    bool after = false;
    for (const auto& r : log.records) {
        if (!r.visual || r.depth < floor)
            continue;
        const double e = std::hypot(r.e_x, r.e_y);
        s.metric_final = e * r.depth;
        s.metric_max = std::max(s.metric_max, s.metric_final);
        if (e > peak) {
            peak = e;
            after = false;
            s.worst_rise = 0.0;
        } else {
            if (after)
                s.worst_rise = std::max(s.worst_rise, e - prev);
            after = true;
        }
        prev = e;
    }
    return s;
}

void bow_wave_check()
{
    ScenarioConfig c = load_scenario(kConfigs + "/terminal_phase.json");
    c.drogue.bow_wave.enabled = false;
    const ScenarioResult calm = run_scenario(c);
    c.drogue.bow_wave.enabled = true;
    const ScenarioResult wave = run_scenario(c);
    const Settling s = settling(wave.log, c.peak_depth_floor);
    const bool ok = wave.outcome.success && wave.outcome.peak_error > calm.outcome.peak_error &&
                    s.worst_rise <= kMonotoneSlack && s.metric_final < kMetricFraction * s.metric_max;
    report(ok, "bow-wave",
           fmt("docked %s, miss %.4f m; peak |e| %.4f vs %.4f without; rise after peak %.1e (<= %.0e); "
               "metric offset %.4f of max %.4f m",
               wave.outcome.success ? "yes" : "no", wave.outcome.miss_distance, wave.outcome.peak_error,
               calm.outcome.peak_error, s.worst_rise, kMonotoneSlack, s.metric_final, s.metric_max));
}

void pose_error_check()
{
    ScenarioConfig c = load_scenario(kConfigs + "/pose_error.json");
    c.controller = ControllerKind::Ibvs;
    const DockingOutcome ib = run_scenario(c).outcome;
    c.controller = ControllerKind::Pbvs;
    const DockingOutcome pb = run_scenario(c).outcome;
    report(ib.success && ib.miss_distance < c.capture_radius && !pb.success && pb.miss_distance > c.capture_radius,
           "pose-error",
           fmt("dp = (%.1f, %.1f, %.1f): IBVS miss %.4f m, PBVS miss %.4f m (capture %.2f m)", c.pose_error.x(),
               c.pose_error.y(), c.pose_error.z(), ib.miss_distance, pb.miss_distance, c.capture_radius));
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void determinism_check()
{
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / "aar_acceptance";
    fs::remove_all(root);
    std::string files[2];
    int codes[2];
    for (int i = 0; i < 2; ++i) {
        const fs::path d = root / std::to_string(i);
        fs::create_directories(d);
        const std::string cmd = std::string(AAR_CLI) + " run --config " + kConfigs +
                                "/nominal.json --turbulence 1 --seed 7 --out " + d.string() + " >/dev/null 2>&1";
        const int rc = std::system(cmd.c_str());
        codes[i] = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
        files[i] = slurp(d / "nominal-7.csv");
    }
    const bool ok = codes[0] == codes[1] && codes[0] != 1 && !files[0].empty() && files[0] == files[1];
    report(ok, "determinism", fmt("exit codes %d/%d, CSV %zu bytes, identical %s", codes[0], codes[1], files[0].size(),
                                  files[0] == files[1] ? "yes" : "no"));
}

}  // namespace

int main()
{
    criterion("interaction-matrix", interaction_matrix_check);
    criterion("decomposition-consistency", decomposition_check);
    criterion("outer-loop-decay", decay_check);
    criterion("riccati-quality", riccati_check);
    criterion("constant-disturbance", rejection_check);
    criterion("nominal-docking", nominal_check);
    criterion("turbulence-robustness", turbulence_check);
    criterion("bow-wave", bow_wave_check);
    criterion("pose-error", pose_error_check);
    criterion("determinism", determinism_check);
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
