#include "aar/config.hpp"
#include "aar/sim.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace aar;

namespace {

ScenarioConfig nominal()
{
    ScenarioConfig c;
    c.name = "test";
    c.plant = default_plant();
    return c;
}

const GainSet& shipped_gains()
{
    static const GainSet k = synthesize_gains(default_plant(), LqrWeights::defaults(default_plant()));
    return k;
}

SimRecord rec(double t, double depth, double lateral)
{
    SimRecord r;
    r.t = t;
    r.depth = depth;
    r.rel = Vec3(lateral, 0.0, depth);
    return r;
}

std::string csv_of(const SimLog& log)
{
    std::ostringstream s;
    write_csv(log, s, "test");
    return s.str();
}

}  // namespace

TEST(ScenarioConfig, Validation)
{
    ScenarioConfig c = nominal();
    EXPECT_NO_THROW(c.validate());
    c.capture_radius = 0.0;
    EXPECT_THROW(c.validate(), Error);
    c = nominal();
    c.dt = -0.01;
    EXPECT_THROW(c.validate(), Error);
    c = nominal();
    c.max_duration = 0.05;
    try {
        c.validate();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Config);
        EXPECT_NE(std::string(e.what()).find("max_duration"), std::string::npos);
    }
}

TEST(ScenarioConfig, WarnsWhenGainsUnderDisturbanceBound)
{
    ScenarioConfig c = nominal();
    EXPECT_TRUE(c.warnings().empty());
    c.gains.k1 = 0.5;
    ASSERT_EQ(c.warnings().size(), 1u);
    EXPECT_NE(c.warnings()[0].find("k1"), std::string::npos);
}

TEST(DetectDocking, CentredCrossing)
{
    SimLog log;
    log.records = {rec(0.0, 1.0, 0.0), rec(0.01, -0.01, 0.0)};
    const DockingOutcome o = detect_docking(log, 0.15);
    EXPECT_TRUE(o.success);
    EXPECT_TRUE(o.crossed);
    EXPECT_EQ(o.miss_distance, 0.0);
    EXPECT_EQ(o.failure_reason, FailureReason::None);
    EXPECT_NEAR(o.time_of_contact, 0.01 * 1.0 / 1.01, 1e-15);
    EXPECT_NEAR(o.closing_speed, 101.0, 1e-9);
}

TEST(DetectDocking, WideCrossingIsOvershoot)
{
    SimLog log;
    log.records = {rec(0.0, 0.5, 0.3), rec(0.01, 0.2, 0.3), rec(0.02, -0.1, 0.3)};
    const DockingOutcome o = detect_docking(log, 0.15);
    EXPECT_FALSE(o.success);
    EXPECT_TRUE(o.crossed);
    EXPECT_EQ(o.failure_reason, FailureReason::Overshoot);
    EXPECT_NEAR(o.miss_distance, 0.3, 1e-15);
}

TEST(DetectDocking, InterpolatesMiss)
{
    SimLog log;
    log.records = {rec(0.0, 0.1, 0.0), rec(0.01, -0.1, 0.2)};
    EXPECT_NEAR(detect_docking(log, 0.15).miss_distance, 0.1, 1e-15);
}

TEST(DetectDocking, NoCrossingTimesOut)
{
    SimLog log;
    log.records = {rec(0.0, 3.0, 0.0), rec(0.01, 2.0, 0.0)};
    EXPECT_EQ(detect_docking(log, 0.15).failure_reason, FailureReason::Timeout);
    EXPECT_FALSE(detect_docking(log, 0.15).success);
    log.records = {rec(0.0, -1.0, 0.0), rec(0.01, -2.0, 0.0)};
    EXPECT_EQ(detect_docking(log, 0.15).failure_reason, FailureReason::VisualLoss);
    EXPECT_THROW(detect_docking(SimLog{}, 0.15), Error);
}

TEST(RunScenario, NominalDocks)
{
    const ScenarioResult r = run_scenario(nominal(), shipped_gains());
    EXPECT_TRUE(r.outcome.success);
    EXPECT_LT(r.outcome.miss_distance, 0.15);
    EXPECT_GE(r.outcome.closing_speed, 0.5 - 0.1);
    EXPECT_TRUE(r.outcome.closing_ok);
    EXPECT_LT(static_cast<double>(r.outcome.saturated_steps), 0.5 * static_cast<double>(r.outcome.steps));
}

TEST(RunScenario, LogIsUniformAndFinite)
{
    const ScenarioResult r = run_scenario(nominal(), shipped_gains());
    const auto& rs = r.log.records;
    ASSERT_GT(rs.size(), 10u);
    for (std::size_t k = 0; k < rs.size(); ++k) {
        EXPECT_NEAR(rs[k].t, static_cast<double>(k) * 0.01, 1e-12);
        EXPECT_TRUE(rs[k].lon.allFinite());
        EXPECT_TRUE(rs[k].lat.allFinite());
        EXPECT_TRUE(rs[k].u_cmd.lon().allFinite() && rs[k].u_cmd.lat().allFinite());
        EXPECT_TRUE(rs[k].u_sat.lon().allFinite() && rs[k].u_sat.lat().allFinite());
        EXPECT_TRUE(rs[k].integ.q_lon.allFinite());
    }
    EXPECT_EQ(r.outcome.steps, rs.size());
}

TEST(RunScenario, AlignedStartDocksCentred)
{
    ScenarioConfig c = nominal();
    c.initial = {0.0, 0.0, 20.0};
    const ScenarioResult r = run_scenario(c, shipped_gains());
    EXPECT_TRUE(r.outcome.success);
    EXPECT_LT(r.outcome.miss_distance, 1e-3);
    EXPECT_GE(r.outcome.closing_speed, 0.5 - 0.01);
}

TEST(RunScenario, Deterministic)
{
    ScenarioConfig c = nominal();
    c.turbulence = TurbulenceLevel::II;
    c.seed = 42;
    const std::string a = csv_of(run_scenario(c, shipped_gains()).log);
    const std::string b = csv_of(run_scenario(c, shipped_gains()).log);
    EXPECT_EQ(a, b);
    c.seed = 43;
    EXPECT_NE(a, csv_of(run_scenario(c, shipped_gains()).log));
}

TEST(RunScenario, ErrorEventuallyDecreasesMonotonically)
{
    const ScenarioResult r = run_scenario(nominal(), shipped_gains());
    std::vector<double> n;
    std::vector<double> t;
    for (const auto& x : r.log.records)
        if (x.visual && x.depth >= 0.1) {
            n.push_back(std::hypot(x.e_x, x.e_y));
            t.push_back(x.t);
        }
    std::size_t last_rise = 0;
    for (std::size_t i = 1; i < n.size(); ++i)
        if (n[i] > n[i - 1])
            last_rise = i;
    // the looming phase ends well before contact; afterwards the norm only falls
    EXPECT_LT(t[last_rise], 8.0);
    EXPECT_LT(n.back(), 0.5 * *std::max_element(n.begin(), n.end()));
    // metric lateral offset shrinks from the start
    const auto& rs = r.log.records;
    EXPECT_LT(std::hypot(rs[1000].rel.x(), rs[1000].rel.y()), 0.5 * std::hypot(rs[0].rel.x(), rs[0].rel.y()));
}

TEST(RunScenario, TurbulenceLevelOneDocks)
{
    ScenarioConfig c = nominal();
    c.turbulence = TurbulenceLevel::I;
    c.seed = 3;
    const ScenarioResult r = run_scenario(c, shipped_gains());
    EXPECT_TRUE(r.outcome.success);
    bool gusty = false;
    for (const auto& x : r.log.records)
        gusty = gusty || !x.gust.isZero(0.0);
    EXPECT_TRUE(gusty);
}

TEST(RunScenario, PoseErrorSeparatesIbvsAndPbvs)
{
    ScenarioConfig c = nominal();
    c.pose_error = Vec3(1.0, 0.0, -0.5);
    const ScenarioResult ibvs = run_scenario(c, shipped_gains());
    c.controller = ControllerKind::Pbvs;
    const ScenarioResult pbvs = run_scenario(c, shipped_gains());
    EXPECT_TRUE(ibvs.outcome.success);
    EXPECT_LT(ibvs.outcome.miss_distance, c.capture_radius);
    EXPECT_FALSE(pbvs.outcome.success);
    EXPECT_GT(pbvs.outcome.miss_distance, c.capture_radius);
    EXPECT_EQ(pbvs.outcome.failure_reason, FailureReason::Overshoot);

    // after the failed crossing the last command is held for the visual-loss window
    const auto& rs = pbvs.log.records;
    EXPECT_NEAR(rs.back().t - pbvs.outcome.time_of_contact, c.visual_loss_hold, 0.02);
    EXPECT_FALSE(rs.back().visual);
    EXPECT_TRUE(std::isnan(rs.back().e_x));
    EXPECT_EQ(rs.back().v_des.v_z, rs[rs.size() - 2].v_des.v_z);
}

TEST(RunScenario, BowWaveRaisesPeakError)
{
    ScenarioConfig c = load_scenario(AAR_SOURCE_DIR "/configs/terminal_phase.json");
    const ScenarioResult calm = run_scenario(c);
    c.drogue.bow_wave.enabled = true;
    const ScenarioResult wave = run_scenario(c);
    EXPECT_TRUE(calm.outcome.success);
    EXPECT_TRUE(wave.outcome.success);
    EXPECT_GT(wave.outcome.peak_error, calm.outcome.peak_error);
    double bw = 0.0;
    for (const auto& x : wave.log.records)
        bw = std::max(bw, x.bow_wave);
    EXPECT_GT(bw, 0.0);
}

TEST(RunScenario, DestabilizingGainsDiverge)
{
    ScenarioConfig c = nominal();
    GainSet k = shipped_gains();
    k.K_x1 *= -1e6;
    k.K_x2 *= -1e6;
    c.plant.limits.surface = 1e300;
    c.plant.limits.throttle = 1e300;
    const ScenarioResult r = run_scenario(c, k);
    EXPECT_FALSE(r.outcome.success);
    EXPECT_EQ(r.outcome.failure_reason, FailureReason::Diverged);
}

TEST(RunScenario, TimeoutWhenTooShort)
{
    ScenarioConfig c = nominal();
    c.max_duration = 2.0;
    const ScenarioResult r = run_scenario(c, shipped_gains());
    EXPECT_EQ(r.outcome.failure_reason, FailureReason::Timeout);
    EXPECT_EQ(r.log.records.size(), 201u);
}

TEST(Batch, SingleSeedMatchesRun)
{
    ScenarioConfig c = nominal();
    c.turbulence = TurbulenceLevel::I;
    c.seed = 9;
    const DockingOutcome one = run_scenario(c).outcome;
    const BatchSummary s = run_batch(c, {9});
    ASSERT_EQ(s.entries.size(), 1u);
    ASSERT_TRUE(s.entries[0].outcome);
    EXPECT_EQ(s.entries[0].outcome->miss_distance, one.miss_distance);
    EXPECT_EQ(s.successes, one.success ? 1u : 0u);
    EXPECT_EQ(s.miss_mean, one.miss_distance);
}

TEST(Batch, DuplicatesAndOrder)
{
    ScenarioConfig c = nominal();
    c.turbulence = TurbulenceLevel::II;
    c.max_duration = 30.0;
    const BatchSummary a = run_batch(c, {4, 2, 4});
    ASSERT_EQ(a.entries.size(), 3u);
    EXPECT_EQ(a.entries[1].seed, 4u);
    EXPECT_EQ(a.entries[1].outcome->miss_distance, a.entries[2].outcome->miss_distance);
    const BatchSummary b = run_batch(c, {4, 4, 2});
    EXPECT_EQ(a.success_rate, b.success_rate);
    EXPECT_EQ(a.miss_mean, b.miss_mean);
    EXPECT_EQ(a.miss_median, b.miss_median);
    EXPECT_EQ(a.miss_max, b.miss_max);
    EXPECT_THROW(run_batch(c, {}), Error);
}

TEST(Batch, ErrorsAreRecordedPerSeed)
{
    DockingOutcome ok;
    ok.success = true;
    ok.crossed = true;
    ok.miss_distance = 0.02;
    std::vector<BatchEntry> e(2);
    e[0].seed = 2;
    e[0].outcome = ok;
    e[1].seed = 1;
    e[1].error = "boom";
    const BatchSummary s = summarize(e);
    EXPECT_EQ(s.runs, 2u);
    EXPECT_EQ(s.errors, 1u);
    EXPECT_EQ(s.successes, 1u);
    EXPECT_DOUBLE_EQ(s.success_rate, 0.5);
    EXPECT_EQ(s.entries[0].seed, 1u);
    EXPECT_EQ(s.miss_max, 0.02);
}

TEST(Csv, SchemaAndShape)
{
    ScenarioConfig c = nominal();
    c.max_duration = 1.0;
    const std::string text = csv_of(run_scenario(c, shipped_gains()).log);
    std::istringstream in(text);
    std::string l1, l2, header, row;
    std::getline(in, l1);
    std::getline(in, l2);
    std::getline(in, header);
    EXPECT_EQ(l1, std::string("# ") + kLogSchema);
    EXPECT_EQ(l2, "# test");
    const auto cols = std::count(header.begin(), header.end(), ',') + 1;
    for (const char* name : {"t", "e_x", "e_y", "depth", "elev_cmd", "elev", "vdes_z", "meas_vfwd", "q_lon1",
                             "q_lat", "gust_u", "drogue_x", "bow_wave", "sat_lon"})
        EXPECT_NE(("," + header + ",").find(std::string(",") + name + ","), std::string::npos) << name;
    std::size_t rows = 0;
    while (std::getline(in, row)) {
        EXPECT_EQ(std::count(row.begin(), row.end(), ',') + 1, cols);
        ++rows;
    }
    EXPECT_EQ(rows, 101u);
    EXPECT_EQ(text.find("\n0.010000,") != std::string::npos, true);
}
