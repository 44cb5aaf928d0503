#include "aar/config.hpp"
#include "aar/dynamics.hpp"

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numeric>
#include <random>

using namespace aar;

namespace {

PlantModel scalar_decay()
{
    PlantModel p;
    p.A_lon = -Mat6::Identity();
    p.A_lat = -Mat6::Identity();
    return p;
}

// Exact zero-order-hold step via the exponential of [[A, B u], [0, 0]].
Vec6 exact_step(const Mat6& A, const Vec6& bu, const Vec6& x, double dt)
{
    Eigen::Matrix<double, 7, 7> M = Eigen::Matrix<double, 7, 7>::Zero();
    M.topLeftCorner<6, 6>() = A * dt;
    M.topRightCorner<6, 1>() = bu * dt;
    const Eigen::Matrix<double, 7, 7> E = M.exp();
    return E.topLeftCorner<6, 6>() * x + E.topRightCorner<6, 1>();
}

double mean_max_gust(TurbulenceLevel level, int seeds)
{
    double acc = 0.0;
    for (int s = 1; s <= seeds; ++s) {
        TurbulenceModel m(level, static_cast<std::uint64_t>(s));
        double mx = 0.0;
        for (int k = 0; k < 6000; ++k)
            mx = std::max(mx, m.sample(0.01).norm());
        acc += mx;
    }
    return acc / seeds;
}

}  // namespace

TEST(Plant, OutputMatricesFollowMountOffset)
{
    const PlantModel p = default_plant();
    const Vec3 o = p.mount_offset;
    Mat26 cl = Mat26::Zero();
    cl(0, 5) = -o.x();
    cl(1, 3) = 1.0;
    cl(1, 5) = o.z();
    Mat16 ct = Mat16::Zero();
    ct(0, 4) = -o.z();
    ct(0, 5) = o.x();
    EXPECT_EQ(p.C_lon, cl);
    EXPECT_EQ(p.C_lat, ct);
    EXPECT_TRUE(stabilizable(p.A_lon, p.B_lon));
    EXPECT_TRUE(stabilizable(p.A_lat, p.B_lat));
}

TEST(StepReceiver, ZeroIsEquilibrium)
{
    const ReceiverState x = step_receiver({}, {}, default_plant(), 0.01);
    EXPECT_TRUE(x.lon.isZero(0.0));
    EXPECT_TRUE(x.lat.isZero(0.0));
}

TEST(StepReceiver, ScalarDecayMatchesExponential)
{
    const PlantModel p = scalar_decay();
    ReceiverState x;
    x.lon(0) = 1.0;
    for (int k = 0; k < 100; ++k)
        x = step_receiver(x, {}, p, 0.01);
    EXPECT_NEAR(x.lon(0), std::exp(-1.0), 1e-9);
}

TEST(StepReceiver, LocalErrorIsFifthOrder)
{
    const PlantModel p = default_plant();
    ReceiverState x0;
    x0.lon << 0.3, -0.2, 0.01, 0.5, 0.02, -0.03;
    const ControlInput u{0.05, 0.1, -0.02, 0.03};
    auto err = [&](double dt) {
        const Vec6 exact = exact_step(p.A_lon, p.B_lon * u.lon(), x0.lon, dt);
        return (step_receiver(x0, u, p, dt).lon - exact).norm();
    };
    const double e1 = err(0.1), e2 = err(0.05);
    EXPECT_GT(e1 / e2, 24.0);
    EXPECT_LT(e1 / e2, 40.0);

    // one step against two half steps
    const ReceiverState one = step_receiver(x0, u, p, 0.01);
    const ReceiverState two = step_receiver(step_receiver(x0, u, p, 0.005), u, p, 0.005);
    EXPECT_LT((one.lon - two.lon).norm(), 1e-9);
}

TEST(StepReceiver, Superposition)
{
    const PlantModel p = default_plant();
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        ReceiverState x0;
        for (int j = 0; j < 6; ++j) {
            x0.lon(j) = d(rng);
            x0.lat(j) = d(rng);
        }
        const ControlInput u{0.1 * d(rng), 0.1 * d(rng), 0.1 * d(rng), 0.1 * d(rng)};
        const ReceiverState both = step_receiver(x0, u, p, 0.01);
        const ReceiverState a = step_receiver(x0, {}, p, 0.01);
        const ReceiverState b = step_receiver({}, u, p, 0.01);
        EXPECT_LT((both.lon - a.lon - b.lon).norm(), 1e-10);
        EXPECT_LT((both.lat - a.lat - b.lat).norm(), 1e-10);
    }
}

TEST(StepReceiver, RejectsBadInput)
{
    EXPECT_THROW(step_receiver({}, {}, default_plant(), 0.0), Error);
    PlantModel p;
    p.A_lon = 1e300 * Mat6::Identity();
    ReceiverState x;
    x.lon.setConstant(1e300);
    try {
        step_receiver(x, {}, p, 1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Diverged);
    }
}

TEST(Saturate, ClampsAndFlagsPerChannel)
{
    const ActuatorLimits lim;
    Saturated s = saturate({0.1, 0.2, -0.1, 0.0}, lim);
    EXPECT_FALSE(s.lon);
    EXPECT_FALSE(s.lat);
    s = saturate({1.0, 0.2, -0.1, 0.0}, lim);
    EXPECT_TRUE(s.lon);
    EXPECT_FALSE(s.lat);
    EXPECT_DOUBLE_EQ(s.input.elevator, lim.surface);
    s = saturate({0.0, -2.0, 0.0, -3.0}, lim);
    EXPECT_DOUBLE_EQ(s.input.throttle, -lim.throttle);
    EXPECT_DOUBLE_EQ(s.input.rudder, -lim.surface);
    EXPECT_TRUE(s.lon);
    EXPECT_TRUE(s.lat);
}

TEST(CameraVelocity, Examples)
{
    CameraInstallation c;
    EXPECT_TRUE(camera_velocity({}, c).isZero(0.0));

    c.mount_offset = Vec3(2.0, 0.0, 0.5);
    ReceiverState s;
    s.lon(lon::V) = 1.0;
    s.lon(lon::q) = 0.1;
    EXPECT_TRUE(camera_velocity(s, c, true).isApprox(Vec3(0.0, -0.2, 1.05), 1e-15));

    ReceiverState t;
    t.lat(lat::p) = 0.2;
    t.lat(lat::r) = 0.1;
    EXPECT_NEAR(camera_velocity(t, c, true).x(), 0.1, 1e-15);
}

TEST(CameraVelocity, ZeroOffsetIsRotatedBodyVelocity)
{
    CameraInstallation c;
    ReceiverState s;
    s.lon(lon::V) = 3.0;
    s.lon(lon::alpha) = 0.1;
    s.lon(lon::q) = 0.4;
    s.lat(lat::beta) = -0.05;
    s.lat(lat::p) = 0.3;
    s.lat(lat::r) = -0.2;
    const double V = 3.0, a = 0.1, b = -0.05;
    const Vec3 body(V * std::cos(a) * std::cos(b), V * std::sin(b), V * std::sin(a) * std::cos(b));
    EXPECT_TRUE(camera_velocity(s, c).isApprox(camera_rotation() * body, 1e-14));
}

TEST(CameraVelocity, UsesTrueOffset)
{
    CameraInstallation c;
    c.mount_offset = Vec3(8, 0.5, -1.2);
    ReceiverState s;
    s.lon(lon::q) = 0.1;
    const Vec3 clean = camera_velocity(s, c);
    c.mount_offset_error = Vec3(1, 0, -0.5);
    const Vec3 shifted = camera_velocity(s, c);
    EXPECT_NEAR(shifted.y() - clean.y(), -0.1, 1e-15);
    EXPECT_NEAR(shifted.z() - clean.z(), -0.05, 1e-15);
}

TEST(CameraVelocity, LinearizedAgreesToFirstOrder)
{
    CameraInstallation c;
    c.mount_offset = Vec3(8, 0.0, -1.2);
    ReceiverState s;
    s.lon << 0, 0, 0, 1e-3, 0, 2e-3;
    s.lat << 0, 0, 0, 0, 1e-3, -1e-3;
    EXPECT_LT((camera_velocity(s, c) - camera_velocity(s, c, true)).norm(), 1e-5);
}

TEST(Turbulence, OffIsZero)
{
    TurbulenceModel m(TurbulenceLevel::Off, 4);
    for (int k = 0; k < 100; ++k)
        EXPECT_TRUE(sample_gust(m, 0.01).isZero(0.0));
}

TEST(Turbulence, SeedReproducesSequence)
{
    TurbulenceModel a(TurbulenceLevel::II, 77), b(TurbulenceLevel::II, 77), c(TurbulenceLevel::II, 78);
    bool differs = false;
    for (int k = 0; k < 1000; ++k) {
        const Vec3 ga = a.sample(0.01), gb = b.sample(0.01), gc = c.sample(0.01);
        ASSERT_EQ(ga, gb);
        differs = differs || ga != gc;
    }
    EXPECT_TRUE(differs);
}

TEST(Turbulence, LevelOneMaximaWithinBand)
{
    for (std::uint64_t s = 1; s <= 100; ++s) {
        TurbulenceModel m(TurbulenceLevel::I, s);
        double mx = 0.0;
        for (int k = 0; k < 6000; ++k)
            mx = std::max(mx, m.sample(0.01).norm());
        EXPECT_GE(mx, 0.5 * 1.52) << "seed " << s;
        EXPECT_LE(mx, 2.0 * 1.52) << "seed " << s;
    }
}

TEST(Turbulence, MeanMaximaScaleWithLevel)
{
    EXPECT_NEAR(mean_max_gust(TurbulenceLevel::I, 200), 1.52, 0.08);
    EXPECT_NEAR(mean_max_gust(TurbulenceLevel::II, 200), 2.13, 0.11);
}

TEST(Turbulence, StationaryAcrossWindows)
{
    // pooled over seeds so each window holds many correlation times
    constexpr int kWindows = 4, kSteps = 6000, kSeeds = 20;
    double ms[kWindows] = {};
    for (std::uint64_t s = 1; s <= kSeeds; ++s) {
        TurbulenceModel m(TurbulenceLevel::I, s);
        for (int w = 0; w < kWindows; ++w)
            for (int k = 0; k < kSteps; ++k)
                ms[w] += m.sample(0.01).squaredNorm();
    }
    double lo = INFINITY, hi = 0.0;
    for (double v : ms) {
        const double rms = std::sqrt(v / (kSteps * kSeeds));
        lo = std::min(lo, rms);
        hi = std::max(hi, rms);
    }
    EXPECT_LT(hi / lo, 1.25);
}

TEST(Turbulence, PerSeedWindowsStayComparable)
{
    // single seed, ten windows of 60 s: spread stays moderate
    TurbulenceModel m(TurbulenceLevel::II, 2024);
    std::vector<double> rms;
    for (int w = 0; w < 10; ++w) {
        double acc = 0.0;
        for (int k = 0; k < 6000; ++k)
            acc += m.sample(0.01).squaredNorm();
        rms.push_back(std::sqrt(acc / 6000));
    }
    const double mean = std::accumulate(rms.begin(), rms.end(), 0.0) / rms.size();
    for (double r : rms)
        EXPECT_LT(std::abs(r - mean) / mean, 0.5);
}

TEST(BowWave, Magnitude)
{
    BowWaveParams b;
    EXPECT_EQ(bow_wave_magnitude(b, 4.5, 150, 150), 0.0);
    EXPECT_EQ(bow_wave_magnitude(b, 4.0, 150, 150), 0.0);
    EXPECT_DOUBLE_EQ(bow_wave_magnitude(b, 0.0, 150, 150), b.strength);
    EXPECT_DOUBLE_EQ(bow_wave_magnitude(b, 2.0, 150, 150), b.strength / 2.0);
    EXPECT_DOUBLE_EQ(bow_wave_magnitude(b, 2.0, 165, 150), b.strength / 2.0 * 1.1);
}

TEST(BowWave, ContinuousAndMonotone)
{
    for (double n : {0.5, 1.0, 2.0}) {
        BowWaveParams b;
        b.decay_exponent = n;
        for (double gap : {1e-3, 1e-6, 1e-9})
            EXPECT_NEAR(bow_wave_magnitude(b, b.activation_radius - gap, 150, 150),
                        b.strength * std::pow(gap / b.activation_radius, n), 1e-12);
        double prev = INFINITY;
        for (double d = 0.0; d <= 6.0; d += 0.01) {
            const double m = bow_wave_magnitude(b, d, 150, 150);
            EXPECT_LE(m, prev);
            prev = m;
        }
    }
}

TEST(DrogueVelocity, FarAwayAndCalm)
{
    DrogueModel d;
    d.bow_wave.enabled = true;
    EXPECT_TRUE(drogue_velocity(d, Vec3::Zero(), Vec3(10, 0, 0), Vec3::Zero(), 150).isZero(0.0));
}

TEST(DrogueVelocity, GustCouplingIsRotated)
{
    DrogueModel d;
    const Vec3 g(1.0, -0.5, 0.25);
    EXPECT_TRUE(drogue_velocity(d, Vec3::Zero(), Vec3(10, 0, 0), g, 150)
                    .isApprox(camera_rotation() * (d.gust_gain * g), 1e-15));
}

TEST(DrogueVelocity, BowWavePushesAwayFromAxis)
{
    DrogueModel d;
    d.bow_wave.enabled = true;
    const Vec3 v = bow_wave_velocity(d, Vec3::Zero(), Vec3(2.0, 0.0, 0.0), 150);
    EXPECT_DOUBLE_EQ(v.norm(), d.bow_wave.strength / 2.0);
    EXPECT_LT(v.z(), 0.0);  // centred: straight up
    const Vec3 w = bow_wave_velocity(d, Vec3::Zero(), Vec3(1.0, 0.3, 0.0), 150);
    EXPECT_GT(w.y(), 0.0);
    EXPECT_EQ(w.x(), 0.0);
    d.bow_wave.enabled = false;
    EXPECT_TRUE(bow_wave_velocity(d, Vec3::Zero(), Vec3(1.0, 0.3, 0.0), 150).isZero(0.0));
}
