#pragma once

#include "aar/core.hpp"
#include "aar/dynamics.hpp"
#include "aar/linalg.hpp"

#include <vector>

namespace aar {

enum class Channel { Lon, Lat };

const char* channel_name(Channel c);

struct AugmentedPlant {
    Channel channel = Channel::Lon;
    Mat A;  // [[A, 0], [C, 0]]
    Mat B;  // [[B], [0]]
    Mat E;  // [[0], [-I]], entry of the output reference
    Eigen::Index n_state = 0;
    Eigen::Index n_out = 0;
};

// Throws Unstabilizable naming the offending mode.
AugmentedPlant augment(const Mat& A, const Mat& B, const Mat& C, Channel channel);
AugmentedPlant augment(const PlantModel& plant, Channel channel);

struct CareOptions {
    int max_iterations = 100;
    double tolerance = 1e-8;  // relative to 1 + ||P||_F
};

struct CareSolution {
    Mat P;
    Mat K;  // R^-1 B^T P
    int iterations = 0;
    double residual = 0.0;  // Frobenius norm
};

double care_residual(const Mat& A, const Mat& B, const Mat& Q, const Mat& R, const Mat& P);

// Newton-Kleinman from a Bass stabilizing gain.
CareSolution solve_care(const Mat& A, const Mat& B, const Mat& Q, const Mat& R, const CareOptions& opt = {});

struct LqrWeights {
    Mat Q_lon, R_lon, Q_lat, R_lat;

    // unit weight on states that appear in the outputs, 10 on integrators, R = I
    static LqrWeights defaults(const PlantModel& plant);
    void validate() const;  // throws Config naming the matrix
};

struct ChannelGains {
    Mat K_x;
    Mat K_e;
    Mat P;
    double residual = 0.0;
    int iterations = 0;
    std::vector<cplx> closed_loop;
};

struct GainSet {
    Mat26 K_x1 = Mat26::Zero();
    Eigen::Matrix2d K_e1 = Eigen::Matrix2d::Zero();
    Mat26 K_x2 = Mat26::Zero();
    Vec2 K_e2 = Vec2::Zero();
    ChannelGains lon, lat;
};

// Throws SynthesisFailure listing eigenvalues if the closed loop is not Hurwitz.
ChannelGains synthesize_channel(const AugmentedPlant& aug, const Mat& Q, const Mat& R);
GainSet synthesize_gains(const PlantModel& plant, const LqrWeights& weights);

struct IntegratorState {
    Vec2 q_lon = Vec2::Zero();
    double q_lat = 0.0;
};

IntegratorState update_integrator(const IntegratorState& s, const Vec2& measured_lon, double measured_lat,
                                  const Vec2& desired_lon, double desired_lat, double dt,
                                  bool freeze_lon, bool freeze_lat);

inline IntegratorState update_integrator(const IntegratorState& s, const Vec2& measured_lon, double measured_lat,
                                         const Vec2& desired_lon, double desired_lat, double dt, bool saturated)
{
    return update_integrator(s, measured_lon, measured_lat, desired_lon, desired_lat, dt, saturated, saturated);
}

// Pre-saturation command; pass through saturate() before the plant.
ControlInput inner_control(const ReceiverState& x, const IntegratorState& q, const GainSet& k);

}  // namespace aar
