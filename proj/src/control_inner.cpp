#include "aar/control_inner.hpp"

#include <cmath>
#include <cstdio>

namespace aar {

const char* channel_name(Channel c) { return c == Channel::Lon ? "lon" : "lat"; }

AugmentedPlant augment(const Mat& A, const Mat& B, const Mat& C, Channel channel)
{
    const Eigen::Index n = A.rows(), m = C.rows(), k = B.cols();
    if (A.cols() != n || B.rows() != n || C.cols() != n)
        throw Error(ErrorKind::Domain, "augment: inconsistent A/B/C dimensions");
    AugmentedPlant a;
    a.channel = channel;
    a.n_state = n;
    a.n_out = m;
    a.A = Mat::Zero(n + m, n + m);
    a.A.topLeftCorner(n, n) = A;
    a.A.bottomLeftCorner(m, n) = C;
    a.B = Mat::Zero(n + m, k);
    a.B.topRows(n) = B;
    a.E = Mat::Zero(n + m, m);
    a.E.bottomRows(m) = -Mat::Identity(m, m);

    const auto bad = uncontrollable_modes(a.A, a.B);
    if (!bad.empty())
        throw Error(ErrorKind::Unstabilizable, std::string(channel_name(channel)) +
                    " augmented pair is not stabilizable; uncontrollable mode(s): " + format_eigenvalues(bad));
    return a;
}

AugmentedPlant augment(const PlantModel& p, Channel channel)
{
    if (channel == Channel::Lon)
        return augment(p.A_lon, p.B_lon, p.C_lon, channel);
    return augment(p.A_lat, p.B_lat, p.C_lat, channel);
}

double care_residual(const Mat& A, const Mat& B, const Mat& Q, const Mat& R, const Mat& P)
{
    const Mat G = B * R.llt().solve(B.transpose());
    return (A.transpose() * P + P * A - P * G * P + Q).norm();
}

static Mat bass_gain(const Mat& A, const Mat& B)
{
    const Eigen::Index n = A.rows();
    // integrators compute as tiny negatives; demand a real margin
    const double margin = 1e-6 * (1.0 + A.norm());
    if (spectral_abscissa(A) < -margin)
        return Mat::Zero(B.cols(), n);
    // -(A + bI) must be Hurwitz; the closed loop then sits on Re s = -b
    double lowest = 0.0;
    for (const auto& e : eigenvalues(A))
        lowest = std::min(lowest, e.real());
    double beta = 1.0 - lowest;
    for (int attempt = 0; attempt < 6; ++attempt, beta *= 2.0) {
        // (A + bI) Z + Z (A + bI)^T = 2 B B^T
        const Mat Ab = A + beta * Mat::Identity(n, n);
        const Mat Z = solve_lyapunov(-Ab.transpose(), 2.0 * B * B.transpose());
        Eigen::LDLT<Mat> ldlt(Z);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
            continue;
        const Mat K = ldlt.solve(B).transpose();
        if (K.allFinite() && spectral_abscissa(A - B * K) < -margin)
            return K;
    }
    throw Error(ErrorKind::SolverFailure, "no stabilizing initial gain (pair not controllable)");
}

CareSolution solve_care(const Mat& A, const Mat& B, const Mat& Q, const Mat& R, const CareOptions& opt)
{
    const Eigen::Index n = A.rows();
    if (A.cols() != n || B.rows() != n || Q.rows() != n || Q.cols() != n || R.rows() != B.cols() || R.cols() != B.cols())
        throw Error(ErrorKind::Domain, "solve_care: inconsistent dimensions");
    if (!is_positive_definite(R))
        throw Error(ErrorKind::Domain, "solve_care: R must be symmetric positive definite");
    if (!is_positive_semidefinite(Q))
        throw Error(ErrorKind::Domain, "solve_care: Q must be symmetric positive semidefinite");

    const Eigen::LLT<Mat> Rf(R);
    Mat K = bass_gain(A, B);
    CareSolution s;
    double best = INFINITY;
    for (int it = 1; it <= opt.max_iterations; ++it) {
        const Mat Ak = A - B * K;
        const Mat P = solve_lyapunov(Ak, Q + K.transpose() * R * K);
        K = Rf.solve(B.transpose() * P);
        const double res = care_residual(A, B, Q, R, P);
        s.P = P;
        s.K = K;
        s.iterations = it;
        s.residual = res;
        if (res < opt.tolerance * (1.0 + P.norm()))
            return s;
        // quadratic phase is over once rounding dominates
        if (it > 5 && res >= best)
            break;
        best = std::min(best, res);
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "Newton-Kleinman did not converge after %d iterations, residual %.3e", s.iterations,
                  s.residual);
    throw Error(ErrorKind::SolverFailure, buf);
}

static Mat default_q(const Mat& C, Eigen::Index n_out)
{
    const Eigen::Index n = C.cols();
    Mat Q = Mat::Zero(n + n_out, n + n_out);
    for (Eigen::Index j = 0; j < n; ++j)
        if (C.col(j).cwiseAbs().maxCoeff() > 0.0)
            Q(j, j) = 1.0;
    for (Eigen::Index j = 0; j < n_out; ++j)
        Q(n + j, n + j) = 10.0;
    return Q;
}

LqrWeights LqrWeights::defaults(const PlantModel& p)
{
    return {default_q(p.C_lon, 2), Mat::Identity(2, 2), default_q(p.C_lat, 1), Mat::Identity(2, 2)};
}

void LqrWeights::validate() const
{
    auto check = [](const Mat& M, Eigen::Index n, const char* name, bool definite) {
        if (M.rows() != n || M.cols() != n)
            throw Error(ErrorKind::Config, std::string("weights.") + name + ": expected " + std::to_string(n) + "x" +
                        std::to_string(n));
        if (!is_symmetric(M))
            throw Error(ErrorKind::Config, std::string("weights.") + name + ": not symmetric");
        if (definite ? !is_positive_definite(M) : !is_positive_semidefinite(M))
            throw Error(ErrorKind::Config, std::string("weights.") + name +
                        (definite ? ": not positive definite" : ": not positive semidefinite"));
    };
    check(Q_lon, 8, "Q_lon", false);
    check(R_lon, 2, "R_lon", true);
    check(Q_lat, 7, "Q_lat", false);
    check(R_lat, 2, "R_lat", true);
}

ChannelGains synthesize_channel(const AugmentedPlant& aug, const Mat& Q, const Mat& R)
{
    const CareSolution s = solve_care(aug.A, aug.B, Q, R);
    ChannelGains g;
    g.P = s.P;
    g.residual = s.residual;
    g.iterations = s.iterations;
    g.K_x = s.K.leftCols(aug.n_state);
    g.K_e = s.K.rightCols(aug.n_out);
    g.closed_loop = eigenvalues(aug.A - aug.B * s.K);
    for (const auto& e : g.closed_loop)
        if (!(e.real() < 0.0))
            throw Error(ErrorKind::SynthesisFailure, std::string(channel_name(aug.channel)) +
                        " closed loop is not Hurwitz: " + format_eigenvalues(g.closed_loop));
    return g;
}

GainSet synthesize_gains(const PlantModel& plant, const LqrWeights& w)
{
    w.validate();
    GainSet k;
    k.lon = synthesize_channel(augment(plant, Channel::Lon), w.Q_lon, w.R_lon);
    k.lat = synthesize_channel(augment(plant, Channel::Lat), w.Q_lat, w.R_lat);
    k.K_x1 = k.lon.K_x;
    k.K_e1 = k.lon.K_e;
    k.K_x2 = k.lat.K_x;
    k.K_e2 = k.lat.K_e;
    return k;
}

IntegratorState update_integrator(const IntegratorState& s, const Vec2& measured_lon, double measured_lat,
                                  const Vec2& desired_lon, double desired_lat, double dt, bool freeze_lon,
                                  bool freeze_lat)
{
    if (!(dt > 0.0))
        throw Error(ErrorKind::Domain, "update_integrator needs dt > 0");
    IntegratorState n = s;
    if (!freeze_lon)
        n.q_lon += (measured_lon - desired_lon) * dt;
    if (!freeze_lat)
        n.q_lat += (measured_lat - desired_lat) * dt;
    return n;
}

ControlInput inner_control(const ReceiverState& x, const IntegratorState& q, const GainSet& k)
{
    const Vec2 ulon = -k.K_x1 * x.lon - k.K_e1 * q.q_lon;
    const Vec2 ulat = -k.K_x2 * x.lat - k.K_e2 * q.q_lat;
    return ControlInput::from_channels(ulon, ulat);
}

}  // namespace aar
