#include "aar/report.hpp"
#include "aar/sim.hpp"

#include <cstdio>
#include <ostream>
#include <string>

namespace aar {

const char* const kLogSchema = "aar-simlog v1";

namespace {

void put(std::string& line, double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, ",%.10g", v);
    line += buf;
}

void put(std::string& line, const Eigen::Ref<const Vec>& v)
{
    for (Eigen::Index i = 0; i < v.size(); ++i)
        put(line, v(i));
}

void put(std::string& line, const ControlInput& u)
{
    put(line, u.elevator);
    put(line, u.throttle);
    put(line, u.aileron);
    put(line, u.rudder);
}

}  // namespace

void write_csv(const SimLog& log, std::ostream& out, const std::string& provenance)
{
    out << "# " << kLogSchema << "\n";
    out << "# " << provenance << "\n";
    out << "t,x_r,h_r,theta,V,alpha,q,y_r,psi,phi,beta,p,r,"
           "elev_cmd,thr_cmd,ail_cmd,rud_cmd,elev,thr,ail,rud,sat_lon,sat_lat,"
           "e_x,e_y,depth,rel_x,rel_y,rel_z,vdes_x,vdes_y,vdes_z,"
           "ref_vy,ref_vfwd,ref_vx,meas_vy,meas_vfwd,meas_vx,vcam_x,vcam_y,vcam_z,"
           "q_lon1,q_lon2,q_lat,gust_u,gust_v,gust_w,drogue_x,drogue_y,drogue_z,"
           "receiver_x,receiver_y,receiver_z,bow_wave\n";
    std::string line;
    for (const auto& r : log.records) {
        char t[32];
        std::snprintf(t, sizeof t, "%.6f", r.t);
        line = t;
        put(line, r.lon);
        put(line, r.lat);
        put(line, r.u_cmd);
        put(line, r.u_sat);
        line += r.sat_lon ? ",1" : ",0";
        line += r.sat_lat ? ",1" : ",0";
        put(line, r.e_x);
        put(line, r.e_y);
        put(line, r.depth);
        put(line, r.rel);
        put(line, r.v_des.v_x);
        put(line, r.v_des.v_y);
        put(line, r.v_des.v_z);
        put(line, r.ref_lon);
        put(line, r.ref_lat);
        put(line, r.meas_lon);
        put(line, r.meas_lat);
        put(line, r.v_cam);
        put(line, r.integ.q_lon);
        put(line, r.integ.q_lat);
        put(line, r.gust);
        put(line, r.drogue);
        put(line, r.receiver);
        put(line, r.bow_wave);
        line += '\n';
        out << line;
    }
}

void write_outcome(const DockingOutcome& o, const ScenarioConfig& c, std::ostream& out, const std::string& provenance)
{
    char buf[256];
    out << "# " << provenance << "\n";
    out << "scenario: " << c.name << "\n";
    out << "seed: " << c.seed << "\n";
    out << "result: " << (o.success ? "docked" : "failed") << "\n";
    out << "failure_reason: " << failure_reason_name(o.failure_reason) << "\n";
    std::snprintf(buf, sizeof buf, "miss_distance_m: %.6f\ncapture_radius_m: %.6f\n", o.miss_distance, c.capture_radius);
    out << buf;
    std::snprintf(buf, sizeof buf, "closing_speed_mps: %.6f\nclosing_speed_ok: %s\n", o.closing_speed,
                  o.closing_ok ? "yes" : "no");
    out << buf;
    std::snprintf(buf, sizeof buf, "time_of_contact_s: %.6f\npeak_image_error: %.6f\n", o.time_of_contact, o.peak_error);
    out << buf;
    std::snprintf(buf, sizeof buf, "steps: %zu\nsaturated_steps: %zu\nsaturation_fraction: %.6f\n", o.steps,
                  o.saturated_steps, o.steps ? static_cast<double>(o.saturated_steps) / static_cast<double>(o.steps) : 0.0);
    out << buf;
    for (const auto& w : c.warnings())
        out << "warning: " << w << "\n";
}

void write_batch_summary(const BatchSummary& s, std::ostream& out, const std::string& provenance)
{
    char buf[256];
    out << "# " << provenance << "\n";
    std::snprintf(buf, sizeof buf, "runs: %zu\nsuccesses: %zu\nerrors: %zu\nsuccess_rate: %.6f\n", s.runs, s.successes,
                  s.errors, s.success_rate);
    out << buf;
    std::snprintf(buf, sizeof buf, "miss_mean_m: %.6f\nmiss_median_m: %.6f\nmiss_min_m: %.6f\nmiss_max_m: %.6f\n",
                  s.miss_mean, s.miss_median, s.miss_min, s.miss_max);
    out << buf;
    out << "seed,result,failure_reason,miss_distance_m,closing_speed_mps\n";
    for (const auto& e : s.entries) {
        if (!e.outcome) {
            out << e.seed << ",error,\"" << e.error << "\",nan,nan\n";
            continue;
        }
        std::snprintf(buf, sizeof buf, "%llu,%s,%s,%.6f,%.6f\n", static_cast<unsigned long long>(e.seed),
                      e.outcome->success ? "docked" : "failed", failure_reason_name(e.outcome->failure_reason),
                      e.outcome->miss_distance, e.outcome->closing_speed);
        out << buf;
    }
}

std::string format_matrix(const Mat& M, const std::string& indent)
{
    std::string s;
    char buf[32];
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        s += indent + "[";
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%s%13.6g", j ? " " : "", M(i, j));
            s += buf;
        }
        s += " ]\n";
    }
    return s;
}

static void channel_section(std::string& s, const char* name, const ChannelGains& g, const char* kx, const char* ke)
{
    char buf[160];
    s += std::string("[") + name + "]\n";
    s += std::string(kx) + " =\n" + format_matrix(g.K_x);
    if (ke)
        s += std::string(ke) + " =\n" + format_matrix(g.K_e);
    std::snprintf(buf, sizeof buf, "riccati residual (Frobenius) = %.3e  bound = %.3e  iterations = %d\n", g.residual,
                  1e-8 * (1.0 + g.P.norm()), g.iterations);
    s += buf;
    s += "closed-loop eigenvalues (" + std::to_string(g.closed_loop.size()) + "):\n";
    for (const auto& e : g.closed_loop) {
        std::snprintf(buf, sizeof buf, "  %+.6f %+.6fi\n", e.real(), e.imag());
        s += buf;
    }
}

std::string synth_report(const PlantModel& plant, const LqrWeights& weights)
{
    const GainSet k = synthesize_gains(plant, weights);
    std::string s;
    channel_section(s, "longitudinal", k.lon, "K_x1", "K_e1");
    channel_section(s, "lateral", k.lat, "K_x2", "K_e2");
    s += "status: pass\n";
    return s;
}

std::string synth_report(const CareProblem& p)
{
    const CareSolution sol = solve_care(p.A, p.B, p.Q, p.R);
    const auto cl = eigenvalues(p.A - p.B * sol.K);
    for (const auto& e : cl)
        if (!(e.real() < 0.0))
            throw Error(ErrorKind::SynthesisFailure, "closed loop is not Hurwitz: " + format_eigenvalues(cl));
    ChannelGains g;
    g.K_x = sol.K;
    g.P = sol.P;
    g.residual = sol.residual;
    g.iterations = sol.iterations;
    g.closed_loop = cl;
    std::string s;
    channel_section(s, "riccati", g, "K", nullptr);
    s += "P =\n" + format_matrix(sol.P);
    s += "status: pass\n";
    return s;
}

}  // namespace aar
