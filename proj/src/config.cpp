#include "aar/config.hpp"
#include "aar/linalg.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace aar {

using json = nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& msg)
{
    throw Error(ErrorKind::Config, field + ": " + msg);
}

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys)
{
    if (!obj.is_object())
        bad(where, "expected an object");
    std::set<std::string> ok(keys.begin(), keys.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!ok.count(it.key()))
            bad(where + "." + it.key(), "unknown field");
}

double number(const json& v, const std::string& field)
{
    if (!v.is_number())
        bad(field, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x))
        bad(field, "must be finite");
    return x;
}

double opt_number(const json& obj, const char* key, const std::string& where, double fallback)
{
    return obj.contains(key) ? number(obj.at(key), where + "." + key) : fallback;
}

double req_number(const json& obj, const char* key, const std::string& where)
{
    if (!obj.contains(key))
        bad(where + "." + key, "missing");
    return number(obj.at(key), where + "." + key);
}

Mat matrix(const json& v, const std::string& field, Eigen::Index rows = -1, Eigen::Index cols = -1)
{
    if (!v.is_array() || v.empty())
        bad(field, "expected a non-empty array of rows");
    const auto r = static_cast<Eigen::Index>(v.size());
    if (rows >= 0 && r != rows)
        bad(field, "expected " + std::to_string(rows) + " rows, got " + std::to_string(r));
    Eigen::Index c = cols;
    Mat M;
    for (Eigen::Index i = 0; i < r; ++i) {
        const json& row = v[static_cast<std::size_t>(i)];
        const std::string rf = field + "[" + std::to_string(i) + "]";
        if (!row.is_array())
            bad(rf, "expected an array of numbers");
        if (c < 0)
            c = static_cast<Eigen::Index>(row.size());
        if (static_cast<Eigen::Index>(row.size()) != c || c == 0)
            bad(rf, "expected " + std::to_string(c) + " numbers, got " + std::to_string(row.size()));
        if (i == 0)
            M.resize(r, c);
        for (Eigen::Index j = 0; j < c; ++j)
            M(i, j) = number(row[static_cast<std::size_t>(j)], rf + "[" + std::to_string(j) + "]");
    }
    return M;
}

Vec vec_field(const json& v, const std::string& field, Eigen::Index n)
{
    if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != n)
        bad(field, "expected an array of " + std::to_string(n) + " numbers");
    Vec x(n);
    for (Eigen::Index i = 0; i < n; ++i)
        x(i) = number(v[static_cast<std::size_t>(i)], field + "[" + std::to_string(i) + "]");
    return x;
}

// diagonal list or full matrix
Mat weight(const json& v, const std::string& field, Eigen::Index n)
{
    if (v.is_array() && !v.empty() && v[0].is_number())
        return vec_field(v, field, n).asDiagonal();
    return matrix(v, field, n, n);
}

bool boolean(const json& v, const std::string& field)
{
    if (!v.is_boolean())
        bad(field, "expected true or false");
    return v.get<bool>();
}

std::string str_field(const json& v, const std::string& field)
{
    if (!v.is_string())
        bad(field, "expected a string");
    return v.get<std::string>();
}

json parse_json(const std::string& text, const std::string& origin)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        bad(origin, std::string("invalid JSON (") + e.what() + ")");
    }
}

}  // namespace

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TurbulenceLevel parse_turbulence_level(const std::string& s)
{
    if (s == "off" || s == "0" || s == "none")
        return TurbulenceLevel::Off;
    if (s == "1" || s == "I" || s == "i")
        return TurbulenceLevel::I;
    if (s == "2" || s == "II" || s == "ii")
        return TurbulenceLevel::II;
    throw Error(ErrorKind::Config, "turbulence level '" + s + "' is not one of off, 1, 2");
}

const char* turbulence_level_name(TurbulenceLevel l)
{
    return l == TurbulenceLevel::Off ? "off" : l == TurbulenceLevel::I ? "1" : "2";
}

PlantModel default_plant()
{
    const double V = 150.0, g = 9.81, leak = 0.2;
    PlantModel p;
    p.trim_airspeed = V;

    Mat6& A = p.A_lon;
    A(0, 0) = -leak; A(0, 3) = 1.0;
    A(1, 1) = -leak; A(1, 2) = V; A(1, 4) = -V;
    A(2, 2) = -leak; A(2, 5) = 1.0;
    A(3, 2) = -g; A(3, 3) = -0.02; A(3, 4) = 2.0;
    A(4, 3) = -0.13 / V; A(4, 4) = -1.0; A(4, 5) = 1.0;
    A(5, 4) = -4.0; A(5, 5) = -2.0;
    p.B_lon(3, 1) = 8.0;
    p.B_lon(4, 0) = -0.04;
    p.B_lon(5, 0) = -4.0;

    Mat6& L = p.A_lat;
    L(0, 0) = -leak; L(0, 1) = V; L(0, 3) = V;
    L(1, 1) = -leak; L(1, 5) = 1.0;
    L(2, 2) = -leak; L(2, 4) = 1.0;
    L(3, 2) = g / V; L(3, 3) = -0.1; L(3, 5) = -1.0;
    L(4, 3) = -2.0; L(4, 4) = -1.2; L(4, 5) = 0.3;
    L(5, 3) = 1.0; L(5, 4) = -0.05; L(5, 5) = -0.25;
    p.B_lat(3, 1) = 0.02;
    p.B_lat(4, 0) = 4.0; p.B_lat(4, 1) = 0.2;
    p.B_lat(5, 0) = -0.05; p.B_lat(5, 1) = -2.0;

    p.mount_offset = Vec3(8.0, 0.5, -1.2);
    refresh_outputs(p);
    return p;
}

void validate_plant(const PlantModel& p, const std::string& origin)
{
    auto finite = [&](const Mat& M, const char* name) {
        if (!M.allFinite())
            bad(origin + "." + name, "contains non-finite entries");
    };
    finite(p.A_lon, "A_lon");
    finite(p.B_lon, "B_lon");
    finite(p.A_lat, "A_lat");
    finite(p.B_lat, "B_lat");
    if (!(p.trim_airspeed > 0.0))
        bad(origin + ".trim_airspeed", "must be positive");
    if (!p.mount_offset.allFinite())
        bad(origin + ".mount_offset", "must be finite");
    if (!(p.limits.surface > 0.0))
        bad(origin + ".limits.surface_deg", "must be positive");
    if (!(p.limits.throttle > 0.0))
        bad(origin + ".limits.throttle", "must be positive");

    auto channel = [&](const Mat& A, const Mat& B, const char* a, const char* b, const char* mode) {
        const auto u = uncontrollable_modes(A, B);
        if (!u.empty())
            bad(origin + "." + a + "/" + b, "pair is not stabilizable, uncontrollable mode(s) " + format_eigenvalues(u));
        bool oscillatory = false;
        for (const auto& e : eigenvalues(A))
            oscillatory = oscillatory || std::abs(e.imag()) > 1e-6;
        if (!oscillatory)
            bad(origin + "." + a, std::string("has no oscillatory ") + mode + " mode");
    };
    channel(p.A_lon, p.B_lon, "A_lon", "B_lon", "short-period");
    channel(p.A_lat, p.B_lat, "A_lat", "B_lat", "Dutch-roll");
}

PlantModel parse_plant(const std::string& text, const std::string& origin)
{
    const json j = parse_json(text, origin);
    only_keys(j, origin, {"description", "trim_airspeed", "A_lon", "B_lon", "A_lat", "B_lat", "mount_offset", "limits"});
    PlantModel p;
    for (const char* k : {"A_lon", "B_lon", "A_lat", "B_lat", "mount_offset"})
        if (!j.contains(k))
            bad(origin + "." + k, "missing");
    p.trim_airspeed = req_number(j, "trim_airspeed", origin);
    p.A_lon = matrix(j.at("A_lon"), origin + ".A_lon", 6, 6);
    p.B_lon = matrix(j.at("B_lon"), origin + ".B_lon", 6, 2);
    p.A_lat = matrix(j.at("A_lat"), origin + ".A_lat", 6, 6);
    p.B_lat = matrix(j.at("B_lat"), origin + ".B_lat", 6, 2);
    p.mount_offset = vec_field(j.at("mount_offset"), origin + ".mount_offset", 3);
    if (j.contains("limits")) {
        const json& l = j.at("limits");
        const std::string w = origin + ".limits";
        only_keys(l, w, {"surface_deg", "throttle"});
        p.limits.surface = opt_number(l, "surface_deg", w, 25.0) * M_PI / 180.0;
        p.limits.throttle = opt_number(l, "throttle", w, p.limits.throttle);
    }
    refresh_outputs(p);
    validate_plant(p, origin);
    return p;
}

bool is_plant_document(const std::string& text)
{
    const json j = json::parse(text, nullptr, false);
    return j.is_object() && j.contains("A_lon");
}

PlantModel load_plant(const std::string& path) { return parse_plant(read_text_file(path), path); }

ScenarioConfig parse_scenario(const std::string& text, const std::string& base_dir, const std::string& origin)
{
    const json j = parse_json(text, origin);
    if (j.is_object() && j.contains("care"))
        bad(origin, "describes a Riccati problem, not a scenario");
    only_keys(j, origin,
              {"name", "plant", "controller", "gains", "pbvs_z_ref", "weights", "turbulence", "seed", "drogue",
               "bow_wave", "pose_error", "initial_offset", "convergence", "capture_radius", "closing_margin",
               "max_duration", "dt", "visual_loss_hold", "peak_depth_floor", "disturbance_bound"});
    const std::string o = origin;
    ScenarioConfig c;
    if (j.contains("name"))
        c.name = str_field(j.at("name"), o + ".name");
    if (j.contains("plant")) {
        std::filesystem::path pp = str_field(j.at("plant"), o + ".plant");
        if (pp.is_relative())
            pp = std::filesystem::path(base_dir) / pp;
        c.plant_path = pp.lexically_normal().string();
        try {
            c.plant = load_plant(c.plant_path);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::Io)
                bad(o + ".plant", e.what());
            throw;
        }
    } else {
        c.plant = default_plant();
    }
    if (j.contains("controller")) {
        const std::string s = str_field(j.at("controller"), o + ".controller");
        if (s == "ibvs")
            c.controller = ControllerKind::Ibvs;
        else if (s == "pbvs")
            c.controller = ControllerKind::Pbvs;
        else
            bad(o + ".controller", "expected ibvs or pbvs");
    }
    if (j.contains("gains")) {
        const json& g = j.at("gains");
        const std::string w = o + ".gains";
        if (g.is_string()) {
            const std::string s = g.get<std::string>();
            if (s == "table1")
                c.gains = OuterLoopGains::table1();
            else if (s == "table2")
                c.gains = OuterLoopGains::table2();
            else
                bad(w, "expected table1, table2 or an object");
            c.gain_label = s;
        } else {
            only_keys(g, w, {"k1", "k2", "k3", "k4", "k5", "a"});
            c.gains = {req_number(g, "k1", w), req_number(g, "k2", w), req_number(g, "k3", w),
                       req_number(g, "k4", w), req_number(g, "k5", w), req_number(g, "a", w)};
            c.gain_label = "custom";
        }
    }
    c.pbvs_z_ref = opt_number(j, "pbvs_z_ref", o, c.pbvs_z_ref);
    if (j.contains("weights")) {
        const json& w = j.at("weights");
        const std::string f = o + ".weights";
        only_keys(w, f, {"Q_lon", "R_lon", "Q_lat", "R_lat"});
        LqrWeights lw = LqrWeights::defaults(c.plant);
        if (w.contains("Q_lon")) lw.Q_lon = weight(w.at("Q_lon"), f + ".Q_lon", 8);
        if (w.contains("R_lon")) lw.R_lon = weight(w.at("R_lon"), f + ".R_lon", 2);
        if (w.contains("Q_lat")) lw.Q_lat = weight(w.at("Q_lat"), f + ".Q_lat", 7);
        if (w.contains("R_lat")) lw.R_lat = weight(w.at("R_lat"), f + ".R_lat", 2);
        c.weights = lw;
    }
    if (j.contains("turbulence")) {
        const json& t = j.at("turbulence");
        const std::string w = o + ".turbulence";
        only_keys(t, w, {"level", "sigma_I", "sigma_II", "scale_length"});
        if (t.contains("level")) {
            const json& l = t.at("level");
            const std::string s = l.is_number_integer() ? std::to_string(l.get<long long>()) : str_field(l, w + ".level");
            try {
                c.turbulence = parse_turbulence_level(s);
            } catch (const Error&) {
                bad(w + ".level", "expected off, 1 or 2");
            }
        }
        c.turbulence_params.sigma_I = opt_number(t, "sigma_I", w, c.turbulence_params.sigma_I);
        c.turbulence_params.sigma_II = opt_number(t, "sigma_II", w, c.turbulence_params.sigma_II);
        c.turbulence_params.scale_length = opt_number(t, "scale_length", w, c.turbulence_params.scale_length);
        if (!(c.turbulence_params.scale_length > 0.0))
            bad(w + ".scale_length", "must be positive");
    }
    if (j.contains("seed")) {
        const json& s = j.at("seed");
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
            bad(o + ".seed", "expected a non-negative integer");
        c.seed = s.get<std::uint64_t>();
    }
    if (j.contains("drogue")) {
        const json& d = j.at("drogue");
        const std::string w = o + ".drogue";
        only_keys(d, w, {"gust_gain", "restoring_rate", "bias"});
        c.drogue.gust_gain = opt_number(d, "gust_gain", w, c.drogue.gust_gain);
        c.drogue.restoring_rate = opt_number(d, "restoring_rate", w, c.drogue.restoring_rate);
        if (d.contains("bias"))
            c.drogue_bias = vec_field(d.at("bias"), w + ".bias", 3);
    }
    if (j.contains("bow_wave")) {
        const json& b = j.at("bow_wave");
        const std::string w = o + ".bow_wave";
        only_keys(b, w, {"enabled", "activation_radius", "strength", "decay_exponent", "source_offset"});
        BowWaveParams& bw = c.drogue.bow_wave;
        if (b.contains("enabled"))
            bw.enabled = boolean(b.at("enabled"), w + ".enabled");
        bw.activation_radius = opt_number(b, "activation_radius", w, bw.activation_radius);
        bw.strength = opt_number(b, "strength", w, bw.strength);
        bw.decay_exponent = opt_number(b, "decay_exponent", w, bw.decay_exponent);
        if (b.contains("source_offset"))
            bw.source_offset = vec_field(b.at("source_offset"), w + ".source_offset", 3);
    }
    if (j.contains("pose_error"))
        c.pose_error = vec_field(j.at("pose_error"), o + ".pose_error", 3);
    if (j.contains("initial_offset")) {
        const json& i = j.at("initial_offset");
        const std::string w = o + ".initial_offset";
        only_keys(i, w, {"lateral", "vertical", "depth"});
        c.initial.lateral = opt_number(i, "lateral", w, c.initial.lateral);
        c.initial.vertical = opt_number(i, "vertical", w, c.initial.vertical);
        c.initial.depth = opt_number(i, "depth", w, c.initial.depth);
    }
    if (j.contains("convergence")) {
        const Vec v = vec_field(j.at("convergence"), o + ".convergence", 2);
        c.convergence = {v(0), v(1)};
    }
    c.capture_radius = opt_number(j, "capture_radius", o, c.capture_radius);
    c.closing_margin = opt_number(j, "closing_margin", o, c.closing_margin);
    c.max_duration = opt_number(j, "max_duration", o, c.max_duration);
    c.dt = opt_number(j, "dt", o, c.dt);
    c.visual_loss_hold = opt_number(j, "visual_loss_hold", o, c.visual_loss_hold);
    c.peak_depth_floor = opt_number(j, "peak_depth_floor", o, c.peak_depth_floor);
    c.disturbance_bound = opt_number(j, "disturbance_bound", o, c.disturbance_bound);

    try {
        c.validate();
    } catch (const Error& e) {
        bad(o, e.what());
    }
    return c;
}

ScenarioConfig load_scenario(const std::string& path)
{
    const std::string text = read_text_file(path);
    const auto base = std::filesystem::path(path).parent_path();
    return parse_scenario(text, base.empty() ? "." : base.string(), path);
}

std::optional<CareProblem> parse_care_problem(const std::string& text, const std::string& origin)
{
    const json j = parse_json(text, origin);
    if (!j.is_object() || !j.contains("care"))
        return std::nullopt;
    const json& c = j.at("care");
    const std::string w = origin + ".care";
    only_keys(c, w, {"A", "B", "Q", "R"});
    for (const char* k : {"A", "B", "Q", "R"})
        if (!c.contains(k))
            bad(w + "." + k, "missing");
    CareProblem p;
    p.A = matrix(c.at("A"), w + ".A");
    const Eigen::Index n = p.A.rows();
    if (p.A.cols() != n)
        bad(w + ".A", "must be square");
    p.B = matrix(c.at("B"), w + ".B", n);
    p.Q = matrix(c.at("Q"), w + ".Q", n, n);
    p.R = matrix(c.at("R"), w + ".R", p.B.cols(), p.B.cols());
    return p;
}

}  // namespace aar
