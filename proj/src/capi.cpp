#include "aar/aar.h"

#include "aar/config.hpp"
#include "aar/report.hpp"
#include "aar/sim.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <new>
#include <string>

struct aar_scenario {
    aar::ScenarioConfig config;
};

struct aar_result {
    aar::ScenarioConfig config;
    aar::ScenarioResult result;
};

struct aar_batch {
    std::vector<aar::BatchEntry> entries;
};

namespace {

thread_local std::string last_error;

aar_status status_of(aar::ErrorKind k)
{
    switch (k) {
    case aar::ErrorKind::Domain: return AAR_ERR_DOMAIN;
    case aar::ErrorKind::BehindCamera: return AAR_ERR_BEHIND_CAMERA;
    case aar::ErrorKind::Diverged: return AAR_ERR_DIVERGED;
    case aar::ErrorKind::Unstabilizable: return AAR_ERR_UNSTABILIZABLE;
    case aar::ErrorKind::SolverFailure: return AAR_ERR_SOLVER;
    case aar::ErrorKind::SynthesisFailure: return AAR_ERR_SYNTHESIS;
    case aar::ErrorKind::Config: return AAR_ERR_CONFIG;
    case aar::ErrorKind::Io: return AAR_ERR_IO;
    }
    return AAR_ERR_INTERNAL;
}

aar_status fail(aar_status s, const std::string& msg)
{
    last_error = msg;
    return s;
}

template <class F>
aar_status guarded(F&& f)
{
    try {
        last_error.clear();
        return f();
    } catch (const aar::Error& e) {
        return fail(status_of(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(AAR_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(AAR_ERR_INTERNAL, e.what());
    }
}

#define AAR_REQUIRE(cond, what)                                   \
    do {                                                          \
        if (!(cond))                                              \
            return fail(AAR_ERR_ARGUMENT, what);                  \
    } while (0)

std::string provenance_of(const char* p) { return p ? p : ""; }

void write_file(const char* path, const std::function<void(std::ostream&)>& body)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw aar::Error(aar::ErrorKind::Io, std::string("cannot write ") + path);
    body(out);
    out.flush();
    if (!out)
        throw aar::Error(aar::ErrorKind::Io, std::string("write failed: ") + path);
}

}  // namespace

extern "C" {

const char* aar_version(void) { return "1.0.0"; }

const char* aar_status_name(aar_status s)
{
    switch (s) {
    case AAR_OK: return "ok";
    case AAR_ERR_ARGUMENT: return "invalid argument";
    case AAR_ERR_CONFIG: return "config error";
    case AAR_ERR_IO: return "i/o error";
    case AAR_ERR_DOMAIN: return "domain error";
    case AAR_ERR_BEHIND_CAMERA: return "behind camera";
    case AAR_ERR_DIVERGED: return "integration diverged";
    case AAR_ERR_UNSTABILIZABLE: return "synthesis impossible";
    case AAR_ERR_SOLVER: return "solver failure";
    case AAR_ERR_SYNTHESIS: return "synthesis failure";
    case AAR_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* aar_last_error(void) { return last_error.c_str(); }

aar_status aar_scenario_default(aar_scenario** out)
{
    AAR_REQUIRE(out, "out is null");
    return guarded([&] {
        auto* s = new aar_scenario;
        s->config.plant = aar::default_plant();
        s->config.name = "default";
        *out = s;
        return AAR_OK;
    });
}

aar_status aar_scenario_load(const char* path, aar_scenario** out)
{
    AAR_REQUIRE(path && out, "path or out is null");
    return guarded([&] {
        auto cfg = aar::load_scenario(path);
        *out = new aar_scenario{std::move(cfg)};
        return AAR_OK;
    });
}

void aar_scenario_free(aar_scenario* s) { delete s; }

aar_status aar_scenario_set_controller(aar_scenario* s, aar_controller c)
{
    AAR_REQUIRE(s, "scenario is null");
    AAR_REQUIRE(c == AAR_CONTROLLER_IBVS || c == AAR_CONTROLLER_PBVS, "controller must be ibvs or pbvs");
    s->config.controller = c == AAR_CONTROLLER_IBVS ? aar::ControllerKind::Ibvs : aar::ControllerKind::Pbvs;
    return AAR_OK;
}

aar_status aar_scenario_set_turbulence(aar_scenario* s, int level)
{
    AAR_REQUIRE(s, "scenario is null");
    AAR_REQUIRE(level >= 0 && level <= 2, "turbulence level must be 0, 1 or 2");
    s->config.turbulence = level == 0 ? aar::TurbulenceLevel::Off : level == 1 ? aar::TurbulenceLevel::I : aar::TurbulenceLevel::II;
    return AAR_OK;
}

aar_status aar_scenario_set_seed(aar_scenario* s, uint64_t seed)
{
    AAR_REQUIRE(s, "scenario is null");
    s->config.seed = seed;
    return AAR_OK;
}

aar_status aar_scenario_set_bow_wave(aar_scenario* s, int enabled)
{
    AAR_REQUIRE(s, "scenario is null");
    s->config.drogue.bow_wave.enabled = enabled != 0;
    return AAR_OK;
}

aar_status aar_scenario_set_pose_error(aar_scenario* s, double x, double y, double z)
{
    AAR_REQUIRE(s, "scenario is null");
    const aar::Vec3 p(x, y, z);
    AAR_REQUIRE(p.allFinite(), "pose error must be finite");
    s->config.pose_error = p;
    return AAR_OK;
}

aar_status aar_scenario_set_gain_table(aar_scenario* s, int table)
{
    AAR_REQUIRE(s, "scenario is null");
    AAR_REQUIRE(table == 1 || table == 2, "gain table must be 1 or 2");
    s->config.gains = table == 1 ? aar::OuterLoopGains::table1() : aar::OuterLoopGains::table2();
    s->config.gain_label = table == 1 ? "table1" : "table2";
    return AAR_OK;
}

aar_status aar_scenario_name(const aar_scenario* s, const char** name)
{
    AAR_REQUIRE(s && name, "scenario or name is null");
    *name = s->config.name.c_str();
    return AAR_OK;
}

aar_status aar_scenario_seed(const aar_scenario* s, uint64_t* seed)
{
    AAR_REQUIRE(s && seed, "scenario or seed is null");
    *seed = s->config.seed;
    return AAR_OK;
}

aar_status aar_scenario_run(const aar_scenario* s, aar_result** out)
{
    AAR_REQUIRE(s && out, "scenario or out is null");
    return guarded([&] {
        auto* r = new aar_result{s->config, {}};
        try {
            r->result = aar::run_scenario(s->config);
        } catch (...) {
            delete r;
            throw;
        }
        *out = r;
        return AAR_OK;
    });
}

void aar_result_free(aar_result* r) { delete r; }

static aar_outcome to_c(const aar::DockingOutcome& o)
{
    aar_outcome c{};
    c.success = o.success;
    c.crossed = o.crossed;
    c.miss_distance = o.miss_distance;
    c.closing_speed = o.closing_speed;
    c.time_of_contact = o.time_of_contact;
    c.failure_reason = static_cast<aar_failure>(o.failure_reason);
    c.closing_ok = o.closing_ok;
    c.peak_error = o.peak_error;
    c.steps = o.steps;
    c.saturated_steps = o.saturated_steps;
    return c;
}

aar_status aar_result_outcome(const aar_result* r, aar_outcome* out)
{
    AAR_REQUIRE(r && out, "result or out is null");
    *out = to_c(r->result.outcome);
    return AAR_OK;
}

aar_status aar_result_write_csv(const aar_result* r, const char* path, const char* provenance)
{
    AAR_REQUIRE(r && path, "result or path is null");
    return guarded([&] {
        write_file(path, [&](std::ostream& o) { aar::write_csv(r->result.log, o, provenance_of(provenance)); });
        return AAR_OK;
    });
}

aar_status aar_result_write_outcome(const aar_result* r, const char* path, const char* provenance)
{
    AAR_REQUIRE(r && path, "result or path is null");
    return guarded([&] {
        write_file(path, [&](std::ostream& o) {
            aar::write_outcome(r->result.outcome, r->config, o, provenance_of(provenance));
        });
        return AAR_OK;
    });
}

aar_status aar_batch_create(aar_batch** out)
{
    AAR_REQUIRE(out, "out is null");
    return guarded([&] {
        *out = new aar_batch;
        return AAR_OK;
    });
}

void aar_batch_free(aar_batch* b) { delete b; }

aar_status aar_batch_add(aar_batch* b, uint64_t seed, const aar_result* r)
{
    AAR_REQUIRE(b && r, "batch or result is null");
    return guarded([&] {
        aar::BatchEntry e;
        e.seed = seed;
        e.outcome = r->result.outcome;
        b->entries.push_back(std::move(e));
        return AAR_OK;
    });
}

aar_status aar_batch_add_error(aar_batch* b, uint64_t seed, const char* message)
{
    AAR_REQUIRE(b, "batch is null");
    return guarded([&] {
        aar::BatchEntry e;
        e.seed = seed;
        e.error = message ? message : "error";
        b->entries.push_back(std::move(e));
        return AAR_OK;
    });
}

aar_status aar_batch_run(const aar_scenario* s, const uint64_t* seeds, size_t n, aar_batch** out)
{
    AAR_REQUIRE(s && seeds && out && n > 0, "scenario, seeds or out is null, or no seeds");
    return guarded([&] {
        const aar::BatchSummary sum = aar::run_batch(s->config, std::vector<uint64_t>(seeds, seeds + n));
        *out = new aar_batch{sum.entries};
        return AAR_OK;
    });
}

aar_status aar_batch_summary_get(const aar_batch* b, aar_batch_summary* out)
{
    AAR_REQUIRE(b && out, "batch or out is null");
    return guarded([&] {
        const aar::BatchSummary s = aar::summarize(b->entries);
        *out = {s.runs, s.successes, s.errors, s.success_rate, s.miss_mean, s.miss_median, s.miss_min, s.miss_max};
        return AAR_OK;
    });
}

aar_status aar_batch_write_summary(const aar_batch* b, const char* path, const char* provenance)
{
    AAR_REQUIRE(b && path, "batch or path is null");
    return guarded([&] {
        const aar::BatchSummary s = aar::summarize(b->entries);
        write_file(path, [&](std::ostream& o) { aar::write_batch_summary(s, o, provenance_of(provenance)); });
        return AAR_OK;
    });
}

aar_status aar_synth_file(const char* path, char** report)
{
    AAR_REQUIRE(report, "report is null");
    return guarded([&] {
        std::string text;
        if (!path) {
            text = aar::synth_report(aar::default_plant(), aar::LqrWeights::defaults(aar::default_plant()));
        } else {
            const std::string body = aar::read_text_file(path);
            if (auto care = aar::parse_care_problem(body, path)) {
                text = aar::synth_report(*care);
            } else if (aar::is_plant_document(body)) {
                const aar::PlantModel plant = aar::parse_plant(body, path);
                text = aar::synth_report(plant, aar::LqrWeights::defaults(plant));
            } else {
                const aar::ScenarioConfig c = aar::load_scenario(path);
                text = aar::synth_report(c.plant, c.effective_weights());
            }
        }
        char* buf = static_cast<char*>(std::malloc(text.size() + 1));
        if (!buf)
            throw std::bad_alloc();
        std::memcpy(buf, text.c_str(), text.size() + 1);
        *report = buf;
        return AAR_OK;
    });
}

void aar_string_free(char* s) { std::free(s); }

aar_status aar_interaction_matrix(double x, double y, double z, double out[12])
{
    AAR_REQUIRE(out, "out is null");
    return guarded([&] {
        const aar::Mat26 L = aar::interaction_matrix({x, y}, z);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 6; ++j)
                out[i * 6 + j] = L(i, j);
        return AAR_OK;
    });
}

aar_status aar_solve_care(size_t n, size_t m, const double* A, const double* B, const double* Q, const double* R,
                          double* P, double* K)
{
    AAR_REQUIRE(n > 0 && m > 0 && A && B && Q && R && P && K, "null pointer or empty dimension");
    return guarded([&] {
        using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        const auto N = static_cast<Eigen::Index>(n), M = static_cast<Eigen::Index>(m);
        const aar::Mat a = Eigen::Map<const RowMat>(A, N, N);
        const aar::Mat b = Eigen::Map<const RowMat>(B, N, M);
        const aar::Mat q = Eigen::Map<const RowMat>(Q, N, N);
        const aar::Mat r = Eigen::Map<const RowMat>(R, M, M);
        const aar::CareSolution sol = aar::solve_care(a, b, q, r);
        Eigen::Map<RowMat>(P, N, N) = sol.P;
        Eigen::Map<RowMat>(K, M, N) = sol.K;
        return AAR_OK;
    });
}

}  // extern "C"
