// Command-line front end over the C interface.
#include "aar/aar.h"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitFailedDocking = 2;

struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::uint64_t seeds = 20;
    std::string controller;
    std::string turbulence;
    bool bow_wave = false;
    std::vector<double> pose_error;
    std::string gains;
};

int report(aar_status s, const std::string& what)
{
    std::cerr << "aar: " << what << ": " << aar_status_name(s);
    const std::string detail = aar_last_error();
    if (!detail.empty())
        std::cerr << ": " << detail;
    std::cerr << "\n";
    return kExitError;
}

struct ScenarioHandle {
    aar_scenario* p = nullptr;
    ~ScenarioHandle() { aar_scenario_free(p); }
};

struct ResultHandle {
    aar_result* p = nullptr;
    ~ResultHandle() { aar_result_free(p); }
};

struct BatchHandle {
    aar_batch* p = nullptr;
    ~BatchHandle() { aar_batch_free(p); }
};

std::string output_dir(const Options& o)
{
    if (!o.out.empty())
        return o.out;
    if (const char* env = std::getenv("AAR_OUT_DIR"); env && *env)
        return env;
    return ".";
}

// Loads the config and applies overrides in a fixed order; returns the provenance text.
int prepare(const Options& o, ScenarioHandle& h, std::string& provenance)
{
    aar_status s = o.config.empty() ? aar_scenario_default(&h.p) : aar_scenario_load(o.config.c_str(), &h.p);
    if (s != AAR_OK)
        return report(s, o.config.empty() ? "default scenario" : o.config);

    std::string applied;
    if (!o.controller.empty()) {
        s = aar_scenario_set_controller(h.p, o.controller == "pbvs" ? AAR_CONTROLLER_PBVS : AAR_CONTROLLER_IBVS);
        applied += " --controller " + o.controller;
    }
    if (s == AAR_OK && !o.turbulence.empty()) {
        s = aar_scenario_set_turbulence(h.p, o.turbulence == "off" ? 0 : o.turbulence == "1" ? 1 : 2);
        applied += " --turbulence " + o.turbulence;
    }
    if (s == AAR_OK && o.bow_wave) {
        s = aar_scenario_set_bow_wave(h.p, 1);
        applied += " --bow-wave";
    }
    if (s == AAR_OK && !o.pose_error.empty()) {
        s = aar_scenario_set_pose_error(h.p, o.pose_error[0], o.pose_error[1], o.pose_error[2]);
        char buf[128];
        std::snprintf(buf, sizeof buf, " --pose-error %g,%g,%g", o.pose_error[0], o.pose_error[1], o.pose_error[2]);
        applied += buf;
    }
    if (s == AAR_OK && !o.gains.empty()) {
        s = aar_scenario_set_gain_table(h.p, o.gains == "table2" ? 2 : 1);
        applied += " --gains " + o.gains;
    }
    if (s == AAR_OK && o.seed) {
        s = aar_scenario_set_seed(h.p, *o.seed);
        applied += " --seed " + std::to_string(*o.seed);
    }
    if (s != AAR_OK)
        return report(s, "override");
    provenance = std::string("aar ") + aar_version() + " config=" + (o.config.empty() ? "<default>" : o.config) +
                 " overrides=" + (applied.empty() ? "none" : applied.substr(1));
    return kExitOk;
}

int ensure_dir(const std::string& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        std::cerr << "aar: output directory " << dir << " is not writable\n";
        return kExitError;
    }
    return kExitOk;
}

std::string stem(const aar_scenario* sc, std::uint64_t seed)
{
    const char* name = nullptr;
    aar_scenario_name(sc, &name);
    return std::string(name ? name : "scenario") + "-" + std::to_string(seed);
}

int run_one(aar_scenario* sc, std::uint64_t seed, const std::string& dir, const std::string& provenance,
            aar_outcome& outcome, aar_batch* batch)
{
    aar_scenario_set_seed(sc, seed);
    ResultHandle r;
    aar_status s = aar_scenario_run(sc, &r.p);
    if (s != AAR_OK) {
        if (batch) {
            aar_batch_add_error(batch, seed, aar_last_error());
            return report(s, "seed " + std::to_string(seed));
        }
        return report(s, "run");
    }
    const std::string base = (std::filesystem::path(dir) / stem(sc, seed)).string();
    const std::string prov = provenance + " seed=" + std::to_string(seed);
    if ((s = aar_result_write_csv(r.p, (base + ".csv").c_str(), prov.c_str())) != AAR_OK)
        return report(s, base + ".csv");
    if ((s = aar_result_write_outcome(r.p, (base + ".outcome.txt").c_str(), prov.c_str())) != AAR_OK)
        return report(s, base + ".outcome.txt");
    aar_result_outcome(r.p, &outcome);
    if (batch)
        aar_batch_add(batch, seed, r.p);
    return kExitOk;
}

void print_outcome(std::uint64_t seed, const aar_outcome& o)
{
    static const char* reasons[] = {"none", "timeout", "overshoot", "visual_loss", "diverged"};
    std::printf("seed %llu: %s (reason %s) miss %.4f m, closing %.3f m/s, contact %.2f s, peak |e| %.4f\n",
                static_cast<unsigned long long>(seed), o.success ? "docked" : "failed", reasons[o.failure_reason],
                o.miss_distance, o.closing_speed, o.time_of_contact, o.peak_error);
}

int cmd_run(const Options& o)
{
    ScenarioHandle h;
    std::string prov;
    if (int rc = prepare(o, h, prov))
        return rc;
    const std::string dir = output_dir(o);
    if (int rc = ensure_dir(dir))
        return rc;
    std::uint64_t seed = 0;
    aar_scenario_seed(h.p, &seed);
    aar_outcome out{};
    if (int rc = run_one(h.p, seed, dir, prov, out, nullptr))
        return rc;
    print_outcome(seed, out);
    return out.success ? kExitOk : kExitFailedDocking;
}

int cmd_batch(const Options& o)
{
    ScenarioHandle h;
    std::string prov;
    if (int rc = prepare(o, h, prov))
        return rc;
    if (o.seeds == 0) {
        std::cerr << "aar: --seeds must be at least 1\n";
        return kExitError;
    }
    const std::string dir = output_dir(o);
    if (int rc = ensure_dir(dir))
        return rc;
    std::uint64_t first = 0;
    aar_scenario_seed(h.p, &first);
    BatchHandle b;
    if (aar_status s = aar_batch_create(&b.p); s != AAR_OK)
        return report(s, "batch");
    bool all_docked = true, any_error = false;
    for (std::uint64_t k = 0; k < o.seeds; ++k) {
        aar_outcome out{};
        if (run_one(h.p, first + k, dir, prov, out, b.p) != kExitOk) {
            any_error = true;
            continue;
        }
        print_outcome(first + k, out);
        all_docked = all_docked && out.success;
    }
    aar_batch_summary sum{};
    aar_batch_summary_get(b.p, &sum);
    const char* name = nullptr;
    aar_scenario_name(h.p, &name);
    const std::string path = (std::filesystem::path(dir) / (std::string(name) + "-batch.txt")).string();
    if (aar_status s = aar_batch_write_summary(b.p, path.c_str(), prov.c_str()); s != AAR_OK)
        return report(s, path);
    std::printf("success rate %.3f (%zu/%zu), errors %zu, miss mean %.4f m max %.4f m\n", sum.success_rate,
                sum.successes, sum.runs, sum.errors, sum.miss_mean, sum.miss_max);
    if (any_error)
        return kExitError;
    return all_docked ? kExitOk : kExitFailedDocking;
}

int cmd_synth(const Options& o)
{
    char* text = nullptr;
    const aar_status s = aar_synth_file(o.config.empty() ? nullptr : o.config.c_str(), &text);
    if (s != AAR_OK)
        return report(s, "synth");
    std::fputs(text, stdout);
    aar_string_free(text);
    return kExitOk;
}

int cmd_validate(const Options& o)
{
    if (o.config.empty()) {
        std::cerr << "aar: validate needs --config\n";
        return kExitError;
    }
    char* text = nullptr;
    const aar_status s = aar_synth_file(o.config.c_str(), &text);
    aar_string_free(text);
    if (s != AAR_OK)
        return report(s, o.config);
    std::printf("%s: valid\n", o.config.c_str());
    return kExitOk;
}

void add_common(CLI::App* sub, Options& o, bool scenario_flags)
{
    sub->add_option("--config", o.config, "scenario or Riccati problem file (JSON)");
    if (!scenario_flags)
        return;
    sub->add_option("--out", o.out, "output directory (default $AAR_OUT_DIR or .)");
    sub->add_option("--seed", o.seed, "turbulence seed (first seed for batch)");
    sub->add_option("--controller", o.controller, "outer loop")->check(CLI::IsMember({"ibvs", "pbvs"}));
    sub->add_option("--turbulence", o.turbulence, "turbulence level")->check(CLI::IsMember({"off", "1", "2"}));
    sub->add_flag("--bow-wave", o.bow_wave, "enable the bow-wave disturbance");
    sub->add_option("--pose-error", o.pose_error, "camera mount error x,y,z in metres")
        ->delimiter(',')
        ->expected(3);
    sub->add_option("--gains", o.gains, "outer-loop gain table")->check(CLI::IsMember({"table1", "table2"}));
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Probe-drogue docking simulation"};
    app.require_subcommand(1);
    Options o;
    auto* run = app.add_subcommand("run", "simulate one scenario");
    auto* batch = app.add_subcommand("batch", "simulate consecutive seeds");
    auto* synth = app.add_subcommand("synth", "synthesize and print LQR gains");
    auto* validate = app.add_subcommand("validate", "check a config file");
    add_common(run, o, true);
    add_common(batch, o, true);
    batch->add_option("--seeds", o.seeds, "number of seeds");
    add_common(synth, o, false);
    add_common(validate, o, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    if (run->parsed())
        return cmd_run(o);
    if (batch->parsed())
        return cmd_batch(o);
    if (synth->parsed())
        return cmd_synth(o);
    return cmd_validate(o);
}
