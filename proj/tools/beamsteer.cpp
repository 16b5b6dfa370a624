// beamsteer command-line front-end. Talks to the core exclusively through
// the C API in beamsteer.h.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "beamsteer.h"

namespace {

int cmd_run(const std::string& manifest, const std::string& out_dir) {
    int exit_code = 0;
    char* report = nullptr;
    const char* dir = out_dir.empty() ? nullptr : out_dir.c_str();
    if (bs_suite_run(manifest.c_str(), dir, &report, &exit_code) != BS_OK) {
        std::fprintf(stderr, "error: %s\n", bs_last_error());
        return 2;
    }
    std::fputs(report, stdout);
    if (*report == '\0') std::fprintf(stderr, "warning: empty manifest\n");
    bs_string_free(report);
    return exit_code;
}

int cmd_run_one(const std::string& config_path, const std::string& out_dir) {
    bs_scenario* scenario = nullptr;
    if (bs_scenario_load(config_path.c_str(), &scenario) != BS_OK) {
        std::fprintf(stderr, "error: %s\n", bs_last_error());
        return 2;
    }
    bs_result* result = nullptr;
    if (bs_scenario_run(scenario, &result) != BS_OK) {
        std::fprintf(stderr, "error: %s\n", bs_last_error());
        bs_scenario_free(scenario);
        return 2;
    }

    std::string base = config_path;
    if (const size_t slash = base.find_last_of("/\\"); slash != std::string::npos)
        base = base.substr(slash + 1);
    if (const size_t dot = base.find_last_of('.'); dot != std::string::npos)
        base = base.substr(0, dot);
    const std::string dir = out_dir.empty() ? "." : out_dir;
    const std::string csv = dir + "/" + base + ".csv";
    if (bs_result_write_csv(result, csv.c_str()) != BS_OK)
        std::fprintf(stderr, "error: %s\n", bs_last_error());

    size_t need = 0;
    bs_result_summary(result, nullptr, 0, &need);
    std::string summary(need, '\0');
    bs_result_summary(result, summary.data(), summary.size(), &need);
    summary.resize(need ? need - 1 : 0);
    std::fputs(summary.c_str(), stdout);
    std::printf("trace=%s\n", csv.c_str());

    const int rc = (bs_result_ok(result) && bs_result_asserts_ok(result)) ? 0 : 1;
    bs_result_free(result);
    bs_scenario_free(scenario);
    return rc;
}

int cmd_check() {
    int failures = 0;
    char* report = nullptr;
    if (bs_checks_run(&report, &failures) != BS_OK) {
        std::fprintf(stderr, "error: %s\n", bs_last_error());
        return 2;
    }
    std::fputs(report, stdout);
    bs_string_free(report);
    return failures == 0 ? 0 : 1;
}

int cmd_bench() {
    char* report = nullptr;
    if (bs_bench_run(&report) != BS_OK) {
        std::fprintf(stderr, "error: %s\n", bs_last_error());
        return 2;
    }
    std::fputs(report, stdout);
    bs_string_free(report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"beamsteer: laser steering simulation and control toolkit"};
    app.require_subcommand(1);

    std::string manifest, config_path, out_dir;

    auto* run = app.add_subcommand("run", "run a suite manifest");
    run->add_option("manifest", manifest, "suite manifest file")->required();
    run->add_option("-o,--out", out_dir, "output directory (default BEAMSTEER_OUT or ./beamsteer_out)");

    auto* run_one = app.add_subcommand("run-one", "run a single scenario config");
    run_one->add_option("config", config_path, "scenario config file")->required();
    run_one->add_option("-o,--out", out_dir, "output directory (default: current)");

    app.add_subcommand("check", "run the invariant suites");
    app.add_subcommand("bench", "measure control-step cost vs the published timings");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(manifest, out_dir);
    if (run_one->parsed()) return cmd_run_one(config_path, out_dir);
    if (app.get_subcommand("check")->parsed()) return cmd_check();
    return cmd_bench();
}
