#include "beamsteer/suite.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace beamsteer::cli {

namespace fs = std::filesystem;
using cfg::format_double;

SuiteManifest parse_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::io_error, "cannot open manifest: " + path);

    SuiteManifest m;
    m.base_dir = fs::path(path).parent_path().string();

    std::set<std::string> names;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const size_t first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;

        std::istringstream ss(line);
        SuiteEntry e;
        ss >> e.name >> e.config_path;
        if (e.name.empty() || e.config_path.empty())
            throw Error(Errc::parse_error, path + ":" + std::to_string(lineno) +
                                               ": expected \"<name> <config> [pass|fail|any]\"");
        std::string expect;
        if (ss >> expect) {
            if (expect != "pass" && expect != "fail" && expect != "any")
                throw Error(Errc::parse_error,
                            path + ":" + std::to_string(lineno) + ": bad expectation \"" + expect +
                                "\" (pass|fail|any)");
            e.expect = expect;
        }
        if (!names.insert(e.name).second)
            throw Error(Errc::validation_error, "duplicate scenario name \"" + e.name + "\"");

        const fs::path cfg_file = fs::path(e.config_path).is_absolute()
                                      ? fs::path(e.config_path)
                                      : fs::path(m.base_dir) / e.config_path;
        if (!fs::exists(cfg_file))
            throw Error(Errc::validation_error,
                        "scenario \"" + e.name + "\": missing config file " + cfg_file.string());
        e.config_path = cfg_file.string();
        m.entries.push_back(e);
    }
    return m;
}

std::string trace_csv(const sim::ScenarioResult& result) {
    std::string out = "iter,t,exL,eyL,exR,eyR,d,theta_e,speed,wx,wy,wz,status\n";
    const size_t n = result.records.size();
    for (size_t i = 0; i < n; ++i) {
        const sim::Record& r = result.records[i];
        out += std::to_string(r.iter);
        for (double v : {r.t, r.ex_l, r.ey_l, r.ex_r, r.ey_r, r.d, r.theta_e, r.speed, r.omega.x,
                         r.omega.y, r.omega.z}) {
            out += ',';
            out += format_double(v);
        }
        out += ',';
        out += (i + 1 == n) ? result.status : "ok";
        out += '\n';
    }
    return out;
}

void emit_trace(const sim::ScenarioResult& result, const fs::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out)
        throw Error(Errc::io_error, "cannot write trace: " + file.string());
    out << trace_csv(result);
}

std::string summary_report(const sim::ScenarioResult& result) {
    std::ostringstream out;
    auto kv = [&](const std::string& k, const std::string& v) { out << k << "=" << v << "\n"; };
    auto kd = [&](const std::string& k, double v) { kv(k, format_double(v)); };

    // no wall-clock values: the report is a pure function of (config, seed)
    kv("status", result.status);
    if (!result.detail.empty()) kv("detail", result.detail);
    kv("completed", result.completed ? "1" : "0");
    kd("iterations", result.records.size());

    const sim::Summary& s = result.summary;
    auto channel = [&](const std::string& name, const sim::ChannelStats& c) {
        kd("mean_" + name, c.mean);
        kd("rms_" + name, c.rms);
        kd("std_" + name, c.stddev);
    };
    channel("d", s.d);
    channel("theta_e", s.theta_e);
    channel("eL", s.err_l);
    channel("eR", s.err_r);
    channel("d_steady", s.d_steady);
    channel("theta_e_steady", s.theta_e_steady);
    kd("max_abs_d", s.max_abs_d);
    kd("final_eL", s.final_err_l);
    kd("final_eR", s.final_err_r);
    kd("converged_iter", s.converged_iter);
    if (s.fit_l.valid) {
        kd("fit_rate_L", s.fit_l.rate);
        kd("fit_r2_L", s.fit_l.r2);
    }
    if (s.fit_r.valid) {
        kd("fit_rate_R", s.fit_r.rate);
        kd("fit_r2_R", s.fit_r.r2);
    }

    std::string why;
    kv("asserts", result.asserts_pass(&why) ? "pass" : "fail");
    if (!why.empty()) kv("asserts_detail", why);

    // effective config, defaults included
    std::istringstream echo(cfg::emit_config(result.config));
    std::string line;
    while (std::getline(echo, line)) {
        const size_t eq = line.find(" = ");
        if (eq == std::string::npos) continue;
        kv("config." + line.substr(0, eq), line.substr(eq + 3));
    }
    return out.str();
}

SuiteReport run_suite(const SuiteManifest& manifest, const fs::path& out_dir) {
    SuiteReport report;
    std::error_code ec;
    fs::create_directories(out_dir, ec);

    for (const SuiteEntry& entry : manifest.entries) {
        SuiteOutcome outcome;
        outcome.name = entry.name;
        bool ran_ok = false;
        bool asserts_ok = false;
        try {
            const sim::ScenarioConfig config = cfg::load_config(entry.config_path);
            sim::ScenarioResult result = sim::run(config);
            outcome.status = result.status;
            std::string why;
            asserts_ok = result.asserts_pass(&why);
            ran_ok = !result.failed();
            if (!why.empty()) outcome.detail = why;

            emit_trace(result, out_dir / (entry.name + ".csv"));
            std::ofstream sum(out_dir / (entry.name + ".summary"), std::ios::binary);
            sum << summary_report(result);
        } catch (const std::exception& e) {
            outcome.status = "error";
            outcome.detail = e.what();
        }

        const bool scenario_good = ran_ok && asserts_ok;
        if (entry.expect == "pass") outcome.passed = scenario_good;
        else if (entry.expect == "fail") outcome.passed = !scenario_good;
        else outcome.passed = true;
        if (!outcome.passed) report.exit_code = 1;
        report.outcomes.push_back(outcome);
    }
    return report;
}

std::filesystem::path output_dir(const std::string& fallback) {
    if (const char* env = std::getenv("BEAMSTEER_OUT"); env && *env) return env;
    return fallback;
}

}  // namespace beamsteer::cli
