#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "beamsteer/config.hpp"

// Batch front-end: suite manifests, per-run CSV traces and key=value
// summaries. Every output is reproducible from (config, seed) alone.

namespace beamsteer::cli {

struct SuiteEntry {
    std::string name;
    std::string config_path;
    std::string expect = "pass";  // pass | fail | any
};

struct SuiteManifest {
    std::vector<SuiteEntry> entries;
    std::string base_dir;  // manifest directory; relative config paths resolve here
};

// Manifest format: one "<name> <config-path> [pass|fail|any]" per line,
// `#` comments. Names must be unique and every referenced file must exist.
SuiteManifest parse_manifest(const std::string& path);

// CSV trace, header iter,t,exL,eyL,exR,eyR,d,theta_e,speed,wx,wy,wz,status.
// Floats in shortest round-trip decimal. The last row carries the run's
// final status tag; earlier rows are "ok".
std::string trace_csv(const sim::ScenarioResult& result);
void emit_trace(const sim::ScenarioResult& result, const std::filesystem::path& file);

// Line-oriented key=value report: run outcome, summary statistics and the
// full effective config (config.* keys) for provenance.
std::string summary_report(const sim::ScenarioResult& result);

struct SuiteOutcome {
    std::string name;
    std::string status;
    bool passed = false;
    std::string detail;
};

struct SuiteReport {
    std::vector<SuiteOutcome> outcomes;
    int exit_code = 0;
};

// Runs every scenario, writing <name>.csv and <name>.summary under out_dir.
// Exit code is nonzero iff an expected-pass scenario fails its embedded
// assertions (or errors), or an expected-fail scenario succeeds. I/O or
// parse errors in one scenario do not abort the rest.
SuiteReport run_suite(const SuiteManifest& manifest, const std::filesystem::path& out_dir);

// BEAMSTEER_OUT, or `fallback` when unset.
std::filesystem::path output_dir(const std::string& fallback = "beamsteer_out");

}  // namespace beamsteer::cli
