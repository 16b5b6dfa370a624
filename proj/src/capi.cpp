#include "beamsteer.h"

#include <cstring>
#include <sstream>

#include "beamsteer/bench.hpp"
#include "beamsteer/checks.hpp"
#include "beamsteer/suite.hpp"

using namespace beamsteer;

struct bs_scenario {
    sim::ScenarioConfig config;
};

struct bs_result {
    sim::ScenarioResult result;
};

namespace {

thread_local std::string g_last_error;

bs_status status_of(const Error& e) {
    g_last_error = e.what();
    switch (e.code()) {
        case Errc::parse_error: return BS_ERR_PARSE;
        case Errc::validation_error: return BS_ERR_VALIDATION;
        case Errc::io_error: return BS_ERR_IO;
        default: return BS_ERR_RUNTIME;
    }
}

bs_status fill(const std::string& text, char* buf, size_t cap, size_t* len) {
    if (len) *len = text.size() + 1;
    if (buf && cap >= text.size() + 1) std::memcpy(buf, text.c_str(), text.size() + 1);
    return BS_OK;
}

template <class F>
bs_status guarded(F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        return status_of(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return BS_ERR_RUNTIME;
    }
}

}  // namespace

extern "C" {

const char* bs_version(void) { return "0.1.0"; }

const char* bs_last_error(void) { return g_last_error.c_str(); }

bs_status bs_scenario_parse(const char* text, bs_scenario** out) {
    if (!text || !out) {
        g_last_error = "null argument";
        return BS_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        *out = new bs_scenario{cfg::parse_config(text)};
        return BS_OK;
    });
}

bs_status bs_scenario_load(const char* path, bs_scenario** out) {
    if (!path || !out) {
        g_last_error = "null argument";
        return BS_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        *out = new bs_scenario{cfg::load_config(path)};
        return BS_OK;
    });
}

void bs_scenario_free(bs_scenario* s) { delete s; }

bs_status bs_scenario_echo(const bs_scenario* s, char* buf, size_t cap, size_t* len) {
    if (!s) {
        g_last_error = "null scenario";
        return BS_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { return fill(cfg::emit_config(s->config), buf, cap, len); });
}

bs_status bs_scenario_run(const bs_scenario* s, bs_result** out) {
    if (!s || !out) {
        g_last_error = "null argument";
        return BS_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        *out = new bs_result{sim::run(s->config)};
        return BS_OK;
    });
}

void bs_result_free(bs_result* r) { delete r; }

int bs_result_ok(const bs_result* r) { return r && !r->result.failed() ? 1 : 0; }

int bs_result_asserts_ok(const bs_result* r) { return r && r->result.asserts_pass() ? 1 : 0; }

size_t bs_result_iterations(const bs_result* r) { return r ? r->result.records.size() : 0; }

bs_status bs_result_status(const bs_result* r, char* buf, size_t cap, size_t* len) {
    if (!r) {
        g_last_error = "null result";
        return BS_ERR_INVALID_ARGUMENT;
    }
    return fill(r->result.status, buf, cap, len);
}

bs_status bs_result_summary(const bs_result* r, char* buf, size_t cap, size_t* len) {
    if (!r) {
        g_last_error = "null result";
        return BS_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { return fill(cli::summary_report(r->result), buf, cap, len); });
}

bs_status bs_result_write_csv(const bs_result* r, const char* path) {
    if (!r || !path) {
        g_last_error = "null argument";
        return BS_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        cli::emit_trace(r->result, path);
        return BS_OK;
    });
}

void bs_string_free(char* s) { delete[] s; }

namespace {

char* alloc_string(const std::string& text) {
    char* out = new char[text.size() + 1];
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

}  // namespace

bs_status bs_suite_run(const char* manifest_path, const char* out_dir, char** report,
                       int* exit_code) {
    if (!manifest_path || !exit_code) {
        g_last_error = "null argument";
        return BS_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        const auto manifest = cli::parse_manifest(manifest_path);
        const auto dir = out_dir && *out_dir ? std::filesystem::path(out_dir) : cli::output_dir();
        const auto result = cli::run_suite(manifest, dir);
        *exit_code = result.exit_code;
        std::ostringstream msg;
        for (const auto& o : result.outcomes)
            msg << (o.passed ? "pass" : "FAIL") << "  " << o.name << "  [" << o.status << "]"
                << (o.detail.empty() ? "" : "  " + o.detail) << "\n";
        if (report) *report = alloc_string(msg.str());
        return BS_OK;
    });
}

bs_status bs_checks_run(char** report, int* failures) {
    return guarded([&] {
        int fails = 0;
        std::ostringstream out;
        for (const auto& c : checks::run_all()) {
            out << (c.pass ? "pass" : "FAIL") << "  " << c.name << "  (" << c.detail << ", "
                << c.seconds << " s)\n";
            if (!c.pass) ++fails;
        }
        if (failures) *failures = fails;
        if (report) *report = alloc_string(out.str());
        return BS_OK;
    });
}

bs_status bs_bench_run(char** report) {
    return guarded([&] {
        if (report) *report = alloc_string(bench::bench_report());
        return BS_OK;
    });
}

}  // extern "C"
