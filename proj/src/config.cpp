#include "beamsteer/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace beamsteer::cfg {

using sim::ScenarioConfig;

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "controller", "focal_length", "principal_point", "t_left", "t_right", "mirror_pivot",
        "z0_init", "calib_eps", "surface", "surface_scale_amplitude", "surface_scale_period",
        "noise_sigma", "Te", "max_iters", "seed", "lambda", "sing_eps", "gamma1", "gamma2",
        "window", "d_dot_mode", "target_offset", "target_px", "path_file", "start_d",
        "start_theta", "speed_profile", "speed_v", "speed_amp", "speed_omega", "speed_steps",
        "stop_tol", "joint_limit", "assert_final_err_px", "assert_min_fit_r2",
        "assert_steady_rms_d", "assert_steady_rms_theta", "assert_max_abs_d", "assert_completed",
        "assert_status",
    };
    return keys;
}

namespace {

[[noreturn]] void parse_fail(int line, int col, const std::string& msg) {
    throw Error(Errc::parse_error,
                "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
}

[[noreturn]] void invalid(const std::string& field, const std::string& msg) {
    throw Error(Errc::validation_error, field + ": " + msg);
}

size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (size_t j = 1; j <= b.size(); ++j) {
            const size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::string suggestion_for(const std::string& key) {
    size_t best = std::string::npos;
    std::string who;
    for (const auto& k : config_keys()) {
        const size_t d = edit_distance(key, k);
        if (d < best) {
            best = d;
            who = k;
        }
    }
    if (best <= std::max<size_t>(2, key.size() / 4)) return " (did you mean \"" + who + "\"?)";
    return "";
}

struct Field {
    std::string value;
    int line = 0;
    int col = 0;
};

double parse_number(const std::string& key, const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v))
        invalid(key, "not a finite number: \"" + text + "\"");
    return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, ',')) out.push_back(parse_number(key, item));
    if (out.empty()) invalid(key, "empty list");
    return out;
}

std::vector<double> parse_fixed(const std::string& key, const std::string& text, size_t n) {
    auto v = parse_list(key, text);
    if (v.size() != n)
        invalid(key, "expected " + std::to_string(n) + " comma-separated values");
    return v;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
    std::map<std::string, Field> fields;
    const std::set<std::string> known(config_keys().begin(), config_keys().end());

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const size_t first = raw.find_first_not_of(" \t");
        if (first == std::string::npos || raw[first] == '#') continue;

        const size_t eq = raw.find('=');
        if (eq == std::string::npos)
            parse_fail(lineno, static_cast<int>(first) + 1, "expected \"key = value\"");

        auto trim = [](std::string s) {
            const size_t a = s.find_first_not_of(" \t");
            const size_t b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(raw.substr(0, eq));
        const std::string value = trim(raw.substr(eq + 1));
        if (key.empty()) parse_fail(lineno, static_cast<int>(first) + 1, "missing key");
        if (!known.count(key))
            parse_fail(lineno, static_cast<int>(first) + 1,
                       "unknown key \"" + key + "\"" + suggestion_for(key));
        if (fields.count(key))
            parse_fail(lineno, static_cast<int>(first) + 1, "duplicate key \"" + key + "\"");
        if (value.empty()) parse_fail(lineno, static_cast<int>(eq) + 2, "missing value");
        fields[key] = {value, lineno, static_cast<int>(eq) + 2};
    }

    ScenarioConfig c;
    auto has = [&](const std::string& k) { return fields.count(k) != 0; };
    auto num = [&](const std::string& k, double dflt) {
        return has(k) ? parse_number(k, fields[k].value) : dflt;
    };

    if (!has("controller")) invalid("controller", "required key is missing");
    const std::string ctrl = fields["controller"].value;
    if (ctrl == "trifocal") c.controller = sim::Controller::trifocal;
    else if (ctrl == "path2d") c.controller = sim::Controller::path2d;
    else if (ctrl == "hybrid3d") c.controller = sim::Controller::hybrid3d;
    else invalid("controller", "must be trifocal, path2d or hybrid3d");

    if (has("focal_length")) {
        const auto v = parse_fixed("focal_length", fields["focal_length"].value, 2);
        c.rig.fx = v[0];
        c.rig.fy = v[1];
    }
    if (has("principal_point")) {
        const auto v = parse_fixed("principal_point", fields["principal_point"].value, 2);
        c.rig.cx = v[0];
        c.rig.cy = v[1];
    }
    auto vec3_of = [&](const std::string& k, geom::Vec3 dflt) {
        if (!has(k)) return dflt;
        const auto v = parse_fixed(k, fields[k].value, 3);
        return geom::Vec3{v[0], v[1], v[2]};
    };
    c.rig.t_left = vec3_of("t_left", c.rig.t_left);
    c.rig.t_right = vec3_of("t_right", c.rig.t_right);
    c.rig.pivot = vec3_of("mirror_pivot", c.rig.pivot);
    c.z0_init = vec3_of("z0_init", c.z0_init);
    c.calib_eps = num("calib_eps", c.calib_eps);

    if (has("surface")) {
        const Field& f = fields["surface"];
        std::istringstream ss(f.value);
        std::string kind;
        ss >> kind;
        std::string args;
        std::getline(ss, args);
        const size_t a = args.find_first_not_of(" \t");
        args = a == std::string::npos ? std::string() : args.substr(a);
        if (kind == "plane") {
            c.surface.kind = "plane";
            c.surface.plane_z = parse_number("surface", args);
        } else if (kind == "sphere") {
            c.surface.kind = "sphere";
            const auto v = parse_fixed("surface", args, 4);
            c.surface.sphere_center = {v[0], v[1], v[2]};
            c.surface.sphere_radius = v[3];
        } else if (kind == "heightfield") {
            c.surface.kind = "heightfield";
            if (args.empty()) invalid("surface", "heightfield needs a CSV path");
            c.surface.heightfield_file = args;
        } else {
            invalid("surface", "must be plane <z>, sphere <cx,cy,cz,r> or heightfield <csv>");
        }
    }
    c.surface.scale_amplitude = num("surface_scale_amplitude", c.surface.scale_amplitude);
    c.surface.scale_period = num("surface_scale_period", c.surface.scale_period);

    c.noise_sigma = num("noise_sigma", c.noise_sigma);
    c.te = num("Te", c.te);
    c.max_iters = static_cast<int>(num("max_iters", c.max_iters));
    c.seed = static_cast<std::uint64_t>(num("seed", static_cast<double>(c.seed)));
    c.lambda = num("lambda", c.lambda);
    c.sing_eps = num("sing_eps", c.sing_eps);
    c.gamma1 = num("gamma1", c.gamma1);
    c.gamma2 = num("gamma2", c.gamma2);
    c.window = static_cast<int>(num("window", c.window));
    if (has("d_dot_mode")) {
        c.d_dot_mode = fields["d_dot_mode"].value;
        if (c.d_dot_mode != "model" && c.d_dot_mode != "numeric")
            invalid("d_dot_mode", "must be model or numeric");
    }

    if (has("target_offset")) {
        const auto v = parse_fixed("target_offset", fields["target_offset"].value, 2);
        c.target_offset = {v[0], v[1]};
    }
    if (has("target_px")) {
        const auto v = parse_fixed("target_px", fields["target_px"].value, 2);
        c.target_px = {v[0], v[1]};
        c.has_target_px = true;
    }
    if (has("path_file")) c.path_file = fields["path_file"].value;
    c.start_d = num("start_d", c.start_d);
    c.start_theta = num("start_theta", c.start_theta);

    if (has("speed_profile")) {
        c.speed.kind = fields["speed_profile"].value;
        if (c.speed.kind != "constant" && c.speed.kind != "sinusoid" && c.speed.kind != "steps")
            invalid("speed_profile", "must be constant, sinusoid or steps");
    }
    c.speed.v = num("speed_v", c.speed.v);
    c.speed.amp = num("speed_amp", c.speed.amp);
    c.speed.omega = num("speed_omega", c.speed.omega);
    if (has("speed_steps")) c.speed.steps = parse_list("speed_steps", fields["speed_steps"].value);

    c.stop_tol = num("stop_tol", c.stop_tol);
    c.joint_limit = num("joint_limit", c.joint_limit);

    for (const auto& k : {"assert_final_err_px", "assert_min_fit_r2", "assert_steady_rms_d",
                          "assert_steady_rms_theta", "assert_max_abs_d", "assert_completed"})
        if (has(k)) c.asserts[k] = parse_number(k, fields[k].value);
    if (has("assert_status")) c.assert_status = fields["assert_status"].value;

    // validation
    if (!(c.te > 0.0)) invalid("Te", "must be > 0");
    if (c.max_iters < 1) invalid("max_iters", "must be >= 1");
    if (!(c.lambda > 0.0)) invalid("lambda", "must be > 0");
    if (!(c.sing_eps > 0.0 && c.sing_eps < 1e-3)) invalid("sing_eps", "must be in (0, 1e-3)");
    if (!(c.gamma1 > 0.0)) invalid("gamma1", "must be > 0");
    if (!(c.gamma2 > 0.0)) invalid("gamma2", "must be > 0");
    if (c.window < 2) invalid("window", "must be >= 2");
    if (c.noise_sigma < 0.0) invalid("noise_sigma", "must be >= 0");
    if (c.calib_eps < 0.0 || c.calib_eps >= 1.0) invalid("calib_eps", "must be in [0, 1)");
    if (c.surface.scale_amplitude < 1.0) invalid("surface_scale_amplitude", "must be >= 1");
    if (!(c.surface.scale_period > 0.0)) invalid("surface_scale_period", "must be > 0");
    if (c.surface.kind == "sphere" && !(c.surface.sphere_radius > 0.0))
        invalid("surface", "sphere radius must be > 0");
    if (!(c.joint_limit > 0.0)) invalid("joint_limit", "must be > 0");
    if (c.stop_tol < 0.0) invalid("stop_tol", "must be >= 0");
    if (c.speed.kind == "constant" && c.speed.v == 0.0) invalid("speed_v", "must be nonzero");
    if (c.speed.kind == "steps" && c.speed.steps.empty())
        invalid("speed_steps", "required for the steps profile");
    if (c.controller != sim::Controller::trifocal && c.path_file.empty())
        invalid("path_file", "required for path2d and hybrid3d");
    if (c.z0_init.norm() < 1e-12) invalid("z0_init", "must be nonzero");
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::io_error, "cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string emit_config(const ScenarioConfig& c) {
    std::ostringstream out;
    auto kv = [&](const std::string& k, const std::string& v) { out << k << " = " << v << "\n"; };
    auto kd = [&](const std::string& k, double v) { kv(k, format_double(v)); };
    auto k2 = [&](const std::string& k, const geom::Vec2& v) {
        kv(k, format_double(v.x) + "," + format_double(v.y));
    };
    auto k3 = [&](const std::string& k, const geom::Vec3& v) {
        kv(k, format_double(v.x) + "," + format_double(v.y) + "," + format_double(v.z));
    };

    switch (c.controller) {
        case sim::Controller::trifocal: kv("controller", "trifocal"); break;
        case sim::Controller::path2d: kv("controller", "path2d"); break;
        case sim::Controller::hybrid3d: kv("controller", "hybrid3d"); break;
    }
    k2("focal_length", {c.rig.fx, c.rig.fy});
    k2("principal_point", {c.rig.cx, c.rig.cy});
    k3("t_left", c.rig.t_left);
    k3("t_right", c.rig.t_right);
    k3("mirror_pivot", c.rig.pivot);
    k3("z0_init", c.z0_init);
    kd("calib_eps", c.calib_eps);
    if (c.surface.kind == "plane") {
        kv("surface", "plane " + format_double(c.surface.plane_z));
    } else if (c.surface.kind == "sphere") {
        kv("surface", "sphere " + format_double(c.surface.sphere_center.x) + "," +
                          format_double(c.surface.sphere_center.y) + "," +
                          format_double(c.surface.sphere_center.z) + "," +
                          format_double(c.surface.sphere_radius));
    } else {
        kv("surface", "heightfield " + c.surface.heightfield_file);
    }
    kd("surface_scale_amplitude", c.surface.scale_amplitude);
    kd("surface_scale_period", c.surface.scale_period);
    kd("noise_sigma", c.noise_sigma);
    kd("Te", c.te);
    kd("max_iters", c.max_iters);
    kd("seed", static_cast<double>(c.seed));
    kd("lambda", c.lambda);
    kd("sing_eps", c.sing_eps);
    kd("gamma1", c.gamma1);
    kd("gamma2", c.gamma2);
    kd("window", c.window);
    kv("d_dot_mode", c.d_dot_mode);
    k2("target_offset", c.target_offset);
    if (c.has_target_px) k2("target_px", c.target_px);
    if (!c.path_file.empty()) kv("path_file", c.path_file);
    kd("start_d", c.start_d);
    kd("start_theta", c.start_theta);
    kv("speed_profile", c.speed.kind);
    kd("speed_v", c.speed.v);
    kd("speed_amp", c.speed.amp);
    kd("speed_omega", c.speed.omega);
    if (!c.speed.steps.empty()) {
        std::string s;
        for (size_t i = 0; i < c.speed.steps.size(); ++i)
            s += (i ? "," : "") + format_double(c.speed.steps[i]);
        kv("speed_steps", s);
    }
    kd("stop_tol", c.stop_tol);
    kd("joint_limit", c.joint_limit);
    for (const auto& [k, v] : c.asserts) kd(k, v);
    if (!c.assert_status.empty()) kv("assert_status", c.assert_status);
    return out.str();
}

}  // namespace beamsteer::cfg
