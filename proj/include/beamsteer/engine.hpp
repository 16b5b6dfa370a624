#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "beamsteer/hybrid.hpp"

// Deterministic fixed-step closed-loop simulation: scenario assembly,
// explicit-Euler integration at dt = Te, perturbation injection and metric
// computation. A run never moves the spot except through mirror_step +
// intersect (path2d is the pure image-plane case and integrates the
// commanded pixel velocity directly).

namespace beamsteer::sim {

using geom::Vec2;
using geom::Vec3;

enum class Controller { trifocal, path2d, hybrid3d };

struct RigConfig {
    double fx = 900.0, fy = 900.0, cx = 320.0, cy = 240.0;
    Vec3 t_left{-40.0, 35.0, -20.0};   // camera centers in the mirror frame, mm
    Vec3 t_right{40.0, 35.0, -20.0};
    Vec3 pivot{0.0, 0.0, 0.0};
    bool operator==(const RigConfig&) const = default;
};

struct SurfaceConfig {
    std::string kind = "plane";  // plane | sphere | heightfield
    double plane_z = 100.0;
    Vec3 sphere_center{0.0, 0.0, 140.0};
    double sphere_radius = 40.0;
    std::string heightfield_file;
    double scale_amplitude = 1.0;  // >= 1; > 1 makes the surface time-varying
    double scale_period = 1.0;     // s
    bool operator==(const SurfaceConfig&) const = default;
};

struct SpeedProfile {
    std::string kind = "constant";  // constant | sinusoid | steps
    double v = 100.0;               // px/s
    double amp = 0.0;               // sinusoid amplitude, px/s
    double omega = 1.0;             // sinusoid pulsation, rad/s
    std::vector<double> steps;      // step levels over equal time slices

    // commanded speed at time t of a run lasting t_total
    double value(double t, double t_total) const;
    bool operator==(const SpeedProfile&) const = default;
};

struct ScenarioConfig {
    Controller controller = Controller::trifocal;
    RigConfig rig;
    double calib_eps = 0.0;    // relative perturbation of the control rig
    SurfaceConfig surface;
    double noise_sigma = 0.0;  // px
    double te = 0.002;         // s
    int max_iters = 1000;
    std::uint64_t seed = 1;

    double lambda = 0.5;     // trifocal gain, 1/s
    double sing_eps = 1e-8;
    double gamma1 = 1.0;
    double gamma2 = 1.0;
    int window = 32;
    std::string d_dot_mode = "model";  // model | numeric

    Vec3 z0_init{0.0, 0.0, 1.0};
    Vec2 target_offset{0.0, 0.0};  // trifocal target, relative to initial left pixel
    bool has_target_px = false;
    Vec2 target_px{0.0, 0.0};      // absolute left-image target, overrides the offset

    std::string path_file;     // path2d / hybrid3d input curve
    double start_d = 0.0;      // initial lateral offset, px (path2d and hybrid3d)
    double start_theta = 0.0;  // path2d initial heading error, rad

    SpeedProfile speed;
    double stop_tol = 1e-12;   // early stop when max image error falls below
    double joint_limit = 0.6;  // rad

    std::map<std::string, double> asserts;  // embedded assert_* values
    std::string assert_status;              // expected final status tag, "" = unchecked

    bool operator==(const ScenarioConfig&) const = default;
};

struct Record {
    int iter = 0;
    double t = 0.0;
    double ex_l = 0.0, ey_l = 0.0;  // left-image error components, px
    double ex_r = 0.0, ey_r = 0.0;  // right-image error components, px
    double d = 0.0;                 // ground-truth lateral error (left image), px
    double d_right = 0.0;           // right-image lateral error (hybrid runs)
    double theta_e = 0.0;           // rad
    double speed = 0.0;             // commanded speed magnitude
    Vec3 omega;                     // commanded mirror rate (path2d: (0,0,w))
    // not part of the trace CSV:
    Vec3 world;                     // true spot position
    Vec2 px_l, px_r;                // observed pixels

    double err_l() const { return std::hypot(ex_l, ey_l); }
    double err_r() const { return std::hypot(ex_r, ey_r); }
};

struct ExpFit {
    double rate = 0.0;  // per-iteration slope of log||e||
    double r2 = 0.0;
    int window_begin = 0;
    bool valid = false;
};

struct ChannelStats {
    double mean = 0.0;
    double rms = 0.0;
    double stddev = 0.0;  // population form
};

struct Summary {
    int iterations = 0;
    ChannelStats d, theta_e, err_l, err_r;
    ChannelStats d_steady, theta_e_steady;  // records after the first 10%
    ExpFit fit_l, fit_r;
    int converged_iter = -1;  // first iteration with max image error < 0.1 px
    double final_err_l = 0.0;
    double final_err_r = 0.0;
    double max_abs_d = 0.0;
};

struct ScenarioResult {
    ScenarioConfig config;
    std::vector<Record> records;
    Summary summary;
    std::string status = "ok";  // ok | completed | <failure tag>
    std::string detail;
    double elapsed_s = 0.0;
    bool completed = false;

    bool failed() const { return status != "ok" && status != "completed"; }
    // embedded assert_* checks; failure reasons appended to `why` when given
    bool asserts_pass(std::string* why = nullptr) const;
};

ScenarioResult run(const ScenarioConfig& config);

// RMS/STD per channel plus the exponential fit over the post-transient
// window (after the error first drops below 80% of its initial value).
// InsufficientData when fewer than 2 records.
Summary metrics(std::span<const Record> records, double conv_tol = 0.1);

// Every intrinsic and translation entry multiplied by (1 + U(-eps, eps)).
RigConfig perturb_calibration(const RigConfig& rig, double eps, std::mt19937_64& rng);

struct StereoRig {
    geom::CameraModel cam_l, cam_r;
    Vec3 pivot;
    trifocal::TrifocalRig trif;
};

StereoRig build_stereo_rig(const RigConfig& rc);
scene::Surface build_surface(const SurfaceConfig& sc);

}  // namespace beamsteer::sim
