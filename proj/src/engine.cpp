#include "beamsteer/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace beamsteer::sim {

double SpeedProfile::value(double t, double t_total) const {
    if (kind == "sinusoid") return v + amp * std::sin(omega * t);
    if (kind == "steps") {
        if (steps.empty()) return v;
        const double frac = t_total > 0.0 ? std::clamp(t / t_total, 0.0, 1.0) : 0.0;
        const size_t idx = std::min(static_cast<size_t>(frac * steps.size()), steps.size() - 1);
        return steps[idx];
    }
    return v;
}

StereoRig build_stereo_rig(const RigConfig& rc) {
    const geom::Intrinsics k{rc.fx, rc.fy, rc.cx, rc.cy};
    StereoRig rig;
    rig.cam_l = geom::CameraModel::looking(k, geom::Mat3::identity(), rc.t_left);
    rig.cam_r = geom::CameraModel::looking(k, geom::Mat3::identity(), rc.t_right);
    rig.pivot = rc.pivot;
    rig.trif = trifocal::make_rig(rig.cam_l, rig.cam_r, rc.pivot);
    return rig;
}

scene::Surface build_surface(const SurfaceConfig& sc) {
    scene::Surface base;
    Vec3 anchor;
    if (sc.kind == "plane") {
        base.shape = scene::Plane{{0.0, 0.0, sc.plane_z}, {0.0, 0.0, 1.0}};
        anchor = {0.0, 0.0, sc.plane_z};
    } else if (sc.kind == "sphere") {
        base.shape = scene::Sphere{sc.sphere_center, sc.sphere_radius};
        // breathe about the pole facing the rig so the viewed patch scales
        // without sliding out from under the beam
        anchor = sc.sphere_center +
                 sc.sphere_radius * (Vec3{0, 0, 0} - sc.sphere_center).normalized();
    } else if (sc.kind == "heightfield") {
        auto hf = scene::load_heightfield_csv(sc.heightfield_file);
        anchor = {0.5 * (hf.xs.front() + hf.xs.back()), 0.5 * (hf.ys.front() + hf.ys.back()), 0.0};
        base.shape = std::move(hf);
    } else {
        throw Error(Errc::validation_error, "surface: unknown kind \"" + sc.kind + "\"");
    }
    if (sc.scale_amplitude > 1.0) {
        scene::TimeVarying tv;
        tv.base = std::make_shared<scene::Surface>(std::move(base));
        tv.amplitude = sc.scale_amplitude;
        tv.period = sc.scale_period;
        tv.anchor = anchor;
        scene::Surface s;
        s.shape = std::move(tv);
        return s;
    }
    return base;
}

RigConfig perturb_calibration(const RigConfig& rig, double eps, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-eps, eps);
    auto jitter = [&](double v) { return v * (1.0 + u(rng)); };
    RigConfig out = rig;
    out.fx = jitter(rig.fx);
    out.fy = jitter(rig.fy);
    out.cx = jitter(rig.cx);
    out.cy = jitter(rig.cy);
    out.t_left = {jitter(rig.t_left.x), jitter(rig.t_left.y), jitter(rig.t_left.z)};
    out.t_right = {jitter(rig.t_right.x), jitter(rig.t_right.y), jitter(rig.t_right.z)};
    return out;
}

namespace {

ChannelStats stats_of(std::span<const double> xs) {
    ChannelStats c;
    if (xs.empty()) return c;
    double sum = 0.0, sq = 0.0;
    for (double x : xs) {
        sum += x;
        sq += x * x;
    }
    const double n = static_cast<double>(xs.size());
    c.mean = sum / n;
    c.rms = std::sqrt(sq / n);
    c.stddev = std::sqrt(std::max(0.0, sq / n - c.mean * c.mean));
    return c;
}

ExpFit fit_exponential(std::span<const double> errs) {
    ExpFit fit;
    if (errs.size() < 3 || errs[0] <= 0.0) return fit;
    size_t begin = 0;
    while (begin < errs.size() && errs[begin] > 0.8 * errs[0]) ++begin;
    std::vector<double> ks, ys;
    for (size_t k = begin; k < errs.size(); ++k) {
        if (errs[k] <= 0.0) break;
        ks.push_back(static_cast<double>(k));
        ys.push_back(std::log(errs[k]));
    }
    if (ks.size() < 3) return fit;

    const double n = static_cast<double>(ks.size());
    double sk = 0.0, sy = 0.0, skk = 0.0, sky = 0.0;
    for (size_t i = 0; i < ks.size(); ++i) {
        sk += ks[i];
        sy += ys[i];
        skk += ks[i] * ks[i];
        sky += ks[i] * ys[i];
    }
    const double denom = n * skk - sk * sk;
    if (denom == 0.0) return fit;
    const double slope = (n * sky - sk * sy) / denom;
    const double intercept = (sy - slope * sk) / n;

    double ss_res = 0.0, ss_tot = 0.0;
    const double ymean = sy / n;
    for (size_t i = 0; i < ks.size(); ++i) {
        const double pred = intercept + slope * ks[i];
        ss_res += (ys[i] - pred) * (ys[i] - pred);
        ss_tot += (ys[i] - ymean) * (ys[i] - ymean);
    }
    fit.rate = slope;
    fit.r2 = ss_tot < 1e-30 ? 1.0 : 1.0 - ss_res / ss_tot;
    fit.window_begin = static_cast<int>(begin);
    fit.valid = true;
    return fit;
}

}  // namespace

Summary metrics(std::span<const Record> records, double conv_tol) {
    if (records.size() < 2)
        throw Error(Errc::insufficient_data, "metrics need at least 2 records");

    Summary s;
    s.iterations = static_cast<int>(records.size());

    std::vector<double> d, th, el, er;
    d.reserve(records.size());
    for (const Record& r : records) {
        d.push_back(r.d);
        th.push_back(r.theta_e);
        el.push_back(r.err_l());
        er.push_back(r.err_r());
        s.max_abs_d = std::max({s.max_abs_d, std::abs(r.d), std::abs(r.d_right)});
        if (s.converged_iter < 0 && std::max(r.err_l(), r.err_r()) < conv_tol)
            s.converged_iter = r.iter;
    }
    s.d = stats_of(d);
    s.theta_e = stats_of(th);
    s.err_l = stats_of(el);
    s.err_r = stats_of(er);

    const size_t skip = records.size() / 10;
    s.d_steady = stats_of(std::span(d).subspan(skip));
    s.theta_e_steady = stats_of(std::span(th).subspan(skip));

    s.fit_l = fit_exponential(el);
    s.fit_r = fit_exponential(er);
    s.final_err_l = records.back().err_l();
    s.final_err_r = records.back().err_r();
    return s;
}

bool ScenarioResult::asserts_pass(std::string* why) const {
    bool ok = true;
    auto fail = [&](const std::string& msg) {
        ok = false;
        if (why) {
            if (!why->empty()) *why += "; ";
            *why += msg;
        }
    };
    for (const auto& [key, value] : config.asserts) {
        if (key == "assert_final_err_px") {
            const double e = std::max(summary.final_err_l, summary.final_err_r);
            if (!(e < value)) fail(key + ": " + std::to_string(e) + " !< " + std::to_string(value));
        } else if (key == "assert_min_fit_r2") {
            const double r2 = std::min(summary.fit_l.r2, summary.fit_r.r2);
            if (!summary.fit_l.valid || !summary.fit_r.valid || !(r2 >= value))
                fail(key + ": " + std::to_string(r2) + " !>= " + std::to_string(value));
        } else if (key == "assert_steady_rms_d") {
            if (!(summary.d_steady.rms <= value))
                fail(key + ": " + std::to_string(summary.d_steady.rms) + " !<= " +
                     std::to_string(value));
        } else if (key == "assert_steady_rms_theta") {
            if (!(summary.theta_e_steady.rms <= value))
                fail(key + ": " + std::to_string(summary.theta_e_steady.rms) + " !<= " +
                     std::to_string(value));
        } else if (key == "assert_max_abs_d") {
            if (!(summary.max_abs_d < value))
                fail(key + ": " + std::to_string(summary.max_abs_d) + " !< " +
                     std::to_string(value));
        } else if (key == "assert_completed") {
            if (completed != (value != 0.0)) fail(key + ": run did not complete");
        }
    }
    if (!config.assert_status.empty() && status != config.assert_status)
        fail("assert_status: got \"" + status + "\", expected \"" + config.assert_status + "\"");
    return ok;
}

namespace {

struct LoopContext {
    const ScenarioConfig& cfg;
    StereoRig truth;
    StereoRig ctrl;
    scene::Surface surface;
    std::mt19937_64 rng_noise;
    scene::MirrorModel mirror_model;
    double q1 = 0.0, q2 = 0.0;  // integrated joint angles

    explicit LoopContext(const ScenarioConfig& c)
        : cfg(c),
          truth(build_stereo_rig(c.rig)),
          ctrl(truth),
          surface(build_surface(c.surface)),
          rng_noise(c.seed),
          mirror_model(scene::MirrorModel::default_for(c.z0_init, c.joint_limit)) {
        if (c.calib_eps > 0.0) {
            std::mt19937_64 rng_pert(c.seed ^ 0x9e3779b97f4a7c15ULL);
            ctrl = build_stereo_rig(perturb_calibration(c.rig, c.calib_eps, rng_pert));
        }
    }

    // integrates joint angles; throws JointLimit past the configured range
    void track_joints(const Vec3& omega) {
        const auto rates = scene::joint_rates(mirror_model, omega);
        q1 += rates.q1 * cfg.te;
        q2 += rates.q2 * cfg.te;
        if (std::abs(q1) > mirror_model.joint_limit || std::abs(q2) > mirror_model.joint_limit)
            throw Error(Errc::joint_limit, "mirror joint limit exceeded");
    }
};

void finish(ScenarioResult& res, double conv_tol = 0.1) {
    if (res.records.size() >= 2) {
        res.summary = metrics(res.records, conv_tol);
    } else if (res.records.size() == 1) {
        // too short for statistics, but the terminal state is still a fact
        const Record& r = res.records.front();
        res.summary.iterations = 1;
        res.summary.final_err_l = r.err_l();
        res.summary.final_err_r = r.err_r();
        res.summary.max_abs_d = std::max(std::abs(r.d), std::abs(r.d_right));
        if (std::max(r.err_l(), r.err_r()) < conv_tol) res.summary.converged_iter = r.iter;
    }
    if (res.status == "ok" && res.completed) res.status = "completed";
}

ScenarioResult run_trifocal(const ScenarioConfig& cfg) {
    ScenarioResult res;
    res.config = cfg;
    LoopContext ctx(cfg);

    scene::MirrorState mirror{cfg.rig.pivot, cfg.z0_init.normalized()};
    trifocal::ServoGains gains{cfg.lambda, cfg.te, cfg.sing_eps};
    trifocal::BaselineMonitor monitor;

    Vec2 tgt_l, tgt_r;
    trifocal::TargetPixels targets;
    try {
        // target: left pixel (given or initial + offset), right pixel = exact
        // projection of the desired world point
        const Vec3 world0 = scene::intersect(ctx.surface, mirror.pivot, mirror.z0, 0.0);
        const Vec2 p0l = geom::project(ctx.truth.cam_l, world0).affine();
        tgt_l = cfg.has_target_px ? cfg.target_px : p0l + cfg.target_offset;
        const Vec3 ray = geom::ray_direction(ctx.truth.cam_l, geom::HomogPixel::from(tgt_l));
        const Vec3 world_star = scene::intersect(ctx.surface, ctx.truth.cam_l.center(), ray, 0.0);
        tgt_r = geom::project(ctx.truth.cam_r, world_star).affine();
        targets.p_l = geom::HomogPixel::from(tgt_l);
        targets.p_r = geom::HomogPixel::from(tgt_r);

        for (int k = 0; k < cfg.max_iters; ++k) {
            const double t = k * cfg.te;
            const auto obs = scene::observe_spot(ctx.surface, t, mirror, ctx.truth.cam_l,
                                                 ctx.truth.cam_r, cfg.noise_sigma, ctx.rng_noise);
            const Vec2 pl = geom::project(ctx.truth.cam_l, obs.world).affine();
            const Vec2 pr = geom::project(ctx.truth.cam_r, obs.world).affine();

            const auto h_l = trifocal::h_of(ctx.ctrl.trif.f0l, obs.p_l);
            const auto h_r = trifocal::h_of(ctx.ctrl.trif.f0r, obs.p_r);
            if (monitor.crossed(h_l, h_r))
                throw Error(Errc::baseline_singularity, "spot crossed the baseline plane");

            const Vec3 omega = trifocal::servo_step(ctx.ctrl.trif, obs, targets, gains);
            ctx.track_joints(omega);

            Record rec;
            rec.iter = k + 1;
            rec.t = t;
            rec.ex_l = pl.x - tgt_l.x;
            rec.ey_l = pl.y - tgt_l.y;
            rec.ex_r = pr.x - tgt_r.x;
            rec.ey_r = pr.y - tgt_r.y;
            rec.omega = omega;
            rec.world = obs.world;
            rec.px_l = obs.p_l.normalized().affine();
            rec.px_r = obs.p_r.normalized().affine();
            res.records.push_back(rec);

            if (std::max(rec.err_l(), rec.err_r()) <= cfg.stop_tol) break;
            mirror = scene::mirror_step(mirror, omega, cfg.te);
        }
    } catch (const Error& e) {
        res.status = errc_name(e.code());
        res.detail = e.what();
    }
    finish(res);
    return res;
}

ScenarioResult run_path2d(const ScenarioConfig& cfg) {
    ScenarioResult res;
    res.config = cfg;

    const path::PathCurve curve = path::load_path_csv(cfg.path_file);
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, cfg.noise_sigma);
    const double t_total = cfg.max_iters * cfg.te;

    // place the spot relative to the first segment's frame
    const Vec2 x0 = (curve.samples[1].pos - curve.samples[0].pos).normalized();
    const Vec2 y0 = x0.perp();
    Vec2 p_true = curve.samples[0].pos + y0 * cfg.start_d;
    Vec2 v_dir = x0 * std::cos(cfg.start_theta) + y0 * std::sin(cfg.start_theta);

    follow::FollowGains gains{cfg.gamma1, cfg.gamma2, cfg.speed.v, cfg.te};
    double s_prev = 0.0;
    double s_dot_prev = cfg.speed.value(0.0, t_total);
    double d_meas_prev = 0.0;
    bool have_d_prev = false;

    try {
        for (int k = 0; k < cfg.max_iters; ++k) {
            const double t = k * cfg.te;
            gains.v = cfg.speed.value(t, t_total);

            Vec2 p_meas = p_true;
            if (cfg.noise_sigma > 0.0) {
                p_meas.x += gauss(rng);
                p_meas.y += gauss(rng);
            }
            std::optional<double> d_dot;
            if (cfg.d_dot_mode == "numeric" && have_d_prev) {
                // previous measured d differenced against the incoming projection
                const auto probe = path::project_onto_path(
                    p_meas, curve, path::predict_abscissa(s_prev, s_dot_prev, cfg.te, curve),
                    cfg.window);
                d_dot = (probe.d - d_meas_prev) / cfg.te;
            }
            const auto step = follow::follow_step(p_meas, v_dir, curve, gains, s_prev, s_dot_prev,
                                                  cfg.window, d_dot);

            const auto proj_true = path::project_onto_path(p_true, curve, step.state.s, cfg.window);
            Record rec;
            rec.iter = k + 1;
            rec.t = t;
            rec.ex_l = p_true.x - proj_true.foot.x;
            rec.ey_l = p_true.y - proj_true.foot.y;
            rec.d = proj_true.d;
            rec.theta_e = path::orientation_error(v_dir, proj_true.frame);
            rec.speed = gains.v;
            rec.omega = {0.0, 0.0, step.omega};
            rec.world = {p_true.x, p_true.y, 0.0};
            rec.px_l = p_meas;
            res.records.push_back(rec);

            if (step.completed) {
                res.completed = true;
                break;
            }
            p_true = p_true + step.velocity * cfg.te;
            v_dir = step.v_dir;
            s_prev = step.state.s;
            s_dot_prev = step.s_dot;
            d_meas_prev = step.state.d;
            have_d_prev = true;
        }
    } catch (const Error& e) {
        res.status = errc_name(e.code());
        res.detail = e.what();
    }
    finish(res);
    return res;
}

void hybrid_loop(ScenarioResult& res, LoopContext& ctx, const ScenarioConfig& cfg,
                 const path::PathCurve& curve_l) {
    // path transfer is the offline, accurately calibrated step: ground truth
    auto pair =
        hybrid::transfer_path(curve_l, ctx.surface, ctx.truth.cam_l, ctx.truth.cam_r, 0.0);

    // On a deforming scene the drawn curve is material: its points ride the
    // surface, and both image curves are reprojected every iteration.
    const bool breathing = std::holds_alternative<scene::TimeVarying>(ctx.surface.shape);
    const std::vector<Vec3> material0 = pair.world;
    auto pair_at = [&](double time) {
        const auto& tv = std::get<scene::TimeVarying>(ctx.surface.shape);
        const double k = tv.scale_at(time);
        std::vector<Vec2> pl, pr;
        pl.reserve(material0.size());
        pr.reserve(material0.size());
        hybrid::StereoPathPair p;
        p.world.reserve(material0.size());
        for (const Vec3& x0 : material0) {
            const Vec3 x = tv.anchor + (x0 - tv.anchor) * k;
            p.world.push_back(x);
            pl.push_back(geom::project(ctx.truth.cam_l, x).affine());
            pr.push_back(geom::project(ctx.truth.cam_r, x).affine());
        }
        p.left = path::build_path(pl, curve_l.closed);
        p.right = path::build_path(pr, curve_l.closed);
        return p;
    };

    // optional lateral start offset, applied in the left image
    Vec3 start_world = pair.world.front();
    if (cfg.start_d != 0.0) {
        const Vec2 x0 = (pair.left.samples[1].pos - pair.left.samples[0].pos).normalized();
        const Vec2 px0 = pair.left.samples[0].pos + x0.perp() * cfg.start_d;
        const Vec3 ray = geom::ray_direction(ctx.truth.cam_l, geom::HomogPixel::from(px0));
        start_world = scene::intersect(ctx.surface, ctx.truth.cam_l.center(), ray, 0.0);
    }
    scene::MirrorState mirror{cfg.rig.pivot, (start_world - cfg.rig.pivot).normalized()};
    follow::FollowGains gains{cfg.gamma1, cfg.gamma2, cfg.speed.v, cfg.te};
    hybrid::FollowerState st_l, st_r;
    trifocal::BaselineMonitor monitor;
    const double t_total = cfg.max_iters * cfg.te;

    for (int k = 0; k < cfg.max_iters; ++k) {
        const double t = k * cfg.te;
        const double v_cmd = cfg.speed.value(t, t_total);
        if (breathing) pair = pair_at(t);
        const auto obs = scene::observe_spot(ctx.surface, t, mirror, ctx.truth.cam_l,
                                             ctx.truth.cam_r, cfg.noise_sigma, ctx.rng_noise);

        const auto h_l = trifocal::h_of(ctx.ctrl.trif.f0l, obs.p_l);
        const auto h_r = trifocal::h_of(ctx.ctrl.trif.f0r, obs.p_r);
        if (monitor.crossed(h_l, h_r))
            throw Error(Errc::baseline_singularity, "spot crossed the baseline plane");

        const auto step = hybrid::hybrid_step(pair, obs, st_l, st_r, ctx.ctrl.trif, gains,
                                              v_cmd, cfg.window, cfg.sing_eps);
        ctx.track_joints(step.omega_mirror);

        // ground-truth per-image errors from the exact projections
        const Vec2 pl = geom::project(ctx.truth.cam_l, obs.world).affine();
        const Vec2 pr = geom::project(ctx.truth.cam_r, obs.world).affine();
        const auto proj_l = path::project_onto_path(pl, pair.left, step.left.state.s, cfg.window);
        const auto proj_r =
            path::project_onto_path(pr, pair.right, step.right.state.s, cfg.window);

        Record rec;
        rec.iter = k + 1;
        rec.t = t;
        rec.ex_l = pl.x - proj_l.foot.x;
        rec.ey_l = pl.y - proj_l.foot.y;
        rec.ex_r = pr.x - proj_r.foot.x;
        rec.ey_r = pr.y - proj_r.foot.y;
        rec.d = proj_l.d;
        rec.d_right = proj_r.d;
        rec.theta_e = step.left.state.theta_e;
        rec.speed = v_cmd;
        rec.omega = step.omega_mirror;
        rec.world = obs.world;
        rec.px_l = obs.p_l.normalized().affine();
        rec.px_r = obs.p_r.normalized().affine();
        res.records.push_back(rec);

        if (step.completed) {
            res.completed = true;
            break;
        }
        mirror = scene::mirror_step(mirror, step.omega_mirror, cfg.te);
        st_l = step.next_left;
        st_r = step.next_right;
    }
}

ScenarioResult run_hybrid(const ScenarioConfig& cfg) {
    ScenarioResult res;
    res.config = cfg;
    LoopContext ctx(cfg);
    const path::PathCurve curve_l = path::load_path_csv(cfg.path_file);
    try {
        hybrid_loop(res, ctx, cfg, curve_l);
    } catch (const Error& e) {
        res.status = errc_name(e.code());
        res.detail = e.what();
    }
    finish(res);
    return res;
}

}  // namespace

ScenarioResult run(const ScenarioConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    ScenarioResult res;
    switch (config.controller) {
        case Controller::trifocal: res = run_trifocal(config); break;
        case Controller::path2d: res = run_path2d(config); break;
        case Controller::hybrid3d: res = run_hybrid(config); break;
    }
    res.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

}  // namespace beamsteer::sim
