#include "beamsteer/hybrid.hpp"

#include <cmath>

namespace beamsteer::hybrid {

StereoPathPair transfer_path(const path::PathCurve& left, const scene::Surface& surface,
                             const geom::CameraModel& cam_l, const geom::CameraModel& cam_r,
                             double time) {
    StereoPathPair pair;
    pair.world.reserve(left.samples.size());
    std::vector<Vec2> right_pts;
    right_pts.reserve(left.samples.size());

    const Vec3 origin = cam_l.center();
    for (const auto& sample : left.samples) {
        const Vec3 dir = geom::ray_direction(cam_l, geom::HomogPixel::from(sample.pos));
        const Vec3 world = scene::intersect(surface, origin, dir, time);
        pair.world.push_back(world);
        right_pts.push_back(geom::project(cam_r, world).affine());
    }
    pair.left = left;
    pair.right = path::build_path(right_pts, left.closed);
    return pair;
}

Vec2 image_advance_velocity(const Vec2& p_dot, double omega, double te) {
    if (p_dot.norm() < 1e-12)
        throw Error(Errc::zero_velocity, "image velocity too small to orient");
    return (p_dot + p_dot.perp() * (omega * te)).normalized();
}

Vec3 hybrid_omega(const TrifocalRig& rig, const EpipolarNormal& h_l, const EpipolarNormal& h_r,
                  const Vec2& v_l, const Vec2& v_r, double sing_eps) {
    const Vec3 u = h_r.h.cross(h_l.h);
    const double n = u.norm();
    if (n < sing_eps * h_r.h.norm() * h_l.h.norm())
        throw Error(Errc::baseline_singularity, "h_R x h_L vanished (spot on the baseline plane)");
    const Vec3 eta = u / (n * n);
    const Vec3 fl = rig.f0l.m * Vec3{v_l.x, v_l.y, 0.0};
    const Vec3 fr = rig.f0r.m * Vec3{v_r.x, v_r.y, 0.0};
    return -eta.cross(h_l.h.cross(fr) - h_r.h.cross(fl));
}

namespace {

// Internal per-image follower update. Uses the measured pixel velocity for
// both the direction and the follower's working speed; callers bootstrap the
// first iteration with the path tangent and the commanded speed.
follow::StepResult image_follow(const path::PathCurve& curve, const Vec2& px, const Vec2& p_dot,
                                const FollowerState& st, const FollowGains& gains, double v_cmd,
                                int window) {
    FollowGains g = gains;
    Vec2 dir;
    if (p_dot.norm() < 1e-12) {
        const auto proj = path::project_onto_path(px, curve, st.s, window);
        dir = proj.frame.x_s;
        g.v = v_cmd;
    } else {
        dir = p_dot.normalized();
        g.v = p_dot.norm();
    }
    return follow::follow_step(px, dir, curve, g, st.s, st.s_dot, window);
}

}  // namespace

HybridStep hybrid_step(const StereoPathPair& pair, const scene::SpotObservation& obs,
                       const FollowerState& left, const FollowerState& right,
                       const TrifocalRig& rig, const FollowGains& gains, double v_cmd,
                       int window, double sing_eps) {
    const Vec2 px_l = obs.p_l.normalized().affine();
    const Vec2 px_r = obs.p_r.normalized().affine();
    const Vec2 pdot_l = left.has_prev ? (px_l - left.prev_px) / gains.te : Vec2{};
    const Vec2 pdot_r = right.has_prev ? (px_r - right.prev_px) / gains.te : Vec2{};

    HybridStep out;
    out.left = image_follow(pair.left, px_l, pdot_l, left, gains, v_cmd, window);
    out.right = image_follow(pair.right, px_r, pdot_r, right, gains, v_cmd, window);

    // the fused command uses unit directions; the commanded speed scales it
    const Vec2 v_l = out.left.v_dir;
    const Vec2 v_r = out.right.v_dir;
    const EpipolarNormal h_l = trifocal::h_of(rig.f0l, obs.p_l);
    const EpipolarNormal h_r = trifocal::h_of(rig.f0r, obs.p_r);
    out.omega_mirror = hybrid_omega(rig, h_l, h_r, v_l, v_r, sing_eps) * v_cmd;

    auto measured_s_dot = [&](const path::PathCurve& curve, const FollowerState& prev,
                              double s_now) {
        if (!prev.has_prev) return v_cmd;
        double ds = s_now - prev.s;
        if (curve.closed) {  // unwrap across the seam
            const double total = curve.length();
            if (ds > 0.5 * total) ds -= total;
            if (ds < -0.5 * total) ds += total;
        }
        return ds / gains.te;
    };
    out.next_left = {px_l, true, out.left.state.s, measured_s_dot(pair.left, left, out.left.state.s)};
    out.next_right = {px_r, true, out.right.state.s,
                      measured_s_dot(pair.right, right, out.right.state.s)};
    out.completed = out.left.completed && out.right.completed;
    return out;
}

}  // namespace beamsteer::hybrid
