#include "beamsteer/trifocal.hpp"

#include <cmath>

namespace beamsteer::trifocal {

namespace {

Vec3 eta_of(const Vec3& h_l, const Vec3& h_r, double sing_eps) {
    const Vec3 u = h_r.cross(h_l);
    const double n = u.norm();
    if (n < sing_eps * h_r.norm() * h_l.norm())
        throw Error(Errc::baseline_singularity, "h_R x h_L vanished (spot on the baseline plane)");
    return u / (n * n);
}

}  // namespace

TrifocalRig make_rig(const geom::CameraModel& cam_l, const geom::CameraModel& cam_r,
                     const Vec3& mirror_pivot) {
    // pose of a camera frame in the mirror frame: X_0 = R^T X_cam - R^T t - pivot
    auto pose_in_mirror = [&](const geom::CameraModel& cam) {
        const geom::Mat3 r = cam.rotation.transpose();
        const Vec3 t = cam.center() - mirror_pivot;
        return std::pair{r, t};
    };
    const auto [r_l, t_l] = pose_in_mirror(cam_l);
    const auto [r_r, t_r] = pose_in_mirror(cam_r);

    TrifocalRig rig;
    rig.f0l = geom::fundamental_to_virtual(cam_l.k, r_l, t_l);
    rig.f0r = geom::fundamental_to_virtual(cam_r.k, r_r, t_r);

    // relative pose right -> left: X_L = R X_R + t
    const geom::Mat3 r_lr = cam_l.rotation * cam_r.rotation.transpose();
    const Vec3 t_lr = cam_l.translation - r_lr * cam_r.translation;
    rig.flr = geom::fundamental_from_poses(cam_r.k, cam_l.k, r_lr, t_lr);

    // virtual-view epipoles: left null vectors of F_0i
    rig.e0l = geom::epipole_of(rig.f0l.transposed());
    rig.e0r = geom::epipole_of(rig.f0r.transposed());
    return rig;
}

EpipolarNormal h_of(const FundamentalMatrix& f, const HomogPixel& p) {
    const Vec3 h = f.m * p.normalized().vec();
    if (h.norm() < 1e-14)
        throw Error(Errc::zero_vector, "pixel is the epipole of this view");
    return {h};
}

EpipolarNormal h_of(const FundamentalMatrix& f, const HomogPixel& p, const HomogPixel& e0,
                    const BeamDirection& z0) {
    EpipolarNormal h = h_of(f, p);
    if (h.h.dot(e0.vec().cross(z0)) < 0.0) h.h = -h.h;
    return h;
}

BeamDirection beam_from_normals(const EpipolarNormal& h_l, const EpipolarNormal& h_r,
                                const BeamDirection& previous, double sing_eps) {
    const Vec3 u = h_r.h.cross(h_l.h);
    const double n = u.norm();
    if (n < sing_eps * h_r.h.norm() * h_l.h.norm())
        throw Error(Errc::baseline_singularity, "h_R x h_L vanished (spot on the baseline plane)");
    const Vec3 dir = u / n;
    return dir.dot(previous) >= 0.0 ? dir : -dir;
}

Vec3 trifocal_residual(const BeamDirection& z0, const EpipolarNormal& h_l,
                       const EpipolarNormal& h_r) {
    return z0.cross(h_r.h.cross(h_l.h));
}

Vec3 desired_pixel_velocity(const HomogPixel& p, const HomogPixel& p_star, const Vec2& p_star_dot,
                            double lambda) {
    const Vec2 e = p.normalized().affine() - p_star.normalized().affine();
    const Vec2 v = e * (-lambda) + p_star_dot;
    return {v.x, v.y, 0.0};
}

Vec3 control_omega(const EpipolarNormal& h_l, const EpipolarNormal& h_r,
                   const EpipolarNormal& h_l_star, const EpipolarNormal& h_r_star,
                   const Vec3& h_l_star_dot, const Vec3& h_r_star_dot, double lambda,
                   double sing_eps) {
    const Vec3 eta = eta_of(h_l.h, h_r.h, sing_eps);
    const Vec3 feedback = h_l.h.cross(h_r_star.h) - h_r.h.cross(h_l_star.h);
    const Vec3 feedforward = h_l.h.cross(h_r_star_dot) - h_r.h.cross(h_l_star_dot);
    return eta.cross(feedback) * (-lambda) - eta.cross(feedforward);
}

Vec3 servo_step(const TrifocalRig& rig, const scene::SpotObservation& obs,
                const TargetPixels& target, const ServoGains& gains) {
    const EpipolarNormal h_l = h_of(rig.f0l, obs.p_l);
    const EpipolarNormal h_r = h_of(rig.f0r, obs.p_r);
    const EpipolarNormal h_l_star = h_of(rig.f0l, target.p_l);
    const EpipolarNormal h_r_star = h_of(rig.f0r, target.p_r);

    Vec3 h_l_star_dot{};
    Vec3 h_r_star_dot{};
    if (target.prev_l && target.prev_r) {
        const Vec2 dl = (target.p_l.normalized().affine() - target.prev_l->normalized().affine()) /
                        gains.te;
        const Vec2 dr = (target.p_r.normalized().affine() - target.prev_r->normalized().affine()) /
                        gains.te;
        h_l_star_dot = rig.f0l.m * Vec3{dl.x, dl.y, 0.0};
        h_r_star_dot = rig.f0r.m * Vec3{dr.x, dr.y, 0.0};
    }
    return control_omega(h_l, h_r, h_l_star, h_r_star, h_l_star_dot, h_r_star_dot, gains.lambda,
                         gains.sing_eps);
}

bool BaselineMonitor::crossed(const EpipolarNormal& h_l, const EpipolarNormal& h_r) {
    const Vec3 u = h_r.h.cross(h_l.h);
    const double n = u.norm();
    if (n == 0.0) return true;
    const Vec3 dir = u / n;
    const bool flipped = prev_ && dir.dot(*prev_) < 0.0;
    prev_ = dir;
    return flipped;
}

}  // namespace beamsteer::trifocal
