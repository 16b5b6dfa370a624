#pragma once

#include "beamsteer/follow.hpp"
#include "beamsteer/trifocal.hpp"

// 3D path following: two image-plane followers (left/right) fused into one
// mirror angular velocity through the trifocal constraint. Only directions
// cross the fusion; the advance speed stays an independent input.

namespace beamsteer::hybrid {

using follow::FollowGains;
using geom::Vec2;
using geom::Vec3;
using trifocal::EpipolarNormal;
using trifocal::TrifocalRig;

struct StereoPathPair {
    path::PathCurve left;
    path::PathCurve right;
    // per-sample index alignment: world[i] back-projects left.samples[i] and
    // projects to right.samples[i]
    std::vector<Vec3> world;
};

// Right curve obtained by back-projecting every left sample onto the scene
// surface (ground truth stands in for rectified matching) and reprojecting.
StereoPathPair transfer_path(const path::PathCurve& left, const scene::Surface& surface,
                             const geom::CameraModel& cam_l, const geom::CameraModel& cam_r,
                             double time = 0.0);

// Unit advance direction in one image: the measured pixel velocity rotated
// in-plane by the follower's per-step angle omega * te.
Vec2 image_advance_velocity(const Vec2& p_dot, double omega, double te);

// Omega = -eta x (h_L x (F_0R vR~) - h_R x (F_0L vL~)) with the 2D image
// velocities lifted to homogeneous 3-vectors with zero third component and
// eta = (h_R x h_L)/||h_R x h_L||^2. Feeding consistent pixel velocities
// (px/s) makes this the exact kinematic inversion; feeding unit directions
// yields the direction-only form whose magnitude the engine scales by the
// commanded speed.
Vec3 hybrid_omega(const TrifocalRig& rig, const EpipolarNormal& h_l, const EpipolarNormal& h_r,
                  const Vec2& v_l, const Vec2& v_r, double sing_eps = 1e-8);

struct FollowerState {
    Vec2 prev_px;
    bool has_prev = false;
    double s = 0.0;
    double s_dot = 0.0;
};

struct HybridStep {
    Vec3 omega_mirror;  // already scaled by the commanded speed (rad/s)
    follow::StepResult left;
    follow::StepResult right;
    FollowerState next_left;
    FollowerState next_right;
    bool completed = false;
};

// One fused iteration: per-image followers (direction only, internal speeds
// from the measured pixel velocities), lift, trifocal fusion, scale by the
// commanded speed v_cmd (px/s).
HybridStep hybrid_step(const StereoPathPair& pair, const scene::SpotObservation& obs,
                       const FollowerState& left, const FollowerState& right,
                       const TrifocalRig& rig, const FollowGains& gains, double v_cmd,
                       int window = 32, double sing_eps = 1e-8);

}  // namespace beamsteer::hybrid
