#pragma once

#include <optional>

#include "beamsteer/path.hpp"

// Frenet/chained-form kinematics and the image-plane path-following control
// of the laser spot. The controller only rotates the direction of the spot
// velocity; its magnitude v is an independent operator input, which is what
// decouples tracking quality from the speed profile.

namespace beamsteer::follow {

using geom::Vec2;
using path::PathCurve;
using path::PathProjection;

struct FrenetState {
    double s = 0.0;        // px
    double d = 0.0;        // px, signed
    double theta_e = 0.0;  // rad, |theta_e| < pi/2 for the chained form
};

struct ChainedState {
    double z1 = 0.0;
    double z2 = 0.0;
    double z3 = 0.0;
};

struct FollowGains {
    double gamma1 = 1.0;  // > 0
    double gamma2 = 1.0;  // > 0
    double v = 100.0;     // px/s, may vary per iteration
    double te = 0.002;    // s
};

struct FrenetRates {
    double s_dot = 0.0;
    double d_dot = 0.0;
    double theta_e_dot = 0.0;
};

// s_dot = v cos(theta_e)/(1 - d C), d_dot = v sin(theta_e),
// theta_e_dot = omega - s_dot C. SingularTube when |1 - d C| <= 1e-6.
FrenetRates frenet_dynamics(const FrenetState& st, double v, double omega, double curvature);

// (z1, z2, z3) = (s, d, (1 - d C) tan(theta_e)); OutOfDomain at |theta_e| >= pi/2.
ChainedState to_chained(const FrenetState& st, double curvature);

// u1 = v cos(theta_e)/(1 - d C), the first chained input.
double u1_of(double v, double d, double curvature, double theta_e);

// Proportional state feedback u2 = -u1 g1 z2 - |u1| g2 z3.
double control_u2(double u1, double z2, double z3, const FollowGains& gains);

// Inverts the chained-form relation for the image-plane rotation rate:
//   omega = [u2 + (d_dot C + d dC/ds s_dot) tan(theta_e)]
//           / [(1 - d C)(1 + tan^2(theta_e))] + s_dot C
double omega_from_u2(double u2, const FrenetState& st, double v, double curvature, double dcds,
                     double s_dot, double d_dot);

// Rotate a unit direction by the per-step angle omega * te, renormalized.
Vec2 advance_direction(const Vec2& v_dir, double omega, double te);

struct StepResult {
    Vec2 v_dir;          // updated unit direction
    Vec2 velocity;       // commanded spot velocity, v * v_dir (px/s)
    FrenetState state;   // measured Frenet state this iteration
    double omega = 0.0;  // rad/s
    double u1 = 0.0;
    double u2 = 0.0;
    double s_dot = 0.0;  // model value, feeds the next abscissa prediction
    bool stalled = false;
    bool completed = false;
    PathProjection projection;
};

// One full follower iteration: abscissa prediction, local projection,
// chained-form feedback, direction update. When theta_e approaches +-pi/2
// (u1 stall) the direction is slewed toward the tangent at the saturated
// rate pi/(2 Te) for one step instead of evaluating the chained form.
// d_dot_override replaces the model value v sin(theta_e) fed to the omega
// inversion (e.g. a numerically differenced measurement).
StepResult follow_step(const Vec2& spot_px, const Vec2& v_dir, const PathCurve& curve,
                       const FollowGains& gains, double s_prev, double s_dot_prev,
                       int window = 32, std::optional<double> d_dot_override = std::nullopt);

}  // namespace beamsteer::follow
