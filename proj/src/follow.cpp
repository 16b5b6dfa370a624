#include "beamsteer/follow.hpp"

#include <cmath>

namespace beamsteer::follow {

namespace {

constexpr double kTubeEps = 1e-6;
constexpr double kHalfPi = M_PI / 2.0;

double tube_factor(double d, double curvature) {
    const double f = 1.0 - d * curvature;
    if (std::abs(f) <= kTubeEps)
        throw Error(Errc::singular_tube, "spot at the curvature center tube (1 - d C ~ 0)");
    return f;
}

}  // namespace

FrenetRates frenet_dynamics(const FrenetState& st, double v, double omega, double curvature) {
    const double f = tube_factor(st.d, curvature);
    FrenetRates r;
    r.s_dot = v * std::cos(st.theta_e) / f;
    r.d_dot = v * std::sin(st.theta_e);
    r.theta_e_dot = omega - r.s_dot * curvature;
    return r;
}

ChainedState to_chained(const FrenetState& st, double curvature) {
    if (std::abs(st.theta_e) >= kHalfPi)
        throw Error(Errc::out_of_domain, "|theta_e| >= pi/2 has no chained image");
    return {st.s, st.d, (1.0 - st.d * curvature) * std::tan(st.theta_e)};
}

double u1_of(double v, double d, double curvature, double theta_e) {
    return v * std::cos(theta_e) / tube_factor(d, curvature);
}

double control_u2(double u1, double z2, double z3, const FollowGains& gains) {
    return -u1 * gains.gamma1 * z2 - std::abs(u1) * gains.gamma2 * z3;
}

double omega_from_u2(double u2, const FrenetState& st, double /*v*/, double curvature, double dcds,
                     double s_dot, double d_dot) {
    if (std::abs(st.theta_e) >= kHalfPi)
        throw Error(Errc::out_of_domain, "|theta_e| >= pi/2 has no chained image");
    const double f = tube_factor(st.d, curvature);
    const double tan_e = std::tan(st.theta_e);
    const double num = u2 + (d_dot * curvature + st.d * dcds * s_dot) * tan_e;
    return num / (f * (1.0 + tan_e * tan_e)) + s_dot * curvature;
}

Vec2 advance_direction(const Vec2& v_dir, double omega, double te) {
    const Vec2 v = v_dir + v_dir.perp() * (omega * te);
    return v.normalized();
}

StepResult follow_step(const Vec2& spot_px, const Vec2& v_dir, const PathCurve& curve,
                       const FollowGains& gains, double s_prev, double s_dot_prev, int window,
                       std::optional<double> d_dot_override) {
    const double s_pred = path::predict_abscissa(s_prev, s_dot_prev, gains.te, curve);
    const PathProjection proj = path::project_onto_path(spot_px, curve, s_pred, window);
    const double theta_e = path::orientation_error(v_dir, proj.frame);

    StepResult out;
    out.projection = proj;
    out.state = {proj.s, proj.d, theta_e};
    out.completed =
        !curve.closed && proj.s >= curve.length() - 0.5 * curve.median_spacing();

    // stall: near (or beyond) theta_e = +-pi/2 the chained form degenerates;
    // slew the direction toward the tangent at the saturated rate
    const double u1_probe =
        std::cos(theta_e) / tube_factor(proj.d, proj.curvature) * gains.v;
    if (std::abs(theta_e) >= kHalfPi - 1e-9 || std::abs(u1_probe) < 1e-9 * std::abs(gains.v)) {
        out.stalled = true;
        out.omega = (theta_e > 0.0 ? -1.0 : 1.0) * kHalfPi / gains.te;
        out.v_dir = advance_direction(v_dir, out.omega, gains.te);
        out.velocity = out.v_dir * gains.v;
        out.s_dot = 0.0;
        return out;
    }

    out.u1 = u1_probe;
    const ChainedState z = to_chained(out.state, proj.curvature);
    out.u2 = control_u2(out.u1, z.z2, z.z3, gains);
    out.s_dot = out.u1;
    const double d_dot = d_dot_override ? *d_dot_override : gains.v * std::sin(theta_e);
    out.omega = omega_from_u2(out.u2, out.state, gains.v, proj.curvature, proj.dcurv_ds, out.s_dot,
                              d_dot);
    out.v_dir = advance_direction(v_dir, out.omega, gains.te);
    out.velocity = out.v_dir * gains.v;
    return out;
}

}  // namespace beamsteer::follow
