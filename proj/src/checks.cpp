#include "beamsteer/checks.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "beamsteer/config.hpp"
#include "beamsteer/engine.hpp"

namespace beamsteer::checks {

using geom::HomogPixel;
using geom::Mat3;
using geom::Vec2;
using geom::Vec3;

namespace {

Mat3 rodrigues(const Vec3& axis, double angle) {
    const Vec3 k = axis.normalized();
    const Mat3 kx = geom::skew(k);
    return Mat3::identity() + kx * std::sin(angle) + (kx * kx) * (1.0 - std::cos(angle));
}

struct Bound {
    std::string name;
    double limit;
    double worst = 0.0;

    void update(double v) { worst = std::max(worst, std::abs(v)); }
    CheckResult result(double seconds) const {
        return {name, worst <= limit,
                "worst " + cfg::format_double(worst) + " vs bound " + cfg::format_double(limit),
                seconds};
    }
};

// 1000 random two-camera rigs: the epipolar residual of the projections of a
// random world point vanishes, F stays rank-2/unit-norm, and for R = I the
// right epipole equals normalize(K t).
CheckResult geometry_round_trip(std::mt19937_64& rng) {
    Bound bound{"geometry_round_trip", 1e-9};
    const auto t0 = std::chrono::steady_clock::now();

    std::uniform_real_distribution<double> uf(500.0, 1400.0), uc(220.0, 420.0);
    std::uniform_real_distribution<double> ua(-0.2, 0.2), uxy(-25.0, 25.0), uz(90.0, 220.0);
    std::uniform_real_distribution<double> uct(-50.0, 50.0), u1(-1.0, 1.0);

    for (int i = 0; i < 1000; ++i) {
        const geom::Intrinsics k1{uf(rng), uf(rng), uc(rng), uc(rng)};
        const geom::Intrinsics k2{uf(rng), uf(rng), uc(rng), uc(rng)};
        const Mat3 r1 = rodrigues({u1(rng), u1(rng), u1(rng)}, ua(rng));
        const Mat3 r2 = rodrigues({u1(rng), u1(rng), u1(rng)}, ua(rng));
        Vec3 c1{uct(rng), uct(rng), u1(rng) * 10.0};
        Vec3 c2{uct(rng), uct(rng), u1(rng) * 10.0};
        if ((c1 - c2).norm() < 5.0) c2.x += 20.0;
        const auto cam1 = geom::CameraModel::looking(k1, r1, c1);
        const auto cam2 = geom::CameraModel::looking(k2, r2, c2);

        const Mat3 r = cam2.rotation * cam1.rotation.transpose();
        const Vec3 t = cam2.translation - r * cam1.translation;
        const auto f = geom::fundamental_from_poses(k1, k2, r, t);

        const geom::Svd3 sv = geom::svd3(f.m);
        bound.update(sv.singular.z / sv.singular.x);  // rank-2 invariant
        bound.update(std::abs(f.m.frobenius_norm() - 1.0));

        const Vec3 p{uxy(rng), uxy(rng), uz(rng)};
        try {
            const HomogPixel p1 = geom::project(cam1, p);
            const HomogPixel p2 = geom::project(cam2, p);
            bound.update(geom::epipolar_residual(f, p2, p1));
        } catch (const Error&) {
            continue;  // point fell behind a tilted camera; skip the draw
        }

        // analytic identity oracle: R = I rig
        const Vec3 tt{uct(rng), uct(rng), -20.0};
        if (tt.norm() > 1.0) {
            const auto fv = geom::fundamental_to_virtual(k1, Mat3::identity(), tt);
            const Vec3 kt = k1.matrix() * tt;
            const Vec3 e = geom::epipole_of(fv).e.vec();
            const Vec3 diff = e.normalized().cross(kt.normalized());
            bound.update(diff.norm());
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return bound.result(secs);
}

// Triple-product identity h_R x h_L = -(z0^T (e_L x e_R)) z0 with the
// normals built from the virtual-view epipoles, plus the trifocal residual
// of forward-simulated (z0, p_L, p_R) triplets.
CheckResult epipolar_identity(std::mt19937_64& rng) {
    Bound bound{"epipolar_identity", 1e-9};
    const auto t0 = std::chrono::steady_clock::now();

    const sim::StereoRig rig = sim::build_stereo_rig({});
    const scene::Surface plane = sim::build_surface({});
    std::uniform_real_distribution<double> ua(-0.25, 0.25);

    for (int i = 0; i < 500; ++i) {
        const Vec3 z0 = Vec3{ua(rng), ua(rng), 1.0}.normalized();

        // identity with epipole-built normals
        const Vec3 el = rig.trif.e0l.e.vec();
        const Vec3 er = rig.trif.e0r.e.vec();
        const Vec3 hl = el.cross(z0);
        const Vec3 hr = er.cross(z0);
        const Vec3 lhs = hr.cross(hl) + z0 * z0.dot(el.cross(er));
        bound.update(lhs.norm() / std::max(1.0, hr.cross(hl).norm()));

        // trifocal residual with F-built normals on simulated projections
        const Vec3 world = scene::intersect(plane, rig.pivot, z0, 0.0);
        const auto h_l = trifocal::h_of(rig.trif.f0l, geom::project(rig.cam_l, world));
        const auto h_r = trifocal::h_of(rig.trif.f0r, geom::project(rig.cam_r, world));
        const Vec3 res = trifocal::trifocal_residual(z0, h_l, h_r);
        bound.update(res.norm() / (h_l.h.norm() * h_r.h.norm()));
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return bound.result(secs);
}

// One explicit-Euler step of the Frenet equations mapped through the chained
// transformation agrees with one step of the chained system.
CheckResult chained_equivalence(std::mt19937_64& rng) {
    Bound bound{"chained_equivalence", 1e-6};
    const auto t0 = std::chrono::steady_clock::now();

    const double dt = 1e-4;
    std::uniform_real_distribution<double> us(0.0, 500.0), ud(-20.0, 20.0), uth(-0.8, 0.8);
    std::uniform_real_distribution<double> uc(-0.01, 0.01), uc1(-1e-4, 1e-4), uv(5.0, 50.0),
        uw(-1.0, 1.0);

    for (int i = 0; i < 2000; ++i) {
        const follow::FrenetState st{us(rng), ud(rng), uth(rng)};
        const double c0 = uc(rng);
        const double c1 = uc1(rng);  // curvature field C(s) = c0 + c1 (s - s0)
        const double v = uv(rng);
        const double omega = uw(rng);
        const double curv = c0;
        if (std::abs(1.0 - st.d * curv) < 0.1) continue;

        const auto rates = follow::frenet_dynamics(st, v, omega, curv);
        const follow::FrenetState st2{st.s + dt * rates.s_dot, st.d + dt * rates.d_dot,
                                      st.theta_e + dt * rates.theta_e_dot};
        const double curv2 = c0 + c1 * (st2.s - st.s);
        const auto z_direct = follow::to_chained(st2, curv2);

        const auto z0 = follow::to_chained(st, curv);
        const double u1 = follow::u1_of(v, st.d, curv, st.theta_e);
        const double tan_e = std::tan(st.theta_e);
        const double u2 = (-rates.d_dot * curv - st.d * c1 * rates.s_dot) * tan_e +
                          (1.0 - st.d * curv) * (1.0 + tan_e * tan_e) *
                              (omega - rates.s_dot * curv);
        const follow::ChainedState z_step{z0.z1 + dt * u1, z0.z2 + dt * u1 * z0.z3,
                                          z0.z3 + dt * u2};

        const double scale = std::max({1.0, std::abs(z_direct.z1), std::abs(z_direct.z3)});
        bound.update(std::abs(z_direct.z1 - z_step.z1) / scale);
        bound.update(std::abs(z_direct.z2 - z_step.z2) / scale);
        bound.update(std::abs(z_direct.z3 - z_step.z3) / scale);
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return bound.result(secs);
}

// Three-point curvature on an exact circle recovers 1/R at every interior
// sample, with the sign of the orientation.
CheckResult circle_curvature(std::mt19937_64&) {
    Bound bound{"circle_curvature", 1e-6};
    const auto t0 = std::chrono::steady_clock::now();

    const double radius = 200.0;
    for (const int n : {100, 400, 1600}) {
        std::vector<Vec2> pts;
        pts.reserve(n);
        for (int i = 0; i < n; ++i) {
            const double a = 2.0 * M_PI * i / n * 0.98;  // open arc
            pts.push_back({400.0 + radius * std::cos(a), 300.0 + radius * std::sin(a)});
        }
        const auto curve = path::build_path(pts, false);
        for (size_t i = 1; i + 1 < curve.samples.size(); ++i)
            bound.update(curve.samples[i].curvature - 1.0 / radius);
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return bound.result(secs);
}

// Omega from the servo law stays orthogonal to the true beam direction.
CheckResult omega_orthogonality(std::mt19937_64& rng) {
    Bound bound{"omega_orthogonality", 1e-12};
    const auto t0 = std::chrono::steady_clock::now();

    const sim::StereoRig rig = sim::build_stereo_rig({});
    const scene::Surface plane = sim::build_surface({});
    std::uniform_real_distribution<double> ua(-0.25, 0.25), upx(-80.0, 80.0);

    for (int i = 0; i < 10000; ++i) {
        const Vec3 z0 = Vec3{ua(rng), ua(rng), 1.0}.normalized();
        const Vec3 world = scene::intersect(plane, rig.pivot, z0, 0.0);
        const HomogPixel pl = geom::project(rig.cam_l, world);
        const HomogPixel pr = geom::project(rig.cam_r, world);
        const auto h_l = trifocal::h_of(rig.trif.f0l, pl);
        const auto h_r = trifocal::h_of(rig.trif.f0r, pr);

        const HomogPixel tl{pl.x + upx(rng), pl.y + upx(rng), 1.0};
        const Vec3 ray = geom::ray_direction(rig.cam_l, tl);
        const Vec3 ws = scene::intersect(plane, rig.cam_l.center(), ray, 0.0);
        const HomogPixel tr = geom::project(rig.cam_r, ws);
        const auto hs_l = trifocal::h_of(rig.trif.f0l, tl);
        const auto hs_r = trifocal::h_of(rig.trif.f0r, tr);

        const Vec3 omega = trifocal::control_omega(h_l, h_r, hs_l, hs_r, {}, {}, 0.5);
        bound.update(std::abs(omega.dot(z0)) / std::max(1.0, omega.norm()));
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return bound.result(secs);
}

}  // namespace

std::vector<CheckResult> run_all(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<CheckResult> out;
    out.push_back(geometry_round_trip(rng));
    out.push_back(epipolar_identity(rng));
    out.push_back(chained_equivalence(rng));
    out.push_back(circle_curvature(rng));
    out.push_back(omega_orthogonality(rng));
    return out;
}

}  // namespace beamsteer::checks
