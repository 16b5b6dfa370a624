#include "beamsteer/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "beamsteer/engine.hpp"

namespace beamsteer::bench {

namespace {

template <class T>
inline void do_not_optimize(const T& value) {
    asm volatile("" : : "r,m"(value) : "memory");
}

// Median per-call time from `batches` timed batches of `per_batch` calls.
template <class F>
double median_per_call_us(F&& body, size_t batches, size_t per_batch) {
    std::vector<double> us(batches);
    // warm-up
    for (size_t i = 0; i < per_batch; ++i) body();
    for (size_t b = 0; b < batches; ++b) {
        const auto t0 = std::chrono::steady_clock::now();
        for (size_t i = 0; i < per_batch; ++i) body();
        const auto t1 = std::chrono::steady_clock::now();
        us[b] = std::chrono::duration<double, std::micro>(t1 - t0).count() / per_batch;
    }
    std::nth_element(us.begin(), us.begin() + us.size() / 2, us.end());
    return us[us.size() / 2];
}

}  // namespace

std::vector<BenchResult> run_benchmarks() {
    std::vector<BenchResult> out;

    const sim::StereoRig rig = sim::build_stereo_rig({});
    const scene::Surface plane = sim::build_surface({});

    // representative trifocal state on the default rig
    const geom::Vec3 z0 = geom::Vec3{0.05, -0.03, 1.0}.normalized();
    const geom::Vec3 world = scene::intersect(plane, rig.pivot, z0, 0.0);
    const auto pl = geom::project(rig.cam_l, world);
    const auto pr = geom::project(rig.cam_r, world);
    const auto h_l = trifocal::h_of(rig.trif.f0l, pl);
    const auto h_r = trifocal::h_of(rig.trif.f0r, pr);
    const geom::HomogPixel tl{pl.x + 40.0, pl.y - 25.0, 1.0};
    const geom::Vec3 ray = geom::ray_direction(rig.cam_l, tl);
    const auto tr = geom::project(rig.cam_r, scene::intersect(plane, rig.cam_l.center(), ray, 0.0));
    const auto hs_l = trifocal::h_of(rig.trif.f0l, tl);
    const auto hs_r = trifocal::h_of(rig.trif.f0r, tr);

    {
        const size_t batches = 1000, per_batch = 200;
        const double med = median_per_call_us(
            [&] {
                const geom::Vec3 w =
                    trifocal::control_omega(h_l, h_r, hs_l, hs_r, {}, {}, 0.5);
                do_not_optimize(w);
            },
            batches, per_batch);
        out.push_back({"trifocal_control_omega", med, batches * per_batch, 0.002});
    }

    {
        // follower math after the projection is done
        const follow::FollowGains gains{1.0, 1.0, 100.0, 0.002};
        const follow::FrenetState st{120.0, 2.5, 0.1};
        const double curv = 0.004, dcds = 1e-5;
        geom::Vec2 dir{0.995, 0.0998};
        const size_t batches = 1000, per_batch = 200;
        const double med = median_per_call_us(
            [&] {
                const double u1 = follow::u1_of(gains.v, st.d, curv, st.theta_e);
                const auto z = follow::to_chained(st, curv);
                const double u2 = follow::control_u2(u1, z.z2, z.z3, gains);
                const double omega = follow::omega_from_u2(
                    u2, st, gains.v, curv, dcds, u1, gains.v * std::sin(st.theta_e));
                const geom::Vec2 next = follow::advance_direction(dir, omega, gains.te);
                do_not_optimize(next);
            },
            batches, per_batch);
        out.push_back({"path2d_follow_math", med, batches * per_batch, -1.0});
    }

    {
        // local projection search, window 32 on a 10k-sample curve
        std::vector<geom::Vec2> pts;
        pts.reserve(10000);
        for (int i = 0; i < 10000; ++i) {
            const double u = i * 0.02;
            pts.push_back({100.0 + 0.45 * i * 0.1, 300.0 + 80.0 * std::sin(0.02 * u * 10.0)});
        }
        const auto curve = path::build_path(pts, false);
        const double total = curve.length();
        double s_pred = 0.0;
        size_t tick = 0;
        const size_t batches = 500, per_batch = 200;
        const double med = median_per_call_us(
            [&] {
                s_pred = std::fmod(s_pred + 37.0, total);
                const geom::Vec2 probe{100.0 + 0.045 * s_pred * 10.0,
                                       302.0 + 2.0 * std::sin(0.01 * ++tick)};
                const auto proj = path::project_onto_path(probe, curve, s_pred, 32);
                do_not_optimize(proj);
            },
            batches, per_batch);
        out.push_back({"projection_search_w32_10k", med, batches * per_batch, -1.0});
    }
    return out;
}

std::string bench_report() {
    std::ostringstream out;
    out << "benchmark                      median_us   calls     reference_ms\n";
    for (const auto& b : run_benchmarks()) {
        out << b.name;
        for (size_t i = b.name.size(); i < 31; ++i) out << ' ';
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%9.3f   %7zu   ", b.median_us, b.calls);
        out << buf;
        if (b.reference_ms >= 0.0)
            out << b.reference_ms << " (published)";
        else
            out << "-";
        out << "\n";
    }
    return out.str();
}

}  // namespace beamsteer::bench
