#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "beamsteer/scene.hpp"

using namespace beamsteer;
using namespace beamsteer::scene;

namespace {

Surface plane_z(double z) { return {Plane{{0, 0, z}, {0, 0, 1}}}; }

Surface sphere_at(const Vec3& c, double r) { return {Sphere{c, r}}; }

}  // namespace

TEST_CASE("plane and sphere intersections") {
    CHECK((intersect(plane_z(0.0), {0, 0, 100}, {0, 0, -1}, 0) - Vec3{0, 0, 0}).norm() < 1e-12);
    CHECK((intersect(sphere_at({0, 0, 0}, 10), {0, 0, 100}, {0, 0, -1}, 0) - Vec3{0, 0, 10}).norm() <
          1e-12);
    // miss
    CHECK_THROWS_AS(intersect(sphere_at({0, 0, 0}, 10), {50, 0, 100}, {0, 0, -1}, 0), Error);
    // behind the origin
    CHECK_THROWS_AS(intersect(plane_z(0.0), {0, 0, 100}, {0, 0, 1}, 0), Error);
}

TEST_CASE("tangent ray boundary") {
    const Surface s = sphere_at({0, 0, 0}, 10.0);
    // exactly tangent: single root accepted
    const Vec3 hit = intersect(s, {10.0, 0, 100.0}, {0, 0, -1}, 0);
    CHECK(hit.x == doctest::Approx(10.0));
    CHECK(std::abs(hit.z) < 1e-5);
    // offset outward by 1e-9: clean miss
    CHECK_THROWS_AS(intersect(s, {10.0 + 1e-9 + 1e-12, 0, 100.0}, {0, 0, -1}, 0), Error);
}

TEST_CASE("time-varying surface scales about its anchor") {
    auto base = std::make_shared<Surface>(sphere_at({0, 0, 140}, 40.0));
    TimeVarying tv{base, 2.0, 4.0, {0, 0, 100}};  // anchor at the front pole
    CHECK(tv.scale_at(0.0) == doctest::Approx(1.0));
    CHECK(tv.scale_at(1.0) == doctest::Approx(2.0));   // sin = 1
    CHECK(tv.scale_at(3.0) == doctest::Approx(0.5));   // sin = -1
    const Surface s{tv};

    // the anchored pole never moves
    for (double t : {0.0, 0.7, 1.0, 2.3, 3.0}) {
        const Vec3 hit = intersect(s, {0, 0, 0}, {0, 0, 1}, t);
        CHECK((hit - Vec3{0, 0, 100}).norm() < 1e-9);
        CHECK(std::abs(surface_residual(s, hit, t)) < 1e-9);
    }
    // at scale 2 the scaled sphere has center (0,0,180), radius 80
    const Vec3 side = intersect(s, {0, 0, 180}, {1, 0, 0}, 1.0);
    CHECK(side.x == doctest::Approx(80.0));
    // scale factor bounded by the amplitude band
    for (double t = 0.0; t < 8.0; t += 0.05) {
        CHECK(tv.scale_at(t) <= 2.0 + 1e-12);
        CHECK(tv.scale_at(t) >= 0.5 - 1e-12);
    }
}

TEST_CASE("spot lies on the surface at the query time") {
    std::mt19937_64 rng(17);
    // beam cone kept inside the shrunken sphere's angular footprint
    std::uniform_real_distribution<double> ua(-0.12, 0.12), ut(0.0, 10.0);
    auto base = std::make_shared<Surface>(sphere_at({0, 0, 140}, 40.0));
    const Surface breathing{TimeVarying{base, 1.5, 3.0, {0, 0, 100}}};
    for (int i = 0; i < 500; ++i) {
        const Vec3 dir = Vec3{ua(rng), ua(rng), 1.0}.normalized();
        const double t = ut(rng);
        const Vec3 hit = intersect(breathing, {0, 0, 0}, dir, t);
        CHECK(std::abs(surface_residual(breathing, hit, t)) <= 1e-9);
    }
}

TEST_CASE("heightfield load, sample and intersect") {
    const auto dir = std::filesystem::temp_directory_path() / "bs_scene_test";
    std::filesystem::create_directories(dir);
    const auto file = dir / "grid.csv";
    {
        std::ofstream out(file);
        out << "# x,y,z\n";
        for (int j = 0; j <= 10; ++j)
            for (int i = 0; i <= 10; ++i) {
                const double x = -50.0 + 10.0 * i, y = -50.0 + 10.0 * j;
                out << x << "," << y << "," << 100.0 + 0.002 * x * x << "\n";
            }
    }
    const Heightfield hf = load_heightfield_csv(file.string());
    CHECK(hf.xs.size() == 11);
    CHECK(hf.ys.size() == 11);
    CHECK(hf.sample(0.0, 0.0) == doctest::Approx(100.0));
    CHECK(hf.sample(30.0, -20.0) == doctest::Approx(100.0 + 0.002 * 900.0));

    const Surface s{hf};
    const Vec3 hit = intersect(s, {10.0, 5.0, 200.0}, {0, 0, -1}, 0);
    CHECK(std::abs(surface_residual(s, hit, 0)) < 1e-9);
    CHECK(hit.x == doctest::Approx(10.0));
    CHECK_THROWS_AS(intersect(s, {500.0, 0, 200.0}, {0, 0, -1}, 0), Error);

    // malformed grids
    const auto bad = dir / "bad.csv";
    {
        std::ofstream out(bad);
        out << "0,0,1\n1,0,1\n0,1,1\n";  // missing corner
    }
    CHECK_THROWS_AS(load_heightfield_csv(bad.string()), Error);
    CHECK_THROWS_AS(load_heightfield_csv((dir / "missing.csv").string()), Error);
}

TEST_CASE("mirror step follows the Euler update") {
    const MirrorState st{{0, 0, 0}, {0, 0, 1}};
    // omega = 0: unchanged
    CHECK((mirror_step(st, {0, 0, 0}, 0.01).z0 - st.z0).norm() == 0.0);

    const MirrorState next = mirror_step(st, {0.0, M_PI / 2.0, 0.0}, 1.0);
    const Vec3 expected = Vec3{M_PI / 2.0, 0.0, 1.0}.normalized();
    CHECK((next.z0 - expected).norm() < 1e-15);
    CHECK(next.z0.x == doctest::Approx(0.8436).epsilon(5e-4));
    CHECK(next.z0.z == doctest::Approx(0.5370).epsilon(5e-4));
    CHECK(next.pivot == st.pivot);
}

TEST_CASE("mirror step keeps unit norm over many random steps") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    MirrorState st{{0, 0, 0}, {0, 0, 1}};
    for (int i = 0; i < 100000; ++i) {
        st = mirror_step(st, {u(rng), u(rng), u(rng)}, 0.002);
        if (i % 1000 == 0) CHECK(std::abs(st.z0.norm() - 1.0) < 1e-12);
    }
    CHECK(std::abs(st.z0.norm() - 1.0) < 1e-12);
}

TEST_CASE("joint rates are the differential map applied to omega") {
    MirrorModel proj{{1, 0, 0}, {0, 1, 0}, 0.6};
    CHECK(joint_rates(proj, {0, 0, 0}).q1 == 0.0);
    const JointRates r = joint_rates(proj, {3.0, -4.0, 5.0});
    CHECK(r.q1 == doctest::Approx(3.0));
    CHECK(r.q2 == doctest::Approx(-4.0));

    // default model quotients out rotation about the nominal beam
    const Vec3 z0 = Vec3{0.1, -0.2, 1.0}.normalized();
    const MirrorModel m = MirrorModel::default_for(z0);
    const JointRates about_beam = joint_rates(m, z0 * 2.5);
    CHECK(std::abs(about_beam.q1) < 1e-12);
    CHECK(std::abs(about_beam.q2) < 1e-12);
    CHECK(std::abs(m.row0.dot(m.row1)) < 1e-12);
    CHECK(m.row0.norm() == doctest::Approx(1.0));
}

TEST_CASE("stereo observation is exact without noise and deterministic with it") {
    const geom::Intrinsics k{900, 900, 320, 240};
    const auto cam_l = geom::CameraModel::looking(k, geom::Mat3::identity(), {-40, 35, -20});
    const auto cam_r = geom::CameraModel::looking(k, geom::Mat3::identity(), {40, 35, -20});
    const Surface s = plane_z(100.0);
    const MirrorState st{{0, 0, 0}, Vec3{0.05, 0.02, 1.0}.normalized()};

    std::mt19937_64 rng(1);
    const SpotObservation clean = observe_spot(s, 0, st, cam_l, cam_r, 0.0, rng);
    CHECK((clean.p_l.vec() - geom::project(cam_l, clean.world).vec()).norm() == 0.0);

    // epipolar consistency with the left-right fundamental
    const geom::Mat3 r = cam_l.rotation * cam_r.rotation.transpose();
    const Vec3 t = cam_l.translation - r * cam_r.translation;
    const auto f_lr = geom::fundamental_from_poses(k, k, r, t);
    CHECK(std::abs(geom::epipolar_residual(f_lr, clean.p_l, clean.p_r)) <= 1e-9);

    // triangulating the exact pixels recovers the beam direction
    const auto dir = geom::triangulate_direction(clean.p_l, clean.p_r, cam_l, cam_r, st.pivot);
    CHECK(dir.cross(st.z0).norm() < 1e-8);

    // fixed seed reproduces noisy pixels bit for bit
    std::mt19937_64 rng_a(99), rng_b(99);
    const SpotObservation na = observe_spot(s, 0, st, cam_l, cam_r, 0.5, rng_a);
    const SpotObservation nb = observe_spot(s, 0, st, cam_l, cam_r, 0.5, rng_b);
    CHECK(na.p_l.x == nb.p_l.x);
    CHECK(na.p_r.y == nb.p_r.y);
    CHECK(na.p_l.x != clean.p_l.x);

    // a spot behind the cameras propagates BehindCamera
    const Surface behind = plane_z(-100.0);
    const MirrorState back{{0, 0, 0}, {0, 0, -1}};
    CHECK_THROWS_AS(observe_spot(behind, 0, back, cam_l, cam_r, 0.0, rng), Error);
}
