#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "beamsteer/path.hpp"
#include "support/curves.hpp"

using namespace beamsteer;
using namespace beamsteer::path;
using geom::Vec2;

TEST_CASE("circle curvature oracle") {
    const double radius = 200.0;
    const int n = 100;
    const auto pts = testsupport::circle_points(n, radius, 400.0, 300.0, 0.99);
    const PathCurve curve = build_path(pts, false);

    for (size_t i = 1; i + 1 < curve.samples.size(); ++i)
        CHECK(curve.samples[i].curvature == doctest::Approx(1.0 / radius).epsilon(1e-6));

    // chord-sum abscissa: n-1 chords of the sampled arc
    const double step = 2.0 * M_PI * 0.99 / (n - 1);
    const double chord = 2.0 * radius * std::sin(step / 2.0);
    CHECK(curve.length() == doctest::Approx((n - 1) * chord).epsilon(1e-12));
    CHECK(curve.length() == doctest::Approx(2.0 * M_PI * radius * 0.99).epsilon(1e-3));

    // clockwise orientation flips the sign
    auto rev = pts;
    std::reverse(rev.begin(), rev.end());
    const PathCurve cw = build_path(rev, false);
    CHECK(cw.samples[5].curvature == doctest::Approx(-1.0 / radius).epsilon(1e-6));
}

TEST_CASE("curvature accuracy improves monotonically with sampling density") {
    // circle samples are exact for the three-point estimator (fp noise only);
    // an ellipse has real discretization error, converging as h^2
    const double a = 220.0, b = 140.0;
    auto analytic = [&](double t) {
        const double s2 = a * a * std::sin(t) * std::sin(t) + b * b * std::cos(t) * std::cos(t);
        return a * b / std::pow(s2, 1.5);
    };
    double prev = 1e18;
    for (int n : {50, 100, 200, 400, 800}) {
        std::vector<Vec2> pts;
        std::vector<double> ts;
        for (int i = 0; i < n; ++i) {
            const double t = 2.0 * M_PI * 0.9 * i / (n - 1);
            ts.push_back(t);
            pts.push_back({400.0 + a * std::cos(t), 300.0 + b * std::sin(t)});
        }
        const PathCurve c = build_path(pts, false);
        double worst = 0.0;
        for (size_t i = 1; i + 1 < c.samples.size(); ++i)
            worst = std::max(worst, std::abs(c.samples[i].curvature - analytic(ts[i])));
        CHECK(worst <= prev);
        prev = worst;
    }
    // sanity on the circle too: exact at any density
    for (int n : {50, 400}) {
        const PathCurve c = build_path(testsupport::circle_points(n, 200.0), false);
        for (size_t i = 1; i + 1 < c.samples.size(); ++i)
            CHECK(std::abs(c.samples[i].curvature - 0.005) < 1e-12);
    }
}

TEST_CASE("collinear points have exactly zero curvature") {
    std::vector<Vec2> pts;
    for (int i = 0; i < 20; ++i) pts.push_back({10.0 + 3.0 * i, 5.0 + 1.5 * i});
    const PathCurve c = build_path(pts, false);
    for (const auto& s : c.samples) CHECK(s.curvature == 0.0);
}

TEST_CASE("square-wave polyline: flat runs and finite corner spikes") {
    std::vector<Vec2> pts;
    double x = 0.0;
    for (int k = 0; k < 4; ++k) {
        const double y = (k % 2 == 0) ? 0.0 : 40.0;
        for (int i = 0; i < 10; ++i) pts.push_back({x += 4.0, y});
    }
    const PathCurve c = build_path(pts, false);
    int spikes = 0;
    for (const auto& s : c.samples) {
        CHECK(std::isfinite(s.curvature));
        if (std::abs(s.curvature) > 1e-6) ++spikes;
    }
    CHECK(spikes >= 3);  // one per step edge
    // interior flat-run samples are exactly straight
    CHECK(c.samples[4].curvature == 0.0);
}

TEST_CASE("path construction rejects degenerate input") {
    const std::vector<Vec2> two = {{0, 0}, {1, 0}};
    CHECK_THROWS_AS(build_path(two, false), Error);
    const std::vector<Vec2> dup = {{0, 0}, {1, 0}, {1.0, 5e-10}, {2, 0}};
    try {
        build_path(dup, false);
        FAIL("expected DuplicatePoints");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::duplicate_points);
    }
}

TEST_CASE("projection basics: on-sample, signed sides, clamping") {
    std::vector<Vec2> pts;
    for (int i = 0; i < 50; ++i) pts.push_back({10.0 * i, 100.0});
    const PathCurve c = build_path(pts, false);

    const PathProjection on = project_onto_path(pts[7], c, c.samples[7].s, 8);
    CHECK(on.d == doctest::Approx(0.0));
    CHECK((on.foot - pts[7]).norm() < 1e-12);

    // y_s points up for a left-to-right path; above = positive d
    const PathProjection above = project_onto_path({123.0, 105.0}, c, 123.0, 8);
    CHECK(above.d == doctest::Approx(5.0));
    CHECK(above.frame.y_s.y == doctest::Approx(1.0));
    const PathProjection below = project_onto_path({123.0, 95.0}, c, 123.0, 8);
    CHECK(below.d == doctest::Approx(-5.0));
    CHECK(above.s == doctest::Approx(123.0));

    // beyond the last sample the foot clamps to the end
    const PathProjection past = project_onto_path({520.0, 100.0}, c, c.length(), 8);
    CHECK((past.foot - pts.back()).norm() < 1e-12);
}

TEST_CASE("an empty abscissa window is an error") {
    const auto pts = testsupport::circle_points(50, 80.0);
    const PathCurve c = build_path(pts, false);
    try {
        project_onto_path({400.0, 300.0}, c, 10.0, 0);
        FAIL("expected EmptyWindow");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::empty_window);
    }
}

TEST_CASE("windowed search disambiguates a self-crossing curve") {
    const auto pts = testsupport::figure_eight(800);
    const PathCurve c = build_path(pts, false);

    // the center is visited twice; pick probes near both passes
    const double s_a = c.samples[200].s;
    const double s_b = c.samples[600].s;
    const Vec2 probe_a = c.samples[200].pos + Vec2{0.3, -0.2};
    const PathProjection pa = project_onto_path(probe_a, c, s_a, 16);
    CHECK(std::abs(pa.s - s_a) < 16 * c.median_spacing());

    const Vec2 probe_b = c.samples[600].pos + Vec2{-0.25, 0.1};
    const PathProjection pb = project_onto_path(probe_b, c, s_b, 16);
    CHECK(std::abs(pb.s - s_b) < 16 * c.median_spacing());
}

TEST_CASE("lateral distance matches brute force over interior projections") {
    const auto pts = testsupport::hand_curve(600);
    const PathCurve c = build_path(pts, false);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> us(10.0, c.length() - 10.0), ud(-6.0, 6.0);

    for (int i = 0; i < 300; ++i) {
        // probe a mid-segment foot point offset along its own normal
        const double s_ref = us(rng);
        size_t idx = 0;
        while (idx + 1 < c.samples.size() && c.samples[idx + 1].s < s_ref) ++idx;
        const Vec2 mid = (c.samples[idx].pos + c.samples[idx + 1].pos) * 0.5;
        const PathProjection at = project_onto_path(mid, c, c.samples[idx].s, 8);
        const Vec2 probe = at.foot + at.frame.y_s * ud(rng);

        const PathProjection proj =
            project_onto_path(probe, c, s_ref, static_cast<int>(c.samples.size()));
        if (proj.ratio <= 0.0 || proj.ratio >= 1.0) continue;  // clamped at a vertex

        double brute = 1e18;
        for (size_t j = 0; j + 1 < c.samples.size(); ++j) {
            const Vec2 a = c.samples[j].pos, b = c.samples[j + 1].pos;
            const Vec2 ab = b - a;
            const double r = std::clamp((probe - a).dot(ab) / ab.dot(ab), 0.0, 1.0);
            brute = std::min(brute, (probe - (a + ab * r)).norm());
        }
        CHECK(std::abs(std::abs(proj.d) - brute) <= 1e-9);
        // interior projections leave (p - foot) colinear with the normal
        CHECK(std::abs((probe - proj.foot).dot(proj.frame.x_s)) <= 1e-9);
    }
}

TEST_CASE("projection is idempotent at the foot point") {
    const auto pts = testsupport::hand_curve(500);
    const PathCurve c = build_path(pts, false);
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> us(5.0, c.length() - 5.0), ud(-4.0, 4.0);
    for (int i = 0; i < 200; ++i) {
        const double s_ref = us(rng);
        size_t idx = 0;
        while (idx + 1 < c.samples.size() && c.samples[idx + 1].s < s_ref) ++idx;
        const PathProjection first =
            project_onto_path(c.samples[idx].pos + Vec2{0.0, ud(rng)}, c, s_ref, 12);
        const PathProjection again = project_onto_path(first.foot, c, first.s, 12);
        CHECK(std::abs(again.d) <= 1e-9);
        CHECK(std::abs(again.s - first.s) <= 0.5 * c.median_spacing());
    }
}

TEST_CASE("interpolated curvature is continuous along segments") {
    const auto pts = testsupport::hand_curve(400);
    const PathCurve c = build_path(pts, false);
    for (size_t j = 5; j + 2 < c.samples.size(); j += 7) {
        const double cj = c.samples[j].curvature;
        const double cn = c.samples[j + 1].curvature;
        double prev = cj;
        for (double r = 0.1; r <= 1.0; r += 0.1) {
            const Vec2 probe = c.samples[j].pos + (c.samples[j + 1].pos - c.samples[j].pos) * r;
            const PathProjection p = project_onto_path(probe, c, c.samples[j].s, 4);
            CHECK(std::abs(p.curvature - prev) <= std::abs(cn - cj) + 1e-12);
            prev = p.curvature;
        }
    }
}

TEST_CASE("abscissa prediction clamps open paths and wraps closed ones") {
    const auto open_pts = testsupport::hand_curve(100);
    const PathCurve open = build_path(open_pts, false);
    CHECK(predict_abscissa(100.0, 50.0, 0.01, open) == doctest::Approx(100.5));
    CHECK(predict_abscissa(open.length() - 0.1, 100.0, 1.0, open) ==
          doctest::Approx(open.length()));
    CHECK(predict_abscissa(0.05, -10.0, 1.0, open) == 0.0);

    const auto ring_pts = testsupport::circle_points(200, 100.0, 0, 0, 1.0 - 1.0 / 200.0);
    PathCurve ring = build_path(ring_pts, true);
    const double total = ring.length();
    CHECK(predict_abscissa(total - 1.0, 50.0, 0.1, ring) == doctest::Approx(4.0));
}

TEST_CASE("orientation error against the Frenet frame") {
    Frame f{{1.0, 0.0}, {0.0, 1.0}};
    CHECK(orientation_error({1.0, 0.0}, f) == doctest::Approx(0.0));
    CHECK(orientation_error({0.0, 1.0}, f) == doctest::Approx(M_PI / 2.0));
    const double a = M_PI / 6.0;
    CHECK(orientation_error({std::cos(a), std::sin(a)}, f) == doctest::Approx(a).epsilon(1e-12));
    // same for a rotated frame
    const Vec2 xs = Vec2{3.0, 4.0}.normalized();
    Frame g{xs, xs.perp()};
    const Vec2 v = xs * std::cos(a) + xs.perp() * std::sin(a);
    CHECK(orientation_error(v, g) == doctest::Approx(a).epsilon(1e-12));
}

TEST_CASE("path csv ingestion") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "bs_path_test";
    fs::create_directories(dir);

    const auto good = dir / "good.csv";
    testsupport::write_path_csv(good.string(), testsupport::circle_points(50, 80.0), false);
    const PathCurve c = load_path_csv(good.string());
    CHECK(c.samples.size() == 50);
    CHECK(!c.closed);

    const auto ring = dir / "ring.csv";
    testsupport::write_path_csv(ring.string(),
                                testsupport::circle_points(50, 80.0, 0, 0, 0.98), true);
    CHECK(load_path_csv(ring.string()).closed);

    const auto bad = dir / "bad.csv";
    {
        std::ofstream out(bad);
        out << "1,2\n3;4\n";
    }
    try {
        load_path_csv(bad.string());
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::parse_error);
    }
    CHECK_THROWS_AS(load_path_csv((dir / "absent.csv").string()), Error);
}
