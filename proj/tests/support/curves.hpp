#pragma once

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "beamsteer/geometry.hpp"

// Deterministic reference curves shared by the test and acceptance suites.

namespace testsupport {

using beamsteer::geom::Vec2;
using beamsteer::geom::Vec3;

inline std::vector<Vec2> circle_points(int n, double radius, double cx = 400.0, double cy = 300.0,
                                       double arc_fraction = 0.97) {
    std::vector<Vec2> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double a = 2.0 * M_PI * arc_fraction * i / (n - 1);
        pts.push_back({cx + radius * std::cos(a), cy + radius * std::sin(a)});
    }
    return pts;
}

// Smooth freehand-style stroke: monotone in x, two y harmonics, curvature
// radius >= ~15 px (tablet-drawn resection curves are smooth at pixel scale).
inline std::vector<Vec2> hand_curve(int n) {
    std::vector<Vec2> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double u = static_cast<double>(i) / (n - 1);
        const double x = 100.0 + 440.0 * u;
        const double y = 300.0 + 90.0 * std::sin(2.0 * M_PI * u) +
                         20.0 * std::sin(6.0 * M_PI * u + 1.1);
        pts.push_back({x, y});
    }
    return pts;
}

// Self-crossing figure-eight (lemniscate-like), for branch-disambiguation tests.
inline std::vector<Vec2> figure_eight(int n, double a = 150.0, double cx = 400.0,
                                      double cy = 300.0) {
    std::vector<Vec2> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * M_PI * i / n * 0.98 - M_PI / 2.0;
        pts.push_back({cx + a * std::sin(t), cy + a * std::sin(t) * std::cos(t)});
    }
    return pts;
}

// Spiral over the camera-facing cap of a sphere, polar angle sweeping
// phi0 -> phi1 while the azimuth makes `turns` revolutions.
inline std::vector<Vec3> sphere_spiral(const Vec3& center, double radius, int n,
                                       double phi0 = 0.12, double phi1 = 0.5,
                                       double turns = 2.0) {
    std::vector<Vec3> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double u = static_cast<double>(i) / (n - 1);
        const double phi = phi0 + (phi1 - phi0) * u;
        const double psi = 2.0 * M_PI * turns * u;
        pts.push_back(center + radius * Vec3{std::sin(phi) * std::cos(psi),
                                             std::sin(phi) * std::sin(psi), -std::cos(phi)});
    }
    return pts;
}

inline void write_path_csv(const std::string& file, const std::vector<Vec2>& pts,
                           bool closed = false) {
    std::ofstream out(file);
    if (closed) out << "# closed\n";
    for (const auto& p : pts) out << p.x << "," << p.y << "\n";
}

inline std::vector<Vec2> project_all(const beamsteer::geom::CameraModel& cam,
                                     const std::vector<Vec3>& world) {
    std::vector<Vec2> out;
    out.reserve(world.size());
    for (const auto& p : world) out.push_back(beamsteer::geom::project(cam, p).affine());
    return out;
}

}  // namespace testsupport
