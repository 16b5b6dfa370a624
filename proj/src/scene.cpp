#include "beamsteer/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace beamsteer::scene {

namespace {

double intersect_plane(const Plane& pl, const Vec3& o, const Vec3& d) {
    const double denom = pl.normal.dot(d);
    if (std::abs(denom) < 1e-14)
        throw Error(Errc::no_hit, "ray parallel to plane");
    const double t = pl.normal.dot(pl.point - o) / denom;
    if (t <= 0.0)
        throw Error(Errc::no_hit, "plane behind ray origin");
    return t;
}

double intersect_sphere(const Sphere& sp, const Vec3& o, const Vec3& d) {
    const Vec3 oc = o - sp.center;
    const double b = oc.dot(d);
    const double c = oc.dot(oc) - sp.radius * sp.radius;
    const double disc = b * b - c;
    if (disc < 0.0)
        throw Error(Errc::no_hit, "ray misses sphere");
    const double sq = std::sqrt(disc);
    const double t0 = -b - sq;
    const double t1 = -b + sq;
    if (t0 > 0.0) return t0;
    if (t1 > 0.0) return t1;
    throw Error(Errc::no_hit, "sphere behind ray origin");
}

double intersect_heightfield(const Heightfield& hf, const Vec3& o, const Vec3& d) {
    // march across the grid's xy footprint, then bisect the first sign change
    const double x0 = hf.xs.front(), x1 = hf.xs.back();
    const double y0 = hf.ys.front(), y1 = hf.ys.back();

    double t_enter = 0.0;
    double t_exit = std::numeric_limits<double>::infinity();
    auto clip = [&](double p, double dp, double lo, double hi) {
        if (std::abs(dp) < 1e-14) {
            if (p < lo || p > hi) t_exit = -1.0;
            return;
        }
        double a = (lo - p) / dp, b = (hi - p) / dp;
        if (a > b) std::swap(a, b);
        t_enter = std::max(t_enter, a);
        t_exit = std::min(t_exit, b);
    };
    clip(o.x, d.x, x0, x1);
    clip(o.y, d.y, y0, y1);
    if (t_exit <= t_enter)
        throw Error(Errc::no_hit, "ray misses heightfield footprint");

    double min_dx = std::numeric_limits<double>::infinity();
    for (size_t i = 1; i < hf.xs.size(); ++i) min_dx = std::min(min_dx, hf.xs[i] - hf.xs[i - 1]);
    for (size_t j = 1; j < hf.ys.size(); ++j) min_dx = std::min(min_dx, hf.ys[j] - hf.ys[j - 1]);
    const double planar_speed = std::max(std::hypot(d.x, d.y), 1e-9);
    const double step = 0.5 * min_dx / planar_speed;

    auto f = [&](double t) {
        const Vec3 p = o + d * t;
        return p.z - hf.sample(p.x, p.y);
    };

    double ta = t_enter + 1e-12;
    double fa = f(ta);
    for (double tb = ta + step; ta < t_exit; tb = std::min(tb + step, t_exit)) {
        tb = std::min(tb, t_exit);
        const double fb = f(tb);
        if (fa == 0.0) return ta;
        if ((fa > 0.0) != (fb > 0.0)) {
            double lo = ta, hi = tb, flo = fa;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = f(mid);
                if ((flo > 0.0) != (fm > 0.0)) {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            return 0.5 * (lo + hi);
        }
        ta = tb;
        fa = fb;
        if (tb >= t_exit) break;
    }
    throw Error(Errc::no_hit, "ray misses heightfield surface");
}

}  // namespace

double Heightfield::sample(double x, double y) const {
    auto cell = [](const std::vector<double>& v, double q) {
        auto it = std::upper_bound(v.begin(), v.end(), q);
        size_t i = it == v.begin() ? 0 : static_cast<size_t>(it - v.begin()) - 1;
        return std::min(i, v.size() - 2);
    };
    const size_t i = cell(xs, x);
    const size_t j = cell(ys, y);
    const double tx = std::clamp((x - xs[i]) / (xs[i + 1] - xs[i]), 0.0, 1.0);
    const double ty = std::clamp((y - ys[j]) / (ys[j + 1] - ys[j]), 0.0, 1.0);
    const size_t n = xs.size();
    const double z00 = z[j * n + i], z10 = z[j * n + i + 1];
    const double z01 = z[(j + 1) * n + i], z11 = z[(j + 1) * n + i + 1];
    return z00 * (1 - tx) * (1 - ty) + z10 * tx * (1 - ty) + z01 * (1 - tx) * ty + z11 * tx * ty;
}

bool Heightfield::inside(double x, double y) const {
    return x >= xs.front() && x <= xs.back() && y >= ys.front() && y <= ys.back();
}

Heightfield load_heightfield_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::io_error, "cannot open heightfield file: " + path);

    std::map<double, std::map<double, double>> rows;  // y -> x -> z
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        double x, y, zv;
        char c1, c2;
        if (!(ss >> x >> c1 >> y >> c2 >> zv) || c1 != ',' || c2 != ',')
            throw Error(Errc::parse_error,
                        "heightfield line " + std::to_string(lineno) + ": expected x,y,z");
        if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(zv))
            throw Error(Errc::validation_error,
                        "heightfield line " + std::to_string(lineno) + ": non-finite value");
        rows[y][x] = zv;
    }
    if (rows.size() < 2)
        throw Error(Errc::validation_error, "heightfield needs at least a 2x2 grid");

    Heightfield hf;
    for (const auto& [x, _] : rows.begin()->second) hf.xs.push_back(x);
    for (const auto& [y, _] : rows) hf.ys.push_back(y);
    if (hf.xs.size() < 2)
        throw Error(Errc::validation_error, "heightfield needs at least a 2x2 grid");
    for (const auto& [y, row] : rows) {
        if (row.size() != hf.xs.size())
            throw Error(Errc::validation_error, "heightfield grid is not rectangular");
        size_t i = 0;
        for (const auto& [x, zv] : row) {
            if (x != hf.xs[i++])
                throw Error(Errc::validation_error, "heightfield grid is not rectangular");
            hf.z.push_back(zv);
        }
    }
    return hf;
}

double TimeVarying::scale_at(double time) const {
    return std::pow(amplitude, std::sin(2.0 * M_PI * time / period));
}

Vec3 intersect(const Surface& s, const Vec3& origin, const BeamDirection& dir, double time) {
    return std::visit(
        [&](const auto& shape) -> Vec3 {
            using T = std::decay_t<decltype(shape)>;
            if constexpr (std::is_same_v<T, Plane>) {
                return origin + dir * intersect_plane(shape, origin, dir);
            } else if constexpr (std::is_same_v<T, Sphere>) {
                return origin + dir * intersect_sphere(shape, origin, dir);
            } else if constexpr (std::is_same_v<T, Heightfield>) {
                return origin + dir * intersect_heightfield(shape, origin, dir);
            } else {
                // similarity about the anchor: intersect the base with the
                // inversely scaled ray origin, then scale the hit distance back
                const double k = shape.scale_at(time);
                const Vec3 o2 = shape.anchor + (origin - shape.anchor) / k;
                const Vec3 hit2 = intersect(*shape.base, o2, dir, time);
                return origin + dir * (k * (hit2 - o2).dot(dir));
            }
        },
        s.shape);
}

double surface_residual(const Surface& s, const Vec3& p, double time) {
    return std::visit(
        [&](const auto& shape) -> double {
            using T = std::decay_t<decltype(shape)>;
            if constexpr (std::is_same_v<T, Plane>) {
                return shape.normal.normalized().dot(p - shape.point);
            } else if constexpr (std::is_same_v<T, Sphere>) {
                return (p - shape.center).norm() - shape.radius;
            } else if constexpr (std::is_same_v<T, Heightfield>) {
                return p.z - shape.sample(p.x, p.y);
            } else {
                const double k = shape.scale_at(time);
                const Vec3 p2 = shape.anchor + (p - shape.anchor) / k;
                return k * surface_residual(*shape.base, p2, time);
            }
        },
        s.shape);
}

MirrorState mirror_step(const MirrorState& state, const Vec3& omega, double dt) {
    const Vec3 z = state.z0 + (omega.cross(state.z0)) * dt;
    return {state.pivot, z.normalized()};
}

MirrorModel MirrorModel::default_for(const BeamDirection& nominal_z0, double joint_limit) {
    const Vec3 z = nominal_z0.normalized();
    const Vec3 seed = std::abs(z.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    const Vec3 a = (seed - z * seed.dot(z)).normalized();
    const Vec3 b = z.cross(a);
    return {a, b, joint_limit};
}

JointRates joint_rates(const MirrorModel& model, const Vec3& omega) {
    return {model.row0.dot(omega), model.row1.dot(omega)};
}

SpotObservation observe_spot(const Surface& s, double time, const MirrorState& mirror,
                             const CameraModel& cam_l, const CameraModel& cam_r,
                             double noise_sigma, std::mt19937_64& rng) {
    const Vec3 world = intersect(s, mirror.pivot, mirror.z0, time);
    HomogPixel pl = geom::project(cam_l, world);
    HomogPixel pr = geom::project(cam_r, world);
    if (noise_sigma > 0.0) {
        std::normal_distribution<double> n(0.0, noise_sigma);
        pl.x += n(rng);
        pl.y += n(rng);
        pr.x += n(rng);
        pr.y += n(rng);
    }
    return {world, pl, pr, noise_sigma};
}

}  // namespace beamsteer::scene
