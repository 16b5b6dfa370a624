#include "beamsteer/path.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace beamsteer::path {

namespace {

// Signed inverse circumradius of the triangle (a, b, c); zero for collinear
// points, positive for a left turn.
double three_point_curvature(const Vec2& a, const Vec2& b, const Vec2& c) {
    const Vec2 u = b - a;
    const Vec2 v = c - b;
    const double cross = u.cross(v);
    if (cross == 0.0) return 0.0;
    const double la = u.norm();
    const double lb = v.norm();
    const double lc = (c - a).norm();
    return 2.0 * cross / (la * lb * lc);
}

}  // namespace

double PathCurve::length() const {
    double s_last = samples.back().s;
    if (closed) s_last += (samples.front().pos - samples.back().pos).norm();
    return s_last;
}

double PathCurve::median_spacing() const { return spacing_median; }

PathCurve build_path(std::span<const Vec2> points, bool closed) {
    if (points.size() < 3)
        throw Error(Errc::too_few_points, "a path needs at least 3 points");

    PathCurve curve;
    curve.closed = closed;
    curve.samples.resize(points.size());

    double s = 0.0;
    for (size_t i = 0; i < points.size(); ++i) {
        if (i > 0) {
            const double gap = (points[i] - points[i - 1]).norm();
            if (gap < 1e-9)
                throw Error(Errc::duplicate_points,
                            "consecutive path points closer than 1e-9 px at index " +
                                std::to_string(i));
            s += gap;
        }
        curve.samples[i].pos = points[i];
        curve.samples[i].s = s;
    }
    if (closed && (points.front() - points.back()).norm() < 1e-9)
        throw Error(Errc::duplicate_points, "closed path repeats its first point");

    const size_t n = points.size();
    for (size_t i = 0; i < n; ++i) {
        size_t ip, in;
        if (closed) {
            ip = (i + n - 1) % n;
            in = (i + 1) % n;
        } else if (i == 0 || i == n - 1) {
            continue;  // endpoints copy a neighbor below
        } else {
            ip = i - 1;
            in = i + 1;
        }
        curve.samples[i].curvature = three_point_curvature(points[ip], points[i], points[in]);
    }
    if (!closed) {
        curve.samples.front().curvature = curve.samples[1].curvature;
        curve.samples.back().curvature = curve.samples[n - 2].curvature;
    }

    std::vector<double> gaps;
    gaps.reserve(n);
    for (size_t i = 1; i < n; ++i) gaps.push_back(curve.samples[i].s - curve.samples[i - 1].s);
    if (closed) gaps.push_back(curve.length() - curve.samples.back().s);
    std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
    curve.spacing_median = gaps[gaps.size() / 2];
    return curve;
}

PathCurve load_path_csv(const std::string& file) {
    std::ifstream in(file);
    if (!in)
        throw Error(Errc::io_error, "cannot open path file: " + file);

    bool closed = false;
    std::vector<Vec2> pts;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.find("closed") != std::string::npos) closed = true;
            continue;
        }
        std::istringstream ss(line);
        double x, y;
        char c;
        if (!(ss >> x >> c >> y) || c != ',')
            throw Error(Errc::parse_error,
                        file + ":" + std::to_string(lineno) + ": expected \"x,y\"");
        pts.push_back({x, y});
    }
    return build_path(pts, closed);
}

namespace {

struct SegRange {
    size_t begin;
    size_t end;  // inclusive
};

// Segments whose [s_j, s_{j+1}] extent intersects [a, b] (indices of the
// sorted abscissa array; the closing segment of a closed curve ends at total).
SegRange segment_range(const PathCurve& path, double a, double b) {
    const auto& smp = path.samples;
    const size_t nseg = path.segment_count();
    auto less_s = [](const PathSample& sm, double v) { return sm.s < v; };

    const auto lo = std::lower_bound(smp.begin(), smp.end(), a, less_s);
    size_t begin = lo == smp.begin() ? 0 : static_cast<size_t>(lo - smp.begin()) - 1;
    const auto hi = std::lower_bound(smp.begin(), smp.end(), b, less_s);
    size_t end = hi == smp.begin() ? 0 : static_cast<size_t>(hi - smp.begin()) - 1;
    // a segment starting exactly at b still intersects
    if (hi != smp.end() && hi->s == b) end = static_cast<size_t>(hi - smp.begin());
    begin = std::min(begin, nseg - 1);
    end = std::min(end, nseg - 1);
    return {begin, end};
}

}  // namespace

PathProjection project_onto_path(const Vec2& p, const PathCurve& path, double s_pred, int window) {
    if (window < 1)
        throw Error(Errc::empty_window, "abscissa window admits no samples");
    const auto& smp = path.samples;
    const size_t n = smp.size();
    const size_t nseg = path.segment_count();
    const double total = path.length();
    const double reach = window * path.median_spacing();

    if (path.closed) {
        s_pred -= total * std::floor(s_pred / total);
    } else {
        s_pred = std::clamp(s_pred, 0.0, total);
    }

    // up to two contiguous segment-index ranges covering [s_pred +- reach]
    SegRange ranges[2];
    int nranges = 0;
    if (path.closed && 2.0 * reach >= total) {
        ranges[nranges++] = {0, nseg - 1};
    } else {
        double a = s_pred - reach;
        double b = s_pred + reach;
        if (!path.closed) {
            ranges[nranges++] = segment_range(path, std::max(a, 0.0), std::min(b, total));
        } else {
            a -= total * std::floor(a / total);
            b -= total * std::floor(b / total);
            if (a <= b) {
                ranges[nranges++] = segment_range(path, a, b);
            } else {
                ranges[nranges++] = segment_range(path, 0.0, b);
                ranges[nranges++] = segment_range(path, a, total);
            }
        }
    }

    double best_dist = std::numeric_limits<double>::infinity();
    size_t best_seg = 0;
    double best_ratio = 0.0;
    Vec2 best_foot{};
    bool found = false;

    for (int ri = 0; ri < nranges; ++ri) {
        for (size_t j = ranges[ri].begin; j <= ranges[ri].end; ++j) {
            const Vec2 a = smp[j].pos;
            const Vec2 b = smp[(j + 1) % n].pos;
            found = true;

            const Vec2 ab = b - a;
            const double len2 = ab.dot(ab);
            const double r = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
            const Vec2 foot = a + ab * r;
            const double dist = (p - foot).norm();
            const bool better =
                dist < best_dist || (dist == best_dist && smp[j].s + r < smp[best_seg].s);
            if (better) {
                best_dist = dist;
                best_seg = j;
                best_ratio = r;
                best_foot = foot;
            }
        }
    }
    if (!found)
        throw Error(Errc::empty_window, "no path samples within the abscissa window");

    const size_t j = best_seg;
    const size_t jn = (j + 1) % n;
    const double seg_len = (smp[jn].pos - smp[j].pos).norm();

    PathProjection proj;
    proj.foot = best_foot;
    proj.segment = j;
    proj.ratio = best_ratio;
    proj.s = smp[j].s + best_ratio * seg_len;
    proj.curvature = smp[j].curvature * (1.0 - best_ratio) + smp[jn].curvature * best_ratio;
    proj.frame.x_s = (smp[jn].pos - smp[j].pos) / seg_len;
    proj.frame.y_s = proj.frame.x_s.perp();
    proj.d = (p - best_foot).dot(proj.frame.y_s);

    // central-difference dC/ds at both segment ends, interpolated like C
    auto dcds_at = [&](size_t i) {
        size_t ip, in;
        if (path.closed) {
            ip = (i + n - 1) % n;
            in = (i + 1) % n;
        } else {
            ip = i == 0 ? 0 : i - 1;
            in = i == n - 1 ? n - 1 : i + 1;
        }
        double ds = smp[in].s - smp[ip].s;
        if (path.closed && ds <= 0.0) ds += total;
        if (ds <= 0.0) return 0.0;
        return (smp[in].curvature - smp[ip].curvature) / ds;
    };
    proj.dcurv_ds = dcds_at(j) * (1.0 - best_ratio) + dcds_at(jn) * best_ratio;
    return proj;
}

double predict_abscissa(double s, double s_dot, double te, const PathCurve& path) {
    double pred = s + s_dot * te;
    const double total = path.length();
    if (path.closed) {
        pred -= total * std::floor(pred / total);
        return pred;
    }
    return std::clamp(pred, 0.0, total);
}

double orientation_error(const Vec2& v_dir, const Frame& frame) {
    return std::atan2(v_dir.dot(frame.y_s), v_dir.dot(frame.x_s));
}

}  // namespace beamsteer::path
