#pragma once

#include <span>
#include <string>
#include <vector>

#include "beamsteer/error.hpp"
#include "beamsteer/math3.hpp"

// Non-parametric image curves: construction with curvilinear coordinates,
// three-point curvature estimation, local projection of the spot and
// abscissa prediction.

namespace beamsteer::path {

using geom::Vec2;

struct PathSample {
    Vec2 pos;                // pixels
    double s = 0.0;          // curvilinear abscissa, pixels
    double curvature = 0.0;  // signed, 1/pixels (left turn positive)
};

struct PathCurve {
    std::vector<PathSample> samples;
    bool closed = false;
    double spacing_median = 0.0;  // set by build_path

    // Total abscissa: for closed curves this includes the closing segment.
    double length() const;
    double median_spacing() const;
    size_t segment_count() const { return samples.size() - (closed ? 0 : 1); }
};

// s by cumulative chord length; curvature at each interior sample is the
// signed inverse circumradius of its three-point neighborhood (endpoints copy
// their neighbor; closed curves wrap).
PathCurve build_path(std::span<const Vec2> points, bool closed);

// One "x,y" pixel pair per line; a leading "# closed" line marks closure.
PathCurve load_path_csv(const std::string& file);

struct Frame {
    Vec2 x_s;  // unit tangent, along the local segment
    Vec2 y_s;  // unit normal, +90 degrees from x_s
};

struct PathProjection {
    Vec2 foot;               // h_p, pixels
    double d = 0.0;          // signed lateral distance, (p - h_p) . y_s
    double s = 0.0;          // abscissa of the foot point
    double curvature = 0.0;  // interpolated C(s) at the foot
    double dcurv_ds = 0.0;   // finite-difference dC/ds at the foot
    Frame frame;
    double ratio = 0.0;      // position along the chosen segment, in [0,1]
    size_t segment = 0;      // index of the chosen segment's first sample
};

// Projects p onto the curve, searching only samples whose abscissa lies
// within `window` median spacings of s_pred (wrapping on closed curves).
// Ties between equidistant segments resolve toward smaller s.
PathProjection project_onto_path(const Vec2& p, const PathCurve& path, double s_pred, int window);

// Linear prediction s + s_dot * te, clamped to [0, length] on open curves
// and wrapped modulo length on closed ones.
double predict_abscissa(double s, double s_dot, double te, const PathCurve& path);

// Angle of a unit direction against the Frenet frame, in (-pi, pi]; zero
// when the direction is aligned with the tangent.
double orientation_error(const Vec2& v_dir, const Frame& frame);

}  // namespace beamsteer::path
