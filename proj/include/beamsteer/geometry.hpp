#pragma once

#include "beamsteer/error.hpp"
#include "beamsteer/math3.hpp"

// Projective primitives: homogeneous pixels, pinhole cameras, fundamental
// matrices, epipoles, triangulation.
//
// Fundamental-matrix direction convention (fixed project-wide):
//   fundamental_from_poses(src -> dst) yields F with  p_dst^T F p_src = 0,
// so F maps src-image points to epipolar lines in the dst image, and
// epipole_of(F) (the right null vector) is the epipole in the *src* image.

namespace beamsteer::geom {

struct HomogPixel {
    double x = 0.0;
    double y = 0.0;
    double w = 1.0;

    constexpr Vec3 vec() const { return {x, y, w}; }
    constexpr Vec2 affine() const { return {x, y}; }

    // Scale so that w == 1 whenever |w| > 1e-12; points at infinity are kept.
    HomogPixel normalized() const {
        if (std::abs(w) > 1e-12) return {x / w, y / w, 1.0};
        return *this;
    }
    static constexpr HomogPixel from(const Vec3& v) { return {v.x, v.y, v.z}; }
    static constexpr HomogPixel from(const Vec2& v) { return {v.x, v.y, 1.0}; }
    constexpr bool operator==(const HomogPixel&) const = default;
};

struct Intrinsics {
    double fx = 900.0;
    double fy = 900.0;
    double cx = 320.0;
    double cy = 240.0;

    constexpr Mat3 matrix() const { return {{fx, 0, cx, 0, fy, cy, 0, 0, 1}}; }
    constexpr Mat3 inverse() const {
        return {{1.0 / fx, 0, -cx / fx, 0, 1.0 / fy, -cy / fy, 0, 0, 1}};
    }
    constexpr bool operator==(const Intrinsics&) const = default;
};

// Pinhole camera, millimetre world units: X_cam = R * X_world + t.
struct CameraModel {
    Intrinsics k;
    Mat3 rotation = Mat3::identity();
    Vec3 translation;

    Vec3 center() const { return -(rotation.transpose() * translation); }

    // Camera placed at `center` with orientation R (X_cam = R * (X - center)).
    static CameraModel looking(const Intrinsics& k, const Mat3& r, const Vec3& center) {
        return {k, r, -(r * center)};
    }
};

// Rank-2, unit-Frobenius, sign-fixed 3x3 epipolar map.
struct FundamentalMatrix {
    Mat3 m;

    FundamentalMatrix transposed() const;
    // Canonical scale: Frobenius norm 1, largest-magnitude entry positive.
    static FundamentalMatrix from(const Mat3& raw);
};

struct Epipole {
    HomogPixel e;
};

// Unit direction from the mirror pivot toward the scene.
using BeamDirection = Vec3;

Mat3 skew_of(const Vec3& v);  // alias of skew(), kept for call-site symmetry

// F = K_dst^{-T} [t]x R K_src^{-1} with (R, t) the pose of the src frame in
// the dst frame (X_dst = R X_src + t). The virtual mirror view has identity
// intrinsics, so with dst = virtual the formula reduces to [t]x R K_src^{-1}.
FundamentalMatrix fundamental_from_poses(const Intrinsics& k_src, const Intrinsics& k_dst,
                                         const Mat3& r, const Vec3& t);

// Identity-intrinsics destination (virtual one-pixel camera).
FundamentalMatrix fundamental_to_virtual(const Intrinsics& k_src, const Mat3& r, const Vec3& t);

// Right null vector of F (the src-image epipole under the convention above).
Epipole epipole_of(const FundamentalMatrix& f);

// p_dst^T F p_src, both pixels normalized first.
double epipolar_residual(const FundamentalMatrix& f, const HomogPixel& p_dst,
                         const HomogPixel& p_src);

HomogPixel project(const CameraModel& cam, const Vec3& world);

// World-frame unit direction of the viewing ray through a pixel.
Vec3 ray_direction(const CameraModel& cam, const HomogPixel& p);

// Midpoint-of-common-perpendicular triangulation, returned as a unit
// direction from the mirror pivot.
BeamDirection triangulate_direction(const HomogPixel& p_l, const HomogPixel& p_r,
                                    const CameraModel& cam_l, const CameraModel& cam_r,
                                    const Vec3& mirror_pivot);

}  // namespace beamsteer::geom
