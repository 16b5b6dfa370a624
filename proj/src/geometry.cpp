#include "beamsteer/geometry.hpp"

#include <cmath>

namespace beamsteer::geom {

Mat3 skew_of(const Vec3& v) { return skew(v); }

FundamentalMatrix FundamentalMatrix::from(const Mat3& raw) {
    const double fro = raw.frobenius_norm();
    if (fro < 1e-300)
        throw Error(Errc::rank_deficient, "fundamental matrix is numerically zero");
    Mat3 m = raw * (1.0 / fro);

    // fix the overall sign by the largest-magnitude entry (ties lean positive)
    double best = 0.0;
    for (double v : m.a)
        if (std::abs(v) > std::abs(best) || (std::abs(v) == std::abs(best) && v > best)) best = v;
    if (best < 0.0) m = m * -1.0;
    return {m};
}

FundamentalMatrix FundamentalMatrix::transposed() const {
    return FundamentalMatrix::from(m.transpose());
}

FundamentalMatrix fundamental_from_poses(const Intrinsics& k_src, const Intrinsics& k_dst,
                                         const Mat3& r, const Vec3& t) {
    if (t.norm() < 1e-12)
        throw Error(Errc::zero_baseline, "translation between views is zero");
    const Mat3 k_dst_inv_t = k_dst.inverse().transpose();
    return FundamentalMatrix::from(k_dst_inv_t * skew(t) * r * k_src.inverse());
}

FundamentalMatrix fundamental_to_virtual(const Intrinsics& k_src, const Mat3& r, const Vec3& t) {
    if (t.norm() < 1e-12)
        throw Error(Errc::zero_baseline, "translation between views is zero");
    return FundamentalMatrix::from(skew(t) * r * k_src.inverse());
}

Epipole epipole_of(const FundamentalMatrix& f) {
    const Svd3 s = svd3(f.m);
    const double largest = s.singular.x;
    if (s.singular.y <= 1e-9 * largest)
        throw Error(Errc::rank_deficient, "null space dimension > 1");
    return {HomogPixel::from(s.right[2]).normalized()};
}

double epipolar_residual(const FundamentalMatrix& f, const HomogPixel& p_dst,
                         const HomogPixel& p_src) {
    return p_dst.normalized().vec().dot(f.m * p_src.normalized().vec());
}

HomogPixel project(const CameraModel& cam, const Vec3& world) {
    const Vec3 pc = cam.rotation * world + cam.translation;
    if (pc.z <= 0.0)
        throw Error(Errc::behind_camera, "point has non-positive depth");
    return {cam.k.cx + cam.k.fx * pc.x / pc.z, cam.k.cy + cam.k.fy * pc.y / pc.z, 1.0};
}

Vec3 ray_direction(const CameraModel& cam, const HomogPixel& p) {
    const HomogPixel q = p.normalized();
    const Vec3 dir_cam{(q.x - cam.k.cx) / cam.k.fx, (q.y - cam.k.cy) / cam.k.fy, 1.0};
    return (cam.rotation.transpose() * dir_cam).normalized();
}

BeamDirection triangulate_direction(const HomogPixel& p_l, const HomogPixel& p_r,
                                    const CameraModel& cam_l, const CameraModel& cam_r,
                                    const Vec3& mirror_pivot) {
    const Vec3 o1 = cam_l.center();
    const Vec3 o2 = cam_r.center();
    const Vec3 d1 = ray_direction(cam_l, p_l);
    const Vec3 d2 = ray_direction(cam_r, p_r);

    if (d1.cross(d2).norm() < 1e-10)
        throw Error(Errc::degenerate, "viewing rays are parallel");

    // closest points o1 + s*d1, o2 + u*d2 of the two rays
    const Vec3 b = o2 - o1;
    const double c = d1.dot(d2);
    const double denom = 1.0 - c * c;
    const double s = (b.dot(d1) - b.dot(d2) * c) / denom;
    const double u = (b.dot(d1) * c - b.dot(d2)) / denom;
    const Vec3 mid = ((o1 + d1 * s) + (o2 + d2 * u)) * 0.5;
    return (mid - mirror_pivot).normalized();
}

}  // namespace beamsteer::geom
