#include "beamsteer/math3.hpp"

#include <algorithm>
#include <cmath>

namespace beamsteer::geom {

namespace {

// One Jacobi rotation zeroing entry (p,q) of a symmetric matrix held in `m`,
// accumulating the rotation into `v`.
void jacobi_rotate(Mat3& m, Mat3& v, int p, int q) {
    const double apq = m(p, q);
    if (apq == 0.0) return;
    const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                     (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    Mat3 r = Mat3::identity();
    r(p, p) = c;
    r(q, q) = c;
    r(p, q) = s;
    r(q, p) = -s;
    m = r.transpose() * m * r;
    m(p, q) = 0.0;
    m(q, p) = 0.0;
    v = v * r;
}

double off_diag_sq(const Mat3& m) {
    return m(0, 1) * m(0, 1) + m(0, 2) * m(0, 2) + m(1, 2) * m(1, 2);
}

}  // namespace

SymEig3 sym_eig3(const Mat3& input) {
    Mat3 m = input;
    // symmetrize against tiny asymmetric round-off in callers
    for (int r = 0; r < 3; ++r)
        for (int c = r + 1; c < 3; ++c) {
            const double avg = 0.5 * (m(r, c) + m(c, r));
            m(r, c) = avg;
            m(c, r) = avg;
        }

    Mat3 v = Mat3::identity();
    const double scale = std::max(m.max_abs_entry(), 1e-300);
    for (int sweep = 0; sweep < 32 && off_diag_sq(m) > 1e-64 * scale * scale; ++sweep) {
        jacobi_rotate(m, v, 0, 1);
        jacobi_rotate(m, v, 0, 2);
        jacobi_rotate(m, v, 1, 2);
    }

    std::array<int, 3> order = {0, 1, 2};
    const Vec3 d{m(0, 0), m(1, 1), m(2, 2)};
    const std::array<double, 3> dv = {d.x, d.y, d.z};
    std::sort(order.begin(), order.end(), [&](int i, int j) { return dv[i] > dv[j]; });

    SymEig3 out;
    out.values = {dv[order[0]], dv[order[1]], dv[order[2]]};
    for (int k = 0; k < 3; ++k) out.vectors[k] = v.col(order[k]);
    return out;
}

Svd3 svd3(const Mat3& m) {
    const SymEig3 e = sym_eig3(m.transpose() * m);
    Svd3 out;
    out.right = e.vectors;
    // reading the values off as ||M v_i|| avoids the sqrt(eps) floor that
    // sqrt(lambda_i) of the squared problem would impose on tiny values
    std::array<double, 3> sv;
    for (int i = 0; i < 3; ++i) sv[i] = (m * e.vectors[i]).norm();
    for (int i = 0; i < 2; ++i)  // restore descending order if refinement reordered
        for (int j = i + 1; j < 3; ++j)
            if (sv[j] > sv[i]) {
                std::swap(sv[i], sv[j]);
                std::swap(out.right[i], out.right[j]);
            }
    out.singular = {sv[0], sv[1], sv[2]};
    return out;
}

}  // namespace beamsteer::geom
