#pragma once

#include <array>
#include <cmath>

// Fixed-size 2/3-dimensional linear algebra. Everything in this project is
// 3x3 or smaller, so the types are plain value structs with no allocation.

namespace beamsteer::geom {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double k) const { return {x * k, y * k}; }
    constexpr Vec2 operator/(double k) const { return {x / k, y / k}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    // z-component of the 3D cross product of the two lifted vectors.
    constexpr double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    // +90 degree rotation (z_hat x v).
    constexpr Vec2 perp() const { return {-y, x}; }
    double norm() const { return std::hypot(x, y); }
    Vec2 normalized() const { const double n = norm(); return {x / n, y / n}; }
    constexpr bool operator==(const Vec2&) const = default;
};

inline constexpr Vec2 operator*(double k, const Vec2& v) { return v * k; }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator*(double k) const { return {x * k, y * k, z * k}; }
    constexpr Vec3 operator/(double k) const { return {x / k, y / k, z / k}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    constexpr Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    constexpr double squared_norm() const { return dot(*this); }
    Vec3 normalized() const { const double n = norm(); return {x / n, y / n, z / n}; }
    constexpr bool operator==(const Vec3&) const = default;
};

inline constexpr Vec3 operator*(double k, const Vec3& v) { return v * k; }

struct Mat3 {
    // row-major
    std::array<double, 9> a{};

    static constexpr Mat3 identity() { return {{1, 0, 0, 0, 1, 0, 0, 0, 1}}; }
    static constexpr Mat3 zero() { return {}; }
    static constexpr Mat3 from_rows(const Vec3& r0, const Vec3& r1, const Vec3& r2) {
        return {{r0.x, r0.y, r0.z, r1.x, r1.y, r1.z, r2.x, r2.y, r2.z}};
    }

    constexpr double& operator()(int r, int c) { return a[3 * r + c]; }
    constexpr double operator()(int r, int c) const { return a[3 * r + c]; }

    constexpr Vec3 row(int r) const { return {a[3 * r], a[3 * r + 1], a[3 * r + 2]}; }
    constexpr Vec3 col(int c) const { return {a[c], a[3 + c], a[6 + c]}; }

    constexpr Mat3 operator+(const Mat3& o) const {
        Mat3 m;
        for (int i = 0; i < 9; ++i) m.a[i] = a[i] + o.a[i];
        return m;
    }
    constexpr Mat3 operator-(const Mat3& o) const {
        Mat3 m;
        for (int i = 0; i < 9; ++i) m.a[i] = a[i] - o.a[i];
        return m;
    }
    constexpr Mat3 operator*(double k) const {
        Mat3 m;
        for (int i = 0; i < 9; ++i) m.a[i] = a[i] * k;
        return m;
    }
    constexpr Vec3 operator*(const Vec3& v) const {
        return {row(0).dot(v), row(1).dot(v), row(2).dot(v)};
    }
    constexpr Mat3 operator*(const Mat3& o) const {
        Mat3 m;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                m(r, c) = (*this)(r, 0) * o(0, c) + (*this)(r, 1) * o(1, c) + (*this)(r, 2) * o(2, c);
        return m;
    }
    constexpr Mat3 transpose() const {
        return {{a[0], a[3], a[6], a[1], a[4], a[7], a[2], a[5], a[8]}};
    }
    constexpr double det() const {
        return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
               a[2] * (a[3] * a[7] - a[4] * a[6]);
    }
    double frobenius_norm() const {
        double s = 0.0;
        for (double v : a) s += v * v;
        return std::sqrt(s);
    }
    constexpr double max_abs_entry() const {
        double m = 0.0;
        for (double v : a)
            if (v < 0 ? -v > m : v > m) m = v < 0 ? -v : v;
        return m;
    }
    constexpr bool operator==(const Mat3&) const = default;
};

inline constexpr Mat3 operator*(double k, const Mat3& m) { return m * k; }

// Cross-product matrix: skew(v) * w == v x w, and skew(v)^T == -skew(v).
inline constexpr Mat3 skew(const Vec3& v) {
    return {{0, -v.z, v.y, v.z, 0, -v.x, -v.y, v.x, 0}};
}

struct SymEig3 {
    Vec3 values;                  // descending
    std::array<Vec3, 3> vectors;  // matching columns, orthonormal
};

// Eigen-decomposition of a symmetric 3x3 matrix by cyclic Jacobi rotations.
SymEig3 sym_eig3(const Mat3& m);

struct Svd3 {
    Vec3 singular;                    // descending, non-negative
    std::array<Vec3, 3> right;        // right singular vectors (columns of V)
};

// Singular values / right singular vectors of a general 3x3 matrix,
// obtained from the eigen-decomposition of M^T M.
Svd3 svd3(const Mat3& m);

}  // namespace beamsteer::geom
