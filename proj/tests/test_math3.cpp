#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "beamsteer/math3.hpp"

using namespace beamsteer::geom;

TEST_CASE("mat3 algebra against hand values") {
    const Mat3 a{{1, 2, 3, 4, 5, 6, 7, 8, 10}};
    CHECK(a.det() == doctest::Approx(-3.0));
    CHECK(a.transpose()(0, 1) == 4.0);

    const Mat3 b{{2, 0, 1, 0, 1, 0, 1, 0, 2}};
    const Mat3 ab = a * b;
    CHECK(ab(0, 0) == doctest::Approx(1 * 2 + 2 * 0 + 3 * 1));
    CHECK(ab(2, 2) == doctest::Approx(7 * 1 + 8 * 0 + 10 * 2));

    const Vec3 v{1, -2, 0.5};
    const Vec3 av = a * v;
    CHECK(av.x == doctest::Approx(1 - 4 + 1.5));

    CHECK((Mat3::identity() * a) == a);
}

TEST_CASE("skew is the cross-product matrix") {
    const Vec3 v{1, 2, 3};
    const Vec3 w{4, 5, 6};
    const Vec3 via_mat = skew(v) * w;
    const Vec3 direct = v.cross(w);
    CHECK(via_mat.x == doctest::Approx(-3.0));
    CHECK(via_mat.y == doctest::Approx(6.0));
    CHECK(via_mat.z == doctest::Approx(-3.0));
    CHECK((via_mat - direct).norm() == doctest::Approx(0.0));

    const Mat3 s = skew(v);
    CHECK((s.transpose() + s).frobenius_norm() == doctest::Approx(0.0));
    CHECK(skew({0, 0, 0}) == Mat3::zero());
}

TEST_CASE("skew(v) annihilates v") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    for (int i = 0; i < 300; ++i) {
        const Vec3 v{u(rng), u(rng), u(rng)};
        CHECK((skew(v) * v).norm() <= 1e-12 * (1.0 + v.squared_norm()));
    }
}

TEST_CASE("symmetric eigendecomposition on random matrices") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 200; ++i) {
        Mat3 g;
        for (auto& x : g.a) x = u(rng);
        const Mat3 m = g.transpose() * g;  // SPD (or PSD)
        const SymEig3 e = sym_eig3(m);

        CHECK(e.values.x >= e.values.y);
        CHECK(e.values.y >= e.values.z);
        const double scale = std::max(1.0, e.values.x);
        for (int k = 0; k < 3; ++k) {
            const Vec3 v = e.vectors[k];
            const double lambda = k == 0 ? e.values.x : (k == 1 ? e.values.y : e.values.z);
            CHECK((m * v - v * lambda).norm() <= 1e-10 * scale);
            CHECK(v.norm() == doctest::Approx(1.0));
        }
        CHECK(std::abs(e.vectors[0].dot(e.vectors[1])) < 1e-12);
        CHECK(std::abs(e.vectors[0].dot(e.vectors[2])) < 1e-12);
        // trace preserved
        CHECK(e.values.x + e.values.y + e.values.z ==
              doctest::Approx(m(0, 0) + m(1, 1) + m(2, 2)).epsilon(1e-12));
    }
}

TEST_CASE("svd3 singular values match ||M v_i|| and detect rank 2") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const Vec3 t{u(rng), u(rng), u(rng)};
        if (t.norm() < 0.1) continue;
        const Mat3 m = skew(t);  // exactly rank 2
        const Svd3 s = svd3(m);
        CHECK(s.singular.z <= 1e-12 * s.singular.x);
        CHECK(s.singular.x == doctest::Approx(t.norm()));  // skew has sv = (|t|, |t|, 0)
        CHECK(s.singular.y == doctest::Approx(t.norm()));
        // null vector is the axis
        CHECK(std::abs(s.right[2].normalized().dot(t.normalized())) == doctest::Approx(1.0));
    }
}
