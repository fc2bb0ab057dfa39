#include "doctest.h"

#include "sectoriga/geometry.hpp"
#include "sectoriga/spaces.hpp"

#include <cmath>
#include <random>

using namespace siga;

TEST_CASE("full-disk control net") {
    const SectorGeometry g = build_sector(2 * kPi);
    CHECK(g.n_arc == 4);
    const NurbsPatch& p = g.F.patch;
    REQUIRE(p.n1() == 2);
    REQUIRE(p.n2() == 9);
    const double s = 1 / std::sqrt(2.0);
    const std::vector<Vec2> wc = g.weighted_control_points();
    // weighted outer ring (w c) and weights, angular index 0..8
    const double ex[9][3] = {{1, 0, 1}, {s, s, s}, {0, 1, 1}, {-s, s, s}, {-1, 0, 1},
                             {-s, -s, s}, {0, -1, 1}, {s, -s, s}, {1, 0, 1}};
    for (int i2 = 0; i2 < 9; ++i2) {
        const int o = p.index(1, i2), c = p.index(0, i2);
        CHECK(wc[o][0] == doctest::Approx(ex[i2][0]).epsilon(1e-15));
        CHECK(wc[o][1] == doctest::Approx(ex[i2][1]).epsilon(1e-15));
        CHECK(p.weights[o] == doctest::Approx(ex[i2][2]).epsilon(1e-15));
        CHECK(p.weights[c] == p.weights[o]);
        CHECK(g.F.points[c].norm() == 0.0);
        // conic construction: |c| in {1, 1/cos(arc/2)}
        const double r = g.F.points[o].norm();
        CHECK(r == doctest::Approx(i2 % 2 ? std::sqrt(2.0) : 1.0).epsilon(1e-15));
    }
    CHECK(p.kv1.knots() == std::vector<double>{0, 0, 1, 1});
    CHECK(p.kv2.knots() == std::vector<double>{0, 0, 0, 0.25, 0.25, 0.5, 0.5, 0.75, 0.75, 1, 1, 1});
}

TEST_CASE("radius identity |F| = z1") {
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (double omega : {2 * kPi, kPi / 2, 1.5 * kPi, 1.0, 2.5, kPi}) {
        const SectorGeometry g = build_sector(omega);
        double worst = 0.0;
        for (int t = 0; t < 10000; ++t) {
            const Vec2 z(U(rng), U(rng));
            worst = std::max(worst, std::abs(g.map(z).norm() - z[0]));
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("angles at arc endpoints and midpoints") {
    for (double omega : {2 * kPi, kPi / 2, 1.5 * kPi, 1.0, 3.0}) {
        const SectorGeometry g = build_sector(omega);
        const int n = 2 * g.n_arc;
        for (int i = 0; i <= n; ++i) {
            const double phi = i * omega / n;
            const Vec2 x = g.map(Vec2(1.0, static_cast<double>(i) / n));
            CHECK(std::abs(x[0] - std::cos(phi)) < 1e-12);
            CHECK(std::abs(x[1] - std::sin(phi)) < 1e-12);
        }
    }
    const SectorGeometry g = build_sector(2 * kPi);
    const Vec2 x = g.map(Vec2(1.0, 0.125));
    CHECK(x[0] == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));
    CHECK(x[1] == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));
    for (double z1 : {0.0, 0.2, 0.9}) {
        const Vec2 y = g.map(Vec2(z1, 0.0));
        CHECK(y[0] == doctest::Approx(z1));
        CHECK(y[1] == 0.0);
    }
    for (double z2 : {0.0, 0.3, 0.77, 1.0}) CHECK(g.map(Vec2(0.0, z2)).norm() == 0.0);
}

TEST_CASE("other angles") {
    const SectorGeometry q = build_sector(kPi / 2);
    CHECK(q.n_arc == 1);
    CHECK(q.F.patch.n2() == 3);
    CHECK(q.F.patch.weights[q.F.patch.index(1, 1)] == doctest::Approx(std::cos(kPi / 4)).epsilon(1e-15));
    const SectorGeometry t = build_sector(1.5 * kPi);
    CHECK(t.n_arc == 3);
    const Vec2 a = t.map(Vec2(1, 0)), b = t.map(Vec2(1, 1));
    CHECK(a[0] == doctest::Approx(1.0));
    CHECK(std::abs(a[1]) < 1e-15);
    CHECK(std::abs(b[0]) < 1e-15);
    CHECK(b[1] == doctest::Approx(-1.0));
    CHECK(build_sector(1.0).n_arc == 1);
    CHECK(build_sector(2.0).n_arc == 2);
    CHECK(build_sector(kPi).n_arc == 2);
    CHECK_THROWS_AS(build_sector(0.0), DomainError);
    CHECK_THROWS_AS(build_sector(7.0), DomainError);
}

TEST_CASE("weight bounds per arc") {
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (double omega : {2 * kPi, 1.0, 4.0}) {
        const SectorGeometry g = build_sector(omega);
        const double lo = std::cos(0.5 * g.arc_angle());
        for (int t = 0; t < 1000; ++t) {
            const double W = eval_weight(g.F.patch, Vec2(U(rng), U(rng))).W;
            CHECK(W >= lo - 1e-14);
            CHECK(W <= 1 + 1e-14);
        }
    }
}

TEST_CASE("Jacobian") {
    const SectorGeometry g = build_sector(2 * kPi);
    SUBCASE("central differences") {
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        const double d = 1e-6;
        for (int t = 0; t < 500; ++t) {
            const Vec2 z(0.01 + 0.98 * U(rng), 0.01 + 0.98 * U(rng));
            if (std::abs(std::fmod(z[1] * 4, 1.0)) < 1e-4 || std::abs(std::fmod(z[1] * 4, 1.0)) > 1 - 1e-4) continue;
            const JacobianEval j = g.jacobian(z);
            const Vec2 c1 = (g.map(z + Vec2(d, 0)) - g.map(z - Vec2(d, 0))) / (2 * d);
            const Vec2 c2 = (g.map(z + Vec2(0, d)) - g.map(z - Vec2(0, d))) / (2 * d);
            CHECK((j.J.col(0) - c1).norm() < 1e-7 * j.J.norm());
            CHECK((j.J.col(1) - c2).norm() < 1e-7 * j.J.norm());
            CHECK(j.det > 0);
            CHECK_FALSE(j.singular);
        }
    }
    SUBCASE("structure on the first leg") {
        for (double z1 : {0.1, 0.5, 1.0}) {
            const JacobianEval j = g.jacobian(Vec2(z1, 0.0));
            CHECK(j.J(0, 0) == doctest::Approx(1.0));
            CHECK(std::abs(j.J(1, 0)) < 1e-15);
            CHECK(std::abs(j.J(0, 1)) < 1e-14);
            // end derivative of the quadratic arc: p (w1/w0) (P1 - P0) / (knot span)
            CHECK(j.J(1, 1) == doctest::Approx(z1 * 2 * std::sqrt(0.5) / 0.25).epsilon(1e-13));
            CHECK(j.det > 0);
        }
    }
    SUBCASE("radial-linear det scaling") {
        for (double z2 : {0.05, 0.3, 0.61, 0.9}) {
            const double d1 = g.jacobian(Vec2(0.25, z2)).det, d2 = g.jacobian(Vec2(0.5, z2)).det;
            CHECK(d2 == doctest::Approx(2 * d1).epsilon(1e-13));
        }
    }
    SUBCASE("singular edge is flagged") {
        const JacobianEval j = g.jacobian(Vec2(0.0, 0.4));
        CHECK(j.singular);
        CHECK(j.det == 0.0);
        CHECK(j.J.allFinite());
    }
    SUBCASE("unit square geometry gives the identity") {
        NurbsMap sq;
        sq.patch.kv1 = KnotVector(1, {0, 0, 1, 1});
        sq.patch.kv2 = KnotVector(1, {0, 0, 1, 1});
        sq.patch.weights = {1, 1, 1, 1};
        sq.points = {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1), Vec2(1, 1)};
        const JacobianEval j = sq.jacobian(Vec2(0.3, 0.8));
        CHECK((j.J - Eigen::Matrix2d::Identity()).norm() < 1e-15);
        CHECK(j.det == doctest::Approx(1.0));
    }
}

TEST_CASE("Bezier mesh") {
    const SectorGeometry g = build_sector(2 * kPi);
    const BezierMesh m = build_mesh(g, 6, 16, 0.5);
    CHECK(m.num_elements() == 96);
    const std::vector<double> ex{0, 1.0 / 36, 1.0 / 9, 0.25, 4.0 / 9, 25.0 / 36, 1};
    for (int j = 0; j <= 6; ++j) CHECK(m.z1[j] == doctest::Approx(ex[j]).epsilon(1e-15));
    CHECK(m.inner_aspect_ratio() == doctest::Approx((1.0 / 16) / std::pow(1.0 / 6, 2.0)).epsilon(1e-14));

    const BezierMesh c = build_mesh(g, 1, 4, 1.0);
    CHECK(c.num_elements() == 4);
    for (int e = 0; e < 4; ++e) {
        const Rect r = c.element(e);
        CHECK(r.a1 == 0.0);
        CHECK(r.b1 == 1.0);
        CHECK(r.a2 == doctest::Approx(e / 4.0));
        CHECK(r.b2 == doctest::Approx((e + 1) / 4.0));
    }
    // elements tile the square
    double area = 0.0;
    for (int e = 0; e < m.num_elements(); ++e) area += m.element(e).area();
    CHECK(area == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(build_mesh(g, 4, 6, 1.0), DomainError);
}

TEST_CASE("physical anisotropy of the innermost element on uniform meshes") {
    const SectorGeometry g = build_sector(2 * kPi);
    for (int J : {4, 8, 16, 32}) {
        const BezierMesh m = build_mesh(g, J, 4 * J, 1.0);
        const double radial = m.z1[1] - m.z1[0];
        const double arc = m.z1[1] * 2 * kPi * (m.z2[1] - m.z2[0]);  // outer arc length
        const double scaled = radial / arc / J;  // (radial / arc) * h
        CHECK(scaled > 0.5);
        CHECK(scaled < 2.0);
    }
}

TEST_CASE("geometry is reproduced by refined spaces") {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const SectorGeometry g = build_sector(2 * kPi);
    for (int p : {2, 3, 5}) {
        const TensorSpace ts = build_tensor_space(g, p, p - 1, 5, 20, 0.4);
        NurbsMap m{ts.patch, ts.points};
        double worst = 0.0;
        for (int t = 0; t < 1000; ++t) {
            const Vec2 z(U(rng), U(rng));
            worst = std::max(worst, (m.map(z) - g.map(z)).norm());
        }
        CHECK(worst < 1e-12);
    }
}
