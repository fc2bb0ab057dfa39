#include "doctest.h"

#include "sectoriga/splines.hpp"

#include <cmath>
#include <random>

using namespace siga;

namespace {

const std::vector<double> kXi20{0, 0, 0, 0.25, 0.25, 0.5, 0.5, 0.75, 0.75, 1, 1, 1};

double basis_value(const KnotVector& kv, int i, double z, int deriv = 0) {
    const BasisEvaluation b = eval_basis(kv, z, deriv);
    const int loc = i - b.first;
    if (loc < 0 || loc > kv.degree()) return 0.0;
    return b.ders[deriv][loc];
}

std::vector<KnotVector> sample_vectors() {
    return {make_uniform(1, 4), make_uniform(2, 4, 2), make_uniform(3, 5), make_graded(2, 6, 0.5),
            make_graded(4, 7, 0.3, 2), KnotVector(2, kXi20), make_uniform(5, 3, 3)};
}

}  // namespace

TEST_CASE("make_uniform knot layouts") {
    CHECK(make_uniform(1, 4).knots() == std::vector<double>{0, 0, 0.25, 0.5, 0.75, 1, 1});
    CHECK(make_uniform(2, 4, 2).knots() == kXi20);
    CHECK(make_uniform(3, 1).knots() == std::vector<double>{0, 0, 0, 0, 1, 1, 1, 1});
    const KnotVector kv = make_uniform(2, 4, std::vector<int>{1, 2, 1});
    CHECK(kv.multiplicities() == std::vector<int>{3, 1, 2, 1, 3});
    CHECK(kv.regularities()[2] == 0);
}

TEST_CASE("make_uniform rejects bad input") {
    CHECK_THROWS_AS(make_uniform(2, 0), DomainError);
    CHECK_THROWS_AS(make_uniform(2, 4, 4), DomainError);
    CHECK_THROWS_AS(KnotVector(2, {0, 0, 1, 1}), DomainError);
}

TEST_CASE("make_graded breakpoints") {
    const std::vector<double> bp = make_graded(1, 6, 0.5).breakpoints();
    const std::vector<double> expect{0, 1.0 / 36, 1.0 / 9, 0.25, 4.0 / 9, 25.0 / 36, 1};
    REQUIRE(bp.size() == expect.size());
    for (std::size_t i = 0; i < bp.size(); ++i) CHECK(bp[i] == doctest::Approx(expect[i]).epsilon(1e-15));
    CHECK(make_graded(1, 4, 1.0).breakpoints() == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
    const auto b2 = make_graded(2, 2, 0.5).breakpoints();
    CHECK(b2[1] == doctest::Approx(0.25).epsilon(1e-15));
    for (int p = 1; p <= 4; ++p)
        for (int J = 1; J <= 9; ++J) CHECK(make_graded(p, J, 1.0) == make_uniform(p, J));
    CHECK_THROWS_AS(make_graded(2, 4, 0.0), DomainError);
    CHECK_THROWS_AS(make_graded(2, 4, 1.5), DomainError);
}

TEST_CASE("eval_basis at endpoints and on the quarter grid") {
    const KnotVector kv(2, kXi20);
    const BasisEvaluation b0 = eval_basis(kv, 0.0);
    CHECK(b0.first == 0);
    CHECK(b0.values()[0] == 1.0);
    CHECK(b0.values()[1] == 0.0);
    CHECK(b0.values()[2] == 0.0);
    const BasisEvaluation b = eval_basis(kv, 0.125);
    CHECK(b.first == 0);
    CHECK(b.values()[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(b.values()[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(b.values()[2] == doctest::Approx(0.25).epsilon(1e-15));
    // left-limit span at 1: last function attains 1
    const BasisEvaluation b1 = eval_basis(kv, 1.0);
    CHECK(b1.first + kv.degree() == kv.size() - 1);
    CHECK(b1.values()[kv.degree()] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("partition of unity and zero derivative sum") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (const KnotVector& kv : sample_vectors()) {
        double worst = 0.0, worst_d = 0.0;
        for (int t = 0; t < 1000; ++t) {
            const double z = U(rng);
            const BasisEvaluation b = eval_basis(kv, z, 1);
            double s = 0.0, sd = 0.0;
            for (int a = 0; a <= kv.degree(); ++a) {
                s += b.ders[0][a];
                sd += b.ders[1][a];
                CHECK(b.ders[0][a] >= -1e-15);
            }
            worst = std::max(worst, std::abs(s - 1.0));
            worst_d = std::max(worst_d, std::abs(sd));
        }
        CHECK(worst < 1e-13);
        CHECK(worst_d < 1e-10);
    }
}

TEST_CASE("derivatives match central differences") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> U(0.02, 0.98);
    const double d = 1e-5;
    for (const KnotVector& kv : sample_vectors()) {
        const auto bps = kv.breakpoints();
        for (int t = 0; t < 200; ++t) {
            const double z = U(rng);
            bool near_bp = false;
            for (double b : bps) near_bp |= std::abs(z - b) < 2 * d;
            if (near_bp) continue;
            for (int i = 0; i < kv.size(); ++i) {
                const double fd = (basis_value(kv, i, z + d) - basis_value(kv, i, z - d)) / (2 * d);
                const double ex = basis_value(kv, i, z, 1);
                // second derivative of a degree-p piece is bounded by ~ p^2 / h^2; O(d^2) with margin
                CHECK(std::abs(fd - ex) < 1e-4 * (1.0 + std::abs(ex)));
            }
        }
    }
}

TEST_CASE("local support") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (const KnotVector& kv : sample_vectors()) {
        const auto& t = kv.knots();
        for (int s = 0; s < 300; ++s) {
            const double z = U(rng);
            for (int i = 0; i < kv.size(); ++i)
                if (z < t[i] || z > t[i + kv.degree() + 1]) CHECK(basis_value(kv, i, z) == 0.0);
        }
    }
}

TEST_CASE("insert_knots") {
    SUBCASE("linear reproduction") {
        const KnotVector kv(1, {0, 0, 1, 1});
        const Refinement r = insert_knots(kv, {0.5});
        CHECK(r.kv.knots() == std::vector<double>{0, 0, 0.5, 1, 1});
        Eigen::MatrixXd c(2, 1);
        c << 0, 1;
        const Eigen::MatrixXd cn = r.transfer * c;
        for (double z : {0.0, 0.1, 0.37, 0.5, 0.9, 1.0}) CHECK(eval_spline(r.kv, cn, z)[0] == doctest::Approx(z));
    }
    SUBCASE("quarter grid to eighths") {
        const KnotVector kv(2, kXi20);
        const Refinement r = insert_knots(kv, {0.125, 0.375, 0.625, 0.875});
        CHECK(r.kv.size() == kv.size() + 4);
        CHECK(r.kv.breakpoints().size() == 9u);
        CHECK(r.kv.multiplicities() == std::vector<int>{3, 1, 2, 1, 2, 1, 2, 1, 3});
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        Eigen::MatrixXd c = Eigen::MatrixXd::Random(kv.size(), 2);
        const Eigen::MatrixXd cn = r.transfer * c;
        double worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            const double z = U(rng);
            worst = std::max(worst, (eval_spline(kv, c, z) - eval_spline(r.kv, cn, z)).cwiseAbs().maxCoeff());
        }
        CHECK(worst < 1e-13);
    }
    SUBCASE("empty insertion is the identity") {
        const KnotVector kv = make_uniform(3, 4);
        const Refinement r = insert_knots(kv, {});
        CHECK(r.kv == kv);
        CHECK((r.transfer - Eigen::MatrixXd::Identity(kv.size(), kv.size())).norm() == 0.0);
    }
    SUBCASE("random reproduction on graded vectors") {
        std::mt19937 rng(19);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        for (const KnotVector& kv : sample_vectors()) {
            std::vector<double> add;
            for (int i = 0; i < 5; ++i) add.push_back(0.05 + 0.9 * U(rng));
            std::sort(add.begin(), add.end());
            const Refinement r = insert_knots(kv, add);
            const Eigen::MatrixXd c = Eigen::MatrixXd::Random(kv.size(), 1);
            const Eigen::MatrixXd cn = r.transfer * c;
            double worst = 0.0;
            for (int t = 0; t < 200; ++t) {
                const double z = U(rng);
                worst = std::max(worst, std::abs(eval_spline(kv, c, z)[0] - eval_spline(r.kv, cn, z)[0]));
            }
            CHECK(worst < 1e-12);
        }
    }
    SUBCASE("multiplicity overflow rejected") {
        const KnotVector kv(2, kXi20);
        CHECK_THROWS_AS(insert_knots(kv, {0.25, 0.25}), DomainError);
    }
}

TEST_CASE("elevate_degree") {
    SUBCASE("linear to quadratic Bernstein") {
        const KnotVector kv(1, {0, 0, 1, 1});
        Eigen::MatrixXd c(2, 1);
        c << 0, 1;
        const auto [kn, cn] = elevate_degree(kv, c, 1);
        CHECK(kn.degree() == 2);
        CHECK(kn.knots() == std::vector<double>{0, 0, 0, 1, 1, 1});
        REQUIRE(cn.rows() == 3);
        CHECK(cn(0, 0) == doctest::Approx(0.0));
        CHECK(cn(1, 0) == doctest::Approx(0.5));
        CHECK(cn(2, 0) == doctest::Approx(1.0));
    }
    SUBCASE("t = 0 is the identity") {
        const KnotVector kv = make_graded(3, 5, 0.4);
        const Refinement r = elevate_degree(kv, 0);
        CHECK(r.kv == kv);
        CHECK((r.transfer - Eigen::MatrixXd::Identity(kv.size(), kv.size())).norm() < 1e-15);
    }
    SUBCASE("circle arc in homogeneous form, t = 2") {
        const double s = std::sqrt(0.5);
        Eigen::MatrixXd c(9, 3);  // (w x, w y, w) for the full circle on the quarter grid
        c << 1, 0, 1, s, s, s, 0, 1, 1, -s, s, s, -1, 0, 1, -s, -s, s, 0, -1, 1, s, -s, s, 1, 0, 1;
        const KnotVector kv(2, kXi20);
        const auto [kn, cn] = elevate_degree(kv, c, 2);
        CHECK(kn.degree() == 4);
        CHECK(kn.multiplicities() == std::vector<int>{5, 4, 4, 4, 5});
        std::mt19937 rng(23);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        double worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            const double z = U(rng);
            const Eigen::VectorXd a = eval_spline(kv, c, z), b = eval_spline(kn, cn, z);
            worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
            // rational point stays on the unit circle
            CHECK(std::hypot(b[0] / b[2], b[1] / b[2]) == doctest::Approx(1.0).epsilon(1e-13));
        }
        CHECK(worst < 1e-13);
    }
    SUBCASE("random reproduction keeps regularity") {
        std::mt19937 rng(29);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        for (const KnotVector& kv : sample_vectors()) {
            for (int t = 1; t <= 2; ++t) {
                const Refinement r = elevate_degree(kv, t);
                CHECK(r.kv.degree() == kv.degree() + t);
                CHECK(r.kv.regularities() == kv.regularities());
                const Eigen::MatrixXd c = Eigen::MatrixXd::Random(kv.size(), 1);
                const Eigen::MatrixXd cn = r.transfer * c;
                double worst = 0.0;
                for (int s = 0; s < 200; ++s) {
                    const double z = U(rng);
                    worst = std::max(worst, std::abs(eval_spline(kv, c, z)[0] - eval_spline(r.kv, cn, z)[0]));
                }
                CHECK(worst < 1e-12);
            }
        }
    }
}

TEST_CASE("graded knots close to zero stay distinct") {
    // first breakpoint (1/J)^(1/mu) is tiny for strong grading
    const KnotVector kv = make_graded(3, 64, 0.15);
    CHECK(kv.breakpoints().size() == 65u);
    const Refinement r = elevate_degree(make_graded(1, 64, 0.15), 2);
    CHECK(r.kv.num_elements() == 64);
}
