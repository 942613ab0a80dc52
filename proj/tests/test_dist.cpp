#include <doctest.h>

#include <cmath>
#include <random>

#include "sopq/dist.hpp"

using namespace sopq;

TEST_CASE("packings: small cases by hand") {
    auto one = enumerate_packings({2});
    REQUIRE(one.size() == 1);
    CHECK(one[0].r == std::vector<int>{2});
    CHECK(one[0].column_sums == MultiIndex{2});

    auto two = enumerate_packings({1, 0});
    REQUIRE(two.size() == 2);
    CHECK(two[0].r == std::vector<int>{0, 1, 0, 0});
    CHECK(two[0].column_sums == MultiIndex{0, 1});
    CHECK(two[1].r == std::vector<int>{1, 0, 0, 0});
    CHECK(two[1].column_sums == MultiIndex{1, 0});

    CHECK(enumerate_packings({2, 1}).size() == 6);
}

TEST_CASE("packings: row multinomials sum to k^q_i") {
    // Σ over packings of Π_i q_i!/Π_j r_ij! counts all index assignments.
    const MultiIndex q = {3, 1, 2};
    double total = 0.0;
    for (const auto& m : enumerate_packings(q)) {
        double w = 1.0;
        for (int i = 0; i < m.k; ++i) {
            w *= std::tgamma(q[static_cast<std::size_t>(i)] + 1.0);
            for (int j = 0; j < m.k; ++j) w /= std::tgamma(m.at(i, j) + 1.0);
        }
        total += w;
    }
    CHECK(total == doctest::Approx(std::pow(3.0, 6)).epsilon(1e-15));
}

TEST_CASE("packings: budget") {
    CHECK_THROWS_AS(enumerate_packings({4, 4, 4}, 10), BudgetExceededError);
    CHECK_THROWS_AS(enumerate_packings({}), DomainError);
    CHECK_THROWS_AS(enumerate_packings({1, -1}), DomainError);
}

TEST_CASE("transform: zero orders give det beta") {
    Eigen::MatrixXd b(2, 2);
    b << 2.0, 1.0, 0.5, 3.0;
    const auto c = transform_coefficients(b, {0, 0});
    REQUIRE(c.size() == 1);
    CHECK(c.at({0, 0}) == doctest::Approx(5.5).epsilon(1e-15));
}

TEST_CASE("transform: k=1 scaling") {
    for (double c : {0.5, 2.0, 3.7}) {
        Eigen::MatrixXd b(1, 1);
        b << 1.0 / c;
        for (int m = 0; m <= 5; ++m) {
            const auto out = transform_coefficients(b, {m});
            REQUIRE(out.size() == 1);
            CHECK(out.at({m}) == doctest::Approx(std::pow(c, -(m + 1))).epsilon(1e-15));
        }
    }
}

TEST_CASE("transform: identity and order conservation") {
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(3, 3);
    const auto c = transform_coefficients(id, {2, 0, 1});
    double sum = 0.0;
    for (const auto& [p, v] : c) sum += std::abs(v);
    CHECK(c.at({2, 0, 1}) == 1.0);
    CHECK(sum == 1.0);

    Eigen::MatrixXd b(3, 3);
    b << 1, 2, 0, -1, 1, 3, 0.5, 0, 2;
    for (const auto& [p, v] : transform_coefficients(b, {1, 2, 1})) {
        CHECK(p[0] + p[1] + p[2] == 4);
    }
}

TEST_CASE("transform: upper triangular k=2 against the index form by hand") {
    // det = 1; δ_{01} = (δ_0 + δ_1) δ_1 -> p=(1,1): 1, p=(0,2): 1
    Eigen::MatrixXd b(2, 2);
    b << 1, 1, 0, 1;
    const auto c = transform_coefficients(b, {1, 1});
    CHECK(c.at({1, 1}) == doctest::Approx(1.0));
    CHECK(c.at({0, 2}) == doctest::Approx(1.0));
    CHECK(c.at({2, 0}) == doctest::Approx(0.0));
}

TEST_CASE("index form: s=0, s=1 and grouping") {
    Eigen::MatrixXd b(2, 2);
    b << 1.5, 0.5, -0.25, 2.0;
    const double det = 3.125;
    const auto s0 = transform_index_form(b, {});
    REQUIRE(s0.size() == 1);
    CHECK(s0.at({}) == doctest::Approx(det));

    const auto s1 = transform_index_form(b, {1});
    CHECK(s1.at({0}) == doctest::Approx(det * -0.25));
    CHECK(s1.at({1}) == doctest::Approx(det * 2.0));

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::MatrixXd r(2, 2);
        r << u(rng) + 2, u(rng), u(rng), u(rng) + 2;
        const MultiIndex q = {2, 1};
        const auto grouped = group_index_form(transform_index_form(r, indices_of(q)), 2);
        const auto direct = transform_coefficients(r, q);
        REQUIRE(grouped.size() == direct.size());
        for (const auto& [p, v] : direct) CHECK(grouped.at(p) == doctest::Approx(v).epsilon(1e-12));
    }
}

TEST_CASE("singular matrices") {
    Eigen::MatrixXd b(2, 2);
    b << 1, 2, 2, 4;
    CHECK_THROWS_AS(checked_det(b), SingularMatrixError);
    CHECK_THROWS_AS(transform_coefficients(b, {1, 0}), SingularMatrixError);
    Eigen::MatrixXd wrong(2, 2);
    wrong << 1, 0, 0, 1;
    CHECK_THROWS_AS(transform_coefficients(wrong, {1}), DomainError);
}

TEST_CASE("jacobi formula") {
    SUBCASE("constant beta") {
        PointwiseMatrix b{Eigen::MatrixXd::Identity(2, 2) * 2.0, {Eigen::MatrixXd::Zero(2, 2)}};
        const Eigen::MatrixXd a = b.value.inverse();
        CHECK(jacobi_formula_check(b, a, {{b.value, b.value}}, 1e-5) == 0.0);
    }
    SUBCASE("diag(1+x, 1) at x=0") {
        auto at = [](double x) {
            Eigen::MatrixXd m(2, 2);
            m << 1 + x, 0, 0, 1;
            return m;
        };
        Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
        d(0, 0) = 1;
        PointwiseMatrix b{at(0), {d}};
        const double h = 1e-5;
        CHECK(jacobi_formula_check(b, at(0).inverse(), {{at(h), at(-h)}}, h) < 1e-10);
    }
    SUBCASE("inconsistent inverse") {
        PointwiseMatrix b{Eigen::MatrixXd::Identity(2, 2), {Eigen::MatrixXd::Zero(2, 2)}};
        const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2) * 2.0;
        CHECK_THROWS_AS(jacobi_formula_check(b, a, {{b.value, b.value}}, 1e-5), InconsistentInverseError);
    }
}

TEST_CASE("composition") {
    Eigen::MatrixXd a(1, 1), b(1, 1);
    a << 0.5;
    b << 3.0;
    const auto c = compose_transforms(a, b, {3});
    CHECK(c.at({3}) == doctest::Approx(std::pow(1.5, 4)).epsilon(1e-14));

    Eigen::MatrixXd b1(2, 2), b2(2, 2);
    b1 << 1.2, -0.3, 0.4, 0.9;
    b2 << 0.7, 0.2, -0.5, 1.1;
    const auto composed = compose_transforms(b1, b2, {2, 1});
    const auto direct = transform_coefficients(b1 * b2, {2, 1});
    for (const auto& [p, v] : direct) CHECK(composed.at(p) == doctest::Approx(v).epsilon(1e-12));

    const auto same = compose_transforms(b1, Eigen::MatrixXd::Identity(2, 2), {2, 1});
    for (const auto& [p, v] : transform_coefficients(b1, {2, 1})) CHECK(same.at(p) == doctest::Approx(v));
}
