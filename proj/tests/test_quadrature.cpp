#include <doctest.h>

#include <cmath>

#include "sopq/quadrature.hpp"

using namespace sopq;
using doctest::Approx;

TEST_CASE("classical rules") {
    const auto gl = make_rule(RuleKind::gauss_legendre, 2);
    CHECK(gl.nodes[0] == Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(gl.nodes[1] == Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(gl.weights[0] == Approx(1.0).epsilon(1e-15));
    CHECK(gl.weights[1] == Approx(1.0).epsilon(1e-15));

    const auto tr = make_rule(RuleKind::periodic_trapezoid, 4);
    for (int k = 0; k < 4; ++k) {
        CHECK(tr.nodes[static_cast<std::size_t>(k)] == Approx(k * M_PI / 2));
        CHECK(tr.weights[static_cast<std::size_t>(k)] == Approx(M_PI / 2));
    }
    CHECK_THROWS_AS(make_rule(RuleKind::gauss_legendre, 1), DomainError);
    CHECK_THROWS_AS(make_rule(RuleKind::gauss_jacobi, 8, -1.0, 0.0), DomainError);
}

TEST_CASE("Gauss-Jacobi moments against Beta values") {
    // p = 5: weight (1-x^2)^1; ∫ x^{2k} (1-x^2) dx = B(k+1/2, 2)
    const auto r = make_rule(RuleKind::gauss_jacobi, 16, 1.0, 1.0);
    for (int k = 0; k <= 15; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], 2 * k);
        CHECK(s == Approx(std::beta(k + 0.5, 2.0)).epsilon(1e-13));
    }
    // odd moments vanish, asymmetric weights integrate exactly too
    const auto a = make_rule(RuleKind::gauss_jacobi, 10, -0.5, 1.5);
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        m0 += a.weights[i];
        m1 += a.weights[i] * a.nodes[i];
    }
    // ∫ (1-x)^{-1/2}(1+x)^{3/2} dx = 2^{2} B(1/2, 5/2);  first moment from B(1/2,7/2) and m0
    const double b0 = 4.0 * std::beta(0.5, 2.5);
    CHECK(m0 == Approx(b0).epsilon(1e-13));
    CHECK(m1 == Approx(8.0 * std::beta(0.5, 3.5) - b0).epsilon(1e-13));
}

TEST_CASE("Jacobi polynomials") {
    CHECK(jacobi_p(0, 0.3, 0.7, 0.2) == 1.0);
    CHECK(jacobi_p(1, 0.0, 0.0, 0.4) == Approx(0.4));
    CHECK(jacobi_p(2, 0.0, 0.0, 0.4) == Approx(0.5 * (3 * 0.16 - 1)));
    const double h = 1e-6;
    const double fd = (jacobi_p(5, 0.5, 1.5, 0.3 + h) - jacobi_p(5, 0.5, 1.5, 0.3 - h)) / (2 * h);
    CHECK(jacobi_p_deriv(5, 0.5, 1.5, 0.3) == Approx(fd).epsilon(1e-8));
}

TEST_CASE("zonal oracle") {
    for (int p = 2; p <= 5; ++p) {
        for (int q = 1; q <= p; ++q) {
            CHECK(std::abs(zonal_oracle({p, q}, {-1.1, 0.5}, 0.0, 32) - 1.0) < 1e-13);
            CHECK(std::abs(zonal_oracle({p, q}, 0.0, 0.8, 32) - 1.0) < 1e-13);
        }
    }
    // regression values: 30-digit mpmath integrals
    const auto v = zonal_oracle_converged({2, 2}, -1.0, 0.5);
    CHECK(std::abs(v.value - 0.969427699387315987575) < 1e-13);
    CHECK(v.nodes >= 32);
    CHECK(std::abs(zonal_oracle_converged({3, 2}, {-1.5, 2.0}, 0.6).value - 0.829927080308431683444) < 1e-12);
    CHECK(std::abs(zonal_oracle_converged({4, 1}, -1.0, 1.0).value - 0.786447732965927410150) < 1e-12);
    CHECK_THROWS_AS(zonal_oracle_converged({4, 3}, -2.5, 3.0, 4, 8, 1e-16), AccuracyNotReachedError);
}

TEST_CASE("associated oracle") {
    CHECK(std::abs(assoc_oracle({3, 2}, -1.5, 2, 0, 0.0, 32)) < 1e-15);
    CHECK(std::abs(assoc_oracle({4, 3}, -2.5, 1, 1, 0.0, 32)) < 1e-15);
    CHECK_THROWS_AS(assoc_oracle({3, 2}, -1.5, 1, 0, 0.3, 32), ParityError);
    CHECK_THROWS_AS(assoc_oracle({3, 3}, -2.0, -2, 0, 0.3, 32), DomainError);
    // circle directions: negative modes mirror positive ones
    CHECK(std::abs(assoc_oracle({3, 2}, -1.5, -2, 2, 0.4, 64) - assoc_oracle({3, 2}, -1.5, 2, 2, 0.4, 64)) < 1e-15);

    const auto v = assoc_oracle_converged({2, 2}, -1.0, 1, 1, 0.5);
    CHECK(std::abs(v.value - 0.119633383506978595848) < 1e-13);
    CHECK(std::abs(assoc_oracle_converged({3, 2}, -1.5, 0, 2, 0.4).value - 0.0254909084974068096110) < 1e-13);
}

TEST_CASE("expansion residual") {
    for (int cutoff : {0, 2, 6}) {
        CHECK(expansion_residual({3, 2}, 0.0, 0.7, cutoff, 48) < 1e-10);
        CHECK(expansion_residual({3, 3}, -2.0, 0.0, cutoff, 48) < 1e-10);
    }
    const double r4 = expansion_residual({3, 2}, -1.5, 0.2, 4, 64);
    const double r8 = expansion_residual({3, 2}, -1.5, 0.2, 8, 64);
    CHECK(r8 < r4);
    const double s8 = expansion_residual({3, 2}, -1.5, 0.2, 8, 64, CoefficientSource::series);
    CHECK(s8 == Approx(r8).epsilon(1e-6));
    CHECK_THROWS_AS(expansion_residual({3, 1}, -1.0, 0.2, 2, 32), DomainError);
}
