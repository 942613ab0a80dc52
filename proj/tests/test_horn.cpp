#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "sopq/horn.hpp"
#include "sopq/spherical.hpp"

using namespace sopq;

namespace {

HornSeriesSpec gauss(Complex a, Complex b, Complex c) {
    return {1, {{a, {1}}, {b, {1}}}, {{c, {1}}}};
}

std::string slurp(const std::string& name) {
    std::ifstream in(std::string(FIXTURE_DIR) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("validation") {
    const auto ok = validate_spec(gauss(0.5, 1.0, 1.5));
    CHECK(ok.valid);
    REQUIRE(ok.balance.size() == 1);
    CHECK(ok.balance[0].numerator_sum == 2);
    CHECK(ok.balance[0].denominator_sum == 1);

    HornSeriesSpec bad = gauss(0.5, 1.0, 1.5);
    bad.denominator.push_back({2.0, {1}});
    const auto rep = validate_spec(bad);
    CHECK_FALSE(rep.valid);
    CHECK_FALSE(rep.balance[0].ok);
    CHECK(rep.describe().find("variable") != std::string::npos);

    HornSeriesSpec wrong_len = gauss(0.5, 1.0, 1.5);
    wrong_len.numerator[0].row = {1, 0};
    CHECK_FALSE(validate_spec(wrong_len).valid);

    const auto z = validate_spec(zonal_horn_spec({4, 3}, -2.5, ZonalHornForm::pq));
    CHECK(z.valid);
    CHECK(validate_spec(zonal_horn_spec({4, 3}, -2.5, ZonalHornForm::five)).valid);
    CHECK_THROWS_AS(evaluate_horn(bad, {0.1}), ValidationError);
}

TEST_CASE("evaluation at the origin and single shells") {
    const auto spec = zonal_horn_spec({3, 2}, -1.5, ZonalHornForm::pq);
    CHECK(evaluate_horn(spec, {0.0, 0.0}).value == Complex(1.0));
    CHECK(shell_terms(spec, {0.3, 0.2}, 0) == Complex(1.0));

    const Complex a(-0.5), b(1.0 / 3.0), c(2.5);
    const double x = 0.4;
    const Complex k3 = pochhammer(a, 3) * pochhammer(b, 3) / (pochhammer(c, 3) * 6.0) * x * x * x;
    CHECK(std::abs(shell_terms(gauss(a, b, c), {x}, 3) - k3) < 1e-17);

    // 30-digit lattice sum of the shell |n| = 2 at (1/4, 1/4)
    CHECK(shell_terms(spec, {0.25, 0.25}, 2).real() == doctest::Approx(0.01124267578125).epsilon(1e-15));
}

TEST_CASE("2F1 reduction") {
    const auto v = evaluate_horn(gauss(-0.5, 1.0 / 3.0, 2.5), {0.4});
    // mpmath hyp2f1(-1/2, 1/3, 5/2, 0.4)
    CHECK(v.value.real() == doctest::Approx(0.972192333289878520636).epsilon(1e-12));
    CHECK(std::abs(v.value - gauss_2f1(-0.5, 1.0 / 3.0, 2.5, 0.4).value) < 1e-12);
    CHECK(v.converged);
}

TEST_CASE("zonal Horn form at tanh^2 = 1/4") {
    const double alpha = std::atanh(0.5);
    const auto v = zonal_horn({3, 2}, -1.5, alpha);
    // quadrature of the zonal integral, 30 digits
    CHECK(v.value.real() == doctest::Approx(0.945506476382042192673).epsilon(1e-12));
}

TEST_CASE("permutation invariance and poles") {
    auto spec = zonal_horn_spec({4, 3}, {-2.5, 0.7}, ZonalHornForm::pq);
    const auto v1 = evaluate_horn(spec, {0.2, 0.15});
    std::reverse(spec.numerator.begin(), spec.numerator.end());
    std::reverse(spec.denominator.begin(), spec.denominator.end());
    const auto v2 = evaluate_horn(spec, {0.2, 0.15});
    CHECK(v1.value == v2.value);

    CHECK_THROWS_AS(evaluate_horn(gauss(0.5, 1.0, -2.0), {0.3}), PoleError);
    // terminating numerator reaches zero first
    CHECK_NOTHROW(evaluate_horn(gauss(-1.0, 1.0, -2.0), {0.3}));
    CHECK_THROWS_AS(evaluate_horn(gauss(0.5, 1.0, 1.5), {1.2}), DomainError);
    // terminating series need no convergence domain
    CHECK(evaluate_horn(gauss(-2.0, 1.0, 1.0), {3.0}).value.real() == doctest::Approx(1 - 6.0 + 9.0));
}

TEST_CASE("spec JSON") {
    const auto spec = parse_spec(slurp("horn_2f1.json"));
    CHECK(spec.variables == 1);
    CHECK(spec.numerator.size() == 2);
    const auto back = parse_spec(format_spec(spec));
    CHECK(back.numerator[1].value == spec.numerator[1].value);
    CHECK(back.denominator[0].row == spec.denominator[0].row);

    CHECK_FALSE(validate_spec(parse_spec(slurp("unbalanced.json"))).valid);
    CHECK_THROWS_AS(parse_spec(slurp("malformed.json")), ValidationError);
    CHECK_THROWS_AS(parse_spec(R"({"variables": 0, "numerator": [], "denominator": []})"), ValidationError);
}
