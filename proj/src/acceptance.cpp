#include "sopq/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>

#include "sopq/dist.hpp"
#include "sopq/horn.hpp"
#include "sopq/quadrature.hpp"
#include "sopq/spherical.hpp"

#ifndef SOPQ_SOURCE_DIR
#define SOPQ_SOURCE_DIR "."
#endif

namespace sopq {

std::string discrepancy_ledger_path() { return std::string(SOPQ_SOURCE_DIR) + "/docs/DISCREPANCIES.md"; }

namespace {

// Worst-case bookkeeping for one criterion.
struct Tracker {
    double tol;
    double worst = 0.0;
    std::string where;
    bool ok = true;
    std::size_t checks = 0;

    explicit Tracker(double t) : tol(t) {}

    void record(double err, const std::string& label) {
        ++checks;
        if (!(err <= tol)) ok = false;
        if (!(err <= worst)) {
            worst = err;
            where = label;
        }
    }
    void fail(const std::string& label) {
        ok = false;
        worst = INFINITY;
        where = label;
    }
    std::string summary(const char* what) const {
        std::ostringstream os;
        os << what << " = " << std::setprecision(3) << worst << " (tol " << tol << ", " << checks << " checks";
        if (!where.empty()) os << ", worst at " << where;
        os << ")";
        return os.str();
    }
};

double rel_err(Complex a, Complex b) {
    const double d = std::abs(a - b);
    const double s = std::abs(b);
    return s > 0.0 ? d / s : d;
}

std::string label(const GroupSignature& g, Complex sigma, double alpha) {
    std::ostringstream os;
    os << "(p,q)=(" << g.p << "," << g.q << ") sigma=" << sigma.real() << (sigma.imag() < 0 ? "" : "+")
       << sigma.imag() << "i alpha=" << alpha;
    return os.str();
}

template <class Fn>
void guarded(Tracker& t, const std::string& where, Fn fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        t.fail(where + ": " + e.what());
    }
}

const std::vector<double> kTs = {0.0, 1.0};

CriterionResult normalization() {
    Tracker t(1e-10);
    const std::vector<double> alphas = {0.0, 0.25, 0.5, 1.0};
    for (int p = 2; p <= 6; ++p) {
        for (int q = 1; q <= p; ++q) {
            const GroupSignature g(p, q);
            std::vector<std::pair<Complex, double>> points;
            for (double tt : kTs) points.emplace_back(principal_sigma(g, tt), 0.0);
            points.emplace_back(Complex(-0.7, 0.3), 0.0);
            for (double a : alphas) points.emplace_back(0.0, a);
            for (const auto& [sigma, a] : points) {
                const std::string lab = label(g, sigma, a);
                guarded(t, lab, [&] {
                    t.record(std::abs(zonal_series(g, sigma, a).value - 1.0), "series " + lab);
                    for (auto form : {ZonalHornForm::pq, ZonalHornForm::qp, ZonalHornForm::five}) {
                        t.record(std::abs(zonal_horn(g, sigma, a, form).value - 1.0), "horn " + lab);
                    }
                    t.record(std::abs(zonal_oracle(g, sigma, a, 48) - 1.0), "oracle " + lab);
                    for (auto sg : {SpecialGroup::SO41, SpecialGroup::SO32, SpecialGroup::SO42}) {
                        const auto s = signature_of(sg);
                        if (s.p == p && s.q == q) {
                            t.record(std::abs(zonal_special(sg, sigma, a).value - 1.0), "special " + lab);
                        }
                    }
                });
            }
        }
    }
    return {1, "normalization at alpha=0 and sigma=0", t.ok, t.summary("max |Z-1|")};
}

CriterionResult series_vs_oracle() {
    Tracker t(1e-8);
    for (int p = 2; p <= 5; ++p) {
        for (int q = 1; q <= std::min(p, 3); ++q) {
            const GroupSignature g(p, q);
            for (double tt : kTs) {
                const Complex sigma = principal_sigma(g, tt);
                for (double a : {0.1, 0.5, 1.0}) {
                    const std::string lab = label(g, sigma, a);
                    guarded(t, lab, [&] {
                        const Complex s = zonal_series(g, sigma, a).value;
                        const Complex o = zonal_oracle_converged(g, sigma, a).value;
                        t.record(rel_err(s, o), lab);
                    });
                }
            }
        }
    }
    return {2, "zonal series vs quadrature oracle", t.ok, t.summary("max rel diff")};
}

CriterionResult q1_reduction() {
    Tracker t(1e-8);
    for (int p = 2; p <= 5; ++p) {
        const GroupSignature g(p, 1);
        for (double tt : kTs) {
            const Complex sigma = principal_sigma(g, tt);
            for (double a : {0.1, 0.5, 1.0}) {
                const std::string lab = label(g, sigma, a);
                guarded(t, lab, [&] {
                    t.record(rel_err(zonal_series(g, sigma, a).value, zonal_q1(p, sigma, a)), lab);
                });
            }
        }
    }
    return {3, "q=1 closed form", t.ok, t.summary("max rel diff")};
}

CriterionResult symmetry() {
    Tracker t(1e-8);
    const std::vector<std::pair<int, int>> zsigs = {{3, 2}, {4, 3}, {5, 2}, {4, 4}, {6, 3}, {2, 2}};
    for (auto [p, q] : zsigs) {
        const GroupSignature g(p, q);
        for (double tt : kTs) {
            const Complex sigma = principal_sigma(g, tt);
            for (double a : {0.1, 0.4, 0.8}) {
                const std::string lab = label(g, sigma, a);
                guarded(t, lab, [&] {
                    t.record(rel_err(zonal_horn(g, sigma, a, ZonalHornForm::pq).value,
                                     zonal_horn(g, sigma, a, ZonalHornForm::qp).value),
                             "horn pq/qp " + lab);
                    t.record(rel_err(zonal_series(g, sigma, a).value, zonal_series(g.swapped(), sigma, a).value),
                             "series " + lab);
                });
            }
        }
    }
    const std::vector<std::pair<int, int>> asigs = {{3, 2}, {4, 3}, {5, 2}, {3, 3}, {2, 2}, {6, 4}};
    for (auto [p, q] : asigs) {
        const GroupSignature g(p, q);
        const Complex sigma = principal_sigma(g, 0.7);
        for (int nu = 0; nu <= 1; ++nu) {
            for (int r = 0; r <= 2; ++r) {
                for (int s = 0; r + s <= 2; ++s) {
                    for (double a : {0.1, 0.4}) {
                        std::ostringstream lab;
                        lab << label(g, sigma, a) << " (nu,r,s)=(" << nu << "," << r << "," << s << ")";
                        guarded(t, lab.str(), [&] {
                            const Complex lhs =
                                assoc_series(g, sigma, {nu, r, s}, a, kSphericalControl, AssocRoute::direct).value;
                            const Complex rhs = assoc_series(g.swapped(), sigma, {nu, s, r}, a, kSphericalControl,
                                                             AssocRoute::direct)
                                                    .value;
                            t.record(rel_err(lhs, rhs), "assoc " + lab.str());
                        });
                    }
                }
            }
        }
    }
    return {4, "p<->q symmetry (zonal and associated)", t.ok, t.summary("max rel diff")};
}

CriterionResult assoc_vs_oracle() {
    Tracker t(1e-8);
    const std::vector<std::pair<int, int>> sigs = {{3, 2}, {2, 2}, {3, 3}, {4, 2}};
    for (auto [p, q] : sigs) {
        const GroupSignature g(p, q);
        for (double tt : kTs) {
            const Complex sigma = principal_sigma(g, tt);
            for (int lam = 0; lam <= 4; ++lam) {
                for (int mu = 0; lam + mu <= 4; ++mu) {
                    if ((lam + mu) % 2 != 0) continue;
                    for (double a : {0.1, 0.4}) {
                        std::ostringstream lab;
                        lab << label(g, sigma, a) << " (lambda,mu)=(" << lam << "," << mu << ")";
                        guarded(t, lab.str(), [&] {
                            const Complex s = assoc_series(g, sigma, index_map(lam, mu), a).value;
                            const Complex o = assoc_oracle_converged(g, sigma, lam, mu, a).value;
                            if (s != Complex(0.0)) {
                                t.record(rel_err(s, o), lab.str());
                                return;
                            }
                            // structural zero: measure against the (0,0) coefficient
                            const Complex ref = assoc_oracle_converged(g, sigma, 0, 0, a).value;
                            t.record(std::abs(o) / std::abs(ref), lab.str() + " [zero]");
                        });
                    }
                }
            }
        }
    }
    return {5, "associated series vs quadrature oracle", t.ok, t.summary("max rel diff")};
}

CriterionResult expansion() {
    bool ok = true;
    std::ostringstream detail;
    detail << std::setprecision(3);
    for (auto [p, q] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {3, 3}}) {
        const GroupSignature g(p, q);
        const Complex sigma = principal_sigma(g, 0.0);
        detail << "(" << p << "," << q << "):";
        try {
            double prev = INFINITY;
            for (int cut : {0, 4, 8, 12}) {
                const double r = expansion_residual(g, sigma, 0.2, cut, 64);
                detail << " " << r;
                if (!(r < prev)) ok = false;
                if (cut == 12 && !(r < 1e-6)) ok = false;
                prev = r;
            }
        } catch (const std::exception& e) {
            ok = false;
            detail << " error " << e.what();
        }
        detail << "; ";
    }
    detail << "residuals at cutoffs 0,4,8,12 (need decreasing, last < 1e-06)";
    return {6, "expansion completeness", ok, detail.str()};
}

// Independent lattice oracle: explicit Pochhammer products over a box.
Complex poch_signed(Complex a, int n) {
    Complex r = 1.0;
    if (n >= 0) {
        for (int k = 0; k < n; ++k) r *= a + static_cast<double>(k);
    } else {
        for (int k = 1; k <= -n; ++k) r /= a - static_cast<double>(k);
    }
    return r;
}

Complex brute_horn(const HornSeriesSpec& spec, const std::vector<double>& x, int degree) {
    const std::size_t r = x.size();
    std::vector<int> n(r, 0);
    Complex sum = 0.0;
    std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
        if (pos == r) {
            Complex term = 1.0;
            for (const auto& a : spec.numerator) {
                int k = 0;
                for (std::size_t j = 0; j < r; ++j) k += a.row[j] * n[j];
                term *= poch_signed(a.value, k);
            }
            for (const auto& b : spec.denominator) {
                int k = 0;
                for (std::size_t j = 0; j < r; ++j) k += b.row[j] * n[j];
                term /= poch_signed(b.value, k);
            }
            for (std::size_t j = 0; j < r; ++j) term *= std::pow(x[j], n[j]) / std::tgamma(n[j] + 1.0);
            sum += term;
            return;
        }
        for (int v = 0; v <= left; ++v) {
            n[pos] = v;
            rec(pos + 1, left - v);
        }
    };
    rec(0, degree);
    return sum;
}

struct TerminatingCase {
    HornSeriesSpec spec;
    std::vector<double> x;
    int degree;
};

std::vector<TerminatingCase> terminating_battery() {
    using C = Complex;
    std::vector<TerminatingCase> out;
    auto one = [](std::vector<HornParameter> num, std::vector<HornParameter> den, int r) {
        HornSeriesSpec s;
        s.variables = r;
        s.numerator = std::move(num);
        s.denominator = std::move(den);
        return s;
    };
    out.push_back({one({{-6.0, {1}}, {0.7, {1}}}, {{1.9, {1}}}, 1), {0.8}, 6});
    out.push_back({one({{-6.0, {1}}, {0.7, {1}}}, {{1.9, {1}}}, 1), {1.7}, 6});
    out.push_back({one({{-7.0, {1}}, {C(0.5, 1.0), {1}}, {C(2.0, -0.5), {1}}}, {{1.5, {1}}, {C(0.8, 0.3), {1}}}, 1),
                   {0.95},
                   7});
    out.push_back({one({{-5.0, {1, 1}}, {C(0.3, 0.2), {1, 0}}, {1.1, {0, 1}}}, {{2.5, {1, 0}}, {1.5, {0, 1}}}, 2),
                   {0.6, 1.0},
                   5});
    out.push_back({one({{-4.0, {1, 1}}, {0.5, {2, 0}}}, {{1.5, {1, 0}}, {2.2, {1, 0}}}, 2), {0.9, -1.3}, 4});
    out.push_back({one({{-3.0, {1, 1}}, {0.4, {1, -1}}, {1.3, {0, 2}}}, {{2.7, {1, 0}}, {1.6, {0, 1}}}, 2),
                   {0.7, 0.45},
                   3});
    out.push_back({one({{-3.0, {1, 1, 1}}, {0.6, {1, 0, 0}}, {1.2, {0, 1, 0}}, {0.9, {0, 0, 1}}},
                       {{1.7, {1, 0, 0}}, {2.1, {0, 1, 0}}, {1.4, {0, 0, 1}}},
                       3),
                   {0.5, 0.7, -0.9},
                   3});
    // five-parameter zonal shape with the leading row-11 parameter made terminating
    out.push_back({one({{-4.0, {1, 1}}, {0.5, {1, 1}}, {1.2, {1, 0}}, {5.5, {0, 1}}, {6.0, {0, 1}}},
                       {{1.5, {1, 1}}, {2.0, {1, 1}}, {1.0, {0, 1}}},
                       2),
                   {0.3, 0.3},
                   4});
    return out;
}

CriterionResult horn_equivalence() {
    Tracker t(1e-12);
    int idx = 0;
    for (const auto& c : terminating_battery()) {
        const std::string lab = "terminating case " + std::to_string(idx++);
        guarded(t, lab, [&] {
            t.record(rel_err(evaluate_horn(c.spec, c.x).value, brute_horn(c.spec, c.x, c.degree)), lab);
        });
    }
    std::mt19937_64 rng(20240521);
    std::uniform_real_distribution<double> ab(-2.0, 2.0), im(-1.0, 1.0), cc(0.5, 3.0), xx(-0.7, 0.7);
    for (int k = 0; k < 20; ++k) {
        const Complex a(ab(rng), im(rng)), b(ab(rng), im(rng)), c(cc(rng), im(rng));
        const double x = xx(rng);
        const std::string lab = "2F1 draw " + std::to_string(k);
        guarded(t, lab, [&] {
            HornSeriesSpec s;
            s.variables = 1;
            s.numerator = {{a, {1}}, {b, {1}}};
            s.denominator = {{c, {1}}};
            const SeriesControl ctl{1e-16, 1'000'000};
            t.record(rel_err(evaluate_horn(s, {x}, ctl).value, gauss_2f1(a, b, c, x, ctl).value), lab);
        });
    }
    return {7, "Horn engine vs lattice brute force and 2F1", t.ok, t.summary("max rel diff")};
}

CriterionResult distribution() {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    bool structural = true;
    Tracker grouping(1e-12);
    for (int trial = 0; trial < 50; ++trial) {
        const int k = 1 + trial % 3;
        Eigen::MatrixXd beta(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) beta(i, j) = u(rng) + (i == j ? 1.5 : 0.0);
        // every q with |q| <= 4
        std::vector<int> q(static_cast<std::size_t>(k), 0);
        std::function<void(int, int)> rec = [&](int pos, int left) {
            if (pos == k) {
                const auto direct = transform_coefficients(beta, q);
                const auto grouped = group_index_form(transform_index_form(beta, indices_of(q)), k);
                double scale = 0.0;
                for (const auto& [p, v] : direct) scale = std::max(scale, std::abs(v));
                double diff = 0.0;
                for (const auto& [p, v] : grouped) {
                    auto it = direct.find(p);
                    diff = std::max(diff, std::abs(v - (it == direct.end() ? 0.0 : it->second)));
                }
                for (const auto& [p, v] : direct) {
                    if (!grouped.count(p)) diff = std::max(diff, std::abs(v));
                    int sp = 0, sq = 0;
                    for (int x : p) sp += x;
                    for (int x : q) sq += x;
                    if (sp != sq) structural = false;
                }
                grouping.record(diff / scale, "k=" + std::to_string(k) + " trial " + std::to_string(trial));
                return;
            }
            for (int v = 0; v <= left; ++v) {
                q[static_cast<std::size_t>(pos)] = v;
                rec(pos + 1, left - v);
            }
        };
        rec(0, 4);
    }

    Tracker jac(1e-8);
    for (int trial = 0; trial < 10; ++trial) {
        // β(x) = B0 + B1 x1 + B2 x2 + B3 x1 x2 + B4 x1^2 at a random point
        std::vector<Eigen::MatrixXd> B(5, Eigen::MatrixXd(3, 3));
        for (auto& m : B)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) m(i, j) = u(rng);
        B[0] += 2.0 * Eigen::MatrixXd::Identity(3, 3);
        auto beta_at = [&](double x1, double x2) {
            return Eigen::MatrixXd(B[0] + B[1] * x1 + B[2] * x2 + B[3] * x1 * x2 + B[4] * x1 * x1);
        };
        const double x1 = 0.3 * u(rng), x2 = 0.3 * u(rng), h = 1e-5;
        PointwiseMatrix pm;
        pm.value = beta_at(x1, x2);
        pm.derivative = {B[1] + B[3] * x2 + 2.0 * B[4] * x1, B[2] + B[3] * x1};
        const std::vector<FiniteDifferenceSample> samples = {{beta_at(x1 + h, x2), beta_at(x1 - h, x2)},
                                                             {beta_at(x1, x2 + h), beta_at(x1, x2 - h)}};
        const std::string lab = "jacobi trial " + std::to_string(trial);
        guarded(jac, lab, [&] { jac.record(jacobi_formula_check(pm, pm.value.inverse(), samples, h), lab); });
    }

    Tracker scaling(1e-15);
    for (double c : {0.5, 2.0, 3.0, 0.7}) {
        for (int m = 0; m <= 5; ++m) {
            Eigen::MatrixXd beta(1, 1);
            beta(0, 0) = 1.0 / c;
            const auto coeffs = transform_coefficients(beta, {m});
            const double expect = std::pow(c, -(m + 1));
            const auto it = coeffs.find({m});
            if (coeffs.size() != 1 || it == coeffs.end()) {
                scaling.fail("k=1 output shape");
            } else {
                scaling.record(rel_err(it->second, expect), "c=" + std::to_string(c) + " m=" + std::to_string(m));
            }
        }
    }

    const bool ok = grouping.ok && jac.ok && scaling.ok && structural;
    std::string detail = "(a) " + grouping.summary("grouping rel diff") + "; (b) " +
                         jac.summary("jacobi residual") + "; (c) " + scaling.summary("scaling rel diff") +
                         "; (d) order conservation " + (structural ? "held" : "VIOLATED");
    return {8, "distribution transform suite", ok, detail};
}

CriterionResult ledger() {
    const std::string path = discrepancy_ledger_path();
    std::ifstream in(path);
    if (!in) {
        return {9, "discrepancy ledger", false, "missing: " + path};
    }
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    std::vector<std::string> missing;
    for (const char* needle : {"tanh", "1/cosh", "oracle", "(tanh α)^{2l}"}) {
        if (text.find(needle) == std::string::npos) missing.emplace_back(needle);
    }
    // live evidence: the oracle gives exactly 1 at σ = 0, which the series must reproduce
    const GroupSignature g(4, 3);
    const double o = std::abs(zonal_oracle(g, 0.0, 0.7, 48) - 1.0);
    const double s = std::abs(zonal_series(g, 0.0, 0.7).value - 1.0);
    std::ostringstream detail;
    detail << path << " (" << text.size() << " bytes)";
    for (const auto& m : missing) detail << ", lacks '" << m << "'";
    detail << "; sigma=0 alpha=0.7: |oracle-1|=" << std::setprecision(2) << o << " |series-1|=" << s
           << " vs 1/cosh(0.7)=" << std::setprecision(6) << 1.0 / std::cosh(0.7);
    const bool ok = !text.empty() && missing.empty() && o < 1e-12 && s < 1e-12;
    return {9, "discrepancy ledger", ok, detail.str()};
}

std::string reflection_info() {
    // (σ) and (2-p-q-σ) label equivalent representations; report, do not assert.
    double worst = 0.0;
    for (auto [p, q] : std::vector<std::pair<int, int>>{{3, 2}, {4, 3}, {5, 1}, {3, 3}}) {
        const GroupSignature g(p, q);
        for (Complex sigma : {Complex(-0.4, 0.0), Complex(-0.9, 0.6)}) {
            for (double a : {0.3, 0.8}) {
                const Complex z1 = zonal_series(g, sigma, a).value;
                const Complex z2 = zonal_series(g, 2.0 - p - q - sigma, a).value;
                worst = std::max(worst, rel_err(z1, z2));
            }
        }
    }
    std::ostringstream os;
    os << "INFO Z(sigma) vs Z(2-p-q-sigma) off the principal line: max rel diff " << std::setprecision(3) << worst
       << " (observed only, not asserted)";
    return os.str();
}

} // namespace

std::vector<CriterionResult> run_acceptance(std::ostream& out) {
    const std::vector<std::function<CriterionResult()>> suites = {
        normalization, series_vs_oracle, q1_reduction, symmetry, assoc_vs_oracle,
        expansion,     horn_equivalence, distribution, ledger};
    std::vector<CriterionResult> results;
    for (const auto& fn : suites) {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult r = fn();
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out << (r.pass ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << ": " << r.detail << " ["
            << std::fixed << std::setprecision(2) << r.seconds << " s]" << std::defaultfloat << '\n';
        out.flush();
        results.push_back(std::move(r));
    }
    out << reflection_info() << '\n';
    return results;
}

} // namespace sopq
