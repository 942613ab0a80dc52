#include "sopq/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

#include <Eigen/Eigenvalues>

namespace sopq {

namespace {

constexpr double kPi = std::numbers::pi;

double lgam(double x) { return ln_gamma(Complex(x, 0.0)).real(); }

QuadratureRule gauss_jacobi_rule(int n, double a, double b) {
    const double ab = a + b;
    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(n - 1);
    for (int k = 0; k < n; ++k) {
        const double s = 2.0 * k + ab;
        diag(k) = (k == 0) ? (b - a) / (ab + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    }
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + ab;
        double v;
        if (k == 1) {
            v = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
        } else {
            v = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
        }
        sub(k - 1) = std::sqrt(v);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) {
        throw NumericalError("Gauss-Jacobi: eigenvalue solve failed");
    }

    QuadratureRule rule;
    rule.kind = (a == 0.0 && b == 0.0) ? RuleKind::gauss_legendre : RuleKind::gauss_jacobi;
    rule.alpha_w = a;
    rule.beta_w = b;
    const double lnc = lgam(n + a + 1.0) + lgam(n + b + 1.0) - lgam(n + ab + 1.0) - lgam(n + 1.0) +
                       (ab + 1.0) * std::log(2.0);
    for (int i = 0; i < n; ++i) {
        double x = eig.eigenvalues()(i);
        for (int it = 0; it < 3; ++it) {
            const double dx = jacobi_p(n, a, b, x) / jacobi_p_deriv(n, a, b, x);
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double d = jacobi_p_deriv(n, a, b, x);
        rule.nodes.push_back(x);
        rule.weights.push_back(std::exp(lnc) / ((1.0 - x * x) * d * d));
    }
    return rule;
}

QuadratureRule trapezoid_rule(int n) {
    QuadratureRule rule;
    rule.kind = RuleKind::periodic_trapezoid;
    for (int k = 0; k < n; ++k) {
        rule.nodes.push_back(2.0 * kPi * k / n);
        rule.weights.push_back(2.0 * kPi / n);
    }
    return rule;
}

// Rules are reused heavily by the convergence loops.
std::shared_ptr<const QuadratureRule> cached_rule(RuleKind kind, int n, double a, double b) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, double, double>, std::shared_ptr<const QuadratureRule>> cache;
    const auto key = std::make_tuple(static_cast<int>(kind), n, a, b);
    {
        std::lock_guard<std::mutex> lock(mu);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    auto rule = std::make_shared<const QuadratureRule>(make_rule(kind, n, a, b));
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(key, rule).first->second;
}

// One integration direction of dimension d: cosines, weights (raw measure,
// not normalised), and angles for circle directions.
struct Direction {
    int d = 0;
    std::vector<double> c;
    std::vector<double> w;
    std::vector<double> angle;
    double total = 0.0;  // exact total mass of the raw measure
};

Direction make_direction(int d, int n) {
    Direction dir;
    dir.d = d;
    if (d == 1) {
        dir.c = {-1.0, 1.0};
        dir.w = {0.5, 0.5};
        dir.total = 1.0;
    } else if (d == 2) {
        auto rule = cached_rule(RuleKind::periodic_trapezoid, n, 0.0, 0.0);
        dir.angle = rule->nodes;
        dir.w = rule->weights;
        for (double a : dir.angle) dir.c.push_back(std::cos(a));
        dir.total = 2.0 * kPi;
    } else {
        const double e = (d - 3) / 2.0;
        auto rule = cached_rule(e == 0.0 ? RuleKind::gauss_legendre : RuleKind::gauss_jacobi, n, e, e);
        dir.c = rule->nodes;
        dir.w = rule->weights;
        dir.total = std::exp(0.5 * std::log(kPi) + lgam((d - 1) / 2.0) - lgam(d / 2.0));
    }
    return dir;
}

// Basis function values: C_k^{(d-2)/2} for d >= 3, e^{-ikθ} on the circle.
std::vector<Complex> basis(const Direction& dir, int k) {
    std::vector<Complex> out(dir.c.size());
    for (std::size_t i = 0; i < dir.c.size(); ++i) {
        if (dir.d == 2) {
            out[i] = std::polar(1.0, -k * dir.angle[i]);
        } else {
            out[i] = gegenbauer(static_cast<unsigned>(k), (dir.d - 2) / 2.0, dir.c[i]);
        }
    }
    return out;
}

std::vector<double> log_kernel(const Direction& dx, const Direction& dy, double alpha) {
    std::vector<double> out(dx.c.size() * dy.c.size());
    for (std::size_t i = 0; i < dx.c.size(); ++i) {
        for (std::size_t j = 0; j < dy.c.size(); ++j) {
            out[i * dy.c.size() + j] = std::log(lambda_kernel(alpha, dx.c[i], dy.c[j]));
        }
    }
    return out;
}

void require_assoc_sig(const GroupSignature& sig, int lambda, int mu) {
    if (sig.q < 2) {
        throw DomainError("associated oracle: p, q >= 2 required");
    }
    if (((lambda + mu) % 2 + 2) % 2 != 0) {
        throw ParityError("associated oracle: lambda + mu must be even");
    }
    if ((sig.q > 2 && lambda < 0) || (sig.p > 2 && mu < 0)) {
        throw DomainError("associated oracle: negative index on a Gegenbauer direction");
    }
}

template <class Fn>
OracleValue converge(Fn eval, int n0, int n_max, double agree) {
    int n = std::max(n0, 2);
    Complex prev = eval(n);
    double change = 0.0;
    while (true) {
        const int next = 2 * n;
        if (next > n_max) {
            throw AccuracyNotReachedError("quadrature oracle did not converge below n_max = " +
                                          std::to_string(n_max));
        }
        const Complex v = eval(next);
        change = std::abs(v - prev);
        if (change <= agree * std::abs(v) || change <= 1e-15) {
            return {v, next, change};
        }
        prev = v;
        n = next;
    }
}

} // namespace

double jacobi_p(int n, double a, double b, double x) {
    if (n == 0) return 1.0;
    double p0 = 1.0;
    double p1 = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
    for (int k = 2; k <= n; ++k) {
        const double s = 2.0 * k + a + b;
        const double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
        const double c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        const double c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        const double p2 = (c2 * p1 - c3 * p0) / c1;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

double jacobi_p_deriv(int n, double a, double b, double x) {
    if (n == 0) return 0.0;
    return 0.5 * (n + a + b + 1.0) * jacobi_p(n - 1, a + 1.0, b + 1.0, x);
}

QuadratureRule make_rule(RuleKind kind, int n, double alpha_w, double beta_w) {
    if (n < 2) {
        throw DomainError("make_rule: n >= 2 required");
    }
    switch (kind) {
    case RuleKind::periodic_trapezoid:
        return trapezoid_rule(n);
    case RuleKind::gauss_legendre:
        return gauss_jacobi_rule(n, 0.0, 0.0);
    case RuleKind::gauss_jacobi:
        if (!(alpha_w > -1.0) || !(beta_w > -1.0)) {
            throw DomainError("make_rule: Jacobi exponents must exceed -1");
        }
        return gauss_jacobi_rule(n, alpha_w, beta_w);
    }
    throw DomainError("make_rule: unknown rule kind");
}

Complex zonal_oracle(const GroupSignature& sig, Complex sigma, double alpha, int n) {
    if (!(alpha >= 0.0)) {
        throw DomainError("zonal_oracle: alpha >= 0 required");
    }
    const Direction dx = make_direction(sig.p, n);
    const Direction dy = make_direction(sig.q, n);
    const auto lk = log_kernel(dx, dy, alpha);
    Complex sum = 0.0;
    for (std::size_t i = 0; i < dx.c.size(); ++i) {
        Complex row = 0.0;
        for (std::size_t j = 0; j < dy.c.size(); ++j) {
            row += dy.w[j] * std::exp(sigma / 2.0 * lk[i * dy.c.size() + j]);
        }
        sum += dx.w[i] * row;
    }
    return sum / (dx.total * dy.total);
}

OracleValue zonal_oracle_converged(const GroupSignature& sig, Complex sigma, double alpha, int n0,
                                   int n_max, double agree) {
    return converge([&](int n) { return zonal_oracle(sig, sigma, alpha, n); }, n0, n_max, agree);
}

Complex assoc_oracle(const GroupSignature& sig, Complex sigma, int lambda, int mu, double alpha, int n) {
    require_assoc_sig(sig, lambda, mu);
    if (!(alpha >= 0.0)) {
        throw DomainError("assoc_oracle: alpha >= 0 required");
    }
    const Direction dx = make_direction(sig.p, n);
    const Direction dy = make_direction(sig.q, n);
    const auto bx = basis(dx, mu);
    const auto by = basis(dy, lambda);
    const auto lk = log_kernel(dx, dy, alpha);
    Complex sum = 0.0;
    for (std::size_t i = 0; i < dx.c.size(); ++i) {
        Complex row = 0.0;
        for (std::size_t j = 0; j < dy.c.size(); ++j) {
            row += dy.w[j] * by[j] * std::exp(sigma / 2.0 * lk[i * dy.c.size() + j]);
        }
        sum += dx.w[i] * bx[i] * row;
    }
    return norm_constant_assoc(sig, std::abs(lambda), std::abs(mu)) * sum;
}

OracleValue assoc_oracle_converged(const GroupSignature& sig, Complex sigma, int lambda, int mu,
                                   double alpha, int n0, int n_max, double agree) {
    return converge([&](int n) { return assoc_oracle(sig, sigma, lambda, mu, alpha, n); }, n0, n_max,
                    agree);
}

double expansion_residual(const GroupSignature& sig, Complex sigma, double alpha, int cutoff, int n,
                          CoefficientSource source) {
    if (cutoff < 0) {
        throw DomainError("expansion_residual: cutoff >= 0 required");
    }
    if (sig.q < 2) {
        throw DomainError("expansion_residual: p, q >= 2 required");
    }
    const Direction dx = make_direction(sig.p, n);
    const Direction dy = make_direction(sig.q, n);
    const auto lk = log_kernel(dx, dy, alpha);
    const std::size_t ny = dy.c.size();

    std::vector<Complex> partial(dx.c.size() * ny, 0.0);
    const int lam_lo = (sig.q == 2) ? -cutoff : 0;
    const int mu_lo = (sig.p == 2) ? -cutoff : 0;
    for (int lam = lam_lo; lam <= cutoff; ++lam) {
        for (int mu = mu_lo; mu <= cutoff; ++mu) {
            if (std::abs(lam) + std::abs(mu) > cutoff || (std::abs(lam) + std::abs(mu)) % 2 != 0) {
                continue;
            }
            Complex coef;
            if (source == CoefficientSource::oracle) {
                coef = assoc_oracle(sig, sigma, lam, mu, alpha, n);
            } else {
                // circle directions are even in the angle, so P_{-k} = P_{k}
                coef = assoc_series(sig, sigma, index_map(std::abs(lam), std::abs(mu)), alpha).value;
            }
            // conjugate modes, scaled by the measure mass and the basis constant
            const auto bx = basis(dx, sig.p == 2 ? -mu : mu);
            const auto by = basis(dy, sig.q == 2 ? -lam : lam);
            const Complex scale =
                dx.total * dy.total * norm_constant_assoc(sig, std::abs(lam), std::abs(mu)) * coef;
            for (std::size_t i = 0; i < dx.c.size(); ++i) {
                for (std::size_t j = 0; j < ny; ++j) {
                    partial[i * ny + j] += scale * bx[i] * by[j];
                }
            }
        }
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < dx.c.size(); ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            const Complex f = std::exp(sigma / 2.0 * lk[i * ny + j]);
            const double w = dx.w[i] * dy.w[j];
            num += w * std::norm(f - partial[i * ny + j]);
            den += w;
        }
    }
    return std::sqrt(num / den);
}

} // namespace sopq
