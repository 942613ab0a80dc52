#include "sopq/spherical.hpp"

#include <cmath>
#include <numbers>

namespace sopq {

namespace {

constexpr double kPi = std::numbers::pi;

double lgam(double x) { return ln_gamma(Complex(x, 0.0)).real(); }

void require_alpha(double alpha) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw DomainError("alpha must be finite and >= 0");
    }
}

// (k + (d-2)/2) / (k + d - 2), taken as 1/2 for d = 2 where the cosine and
// exponential bases differ by exactly that factor.
double half_ratio(int k, int d) {
    if (d == 2) return 0.5;
    return (k + (d - 2) / 2.0) / (k + d - 2.0);
}

// A1 · A2 without the (-σ/2)_{s+r+ν} factor.
double assoc_prefactor(int p, int q, int nu, int r, int s) {
    const double P = p, Q = q;
    const int ms = 2 * s + nu, mr = 2 * r + nu;
    double lnA = (3.0 - (P + Q) / 2.0 - nu) * std::log(2.0) - lgam(ms + P / 2.0) - lgam(mr + Q / 2.0);
    lnA += 0.5 * (std::log(kPi) + lgam(P / 2.0) + lgam(Q / 2.0) - lgam((P - 1.0) / 2.0) -
                  lgam((Q - 1.0) / 2.0));
    lnA += 0.5 * (lgam(ms + P - 1.0) + lgam(mr + Q - 1.0) - lgam(ms + 1.0) - lgam(mr + 1.0));
    return std::exp(lnA) * std::sqrt(half_ratio(ms, p) * half_ratio(mr, q));
}

void require_index(const AssocIndex& idx) {
    if ((idx.nu != 0 && idx.nu != 1) || idx.r < 0 || idx.s < 0) {
        throw DomainError("associated index needs nu in {0,1} and r, s >= 0");
    }
}

SeriesValue assoc_direct(int p, int q, Complex sigma, const AssocIndex& idx, double alpha,
                         SeriesControl ctl) {
    const int nu = idx.nu, r = idx.r, s = idx.s;
    const double t = std::tanh(alpha);
    const int l0 = std::max(r, s);

    const Complex a = static_cast<double>(s + r + nu) - sigma / 2.0;
    const Complex b1 = 2.0 * s + nu + p / 2.0;
    const Complex b2 = 2.0 * r + nu + q / 2.0;

    // l! (ν+1/2)_l / ((l-s)! (l-r)!) t^{2l+ν}
    double coef = std::exp(lgam(l0 + 1.0) + lgam(nu + 0.5 + l0) - lgam(nu + 0.5) -
                           lgam(l0 - s + 1.0) - lgam(l0 - r + 1.0)) *
                  std::pow(t, 2 * l0 + nu);

    Complex sum = 0.0;
    TailMonitor monitor(ctl.tol);
    std::size_t used = 0;
    for (int l = l0;; ++l) {
        if (used >= ctl.max_terms) {
            throw NonConvergenceError("associated series: l-sum budget exhausted");
        }
        const Complex term =
            coef * appell_f2_terminating(a, static_cast<unsigned>(l - s), static_cast<unsigned>(l - r),
                                         b1, b2, 1.0, 1.0);
        sum += term;
        ++used;
        require_finite(sum, "associated series");
        if (monitor.add(term, sum)) break;
        coef *= (l + 1.0) * (nu + 0.5 + l) / ((l + 1.0 - s) * (l + 1.0 - r)) * t * t;
    }
    const double sign = ((s + r) % 2 == 0) ? 1.0 : -1.0;
    const Complex front = sign / std::cosh(alpha) * assoc_prefactor(p, q, nu, r, s) *
                          pochhammer(-sigma / 2.0, static_cast<unsigned>(s + r + nu));
    return {require_finite(front * sum, "associated series"), monitor.tail_estimate(sum), used, true};
}

// f_d(k): one direction's share of the associated normalisation.
double direction_constant(int d, int k) {
    if (d == 2) return 1.0 / (2.0 * kPi);
    const double D = d;
    const double ln = lgam((D - 2.0) / 2.0) +
                      0.5 * ((D - 4.0) * std::log(2.0) + lgam(D / 2.0) + lgam(k + 1.0) +
                             std::log(2.0 * k + D - 2.0) - 1.5 * std::log(kPi) -
                             lgam((D - 1.0) / 2.0) - lgam(k + D - 2.0));
    return std::exp(ln);
}

// a_{μm}^{p} for the Gegenbauer direction when the other direction is a circle.
double single_constant(int p, int mu, int m) {
    const double P = p;
    return std::exp(lgam(m + (P - 2.0) / 2.0) - std::log(kPi) +
                    0.5 * ((P + 2.0 * m - 5.0) * std::log(2.0) + lgam(mu - m + 1.0) +
                           std::log(2.0 * mu + P - 2.0) - lgam(mu + m + P - 2.0)));
}

} // namespace

GroupSignature::GroupSignature(int p_, int q_) : p(p_), q(q_) {
    if (p < 2 || q < 1) {
        throw DomainError("group signature needs p >= 2 and q >= 1");
    }
}

Complex principal_sigma(const GroupSignature& sig, double t) {
    return {-(sig.p + sig.q - 2) / 2.0, t};
}

RepLabel RepLabel::principal(const GroupSignature& sig, double t) {
    return {principal_sigma(sig, t), 0};
}

AssocIndex index_map(int lambda, int mu) {
    if (lambda < 0 || mu < 0) {
        throw DomainError("index_map: lambda, mu must be >= 0");
    }
    if ((lambda + mu) % 2 != 0) {
        throw ParityError("index_map: lambda + mu must be even");
    }
    const int nu = lambda % 2;
    return {nu, (lambda - nu) / 2, (mu - nu) / 2};
}

double lambda_kernel(double alpha, double x, double y) {
    if (std::abs(x) > 1.0 || std::abs(y) > 1.0) {
        throw DomainError("lambda_kernel: |x|, |y| <= 1 required");
    }
    const double sh = std::sinh(alpha), ch = std::cosh(alpha);
    return 1.0 + (x * x + y * y) * sh * sh - 2.0 * x * y * sh * ch;
}

Complex lambda_power(double alpha, double x, double y, Complex sigma) {
    return std::exp(sigma / 2.0 * std::log(lambda_kernel(alpha, x, y)));
}

SeriesValue zonal_series(const GroupSignature& sig, Complex sigma, double alpha, SeriesControl ctl) {
    require_alpha(alpha);
    const double t2 = std::tanh(alpha) * std::tanh(alpha);
    const Complex a = -sigma / 2.0;
    const Complex b1 = sig.p / 2.0, b2 = sig.q / 2.0;

    Complex sum = 0.0;
    double coef = 1.0;  // (1/2)_l / l! · t^{2l}
    TailMonitor monitor(ctl.tol);
    for (unsigned l = 0;; ++l) {
        if (l >= ctl.max_terms) {
            throw NonConvergenceError("zonal series: l-sum budget exhausted");
        }
        const Complex term = coef * appell_f2_terminating(a, l, l, b1, b2, 1.0, 1.0);
        sum += term;
        require_finite(sum, "zonal series");
        if (monitor.add(term, sum)) {
            return {sum / std::cosh(alpha), monitor.tail_estimate(sum), l + 1, true};
        }
        coef *= (l + 0.5) / (l + 1.0) * t2;
    }
}

HornSeriesSpec zonal_horn_spec(const GroupSignature& sig, Complex sigma, ZonalHornForm form) {
    HornSeriesSpec spec;
    spec.variables = 2;
    double p = sig.p, q = sig.q;
    if (form == ZonalHornForm::five) {
        spec.numerator = {{1.0, {1, 1}},
                          {0.5, {1, 1}},
                          {-sigma / 2.0, {1, 0}},
                          {(q + sigma) / 2.0, {0, 1}},
                          {(p + sigma) / 2.0, {0, 1}}};
        spec.denominator = {{p / 2.0, {1, 1}}, {q / 2.0, {1, 1}}, {1.0, {0, 1}}};
        return spec;
    }
    if (form == ZonalHornForm::qp) {
        std::swap(p, q);
    }
    spec.numerator = {{-sigma / 2.0, {1, 0}},
                      {1.0 - (sigma + q) / 2.0, {1, 0}},
                      {(sigma + q) / 2.0, {0, 1}},
                      {0.5, {1, 1}}};
    spec.denominator = {{q / 2.0, {1, 1}}, {p / 2.0, {1, 0}}};
    return spec;
}

SeriesValue zonal_horn(const GroupSignature& sig, Complex sigma, double alpha, ZonalHornForm form,
                       SeriesControl ctl) {
    require_alpha(alpha);
    const double t2 = std::tanh(alpha) * std::tanh(alpha);
    auto v = evaluate_horn(zonal_horn_spec(sig, sigma, form), {t2, t2}, ctl);
    v.value /= std::cosh(alpha);
    return v;
}

namespace {

SeriesValue zonal_q1_value(int p, Complex sigma, double alpha) {
    require_alpha(alpha);
    if (p < 2) {
        throw DomainError("zonal_q1: p >= 2 required");
    }
    const double t = std::tanh(alpha);
    auto v = gauss_2f1(-sigma / 2.0, (1.0 - sigma) / 2.0, p / 2.0, t * t);
    v.value *= std::exp(sigma * std::log(std::cosh(alpha)));
    return v;
}

// q = 2: Σ_l (1/2)_l ((σ+p)/2)_l ((σ+2)/2)_l / ((l!)^2 (p/2)_l)
//          · 3F2(-σ/2, -l, -l; 1-(σ+p)/2-l, -σ/2-l; 1) · t^{2l}
SeriesValue zonal_q2_3f2(int p, Complex sigma, double alpha, SeriesControl ctl) {
    const double t2 = std::tanh(alpha) * std::tanh(alpha);
    const Complex a = (sigma + static_cast<double>(p)) / 2.0;
    const Complex b = (sigma + 2.0) / 2.0;
    Complex coef = 1.0;
    Complex sum = 0.0;
    TailMonitor monitor(ctl.tol);
    for (unsigned l = 0;; ++l) {
        if (l >= ctl.max_terms) {
            throw NonConvergenceError("zonal series (q=2): l-sum budget exhausted");
        }
        const double ld = l;
        const Complex f = hyp3f2_unit(-sigma / 2.0, -ld, -ld, 1.0 - a - ld, -sigma / 2.0 - ld);
        const Complex term = coef * f;
        sum += term;
        require_finite(sum, "zonal series (q=2)");
        if (monitor.add(term, sum)) {
            return {sum / std::cosh(alpha), monitor.tail_estimate(sum), l + 1, true};
        }
        coef *= (0.5 + ld) * (a + ld) * (b + ld) / ((ld + 1.0) * (ld + 1.0) * (p / 2.0 + ld)) * t2;
    }
}

} // namespace

Complex zonal_q1(int p, Complex sigma, double alpha) { return zonal_q1_value(p, sigma, alpha).value; }

GroupSignature signature_of(SpecialGroup g) {
    switch (g) {
    case SpecialGroup::SO41: return {4, 1};
    case SpecialGroup::SO32: return {3, 2};
    case SpecialGroup::SO42: return {4, 2};
    }
    throw DomainError("unknown special group");
}

SeriesValue zonal_special(SpecialGroup group, Complex sigma, double alpha, SeriesControl ctl) {
    require_alpha(alpha);
    if (group == SpecialGroup::SO41) {
        return zonal_q1_value(4, sigma, alpha);
    }
    const GroupSignature sig = signature_of(group);
    try {
        return zonal_q2_3f2(sig.p, sigma, alpha, ctl);
    } catch (const PoleError&) {
        // σ at a pole of the 3F2 lower parameters: the F2 l-sum is regular there.
        return zonal_series(sig, sigma, alpha, ctl);
    }
}

SeriesValue assoc_series(const GroupSignature& sig, Complex sigma, const AssocIndex& idx, double alpha,
                         SeriesControl ctl, AssocRoute route) {
    require_alpha(alpha);
    require_index(idx);
    if (sig.q < 2) {
        throw DomainError("associated functions need p >= 2 and q >= 2");
    }
    if (route == AssocRoute::rearranged && idx.s < idx.r) {
        return assoc_direct(sig.q, sig.p, sigma, {idx.nu, idx.s, idx.r}, alpha, ctl);
    }
    return assoc_direct(sig.p, sig.q, sigma, idx, alpha, ctl);
}

HornSeriesSpec assoc_horn_spec(const GroupSignature& sig, Complex sigma, const AssocIndex& idx) {
    require_index(idx);
    if (idx.s < idx.r) {
        throw DomainError("assoc_horn_spec: s >= r required (use the swapped signature)");
    }
    const double p = sig.p, q = sig.q;
    const double nu = idx.nu, r = idx.r, s = idx.s;
    HornSeriesSpec spec;
    spec.variables = 2;
    spec.numerator = {{s + 1.0, {1, 1}},
                      {s + nu + 0.5, {1, 1}},
                      {s + r + nu - sigma / 2.0, {1, 0}},
                      {(q + sigma) / 2.0, {0, 1}},
                      {s - r + (p + sigma) / 2.0, {0, 1}}};
    spec.denominator = {{2.0 * s + nu + p / 2.0, {1, 1}},
                        {s + r + nu + q / 2.0, {1, 1}},
                        {1.0 + s - r, {0, 1}}};
    return spec;
}

SeriesValue assoc_horn(const GroupSignature& sig, Complex sigma, const AssocIndex& idx, double alpha,
                       SeriesControl ctl) {
    require_alpha(alpha);
    require_index(idx);
    if (sig.q < 2) {
        throw DomainError("associated functions need p >= 2 and q >= 2");
    }
    if (idx.s < idx.r) {
        return assoc_horn(sig.swapped(), sigma, {idx.nu, idx.s, idx.r}, alpha, ctl);
    }
    const int p = sig.p, q = sig.q, nu = idx.nu, r = idx.r, s = idx.s;
    const double t = std::tanh(alpha);
    const auto d = static_cast<unsigned>(s - r);
    const Complex front =
        std::exp(lgam(2.0 * s + nu + 1.0) - lgam(d + 1.0)) * std::pow(0.25, s) *
        pochhammer((2.0 - sigma - static_cast<double>(q)) / 2.0, d) /
        pochhammer(Complex(2.0 * r + nu + q / 2.0), d) * assoc_prefactor(p, q, nu, r, s) *
        pochhammer(-sigma / 2.0, static_cast<unsigned>(s + r + nu)) * std::pow(t, 2 * s + nu) /
        std::cosh(alpha);
    auto v = evaluate_horn(assoc_horn_spec(sig, sigma, idx), {t * t, t * t}, ctl);
    v.value *= front;
    return v;
}

double norm_constant_a(const GroupSignature& sig, int lambda, int l, int mu, int m) {
    if (l < 0 || m < 0 || lambda < l || mu < m) {
        throw DomainError("norm_constant_a: need lambda >= l >= 0 and mu >= m >= 0");
    }
    const int p = sig.p, q = sig.q;
    if (p == 2 && q == 2) {
        return 1.0 / (2.0 * kPi);
    }
    if (q == 2) return single_constant(p, mu, m);
    if (p == 2) return single_constant(q, lambda, l);
    if (q < 2) {
        throw DomainError("norm_constant_a: q >= 2 required");
    }
    const double P = p, Q = q;
    const double ln = lgam(l + (Q - 2.0) / 2.0) + lgam(m + (P - 2.0) / 2.0) - std::log(kPi) -
                      (4.0 - l - m - (P + Q) / 2.0) * std::log(2.0) +
                      0.5 * (lgam(lambda - l + 1.0) + lgam(mu - m + 1.0) +
                             std::log(2.0 * lambda + Q - 2.0) + std::log(2.0 * mu + P - 2.0) -
                             lgam(lambda + l + Q - 2.0) - lgam(mu + m + P - 2.0));
    return std::exp(ln);
}

double norm_constant_assoc(const GroupSignature& sig, int lambda, int mu) {
    if (lambda < 0 || mu < 0) {
        throw DomainError("norm_constant_assoc: lambda, mu >= 0 required");
    }
    if (sig.q < 2) {
        throw DomainError("norm_constant_assoc: q >= 2 required");
    }
    return direction_constant(sig.p, mu) * direction_constant(sig.q, lambda);
}

} // namespace sopq
