#include "sopq/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>

namespace sopq {

Complex require_finite(Complex z, const char* what) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw OverflowError(std::string(what) + ": non-finite value");
    }
    return z;
}

bool is_nonpositive_integer(Complex z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real());
}

bool TailMonitor::add(Complex term, Complex partial_sum) {
    const double mag = std::abs(term);
    last_[0] = last_[1];
    last_[1] = last_[2];
    last_[2] = mag;
    ++seen_;
    quiet_ = (mag <= tol_ * std::abs(partial_sum)) ? quiet_ + 1 : 0;
    return quiet_ >= 3;
}

double TailMonitor::tail_estimate(Complex partial_sum) const {
    const double m = *std::max_element(std::begin(last_), std::end(last_));
    const double s = std::abs(partial_sum);
    return s > 0.0 ? m / s : m;
}

namespace {

// B_{2k} / (2k (2k-1)) for k = 1..8
constexpr std::array<double, 8> kStirling = {
    1.0 / 12.0,        -1.0 / 360.0, 1.0 / 1260.0,  -1.0 / 1680.0,
    1.0 / 1188.0,      -691.0 / 360360.0, 1.0 / 156.0, -3617.0 / 122400.0,
};

// Valid for Re z >= 10 (|z| >= 10); truncation error below 1e-16 relative.
Complex stirling_ln_gamma(Complex z) {
    const Complex inv = 1.0 / z;
    const Complex inv2 = inv * inv;
    Complex corr = 0.0;
    Complex pw = inv;
    for (double c : kStirling) {
        corr += c * pw;
        pw *= inv2;
    }
    return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * std::numbers::pi) + corr;
}

constexpr double kShiftTarget = 10.0;
constexpr double kMaxShift = 1e5;

} // namespace

Complex ln_gamma(Complex z) {
    require_finite(z, "ln_gamma argument");
    if (is_nonpositive_integer(z)) {
        throw PoleError("ln_gamma: pole at non-positive integer");
    }
    if (std::abs(z) > 1e300) {
        throw OverflowError("ln_gamma: argument outside representable range");
    }
    if (z.imag() == 0.0 && z.real() > 0.0) {
        return std::lgamma(z.real());
    }
    // Upward recurrence ln Γ(z) = ln Γ(z+N) - Σ log(z+k). Each log carries its
    // own cut on z+k <= 0, so the union is the standard cut and the result is
    // the analytic continuation rather than log(Γ(z)) reduced mod 2πi.
    Complex shift = 0.0;
    if (z.real() < kShiftTarget) {
        const double steps = std::ceil(kShiftTarget - z.real());
        if (steps > kMaxShift) {
            throw OverflowError("ln_gamma: Re z too negative for the shift recurrence");
        }
        const auto n = static_cast<long>(steps);
        for (long k = 0; k < n; ++k) {
            shift += std::log(z + static_cast<double>(k));
        }
        z += steps;
    }
    return require_finite(stirling_ln_gamma(z) - shift, "ln_gamma");
}

Complex pochhammer(Complex a, unsigned n) {
    Complex r = 1.0;
    for (unsigned k = 0; k < n; ++k) {
        r *= a + static_cast<double>(k);
    }
    return require_finite(r, "pochhammer");
}

double pochhammer(double a, unsigned n) {
    double r = 1.0;
    for (unsigned k = 0; k < n; ++k) {
        r *= a + k;
    }
    if (!std::isfinite(r)) {
        throw OverflowError("pochhammer: non-finite value");
    }
    return r;
}

double gegenbauer(unsigned n, double lam, double x) {
    if (!(lam > -0.5)) {
        throw DomainError("gegenbauer: lam > -1/2 required");
    }
    if (n == 0) {
        return 1.0;
    }
    double prev = 1.0;
    double curr = 2.0 * lam * x;
    for (unsigned k = 2; k <= n; ++k) {
        const double next = (2.0 * (k + lam - 1.0) * x * curr - (k + 2.0 * lam - 2.0) * prev) / k;
        prev = curr;
        curr = next;
    }
    return curr;
}

SeriesValue gauss_2f1(Complex a, Complex b, Complex c, double x, SeriesControl ctl) {
    if (!(std::abs(x) < 1.0)) {
        throw DomainError("gauss_2f1: |x| < 1 required");
    }
    Complex sum = 1.0;
    Complex term = 1.0;
    TailMonitor monitor(ctl.tol);
    for (std::size_t k = 0;; ++k) {
        if (k + 1 >= ctl.max_terms) {
            throw NonConvergenceError("gauss_2f1: term budget exhausted");
        }
        const double kd = static_cast<double>(k);
        const Complex num = (a + kd) * (b + kd);
        if (num == 0.0) {
            return {sum, 0.0, k + 1, true};
        }
        if (c + kd == 0.0) {
            throw PoleError("gauss_2f1: lower parameter hits a non-positive integer");
        }
        term *= num / ((c + kd) * (kd + 1.0)) * x;
        sum += term;
        require_finite(sum, "gauss_2f1");
        if (monitor.add(term, sum)) {
            return {sum, monitor.tail_estimate(sum), k + 2, true};
        }
    }
}

Complex hyp3f2_unit(Complex a1, Complex a2, Complex a3, Complex b1, Complex b2) {
    long last = -1;
    for (Complex a : {a1, a2, a3}) {
        if (is_nonpositive_integer(a)) {
            const long n = static_cast<long>(-a.real());
            last = (last < 0) ? n : std::min(last, n);
        }
    }
    if (last < 0) {
        throw DomainError("hyp3f2_unit: no upper parameter is a non-positive integer");
    }
    Complex sum = 1.0;
    Complex term = 1.0;
    for (long k = 0; k < last; ++k) {
        const double kd = static_cast<double>(k);
        if (b1 + kd == 0.0 || b2 + kd == 0.0) {
            throw PoleError("hyp3f2_unit: lower Pochhammer vanishes before termination");
        }
        term *= (a1 + kd) * (a2 + kd) * (a3 + kd) / ((b1 + kd) * (b2 + kd) * (kd + 1.0));
        sum += term;
    }
    return require_finite(sum, "hyp3f2_unit");
}

namespace {

void check_lower(Complex b, unsigned upto, const char* which) {
    for (unsigned k = 0; k < upto; ++k) {
        if (b + static_cast<double>(k) == 0.0) {
            throw PoleError(std::string("appell_f2_terminating: lower parameter ") + which +
                            " hits zero inside the summation range");
        }
    }
}

// Σ_n (a)_n (-l)_n / ((b)_n n!) y^n
Complex terminating_2f1(Complex a, unsigned l, Complex b, double y) {
    Complex sum = 1.0;
    Complex term = 1.0;
    for (unsigned n = 0; n < l; ++n) {
        const double nd = n;
        term *= (a + nd) * (nd - l) / ((b + nd) * (nd + 1.0)) * y;
        sum += term;
    }
    return sum;
}

Complex ratio_pochhammer(Complex c, Complex b, unsigned l) {
    Complex r = 1.0;
    for (unsigned k = 0; k < l; ++k) {
        r *= (c + static_cast<double>(k)) / (b + static_cast<double>(k));
    }
    return r;
}

// Inner sum at y = 1 in closed form: (b - a - m)_l / (b)_l.
Complex f2_unit_inner(Complex a, unsigned l1, unsigned l2, Complex b1, Complex b2, double x) {
    Complex sum = 0.0;
    Complex outer = 1.0;
    Complex inner = ratio_pochhammer(b2 - a, b2, l2);
    for (unsigned m = 0; m <= l1; ++m) {
        const double md = m;
        sum += outer * inner;
        if (m == l1) {
            break;
        }
        outer *= (a + md) * (md - l1) / ((b1 + md) * (md + 1.0)) * x;
        // (c-1)_l / (c)_l = (c-1) / (c-1+l) with c = b2 - a - m
        const Complex cm1 = b2 - a - md - 1.0;
        const Complex den = cm1 + static_cast<double>(l2);
        if (inner == 0.0 || den == 0.0) {
            inner = ratio_pochhammer(cm1, b2, l2);
        } else {
            inner *= cm1 / den;
        }
    }
    return sum;
}

} // namespace

Complex appell_f2_terminating(Complex a, unsigned l1, unsigned l2, Complex b1, Complex b2,
                              double x, double y) {
    check_lower(b1, l1, "b1");
    check_lower(b2, l2, "b2");
    if (y == 1.0) {
        return require_finite(f2_unit_inner(a, l1, l2, b1, b2, x), "appell_f2_terminating");
    }
    if (x == 1.0) {
        return require_finite(f2_unit_inner(a, l2, l1, b2, b1, y), "appell_f2_terminating");
    }
    Complex sum = 0.0;
    Complex outer = 1.0;
    for (unsigned m = 0; m <= l1; ++m) {
        const double md = m;
        sum += outer * terminating_2f1(a + md, l2, b2, y);
        outer *= (a + md) * (md - l1) / ((b1 + md) * (md + 1.0)) * x;
    }
    return require_finite(sum, "appell_f2_terminating");
}

} // namespace sopq
