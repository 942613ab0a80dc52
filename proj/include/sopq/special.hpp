#pragma once

#include <complex>
#include <cstddef>

#include "sopq/errors.hpp"

namespace sopq {

/// Complex scalar used for σ, Pochhammer products and series terms.
/// Values entering the series machinery must be finite.
using Complex = std::complex<double>;

/// Throws OverflowError if either component is NaN or infinite.
Complex require_finite(Complex z, const char* what);

bool is_nonpositive_integer(Complex z);

/// Result of a truncated series summation.
struct SeriesValue {
    Complex value{};
    double tail_estimate = 0.0;  // relative to |value| (absolute when value == 0)
    std::size_t terms_used = 0;
    bool converged = false;
};

/// Truncation control shared by all series: stop once three consecutive
/// terms (or degree shells) each satisfy |term| <= tol * |partial sum|.
struct SeriesControl {
    double tol = 1e-14;
    std::size_t max_terms = 1'000'000;
};

/// Tracks the last three term magnitudes against the running sum.
class TailMonitor {
public:
    explicit TailMonitor(double tol) : tol_(tol) {}

    /// Record a term after it has been added to `partial_sum`.
    /// Returns true when the truncation rule is satisfied.
    bool add(Complex term, Complex partial_sum);

    /// Largest of the last three magnitudes, relative to |partial_sum|.
    double tail_estimate(Complex partial_sum) const;

private:
    double tol_;
    double last_[3] = {0.0, 0.0, 0.0};
    int seen_ = 0;
    int quiet_ = 0;
};

/// Log-Gamma with the standard branch cut along the non-positive real axis
/// (the analytic continuation of the real log-Gamma for Re z > 0).
/// Throws PoleError at non-positive integers and OverflowError for |z| > 1e300.
Complex ln_gamma(Complex z);

/// Rising factorial a(a+1)...(a+n-1) as a direct product; (a)_0 = 1.
/// Defined for every a, including non-positive integers.
Complex pochhammer(Complex a, unsigned n);
double pochhammer(double a, unsigned n);

/// Gegenbauer polynomial C_n^lam(x) by the three-term recurrence.
/// Requires lam > -1/2. At lam = 0 the standard normalisation makes C_n
/// vanish for n >= 1; the p = 2 / q = 2 geometries use Fourier modes instead.
double gegenbauer(unsigned n, double lam, double x);

/// Gauss 2F1(a, b; c; x) for real |x| < 1. Terminating series are summed exactly.
SeriesValue gauss_2f1(Complex a, Complex b, Complex c, double x, SeriesControl ctl = {});

/// Terminating 3F2(a1, a2, a3; b1, b2; 1). At least one upper parameter must be
/// a non-positive integer. Throws PoleError if a lower Pochhammer vanishes first.
Complex hyp3f2_unit(Complex a1, Complex a2, Complex a3, Complex b1, Complex b2);

/// Terminating Appell F2(a, -l1, -l2; b1, b2; x, y), a finite double sum over
/// m <= l1, n <= l2. When either argument equals 1 the corresponding inner sum
/// is reduced in closed form (Chu-Vandermonde), which avoids the catastrophic
/// cancellation of the raw double sum for large l1, l2.
Complex appell_f2_terminating(Complex a, unsigned l1, unsigned l2, Complex b1, Complex b2,
                              double x, double y);

} // namespace sopq
