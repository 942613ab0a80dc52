#pragma once

#include "sopq/horn.hpp"
#include "sopq/special.hpp"

namespace sopq {

// SO0(p,q); x pairs with p, y with q throughout.
struct GroupSignature {
    int p = 2;
    int q = 1;

    GroupSignature() = default;
    GroupSignature(int p_, int q_);  // throws DomainError unless p >= 2, q >= 1
    GroupSignature swapped() const { return {q, p}; }
};

// Only ε = 0 is representable: zonal and associated functions need even
// representations.
struct RepLabel {
    Complex sigma;
    int epsilon = 0;

    static RepLabel principal(const GroupSignature& sig, double t);
    static RepLabel general(Complex sigma) { return {sigma, 0}; }
};

Complex principal_sigma(const GroupSignature& sig, double t);

// (λ, μ) = (ν + 2r, ν + 2s)
struct AssocIndex {
    int nu = 0;
    int r = 0;
    int s = 0;

    int lambda() const { return nu + 2 * r; }
    int mu() const { return nu + 2 * s; }
};

AssocIndex index_map(int lambda, int mu);  // ParityError if λ + μ is odd

double lambda_kernel(double alpha, double x, double y);
Complex lambda_power(double alpha, double x, double y, Complex sigma);

// l-sum budget for the zonal and associated series.
inline constexpr SeriesControl kSphericalControl{1e-15, 500};

// All α arguments must be >= 0. Negative α reduces to this case through
// Λ(-α; x, y) = Λ(α; -x, y), which the callers apply themselves.

SeriesValue zonal_series(const GroupSignature& sig, Complex sigma, double alpha,
                         SeriesControl ctl = kSphericalControl);

enum class ZonalHornForm { pq, qp, five };

HornSeriesSpec zonal_horn_spec(const GroupSignature& sig, Complex sigma, ZonalHornForm form);
SeriesValue zonal_horn(const GroupSignature& sig, Complex sigma, double alpha,
                       ZonalHornForm form = ZonalHornForm::pq, SeriesControl ctl = {});

Complex zonal_q1(int p, Complex sigma, double alpha);

enum class SpecialGroup { SO41, SO32, SO42 };
GroupSignature signature_of(SpecialGroup g);
SeriesValue zonal_special(SpecialGroup group, Complex sigma, double alpha,
                          SeriesControl ctl = kSphericalControl);

// rearranged: for s < r evaluate the (q, p, s, r) series, which is the same
// function by the p <-> q symmetry. direct: use the l-sum as it stands.
enum class AssocRoute { rearranged, direct };

SeriesValue assoc_series(const GroupSignature& sig, Complex sigma, const AssocIndex& idx,
                         double alpha, SeriesControl ctl = kSphericalControl,
                         AssocRoute route = AssocRoute::rearranged);

HornSeriesSpec assoc_horn_spec(const GroupSignature& sig, Complex sigma, const AssocIndex& idx);
SeriesValue assoc_horn(const GroupSignature& sig, Complex sigma, const AssocIndex& idx,
                       double alpha, SeriesControl ctl = {});

// Basis normalisation a_{λlμm}. q >= 3 and p >= 3: two Gegenbauer factors;
// exactly one of p, q equal to 2: one Gegenbauer factor times the Fourier
// mode; p = q = 2: 1/(2π).
double norm_constant_a(const GroupSignature& sig, int lambda, int l, int mu, int m);

// Constant in front of the associated-function integrals, indexed by (λ, μ).
double norm_constant_assoc(const GroupSignature& sig, int lambda, int mu);

} // namespace sopq
