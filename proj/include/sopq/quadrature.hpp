#pragma once

#include <vector>

#include "sopq/spherical.hpp"

namespace sopq {

enum class RuleKind { gauss_legendre, gauss_jacobi, periodic_trapezoid };

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    RuleKind kind = RuleKind::gauss_legendre;
    double alpha_w = 0.0;
    double beta_w = 0.0;
};

// Gauss rules live on [-1,1], Jacobi weight (1-x)^alpha_w (1+x)^beta_w;
// the trapezoid rule lives on [0, 2π) with nodes 2πk/n.
QuadratureRule make_rule(RuleKind kind, int n, double alpha_w = 0.0, double beta_w = 0.0);

// Jacobi polynomial P_n^{(a,b)}(x) and its derivative.
double jacobi_p(int n, double a, double b, double x);
double jacobi_p_deriv(int n, double a, double b, double x);

// Zonal integral with n nodes per direction. d >= 3: Gauss-Jacobi in cos;
// d = 2: trapezoid in the angle; d = 1: the two points ±1.
Complex zonal_oracle(const GroupSignature& sig, Complex sigma, double alpha, int n);

struct OracleValue {
    Complex value;
    int nodes = 0;
    double change = 0.0;  // |last - previous|
};

// Doubles n from n0 until two successive values agree to `agree`.
// Throws AccuracyNotReachedError past n_max.
OracleValue zonal_oracle_converged(const GroupSignature& sig, Complex sigma, double alpha,
                                   int n0 = 32, int n_max = 2048, double agree = 1e-10);

// Associated integral P_{σλμ}. On a circle direction the index may be negative
// (Fourier mode e^{-ikθ}). Requires p, q >= 2 and λ + μ even.
Complex assoc_oracle(const GroupSignature& sig, Complex sigma, int lambda, int mu, double alpha, int n);
OracleValue assoc_oracle_converged(const GroupSignature& sig, Complex sigma, int lambda, int mu,
                                   double alpha, int n0 = 32, int n_max = 2048, double agree = 1e-10);

enum class CoefficientSource { oracle, series };

// RMS (normalised measure) of Λ^{σ/2} minus its truncated expansion over
// |λ| + |μ| <= cutoff, λ + μ even.
double expansion_residual(const GroupSignature& sig, Complex sigma, double alpha, int cutoff, int n,
                          CoefficientSource source = CoefficientSource::oracle);

} // namespace sopq
