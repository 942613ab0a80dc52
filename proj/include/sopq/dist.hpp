#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "sopq/errors.hpp"

namespace sopq {

// Derivative orders (q_1, ..., q_k) of δ^{(q_1...q_k)}.
using MultiIndex = std::vector<int>;

// k×k nonnegative integers r_ij, row-major, with row sums q_i.
struct PackingMatrix {
    int k = 0;
    std::vector<int> r;
    MultiIndex column_sums;

    int at(int i, int j) const { return r[static_cast<std::size_t>(i * k + j)]; }
};

// β (or α) at a point; `derivative[m]` holds ∂β/∂x_m when supplied.
struct PointwiseMatrix {
    Eigen::MatrixXd value;
    std::vector<Eigen::MatrixXd> derivative;
};

inline constexpr std::size_t kPackingBudget = 1'000'000;

// Lexicographic in the row-major entries. BudgetExceededError past `budget`.
std::vector<PackingMatrix> enumerate_packings(const MultiIndex& q, std::size_t budget = kPackingBudget);

// p -> coefficient of δ^{(p)}(P) in δ^{(q)}(Q), ordered lexicographically.
using CoefficientMap = std::map<MultiIndex, double>;

double checked_det(const Eigen::MatrixXd& beta);  // SingularMatrixError if not invertible

CoefficientMap transform_coefficients(const Eigen::MatrixXd& beta, const MultiIndex& q);

// Ungrouped contraction det β · β_{i1 j1} ... β_{is js}, keyed by (j1, ..., js).
std::map<std::vector<int>, double> transform_index_form(const Eigen::MatrixXd& beta,
                                                        const std::vector<int>& indices);

// Sum index-form terms sharing the same derivative multiset (as column counts).
CoefficientMap group_index_form(const std::map<std::vector<int>, double>& raw, int k);

// Index list with q_i copies of i.
std::vector<int> indices_of(const MultiIndex& q);

// Central differences of det β in direction m, one (plus, minus) pair per m.
struct FiniteDifferenceSample {
    Eigen::MatrixXd plus;
    Eigen::MatrixXd minus;
};

// max_m |FD ∂det β/∂x_m - β_{ij,m} α_{ji} det β|. InconsistentInverseError
// when α β differs from the identity.
double jacobi_formula_check(const PointwiseMatrix& beta, const Eigen::MatrixXd& alpha,
                            const std::vector<FiniteDifferenceSample>& samples, double h);

// Applies β1 and then β2 to each output; equals the direct transform by β1 β2.
CoefficientMap compose_transforms(const Eigen::MatrixXd& beta1, const Eigen::MatrixXd& beta2,
                                  const MultiIndex& q);

} // namespace sopq
