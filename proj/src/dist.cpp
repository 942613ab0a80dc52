#include "sopq/dist.hpp"

#include <cmath>
#include <functional>

namespace sopq {

namespace {

void require_orders(const MultiIndex& q) {
    if (q.empty()) {
        throw DomainError("multi-index must have k >= 1 entries");
    }
    for (int v : q) {
        if (v < 0) throw DomainError("derivative orders must be >= 0");
    }
}

void require_square(const Eigen::MatrixXd& m, std::size_t k) {
    if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != k) {
        throw DomainError("matrix must be k x k with k = number of orders");
    }
}

double binom(int n, int r) {
    return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(r + 1.0) - std::lgamma(n - r + 1.0)));
}

// All compositions of n into k ordered parts, lexicographic.
std::vector<std::vector<int>> compositions(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(k), 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == k - 1) {
            cur[static_cast<std::size_t>(pos)] = left;
            out.push_back(cur);
            return;
        }
        for (int v = 0; v <= left; ++v) {
            cur[static_cast<std::size_t>(pos)] = v;
            rec(pos + 1, left - v);
        }
    };
    rec(0, n);
    return out;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

} // namespace

std::vector<PackingMatrix> enumerate_packings(const MultiIndex& q, std::size_t budget) {
    require_orders(q);
    const int k = static_cast<int>(q.size());
    double count = 1.0;
    for (int qi : q) count *= binom(qi + k - 1, k - 1);
    if (count > static_cast<double>(budget)) {
        throw BudgetExceededError("packing enumeration would produce " + std::to_string(count) +
                                  " matrices (budget " + std::to_string(budget) + ")");
    }
    std::vector<std::vector<std::vector<int>>> rows;
    for (int qi : q) rows.push_back(compositions(qi, k));

    std::vector<PackingMatrix> out;
    out.reserve(static_cast<std::size_t>(count));
    std::vector<std::size_t> pick(q.size(), 0);
    while (true) {
        PackingMatrix m;
        m.k = k;
        m.column_sums.assign(q.size(), 0);
        for (std::size_t i = 0; i < q.size(); ++i) {
            const auto& row = rows[i][pick[i]];
            m.r.insert(m.r.end(), row.begin(), row.end());
            for (std::size_t j = 0; j < row.size(); ++j) m.column_sums[j] += row[j];
        }
        out.push_back(std::move(m));
        // odometer, last row fastest
        std::size_t i = q.size();
        while (i > 0) {
            --i;
            if (++pick[i] < rows[i].size()) break;
            pick[i] = 0;
            if (i == 0) return out;
        }
    }
}

double checked_det(const Eigen::MatrixXd& beta) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(beta);
    if (!lu.isInvertible()) {
        throw SingularMatrixError("matrix is singular");
    }
    return lu.determinant();
}

CoefficientMap transform_coefficients(const Eigen::MatrixXd& beta, const MultiIndex& q) {
    require_orders(q);
    require_square(beta, q.size());
    const double det = checked_det(beta);
    CoefficientMap out;
    for (const auto& m : enumerate_packings(q)) {
        double term = 1.0;
        for (int i = 0; i < m.k; ++i) {
            term *= factorial(q[static_cast<std::size_t>(i)]);
            for (int j = 0; j < m.k; ++j) {
                const int r = m.at(i, j);
                term *= std::pow(beta(i, j), r) / factorial(r);
            }
        }
        out[m.column_sums] += det * term;
    }
    return out;
}

std::vector<int> indices_of(const MultiIndex& q) {
    std::vector<int> idx;
    for (std::size_t i = 0; i < q.size(); ++i) {
        idx.insert(idx.end(), static_cast<std::size_t>(q[i]), static_cast<int>(i));
    }
    return idx;
}

std::map<std::vector<int>, double> transform_index_form(const Eigen::MatrixXd& beta,
                                                        const std::vector<int>& indices) {
    const int k = static_cast<int>(beta.rows());
    require_square(beta, static_cast<std::size_t>(k));
    for (int i : indices) {
        if (i < 0 || i >= k) throw DomainError("index outside 0..k-1");
    }
    const double det = checked_det(beta);
    std::map<std::vector<int>, double> out;
    std::vector<int> js(indices.size(), 0);
    std::function<void(std::size_t, double)> rec = [&](std::size_t pos, double acc) {
        if (pos == indices.size()) {
            out[js] += det * acc;
            return;
        }
        for (int j = 0; j < k; ++j) {
            js[pos] = j;
            rec(pos + 1, acc * beta(indices[pos], j));
        }
    };
    rec(0, 1.0);
    return out;
}

CoefficientMap group_index_form(const std::map<std::vector<int>, double>& raw, int k) {
    CoefficientMap out;
    for (const auto& [js, v] : raw) {
        MultiIndex p(static_cast<std::size_t>(k), 0);
        for (int j : js) ++p[static_cast<std::size_t>(j)];
        out[p] += v;
    }
    return out;
}

double jacobi_formula_check(const PointwiseMatrix& beta, const Eigen::MatrixXd& alpha,
                            const std::vector<FiniteDifferenceSample>& samples, double h) {
    const auto k = static_cast<std::size_t>(beta.value.rows());
    require_square(beta.value, k);
    require_square(alpha, k);
    if (!(h > 0.0)) throw DomainError("step h must be > 0");
    const Eigen::MatrixXd prod = alpha * beta.value;
    const double scale = std::max(1.0, alpha.norm() * beta.value.norm());
    if ((prod - Eigen::MatrixXd::Identity(prod.rows(), prod.cols())).norm() > 1e-10 * scale) {
        throw InconsistentInverseError("alpha * beta is not the identity");
    }
    if (samples.size() != beta.derivative.size()) {
        throw DomainError("one finite-difference sample per derivative direction required");
    }
    const double det = checked_det(beta.value);
    double worst = 0.0;
    for (std::size_t m = 0; m < samples.size(); ++m) {
        const double fd = (samples[m].plus.determinant() - samples[m].minus.determinant()) / (2.0 * h);
        // β_{ij,m} α_{ji} = trace(β_{,m} α)
        const double formula = (beta.derivative[m] * alpha).trace() * det;
        worst = std::max(worst, std::abs(fd - formula));
    }
    return worst;
}

CoefficientMap compose_transforms(const Eigen::MatrixXd& beta1, const Eigen::MatrixXd& beta2,
                                  const MultiIndex& q) {
    CoefficientMap out;
    for (const auto& [p, c1] : transform_coefficients(beta1, q)) {
        for (const auto& [p2, c2] : transform_coefficients(beta2, p)) {
            out[p2] += c1 * c2;
        }
    }
    return out;
}

} // namespace sopq
