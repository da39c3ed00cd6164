#pragma once

#include "serrin/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace serrin::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

// Recurrence coefficient beta_k of the monic polynomials orthogonal for
// (1 - x^2)^a. The k = 1 entry is written separately because the general
// form is 0/0 at a = -1/2.
inline double symmetric_jacobi_beta(int k, double a) {
    const double kk = k;
    if (k == 1) return 1.0 / (3.0 + 2.0 * a);
    return kk * (kk + 2.0 * a) / ((2.0 * kk + 2.0 * a + 1.0) * (2.0 * kk + 2.0 * a - 1.0));
}

inline double symmetric_jacobi_mass(double a) {
    return std::sqrt(std::numbers::pi) * std::exp(std::lgamma(a + 1.0) - std::lgamma(a + 1.5));
}

// Golub-Welsch: eigenvalues of the symmetric tridiagonal matrix with zero
// diagonal and off-diagonal sqrt(beta) are the nodes; mass * v_0^2 the weights.
inline Rule golub_welsch(const std::vector<double>& beta, double mass) {
    const int n = static_cast<int>(beta.size()) + 1;
    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    if (n == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = mass;
        return rule;
    }
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n - 1);
    for (int k = 0; k < n - 1; ++k) sub(k) = std::sqrt(beta[k]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (eig.info() != Eigen::Success) throw NumericalError("golub_welsch: eigen-solve failed");

    std::vector<std::pair<double, double>> pairs(n);
    for (int k = 0; k < n; ++k) {
        const double v0 = eig.eigenvectors()(0, k);
        pairs[k] = {eig.eigenvalues()(k), mass * v0 * v0};
    }
    std::sort(pairs.begin(), pairs.end());
    // The rule is symmetric in exact arithmetic; enforce it.
    for (int k = 0; k < n; ++k) {
        rule.nodes[k] = 0.5 * (pairs[k].first - pairs[n - 1 - k].first);
        rule.weights[k] = 0.5 * (pairs[k].second + pairs[n - 1 - k].second);
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

} // namespace detail

/// Gauss rule on [-1, 1] for the symmetric Jacobi weight (1 - x^2)^a, a > -1.
/// Nodes ascending. Exact for polynomials of degree 2n - 1.
inline Rule gauss_symmetric_jacobi(int n, double a) {
    if (n < 1) throw DomainError("gauss_symmetric_jacobi: n must be positive");
    if (!(a > -1.0)) throw DomainError("gauss_symmetric_jacobi: exponent must exceed -1");
    std::vector<double> beta(n - 1);
    for (int k = 1; k < n; ++k) beta[k - 1] = detail::symmetric_jacobi_beta(k, a);
    return detail::golub_welsch(beta, detail::symmetric_jacobi_mass(a));
}

/// Gauss-Lobatto rule for (1 - x^2)^a with both endpoints +-1 as nodes.
/// Exact for polynomials of degree 2n - 3.
inline Rule gauss_lobatto_symmetric_jacobi(int n, double a) {
    if (n < 3) throw DomainError("gauss_lobatto_symmetric_jacobi: n must be >= 3");
    if (!(a > -1.0)) throw DomainError("gauss_lobatto_symmetric_jacobi: exponent must exceed -1");
    std::vector<double> beta(n - 1);
    // Monic p_k(1) by the three-term recurrence; the last coefficient is
    // replaced so that the characteristic polynomial vanishes at +-1.
    double p_prev = 1.0;  // p_0(1)
    double p_cur = 1.0;   // p_1(1)
    for (int k = 1; k < n - 1; ++k) {
        beta[k - 1] = detail::symmetric_jacobi_beta(k, a);
        const double p_next = p_cur - beta[k - 1] * p_prev;
        p_prev = p_cur;
        p_cur = p_next;
    }
    beta[n - 2] = p_cur / p_prev;
    Rule rule = detail::golub_welsch(beta, detail::symmetric_jacobi_mass(a));
    rule.nodes.front() = -1.0;
    rule.nodes.back() = 1.0;
    return rule;
}

inline Rule gauss_legendre(int n) { return gauss_symmetric_jacobi(n, 0.0); }

/// Adaptive panel Gauss-Legendre integration of f over [a, b]. A panel is
/// accepted when the single-panel and two-half-panel estimates agree to
/// max(abs_tol, rel_tol * |estimate|).
template <class F>
class PanelIntegrator {
public:
    explicit PanelIntegrator(int order, double rel_tol = 1e-15, double abs_tol = 1e-300, int max_depth = 40)
        : rule_(gauss_legendre(order)), rel_tol_(rel_tol), abs_tol_(abs_tol), max_depth_(max_depth) {}

    double operator()(const F& f, double a, double b) const {
        if (a == b) return 0.0;
        const double whole = panel(f, a, b);
        return refine(f, a, b, whole, 0);
    }

private:
    double panel(const F& f, double a, double b) const {
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        double s = 0.0;
        for (std::size_t k = 0; k < rule_.nodes.size(); ++k) s += rule_.weights[k] * f(mid + half * rule_.nodes[k]);
        return half * s;
    }

    double refine(const F& f, double a, double b, double whole, int depth) const {
        const double mid = 0.5 * (a + b);
        const double left = panel(f, a, mid);
        const double right = panel(f, mid, b);
        const double split = left + right;
        if (depth >= max_depth_ || std::abs(split - whole) <= std::max(abs_tol_, rel_tol_ * std::abs(split)) * 8.0)
            return split;
        return refine(f, a, mid, left, depth + 1) + refine(f, mid, b, right, depth + 1);
    }

    Rule rule_;
    double rel_tol_;
    double abs_tol_;
    int max_depth_;
};

template <class F>
double integrate(const F& f, double a, double b, int order = 16, double rel_tol = 1e-15) {
    return PanelIntegrator<F>(order, rel_tol)(f, a, b);
}

} // namespace serrin::quad
