#pragma once

#include "serrin/error.hpp"
#include "serrin/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace serrin {

/// Surface measure of the unit d-sphere S^d in R^{d+1}.
inline double sphere_area(int d) {
    const double h = 0.5 * (d + 1);
    return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

/// Eigenvalue of -Laplace on S^{N-1} for harmonics of degree j.
inline double harmonic_gamma(int dim, int degree) { return double(degree) * double(dim - 2 + degree); }

/// Polar quadrature for axially symmetric functions on S^{N-1}:
///   int_{S^{N-1}} f dsigma = |S^{N-2}| int_0^pi f(alpha) sin^{N-2}(alpha) dalpha
///                          ~ sum_k weights[k] f(alpha[k]).
/// Nodes are Gauss-Lobatto-Jacobi points in x = cos(alpha), so alpha[0] = 0
/// and alpha[n-1] = pi sit on the axis; the rule is exact for polynomials in
/// cos(alpha) of degree 2n - 3. For the finite-volume discretization each node
/// owns the cell between the neighbouring node midpoints; `cells` holds the
/// exact sin^{N-2} measure of those cells.
struct AxisGrid {
    int dim = 0;
    std::vector<double> alpha;
    std::vector<double> weights;
    std::vector<double> faces;
    std::vector<double> cells;

    int size() const { return static_cast<int>(alpha.size()); }
};

namespace detail {

// int_0^a sin^p
inline double sin_power_integral(int p, double a) {
    if (p == 0) return a;
    if (p == 1) return 1.0 - std::cos(a);
    return -std::pow(std::sin(a), p - 1) * std::cos(a) / p + double(p - 1) / p * sin_power_integral(p - 2, a);
}

} // namespace detail

inline AxisGrid make_grid(int dim, int n_alpha) {
    if (dim < 2) throw DomainError("make_grid: dimension must be >= 2");
    if (n_alpha < 8) throw DomainError("make_grid: need at least 8 polar nodes, got " + std::to_string(n_alpha));

    const int p = dim - 2;
    const double scale = sphere_area(dim - 2);
    const quad::Rule rule = quad::gauss_lobatto_symmetric_jacobi(n_alpha, 0.5 * (dim - 3));

    AxisGrid g;
    g.dim = dim;
    g.alpha.resize(n_alpha);
    g.weights.resize(n_alpha);
    // Ascending alpha means descending x = cos(alpha).
    for (int k = 0; k < n_alpha; ++k) {
        const int src = n_alpha - 1 - k;
        g.alpha[k] = std::acos(rule.nodes[src]);
        g.weights[k] = scale * rule.weights[src];
    }
    g.alpha.front() = 0.0;
    g.alpha.back() = std::numbers::pi;

    g.faces.assign(n_alpha + 1, 0.0);
    g.faces[n_alpha] = std::numbers::pi;
    for (int k = 1; k < n_alpha; ++k) g.faces[k] = 0.5 * (g.alpha[k - 1] + g.alpha[k]);
    g.cells.resize(n_alpha);
    for (int k = 0; k < n_alpha; ++k) {
        // Integrate from the nearer pole to keep the small cells accurate.
        const double lo = g.faces[k], hi = g.faces[k + 1];
        if (hi <= 0.5 * std::numbers::pi)
            g.cells[k] = detail::sin_power_integral(p, hi) - detail::sin_power_integral(p, lo);
        else
            g.cells[k] = detail::sin_power_integral(p, std::numbers::pi - lo) - detail::sin_power_integral(p, std::numbers::pi - hi);
    }
    return g;
}

/// L^2(S^{N-1})-normalized axially symmetric spherical harmonics Y_0..Y_M,
/// evaluated through the three-term recurrence of the dimension-N Legendre
/// (Gegenbauer) polynomials P_j with P_j(1) = 1, so Y_j(alpha = 0) > 0.
class HarmonicBasis {
public:
    HarmonicBasis(int dim, int max_degree) : dim_(dim), max_degree_(max_degree) {
        if (dim < 2) throw DomainError("HarmonicBasis: dimension must be >= 2");
        if (max_degree < 0) throw DomainError("HarmonicBasis: negative max degree");
        // Exact for products of degree <= 2M.
        const AxisGrid g = make_grid(dim, max_degree + 8);
        std::vector<double> acc(max_degree + 1, 0.0);
        std::vector<double> p(max_degree + 1);
        for (int k = 0; k < g.size(); ++k) {
            legendre(std::cos(g.alpha[k]), p);
            for (int j = 0; j <= max_degree; ++j) acc[j] += g.weights[k] * p[j] * p[j];
        }
        inv_norm_.resize(max_degree + 1);
        for (int j = 0; j <= max_degree; ++j) inv_norm_[j] = 1.0 / std::sqrt(acc[j]);
    }

    int dim() const { return dim_; }
    int max_degree() const { return max_degree_; }
    double norm_constant(int j) const { return 1.0 / inv_norm_.at(j); }

    double y_eval(int j, double alpha) const {
        check_degree(j);
        std::vector<double> p(j + 1);
        legendre(std::cos(alpha), p);
        return p[j] * inv_norm_[j];
    }

    /// Y_0..Y_M at alpha.
    void values(double alpha, std::span<double> out) const {
        std::vector<double> p(max_degree_ + 1);
        legendre(std::cos(alpha), p);
        for (int j = 0; j <= max_degree_; ++j) out[j] = p[j] * inv_norm_[j];
    }

    /// Y, dY/dalpha and d^2Y/dalpha^2 for all degrees at alpha.
    void values_and_derivatives(double alpha, std::span<double> y, std::span<double> dy, std::span<double> d2y) const {
        const int m = max_degree_;
        const double x = std::cos(alpha);
        const double s = std::sin(alpha);
        std::vector<double> p(m + 1), dp(m + 1), ddp(m + 1);
        p[0] = 1.0; dp[0] = 0.0; ddp[0] = 0.0;
        if (m >= 1) { p[1] = x; dp[1] = 1.0; ddp[1] = 0.0; }
        for (int j = 1; j < m; ++j) {
            const double a = 2.0 * j + dim_ - 2;
            const double den = j + dim_ - 2;
            p[j + 1] = (a * x * p[j] - j * p[j - 1]) / den;
            dp[j + 1] = (a * (p[j] + x * dp[j]) - j * dp[j - 1]) / den;
            ddp[j + 1] = (a * (2.0 * dp[j] + x * ddp[j]) - j * ddp[j - 1]) / den;
        }
        for (int j = 0; j <= m; ++j) {
            y[j] = p[j] * inv_norm_[j];
            dy[j] = -s * dp[j] * inv_norm_[j];
            d2y[j] = (s * s * ddp[j] - x * dp[j]) * inv_norm_[j];
        }
    }

    /// Samples of Y_j on the grid nodes.
    std::vector<double> sample(const AxisGrid& grid, int j) const {
        std::vector<double> out(grid.size());
        for (int k = 0; k < grid.size(); ++k) out[k] = y_eval(j, grid.alpha[k]);
        return out;
    }

    /// sum_l coeffs[l] Y_l on the grid nodes.
    std::vector<double> synthesize(const AxisGrid& grid, std::span<const double> coeffs) const {
        if (static_cast<int>(coeffs.size()) > max_degree_ + 1) throw DomainError("synthesize: too many coefficients");
        std::vector<double> out(grid.size(), 0.0), y(max_degree_ + 1);
        for (int k = 0; k < grid.size(); ++k) {
            values(grid.alpha[k], y);
            for (std::size_t l = 0; l < coeffs.size(); ++l) out[k] += coeffs[l] * y[l];
        }
        return out;
    }

private:
    void legendre(double x, std::vector<double>& p) const {
        const int m = static_cast<int>(p.size()) - 1;
        p[0] = 1.0;
        if (m >= 1) p[1] = x;
        for (int j = 1; j < m; ++j)
            p[j + 1] = ((2.0 * j + dim_ - 2) * x * p[j] - j * p[j - 1]) / (j + dim_ - 2);
    }

    void check_degree(int j) const {
        if (j < 0 || j > max_degree_)
            throw DomainError("harmonic degree " + std::to_string(j) + " outside [0, " + std::to_string(max_degree_) + "]");
    }

    int dim_;
    int max_degree_;
    std::vector<double> inv_norm_;
};

/// <f, Y_l>_{L^2(S^{N-1})} by grid quadrature.
inline double project(const AxisGrid& grid, const HarmonicBasis& basis, std::span<const double> samples, int l) {
    if (l < 0 || l > basis.max_degree()) throw DomainError("project: degree out of range");
    if (grid.size() < 2 * basis.max_degree() + 2)
        throw ResolutionError("project: grid with " + std::to_string(grid.size()) + " nodes does not resolve degree " +
                              std::to_string(basis.max_degree()));
    if (static_cast<int>(samples.size()) != grid.size()) throw DomainError("project: sample count mismatch");
    if (grid.dim != basis.dim()) throw DomainError("project: dimension mismatch");
    double acc = 0.0;
    for (int k = 0; k < grid.size(); ++k) acc += grid.weights[k] * samples[k] * basis.y_eval(l, grid.alpha[k]);
    return acc;
}

/// All projections onto Y_0..Y_M.
inline std::vector<double> project_all(const AxisGrid& grid, const HarmonicBasis& basis, std::span<const double> samples) {
    const int m = basis.max_degree();
    if (grid.size() < 2 * m + 2) throw ResolutionError("project_all: grid does not resolve max degree");
    if (static_cast<int>(samples.size()) != grid.size()) throw DomainError("project_all: sample count mismatch");
    std::vector<double> out(m + 1, 0.0), y(m + 1);
    for (int k = 0; k < grid.size(); ++k) {
        basis.values(grid.alpha[k], y);
        for (int l = 0; l <= m; ++l) out[l] += grid.weights[k] * samples[k] * y[l];
    }
    return out;
}

} // namespace serrin
