#pragma once

#include "serrin/error.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <span>
#include <vector>

namespace serrin {

/// Axisymmetric scalar field on the (alpha, t) tensor grid of the reduced
/// domain S^{N-1} x [0, 1]; the t < 0 half follows by even reflection.
/// Row i holds t = t[i]; the last row is the boundary t = 1.
struct Field2D {
    std::vector<double> alpha;
    std::vector<double> t;
    std::vector<double> values;

    Field2D() = default;
    Field2D(std::vector<double> alpha_nodes, std::vector<double> t_nodes)
        : alpha(std::move(alpha_nodes)), t(std::move(t_nodes)), values(alpha.size() * t.size(), 0.0) {}

    int n_alpha() const { return static_cast<int>(alpha.size()); }
    /// Number of t-intervals.
    int n_t() const { return static_cast<int>(t.size()) - 1; }

    double& at(int k, int i) { return values[static_cast<std::size_t>(i) * alpha.size() + k]; }
    double at(int k, int i) const { return values[static_cast<std::size_t>(i) * alpha.size() + k]; }

    std::span<const double> row(int i) const { return {values.data() + static_cast<std::size_t>(i) * alpha.size(), alpha.size()}; }

    /// CSV with columns alpha,t,value; 17 significant digits, LF endings.
    void write_csv(std::ostream& os) const {
        os << "alpha,t,value\n";
        char buf[96];
        for (int i = 0; i <= n_t(); ++i)
            for (int k = 0; k < n_alpha(); ++k) {
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", alpha[k], t[i], at(k, i));
                os << buf;
            }
    }
};

/// Uniform t-nodes i / n_t, i = 0..n_t.
inline std::vector<double> uniform_t(int n_t) {
    std::vector<double> t(n_t + 1);
    for (int i = 0; i <= n_t; ++i) t[i] = double(i) / n_t;
    return t;
}

/// Weights (c_minus, c_self, c_plus) of the three-point first derivative at
/// node k of an ascending polar grid on [0, pi]. Nodes on the axis get the
/// zero stencil: with the even reflection ghost the centred difference vanishes.
struct AlphaStencil {
    double minus = 0.0;
    double self = 0.0;
    double plus = 0.0;
};

inline AlphaStencil alpha_derivative_stencil(std::span<const double> alpha, int k) {
    const int n = static_cast<int>(alpha.size());
    AlphaStencil s;
    if (k == 0 || k == n - 1) return s;
    const double hm = alpha[k] - alpha[k - 1];
    const double hp = alpha[k + 1] - alpha[k];
    s.minus = -hp / (hm * (hm + hp));
    s.self = (hp - hm) / (hm * hp);
    s.plus = hm / (hp * (hm + hp));
    return s;
}

inline double alpha_derivative(std::span<const double> alpha, std::span<const double> values, int k) {
    const int n = static_cast<int>(alpha.size());
    const AlphaStencil s = alpha_derivative_stencil(alpha, k);
    double d = s.self * values[k];
    if (k > 0) d += s.minus * values[k - 1];
    if (k < n - 1) d += s.plus * values[k + 1];
    return d;
}

} // namespace serrin
