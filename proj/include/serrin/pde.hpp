#pragma once

#include "serrin/error.hpp"
#include "serrin/field.hpp"
#include "serrin/geometry.hpp"
#include "serrin/harmonics.hpp"
#include "serrin/torsion.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace serrin {

/// Conservative finite-volume form of -Laplace_{g_phi} on the reduced grid.
///
/// Unknowns are the nodes (k, i), k < n_alpha, i < n_t; row i = n_t (t = 1)
/// carries Dirichlet data and couples in through `boundary`. Each row is the
/// negated net outward flux of grad_g u through the cell around the node, so
///   interior * u + boundary * u(., 1) = volume .* (-Laplace u).
/// Cells: polar faces at node midpoints (axis nodes own half cells), t-faces
/// at midpoints, half cell at t = 0 where evenness gives zero flux.
/// Mixed g^{at} terms use centred cross stencils.
struct DiscreteOperator {
    int n_alpha = 0;
    int n_t = 0;
    std::vector<double> t;
    Eigen::SparseMatrix<double> interior;
    Eigen::SparseMatrix<double> boundary;
    std::vector<double> volume;

    int index(int k, int i) const { return i * n_alpha + k; }
};

inline DiscreteOperator assemble(const DomainShape& shape, int n_t) {
    const AxisGrid& grid = shape.grid();
    const int na = grid.size();
    const int dim = shape.dim();
    if (n_t < 4) throw DomainError("assemble: need at least 4 t-intervals");

    DiscreteOperator op;
    op.n_alpha = na;
    op.n_t = n_t;
    op.t = uniform_t(n_t);
    const double h = 1.0 / n_t;
    const int n_unknown = na * n_t;

    std::vector<Eigen::Triplet<double>> tin, tbd;
    tin.reserve(static_cast<std::size_t>(n_unknown) * 11);
    tbd.reserve(static_cast<std::size_t>(na) * 6);

    // Coefficient c on value u(k, i) in equation `row`, with even reflection
    // in t and across the polar axis.
    auto add = [&](int row, int k, int i, double c) {
        if (c == 0.0) return;
        if (i < 0) i = -i;
        if (k < 0) k = -k;
        if (k >= na) k = 2 * (na - 1) - k;
        if (i == n_t) tbd.emplace_back(row, k, c);
        else tin.emplace_back(row, op.index(k, i), c);
    };

    std::vector<AlphaStencil> dstencil(na);
    for (int k = 0; k < na; ++k) dstencil[k] = alpha_derivative_stencil(grid.alpha, k);
    auto add_alpha_derivative = [&](int row, int k, int i, double c) {
        const AlphaStencil& s = dstencil[k];
        add(row, k, i, c * s.self);
        if (k > 0) add(row, k - 1, i, c * s.minus);
        if (k < na - 1) add(row, k + 1, i, c * s.plus);
    };

    const std::vector<double>& cell_alpha = grid.cells;

    // Polar faces between nodes k and k+1; the axis faces carry no flux.
    for (int k = 0; k + 1 < na; ++k) {
        const double af = grid.faces[k + 1];
        const double phi = shape.phi_faces()[k + 1];
        const double dphi = shape.dphi_faces()[k + 1];
        const double s_face = std::pow(std::sin(af), dim - 2);
        const double dalpha = grid.alpha[k + 1] - grid.alpha[k];
        for (int i = 0; i < n_t; ++i) {
            const double t = op.t[i];
            const double dt = (i == 0) ? 0.5 * h : h;
            const MetricBlock m = metric_from(dim, af, t, phi, dphi);
            const double area = dt * s_face * phi * std::pow(std::cos(phi * t), dim - 1);
            const double ca = area * m.inv_aa / dalpha;
            const double ct = area * m.inv_at / (4.0 * h);
            const int left = op.index(k, i);
            const int right = op.index(k + 1, i);
            for (int side = 0; side < 2; ++side) {
                const int row = side == 0 ? left : right;
                const double sgn = side == 0 ? -1.0 : 1.0;  // -outflux for left, +flux for right
                add(row, k + 1, i, sgn * ca);
                add(row, k, i, -sgn * ca);
                if (ct != 0.0) {
                    add(row, k, i + 1, sgn * ct);
                    add(row, k, i - 1, -sgn * ct);
                    add(row, k + 1, i + 1, sgn * ct);
                    add(row, k + 1, i - 1, -sgn * ct);
                }
            }
        }
    }

    // t-faces between rows i and i+1 at polar node k.
    for (int k = 0; k < na; ++k) {
        const double ak = grid.alpha[k];
        const double phi = shape.phi_nodes()[k];
        const double dphi = shape.dphi_nodes()[k];
        for (int i = 0; i < n_t; ++i) {
            const double tf = (i + 0.5) * h;
            const MetricBlock m = metric_from(dim, ak, tf, phi, dphi);
            const double area = cell_alpha[k] * phi * std::pow(std::cos(phi * tf), dim - 1);
            const double ct = area * m.inv_tt / h;
            const double ca = 0.5 * area * m.inv_at;
            const int below = op.index(k, i);
            for (int side = 0; side < 2; ++side) {
                if (side == 1 && i + 1 == n_t) break;
                const int row = side == 0 ? below : op.index(k, i + 1);
                const double sgn = side == 0 ? -1.0 : 1.0;
                add(row, k, i + 1, sgn * ct);
                add(row, k, i, -sgn * ct);
                if (ca != 0.0) {
                    add_alpha_derivative(row, k, i, sgn * ca);
                    add_alpha_derivative(row, k, i + 1, sgn * ca);
                }
            }
        }
    }

    op.volume.resize(n_unknown);
    for (int i = 0; i < n_t; ++i) {
        const double dt = (i == 0) ? 0.5 * h : h;
        for (int k = 0; k < na; ++k) {
            const double phi = shape.phi_nodes()[k];
            op.volume[op.index(k, i)] = cell_alpha[k] * phi * std::pow(std::cos(phi * op.t[i]), dim - 1) * dt;
        }
    }

    op.interior.resize(n_unknown, n_unknown);
    op.interior.setFromTriplets(tin.begin(), tin.end());
    op.boundary.resize(n_unknown, na);
    op.boundary.setFromTriplets(tbd.begin(), tbd.end());
    return op;
}

namespace detail {

inline Eigen::VectorXd sparse_solve(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& rhs, int n_alpha, int n_t) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success)
        throw NumericalError("sparse factorization failed on " + std::to_string(n_alpha) + "x" + std::to_string(n_t) +
                             " grid: " + lu.lastErrorMessage());
    Eigen::VectorXd x = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !x.allFinite())
        throw NumericalError("sparse solve failed on " + std::to_string(n_alpha) + "x" + std::to_string(n_t) + " grid");
    return x;
}

inline double one_sided_slope(double u_top, double u_1, double u_2, double h) {
    return (3.0 * u_top - 4.0 * u_1 + u_2) / (2.0 * h);
}

} // namespace detail

/// -Laplace_{g_phi} u = 1 in Omega, u = 0 at t = 1, even in t.
inline Field2D solve_torsion(const DomainShape& shape, int n_t) {
    if (shape.grid().size() < 16 || n_t < 16) throw DomainError("solve_torsion: grid sizes must be >= 16");
    const DiscreteOperator op = assemble(shape, n_t);
    const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(op.volume.data(), static_cast<Eigen::Index>(op.volume.size()));
    const Eigen::VectorXd x = detail::sparse_solve(op.interior, rhs, op.n_alpha, n_t);
    Field2D u(shape.grid().alpha, op.t);
    for (int i = 0; i < n_t; ++i)
        for (int k = 0; k < op.n_alpha; ++k) u.at(k, i) = x(op.index(k, i));
    return u;
}

/// Discrete H(phi): conormal derivative of the torsion solution at t = 1.
inline std::vector<double> evaluate_H(const DomainShape& shape, int n_t) {
    return neumann_trace(shape, solve_torsion(shape, n_t));
}

/// Straight-band torsion solution on the t-grid alone. For constant phi the
/// full 2-D system decouples in alpha and reduces to exactly this tridiagonal
/// system, so the returned profile and slope equal the 2-D ones to rounding.
struct BandProfile {
    std::vector<double> t;
    std::vector<double> u;
    /// Discrete H(lambda) = u_t(1) / lambda.
    double neumann = 0.0;
};

inline BandProfile solve_band(int dim, double lambda, int n_t) {
    if (!(lambda > 0.0 && lambda < std::numbers::pi / 2)) throw DomainError("solve_band: lambda must lie in (0, pi/2)");
    if (n_t < 4) throw DomainError("solve_band: need at least 4 t-intervals");
    const double h = 1.0 / n_t;
    BandProfile b;
    b.t = uniform_t(n_t);
    const int n = n_t;
    std::vector<double> lo(n, 0.0), di(n, 0.0), up(n, 0.0), rhs(n, 0.0);
    auto face = [&](int i) {  // J g^{tt} / h at t_{i+1/2}
        const double tf = (i + 0.5) * h;
        return lambda * std::pow(std::cos(lambda * tf), dim - 1) / (lambda * lambda) / h;
    };
    for (int i = 0; i < n; ++i) {
        const double dt = (i == 0) ? 0.5 * h : h;
        const double fu = face(i);
        di[i] += fu;
        up[i] -= fu;
        if (i > 0) {
            const double fd = face(i - 1);
            di[i] += fd;
            lo[i] -= fd;
        }
        rhs[i] = lambda * std::pow(std::cos(lambda * b.t[i]), dim - 1) * dt;
    }
    up[n - 1] = 0.0;  // u(1) = 0
    for (int i = 1; i < n; ++i) {
        const double w = lo[i] / di[i - 1];
        di[i] -= w * up[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    b.u.assign(n + 1, 0.0);
    b.u[n - 1] = rhs[n - 1] / di[n - 1];
    for (int i = n - 2; i >= 0; --i) b.u[i] = (rhs[i] - up[i] * b.u[i + 1]) / di[i];
    b.neumann = detail::one_sided_slope(0.0, b.u[n - 1], b.u[n - 2], h) / lambda;
    return b;
}

struct LinearizedResult {
    Field2D psi;
    std::vector<double> l_omega;
};

/// Harmonic lift psi of omega for Laplace_{g_lambda} (psi = omega at t = 1,
/// even in t) and L_lambda omega = -u~'(l)/l d_t psi(., 1) + u~''(l) omega.
inline LinearizedResult solve_linearized(int dim, std::span<const double> omega, double lambda, const AxisGrid& grid, int n_t) {
    if (static_cast<int>(omega.size()) != grid.size()) throw DomainError("solve_linearized: omega sample count mismatch");
    const DomainShape band = DomainShape::constant(dim, lambda, grid);
    const DiscreteOperator op = assemble(band, n_t);
    const Eigen::Map<const Eigen::VectorXd> w(omega.data(), static_cast<Eigen::Index>(omega.size()));
    const Eigen::VectorXd rhs = -(op.boundary * w);
    const Eigen::VectorXd x = detail::sparse_solve(op.interior, rhs, op.n_alpha, n_t);

    LinearizedResult r;
    r.psi = Field2D(grid.alpha, op.t);
    for (int i = 0; i < n_t; ++i)
        for (int k = 0; k < op.n_alpha; ++k) r.psi.at(k, i) = x(op.index(k, i));
    for (int k = 0; k < op.n_alpha; ++k) r.psi.at(k, n_t) = omega[k];

    const TorsionProfile torsion(dim);
    const double up = torsion.u_prime(lambda);
    const double upp = torsion.u_second(lambda);
    const double h = 1.0 / n_t;
    r.l_omega.resize(op.n_alpha);
    for (int k = 0; k < op.n_alpha; ++k) {
        const double dt = detail::one_sided_slope(omega[k], r.psi.at(k, n_t - 1), r.psi.at(k, n_t - 2), h);
        r.l_omega[k] = -up / lambda * dt + upp * omega[k];
    }
    return r;
}

/// Polar part of the finite-volume operator: the discrete Laplace on S^{N-1}
/// acting on axisymmetric samples (what the 2-D stencil applies at t = 0, phi = const).
inline std::vector<double> axis_laplacian(const AxisGrid& grid, std::span<const double> f) {
    const int na = grid.size();
    std::vector<double> out(na, 0.0);
    for (int k = 0; k + 1 < na; ++k) {
        const double flux = std::pow(std::sin(grid.faces[k + 1]), grid.dim - 2) * (f[k + 1] - f[k]) /
                            (grid.alpha[k + 1] - grid.alpha[k]);
        out[k] += flux;
        out[k + 1] -= flux;
    }
    for (int k = 0; k < na; ++k) out[k] /= grid.cells[k];
    return out;
}

} // namespace serrin
