#pragma once

#include "serrin/error.hpp"
#include "serrin/field.hpp"
#include "serrin/harmonics.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

namespace serrin {

/// Axisymmetric domain D_phi = { (cos th) sigma, sin th) : |th| < phi(sigma) }
/// with phi(alpha) = lambda + sum_l coeffs[l] Y_l(alpha). phi and phi' are
/// cached at the polar nodes and cell faces of `grid`; phi' comes from the
/// differentiated harmonic recurrence.
class DomainShape {
public:
    DomainShape(int dim, double lambda, std::vector<double> coeffs, AxisGrid grid)
        : dim_(dim), lambda_(lambda), coeffs_(std::move(coeffs)), grid_(std::move(grid)) {
        if (grid_.dim != dim) throw DomainError("DomainShape: grid dimension mismatch");
        if (!coeffs_.empty()) basis_ = std::make_shared<const HarmonicBasis>(dim, static_cast<int>(coeffs_.size()) - 1);
        const int n = grid_.size();
        phi_nodes_.resize(n);
        dphi_nodes_.resize(n);
        phi_faces_.resize(n + 1);
        dphi_faces_.resize(n + 1);
        for (int k = 0; k < n; ++k) eval(grid_.alpha[k], phi_nodes_[k], dphi_nodes_[k]);
        for (int k = 0; k <= n; ++k) eval(grid_.faces[k], phi_faces_[k], dphi_faces_[k]);
        // phi'(0) = phi'(pi) = 0 holds exactly: dY/dalpha carries a sin(alpha) factor.
        dphi_faces_[0] = dphi_faces_[n] = 0.0;
        dphi_nodes_[0] = dphi_nodes_[n - 1] = 0.0;
        for (int k = 0; k < n; ++k) check_admissible(phi_nodes_[k], grid_.alpha[k]);
        for (int k = 0; k <= n; ++k) check_admissible(phi_faces_[k], grid_.faces[k]);
    }

    static DomainShape constant(int dim, double lambda, AxisGrid grid) { return DomainShape(dim, lambda, {}, std::move(grid)); }

    int dim() const { return dim_; }
    double lambda() const { return lambda_; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    const AxisGrid& grid() const { return grid_; }
    bool is_constant() const {
        for (double c : coeffs_)
            if (c != 0.0) return false;
        return true;
    }

    double phi(double alpha) const {
        double p, dp;
        eval(alpha, p, dp);
        return p;
    }
    double dphi(double alpha) const {
        double p, dp;
        eval(alpha, p, dp);
        return dp;
    }

    const std::vector<double>& phi_nodes() const { return phi_nodes_; }
    const std::vector<double>& dphi_nodes() const { return dphi_nodes_; }
    const std::vector<double>& phi_faces() const { return phi_faces_; }
    const std::vector<double>& dphi_faces() const { return dphi_faces_; }

private:
    void eval(double alpha, double& p, double& dp) const {
        p = lambda_;
        dp = 0.0;
        if (!basis_) return;
        const int m = basis_->max_degree();
        std::vector<double> y(m + 1), dy(m + 1), d2y(m + 1);
        basis_->values_and_derivatives(alpha, y, dy, d2y);
        for (int l = 0; l <= m; ++l) {
            p += coeffs_[l] * y[l];
            dp += coeffs_[l] * dy[l];
        }
    }

    static void check_admissible(double phi, double alpha) {
        if (!(phi > 0.0 && phi < std::numbers::pi / 2))
            throw AdmissibilityError("shape leaves 0 < phi < pi/2: phi(" + std::to_string(alpha) + ") = " + std::to_string(phi));
    }

    int dim_;
    double lambda_;
    std::vector<double> coeffs_;
    AxisGrid grid_;
    std::shared_ptr<const HarmonicBasis> basis_;
    std::vector<double> phi_nodes_, dphi_nodes_, phi_faces_, dphi_faces_;
};

/// Pull-back of cos^2(th) g_{S^{N-1}} + dth^2 under (alpha, t) -> (alpha, phi(alpha) t),
/// restricted to the (alpha, t) block; the S^{N-2} factor only enters `vol`.
struct MetricBlock {
    double g_aa = 0.0, g_at = 0.0, g_tt = 0.0;
    double det = 0.0;
    double inv_aa = 0.0, inv_at = 0.0, inv_tt = 0.0;
    /// phi cos^{N-1}(phi t) sin^{N-2}(alpha)
    double vol = 0.0;
};

inline MetricBlock metric_from(int dim, double alpha, double t, double phi, double dphi) {
    const double c = std::cos(phi * t);
    const double c2 = c * c;
    const double a = dphi * t;
    MetricBlock m;
    m.g_aa = c2 + a * a;
    m.g_at = a * phi;
    m.g_tt = phi * phi;
    m.det = phi * phi * c2;
    m.inv_aa = m.g_tt / m.det;
    m.inv_at = -m.g_at / m.det;
    m.inv_tt = m.g_aa / m.det;
    m.vol = phi * std::pow(c, dim - 1) * std::pow(std::sin(alpha), dim - 2);
    return m;
}

inline MetricBlock metric_block(const DomainShape& shape, double alpha, double t) {
    if (!(std::abs(t) <= 1.0)) throw DomainError("metric_block: |t| must be <= 1");
    return metric_from(shape.dim(), alpha, t, shape.phi(alpha), shape.dphi(alpha));
}

/// Outer conormal derivative at t = 1:
///   d_nu u = [ (cos^2 phi + phi'^2) u_t - phi phi' u_alpha ] / ( phi cos(phi) sqrt(cos^2 phi + phi'^2) ),
/// i.e. (g^{ta} u_a + g^{tt} u_t) / sqrt(g^{tt}). u_t is one-sided second order,
/// u_alpha the three-point polar derivative along the boundary row.
inline double conormal_derivative(double phi, double dphi, double u_t, double u_alpha) {
    const double c = std::cos(phi);
    const double q = c * c + dphi * dphi;
    return (q * u_t - phi * dphi * u_alpha) / (phi * c * std::sqrt(q));
}

inline std::vector<double> neumann_trace(const DomainShape& shape, const Field2D& u) {
    const int n = u.n_alpha();
    const int nt = u.n_t();
    if (n != shape.grid().size()) throw DomainError("neumann_trace: field and shape grids differ");
    if (nt < 2) throw DomainError("neumann_trace: need at least two t-intervals");
    const double h = u.t[nt] - u.t[nt - 1];
    const auto top = u.row(nt);
    std::vector<double> out(n);
    for (int k = 0; k < n; ++k) {
        const double ut = (3.0 * u.at(k, nt) - 4.0 * u.at(k, nt - 1) + u.at(k, nt - 2)) / (2.0 * h);
        const double ua = alpha_derivative(u.alpha, top, k);
        out[k] = conormal_derivative(shape.phi_nodes()[k], shape.dphi_nodes()[k], ut, ua);
    }
    return out;
}

/// Point Upsilon(sigma(alpha), phi(alpha) t) = ((cos th) sigma, sin th) in R^{N+1}
/// with sigma(alpha) = (cos alpha, sin alpha, 0, ..., 0).
inline std::vector<double> embed(const DomainShape& shape, double alpha, double t) {
    const double th = shape.phi(alpha) * t;
    std::vector<double> p(shape.dim() + 1, 0.0);
    p[0] = std::cos(th) * std::cos(alpha);
    p[1] = std::cos(th) * std::sin(alpha);
    p[shape.dim()] = std::sin(th);
    return p;
}

/// {dim, lambda, coeffs[], alpha[], phi[]}
inline nlohmann::ordered_json to_json(const DomainShape& shape) {
    nlohmann::ordered_json j;
    j["dim"] = shape.dim();
    j["lambda"] = shape.lambda();
    j["coeffs"] = shape.coeffs();
    j["alpha"] = shape.grid().alpha;
    j["phi"] = shape.phi_nodes();
    return j;
}

} // namespace serrin
