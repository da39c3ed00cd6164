#pragma once

#include "serrin/bifurcation.hpp"
#include "serrin/error.hpp"
#include "serrin/geometry.hpp"
#include "serrin/harmonics.hpp"
#include "serrin/parallel.hpp"
#include "serrin/pde.hpp"
#include "serrin/spectrum.hpp"
#include "serrin/torsion.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace serrin {

/// What G(lambda, phi) = H(lambda + phi) - ref(lambda) subtracts.
///   band:    the discrete H of the straight band on the same grid, so
///            G(lambda, 0) = 0 to rounding and the trivial branch is exact.
///   profile: the continuum value u~'(lambda); G(lambda, 0) then equals the
///            grid's consistency error.
enum class ResidualReference { band, profile };

struct BranchGrids {
    int n_alpha = 128;
    int n_t = 128;
};

struct BranchOptions {
    BranchGrids grids;
    /// Truncation degree; negative selects 2j + 8.
    int max_degree = -1;
    ResidualReference reference = ResidualReference::band;
    double fd_step = 1e-6;
    int max_halvings = 8;
    int max_newton = 12;
    /// Absolute floor of the acceptance tolerance; see BranchProblem::tol().
    double min_tol = 1e-6;
};

struct ResidualResult {
    /// <G, Y_l> for l = 0..M.
    std::vector<double> projections;
    /// G at the polar nodes.
    std::vector<double> nodal;
    double sup = 0.0;
    /// max_l |<G, Y_l>|, the part Newton can drive to zero.
    double projected_sup = 0.0;
};

/// Unknowns at fixed amplitude s: lambda and the coefficients w_l, l != j,
/// of the correction; phi = s (Y_j + sum_{l != j} w_l Y_l).
struct BranchState {
    double lambda = 0.0;
    std::vector<double> w;  // length M + 1, w[j] == 0
};

struct BranchPoint {
    double s = 0.0;
    double lambda = 0.0;
    /// Coefficients of w_s over degrees l = 0..M, l != j (ascending l).
    std::vector<double> w_coeffs;
    double residual_sup = 0.0;
    int newton_iters = 0;
};

struct Branch {
    int dim = 0;
    int degree = 0;
    int max_degree = 0;
    BranchGrids grids;
    ResidualReference reference = ResidualReference::band;
    double lambda_j = 0.0;
    double tol = 0.0;
    /// sup |H_h(lambda_j) - u~'(lambda_j)| on the straight band.
    double consistency_floor = 0.0;
    /// "complete" or "stopped_at_s=<s>" (first failed amplitude per side).
    std::string status = "complete";
    std::vector<BranchPoint> points;
};

class BranchProblem {
public:
    BranchProblem(int dim, int degree, BranchOptions options = {})
        : dim_(dim), degree_(degree), opt_(options),
          m_(options.max_degree < 0 ? 2 * degree + 8 : options.max_degree),
          grid_(make_grid(dim, options.grids.n_alpha)), basis_(dim, m_), torsion_(dim) {
        if (degree < 2) throw DomainError("branch: degree must be >= 2, got " + std::to_string(degree));
        if (m_ < degree) throw DomainError("branch: truncation degree below the bifurcating mode");
        if (grid_.size() < 2 * m_ + 2)
            throw ResolutionError("branch: n_alpha = " + std::to_string(grid_.size()) + " does not resolve M = " + std::to_string(m_));
        if (opt_.grids.n_t < 16) throw DomainError("branch: n_t must be >= 16");
        if (!(opt_.fd_step > 0.0)) throw DomainError("branch: finite-difference step must be positive");
        lambda_j_ = lambda_star(SpectralCurve(dim, degree)).lambda_star;
        consistency_floor_ = std::abs(solve_band(dim, lambda_j_, opt_.grids.n_t).neumann - torsion_.u_prime(lambda_j_));
        const double trivial = opt_.reference == ResidualReference::band ? 0.0 : consistency_floor_;
        tol_ = std::max(opt_.min_tol, 10.0 * trivial);
    }

    int dim() const { return dim_; }
    int degree() const { return degree_; }
    int max_degree() const { return m_; }
    const AxisGrid& grid() const { return grid_; }
    const HarmonicBasis& basis() const { return basis_; }
    const BranchOptions& options() const { return opt_; }
    double lambda_j() const { return lambda_j_; }
    double tol() const { return tol_; }
    double consistency_floor() const { return consistency_floor_; }

    double reference(double lambda) const {
        if (opt_.reference == ResidualReference::profile) return torsion_.u_prime(lambda);
        return solve_band(dim_, lambda, opt_.grids.n_t).neumann;
    }

    /// phi - lambda coefficients over Y_0..Y_M.
    std::vector<double> phi_coeffs(double s, const std::vector<double>& w) const {
        std::vector<double> c(m_ + 1);
        for (int l = 0; l <= m_; ++l) c[l] = (l == degree_) ? s : s * w[l];
        return c;
    }

    ResidualResult residual(double lambda, const std::vector<double>& coeffs) const {
        if (static_cast<int>(coeffs.size()) != m_ + 1) throw DomainError("residual: expected M + 1 coefficients");
        if (!(lambda > 0.0 && lambda < std::numbers::pi / 2)) throw AdmissibilityError("residual: lambda outside (0, pi/2)");
        const DomainShape shape(dim_, lambda, coeffs, grid_);
        ResidualResult r;
        r.nodal = evaluate_H(shape, opt_.grids.n_t);
        const double ref = reference(lambda);
        for (double& g : r.nodal) {
            g -= ref;
            r.sup = std::max(r.sup, std::abs(g));
        }
        r.projections = project_all(grid_, basis_, r.nodal);
        for (double c : r.projections) r.projected_sup = std::max(r.projected_sup, std::abs(c));
        return r;
    }

    ResidualResult residual(double s, const BranchState& x) const { return residual(x.lambda, phi_coeffs(s, x.w)); }

    /// Newton unknown vector [lambda, w_l (l != j)].
    Eigen::VectorXd pack(const BranchState& x) const {
        Eigen::VectorXd v(m_ + 1);
        v(0) = x.lambda;
        int p = 1;
        for (int l = 0; l <= m_; ++l)
            if (l != degree_) v(p++) = x.w[l];
        return v;
    }

    BranchState unpack(const Eigen::VectorXd& v) const {
        BranchState x;
        x.lambda = v(0);
        x.w.assign(m_ + 1, 0.0);
        int p = 1;
        for (int l = 0; l <= m_; ++l)
            if (l != degree_) x.w[l] = v(p++);
        return x;
    }

private:
    int dim_;
    int degree_;
    BranchOptions opt_;
    int m_;
    AxisGrid grid_;
    HarmonicBasis basis_;
    TorsionProfile torsion_;
    double lambda_j_ = 0.0;
    double consistency_floor_ = 0.0;
    double tol_ = 0.0;
};

struct NewtonOutcome {
    BranchState state;
    ResidualResult residual;
};

namespace detail {

// Scaled system F = P_M G / s, which tends to the linearization as s -> 0.
inline Eigen::VectorXd scaled(const ResidualResult& r, double s) {
    Eigen::VectorXd f(static_cast<Eigen::Index>(r.projections.size()));
    for (std::size_t l = 0; l < r.projections.size(); ++l) f(static_cast<Eigen::Index>(l)) = r.projections[l] / s;
    return f;
}

} // namespace detail

/// One damped Newton update at fixed s != 0. `current` must be the residual
/// of `state`. The Jacobian is assembled column by column from forward
/// differences; the step is halved until ||F|| does not increase.
inline NewtonOutcome newton_step(const BranchProblem& problem, double s, const BranchState& state, const ResidualResult& current) {
    if (s == 0.0) throw PreconditionError("newton_step: amplitude must be nonzero");
    const Eigen::VectorXd f0 = detail::scaled(current, s);
    if (!f0.allFinite()) throw NumericalError("newton_step: residual is not finite");
    const Eigen::VectorXd x0 = problem.pack(state);
    const int n = static_cast<int>(x0.size());
    const double step = problem.options().fd_step;

    Eigen::MatrixXd jac(n, n);
    parallel_for(n, [&](int col) {
        Eigen::VectorXd x = x0;
        x(col) += step;
        const ResidualResult r = problem.residual(s, problem.unpack(x));
        jac.col(col) = (detail::scaled(r, s) - f0) / step;
    });

    const Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
    if (lu.rank() < n || lu.rcond() < 1e-13)
        throw NumericalError("newton_step: Jacobian singular at s = " + std::to_string(s) + " (rcond " + std::to_string(lu.rcond()) + ")");
    const Eigen::VectorXd dx = lu.solve(-f0);

    const double norm0 = f0.norm();
    double damping = 1.0;
    for (int halving = 0; halving <= problem.options().max_halvings; ++halving, damping *= 0.5) {
        const BranchState trial = problem.unpack(x0 + damping * dx);
        try {
            ResidualResult r = problem.residual(s, trial);
            if (detail::scaled(r, s).norm() <= norm0) return {trial, std::move(r)};
        } catch (const AdmissibilityError&) {
        }
    }
    throw NumericalError("newton_step: no decrease after " + std::to_string(problem.options().max_halvings) + " halvings at s = " +
                         std::to_string(s));
}

/// Newton iteration at fixed s from `guess`. Iterates until the projected
/// residual is below 1e-2 * tol and accepts when the node-wise residual,
/// which also carries the unresolved degrees above M, is within tol.
inline BranchPoint solve_at(const BranchProblem& problem, double s, const BranchState& guess, BranchState* solved = nullptr) {
    BranchState x = guess;
    ResidualResult r = problem.residual(s, x);
    int iters = 0;
    while (r.projected_sup > 1e-2 * problem.tol() && iters < problem.options().max_newton) {
        try {
            NewtonOutcome out = newton_step(problem, s, x, r);
            x = std::move(out.state);
            r = std::move(out.residual);
            ++iters;
        } catch (const NumericalError&) {
            if (r.sup <= problem.tol()) break;  // stalled at the noise floor
            throw;
        }
    }
    if (!(r.sup <= problem.tol()))
        throw NumericalError("solve_at: residual " + std::to_string(r.sup) + " above tolerance at s = " + std::to_string(s));
    BranchPoint p;
    p.s = s;
    p.lambda = x.lambda;
    for (int l = 0; l <= problem.max_degree(); ++l)
        if (l != problem.degree()) p.w_coeffs.push_back(x.w[l]);
    p.residual_sup = r.sup;
    p.newton_iters = iters;
    if (solved) *solved = std::move(x);
    return p;
}

/// Branch metadata of `problem` with no points.
inline Branch branch_header(const BranchProblem& problem) {
    Branch b;
    b.dim = problem.dim();
    b.degree = problem.degree();
    b.max_degree = problem.max_degree();
    b.grids = problem.options().grids;
    b.reference = problem.options().reference;
    b.lambda_j = problem.lambda_j();
    b.tol = problem.tol();
    b.consistency_floor = problem.consistency_floor();
    return b;
}

/// Marches s = +-k s_max / n_steps, k = 1..n_steps, from the bifurcation
/// point with a secant predictor in (lambda, w). Each side stops at its first
/// failure; the points found so far are kept.
inline Branch continue_branch(const BranchProblem& problem, double s_max, int n_steps) {
    if (!(s_max > 0.0)) throw DomainError("continue_branch: s_max must be positive");
    if (n_steps < 1) throw DomainError("continue_branch: n_steps must be >= 1");
    const int m = problem.max_degree();

    Branch b = branch_header(problem);

    BranchState origin;
    origin.lambda = problem.lambda_j();
    origin.w.assign(m + 1, 0.0);
    BranchPoint zero;
    zero.lambda = origin.lambda;
    zero.w_coeffs.assign(m, 0.0);
    zero.residual_sup = problem.residual(0.0, origin).sup;

    std::vector<BranchPoint> points{zero};
    std::vector<std::string> stops;
    for (const double sign : {-1.0, 1.0}) {
        const double ds = sign * s_max / n_steps;
        BranchState prev = origin, cur = origin;
        double s_prev = 0.0, s_cur = 0.0;
        for (int k = 1; k <= n_steps; ++k) {
            const double s = k * ds;
            BranchState guess = cur;
            if (k > 1) {
                const double r = (s - s_cur) / (s_cur - s_prev);
                guess.lambda += r * (cur.lambda - prev.lambda);
                for (int l = 0; l <= m; ++l) guess.w[l] += r * (cur.w[l] - prev.w[l]);
            }
            BranchState next;
            try {
                points.push_back(solve_at(problem, s, guess, &next));
            } catch (const Error&) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "stopped_at_s=%.17g", s);
                stops.emplace_back(buf);
                break;
            }
            prev = std::move(cur);
            cur = std::move(next);
            s_prev = s_cur;
            s_cur = s;
        }
    }
    std::sort(points.begin(), points.end(), [](const BranchPoint& a, const BranchPoint& c) { return a.s < c.s; });
    b.points = std::move(points);
    if (!stops.empty()) {
        b.status = stops.front();
        for (std::size_t i = 1; i < stops.size(); ++i) b.status += ";" + stops[i];
    }
    return b;
}

inline Branch continue_branch(int dim, int degree, double s_max, int n_steps, BranchOptions options = {}) {
    return continue_branch(BranchProblem(dim, degree, options), s_max, n_steps);
}

/// Full coefficient vector of phi - lambda (degrees 0..M) for a point.
inline std::vector<double> phi_coeffs(const Branch& b, const BranchPoint& p) {
    std::vector<double> c(b.max_degree + 1, 0.0);
    int q = 0;
    for (int l = 0; l <= b.max_degree; ++l) c[l] = (l == b.degree) ? p.s : p.s * p.w_coeffs.at(q++);
    return c;
}

inline nlohmann::ordered_json to_json(const Branch& b) {
    nlohmann::ordered_json j;
    j["dim"] = b.dim;
    j["j"] = b.degree;
    j["grid"] = {{"n_alpha", b.grids.n_alpha}, {"n_t", b.grids.n_t}};
    j["M"] = b.max_degree;
    j["reference"] = b.reference == ResidualReference::band ? "band" : "profile";
    j["lambda_j"] = b.lambda_j;
    j["tol"] = b.tol;
    j["consistency_floor"] = b.consistency_floor;
    j["status"] = b.status;
    j["points"] = nlohmann::ordered_json::array();
    for (const BranchPoint& p : b.points) {
        j["points"].push_back({{"s", p.s},
                               {"lambda", p.lambda},
                               {"w_coeffs", p.w_coeffs},
                               {"residual_sup", p.residual_sup},
                               {"newton_iters", p.newton_iters}});
    }
    return j;
}

/// Boundary curve of D_phi for one branch point: alpha, phi(alpha) and the
/// embedded upper boundary point in R^{N+1}, at n_samples uniform alpha.
inline void write_boundary_csv(std::ostream& os, const Branch& b, const BranchPoint& p, int n_samples = 257) {
    if (n_samples < 2) throw DomainError("write_boundary_csv: need at least two samples");
    const DomainShape shape(b.dim, p.lambda, phi_coeffs(b, p), make_grid(b.dim, std::max(8, b.max_degree + 2)));
    os << "alpha,phi";
    for (int d = 0; d <= b.dim; ++d) os << ",x" << d;
    os << "\n";
    char buf[32];
    for (int k = 0; k < n_samples; ++k) {
        const double a = std::numbers::pi * k / (n_samples - 1);
        std::snprintf(buf, sizeof buf, "%.17g", a);
        os << buf;
        std::snprintf(buf, sizeof buf, ",%.17g", shape.phi(a));
        os << buf;
        for (double x : embed(shape, a, 1.0)) {
            std::snprintf(buf, sizeof buf, ",%.17g", x);
            os << buf;
        }
        os << "\n";
    }
}

} // namespace serrin
