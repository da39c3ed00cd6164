#pragma once

#include "serrin/bifurcation.hpp"
#include "serrin/branch.hpp"
#include "serrin/error.hpp"
#include "serrin/geometry.hpp"
#include "serrin/harmonics.hpp"
#include "serrin/io.hpp"
#include "serrin/pde.hpp"
#include "serrin/spectrum.hpp"
#include "serrin/torsion.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace serrin::cli {

enum ExitCode : int { ok = 0, check_failed = 1, config_error = 2, numerical_failure = 3 };

namespace detail {

inline void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty() || path == "-") out << content;
    else io::write_atomic(path, content);
}

inline void require(bool cond, const std::string& message) {
    if (!cond) throw ConfigError(message);
}

inline FRoute parse_route(const std::string& s) {
    if (s == "heun") return FRoute::heun;
    if (s == "riccati") return FRoute::riccati;
    throw ConfigError("route must be heun or riccati, got '" + s + "'");
}

inline double observed_order(double coarse, double fine) {
    if (!(coarse > 0.0 && fine > 0.0)) return 0.0;
    return std::log2(coarse / fine);
}

// ---- sigma --------------------------------------------------------------

struct SigmaArgs {
    int dim = 2;
    int degree = 2;
    std::string lambda;
    std::string route = "heun";
    double ode_abs = 1e-10, ode_rel = 1e-10;
    std::string out;
};

inline int cmd_sigma(const SigmaArgs& a, std::ostream& out) {
    require(a.dim >= 2, "--dim must be >= 2");
    require(a.degree >= 0, "--j must be >= 0");
    require(a.ode_abs > 0.0 && a.ode_rel > 0.0, "ODE tolerances must be positive");
    const FRoute route = parse_route(a.route);
    const std::vector<double> lambdas = io::parse_range(a.lambda);
    for (double l : lambdas) require(l > 0.0 && l < std::numbers::pi / 2, "lambda values must lie in (0, pi/2)");
    const SpectralCurve curve(a.dim, a.degree, {a.ode_abs, a.ode_rel});
    io::CsvWriter csv({"lambda", "sigma_j", "f_j", "bound_lo", "bound_hi"});
    for (double l : lambdas) {
        const double f = f_value(curve, l, route);
        csv.row({l, sigma(curve, l, route), f, curve.lower_bound(l), curve.upper_bound(l)});
    }
    emit(a.out, csv.str(), out);
    return ok;
}

// ---- bifpoints ----------------------------------------------------------

struct BifArgs {
    int dim = 2;
    int j_max = 8;
    std::string out;
};

inline int cmd_bifpoints(const BifArgs& a, std::ostream& out) {
    require(a.dim >= 2, "--dim must be >= 2");
    require(a.j_max >= 2, "--jmax must be >= 2 (no bifurcation point for j < 2)");
    io::CsvWriter csv({"j", "lambda_j", "sigma_prime", "residual"});
    for (const BifurcationPoint& p : lambda_table(a.dim, a.j_max))
        csv.row({double(p.degree), p.lambda_star, p.sigma_prime, p.residual});
    emit(a.out, csv.str(), out);
    return ok;
}

// ---- solve --------------------------------------------------------------

struct SolveArgs {
    int dim = 2;
    double lambda = 0.8;
    std::string grids = "32,64,128";
    std::string out;
};

inline int cmd_solve(const SolveArgs& a, std::ostream& out) {
    require(a.dim >= 2, "--dim must be >= 2");
    require(a.lambda > 0.0 && a.lambda < std::numbers::pi / 2, "--lambda must lie in (0, pi/2)");
    std::vector<int> sizes;
    for (double g : io::parse_list(a.grids)) {
        require(g >= 16 && g == std::floor(g), "grid sizes must be integers >= 16");
        sizes.push_back(static_cast<int>(g));
    }
    require(!sizes.empty(), "--grids is empty");
    const TorsionProfile torsion(a.dim);
    const double exact = torsion.u_prime(a.lambda);
    io::CsvWriter csv({"n", "H", "H_exact", "H_error", "u_error", "order_H", "order_u"});
    double prev_h = 0.0, prev_u = 0.0;
    for (std::size_t g = 0; g < sizes.size(); ++g) {
        const int n = sizes[g];
        const DomainShape shape = DomainShape::constant(a.dim, a.lambda, make_grid(a.dim, n));
        const Field2D u = solve_torsion(shape, n);
        const std::vector<double> h = neumann_trace(shape, u);
        double eh = 0.0, eu = 0.0;
        for (double v : h) eh = std::max(eh, std::abs(v - exact));
        for (int i = 0; i <= n; ++i) {
            const double ue = torsion.u_diff(a.lambda, u.t[i]);
            for (int k = 0; k < u.n_alpha(); ++k) eu = std::max(eu, std::abs(u.at(k, i) - ue));
        }
        const double oh = g ? observed_order(prev_h, eh) : std::nan("");
        const double ou = g ? observed_order(prev_u, eu) : std::nan("");
        csv.row({double(n), h[0], exact, eh, eu, oh, ou});
        prev_h = eh;
        prev_u = eu;
    }
    emit(a.out, csv.str(), out);
    return ok;
}

// ---- linop --------------------------------------------------------------

struct LinopArgs {
    int dim = 2;
    int degree = 2;
    double lambda = 0.5;
    int n_alpha = 64;
    int n_t = 64;
    std::string out;
};

inline int cmd_linop(const LinopArgs& a, std::ostream& out, std::ostream& err) {
    require(a.dim >= 2, "--dim must be >= 2");
    require(a.degree >= 0, "--j must be >= 0");
    require(a.lambda > 0.0 && a.lambda < std::numbers::pi / 2, "--lambda must lie in (0, pi/2)");
    require(a.n_alpha >= 8 && a.n_t >= 16, "grid too small: need n_alpha >= 8 and n_t >= 16");
    const AxisGrid grid = make_grid(a.dim, a.n_alpha);
    const HarmonicBasis basis(a.dim, a.degree);
    const std::vector<double> y = basis.sample(grid, a.degree);
    const LinearizedResult r = solve_linearized(a.dim, y, a.lambda, grid, a.n_t);
    const double s = sigma(SpectralCurve(a.dim, a.degree), a.lambda);
    io::CsvWriter csv({"alpha", "l_omega", "sigma_y", "difference"});
    double sup = 0.0;
    for (int k = 0; k < grid.size(); ++k) {
        const double d = r.l_omega[k] - s * y[k];
        sup = std::max(sup, std::abs(d));
        csv.row({grid.alpha[k], r.l_omega[k], s * y[k], d});
    }
    emit(a.out, csv.str(), out);
    err << "sigma_j = " << io::fmt(s) << ", sup|L Y_j - sigma_j Y_j| = " << io::fmt(sup) << "\n";
    return ok;
}

// ---- branch -------------------------------------------------------------

struct BranchArgs {
    int dim = 2;
    int degree = 2;
    double s_max = 0.04;
    int steps = 8;
    int max_degree = -1;
    int n_alpha = 128;
    int n_t = 128;
    std::string reference = "band";
    double min_tol = 1e-6;
    std::string out_dir = "branch_out";
};

inline int cmd_branch(const BranchArgs& a, std::ostream& out) {
    require(a.dim >= 2, "--dim must be >= 2");
    require(a.degree >= 2, "--j must be >= 2");
    require(a.s_max > 0.0, "--smax must be positive");
    require(a.steps >= 1, "--steps must be >= 1");
    require(a.min_tol > 0.0, "--tol must be positive");
    require(a.reference == "band" || a.reference == "profile", "--reference must be band or profile");
    BranchOptions opt;
    opt.grids = {a.n_alpha, a.n_t};
    opt.max_degree = a.max_degree;
    opt.reference = a.reference == "band" ? ResidualReference::band : ResidualReference::profile;
    opt.min_tol = a.min_tol;
    const Branch b = continue_branch(a.dim, a.degree, a.s_max, a.steps, opt);

    const std::filesystem::path dir(a.out_dir);
    nlohmann::ordered_json j = to_json(b);
    for (std::size_t i = 0; i < b.points.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "boundary_%03zu.csv", i);
        std::ostringstream csv;
        write_boundary_csv(csv, b, b.points[i]);
        io::write_atomic(dir / name, csv.str());
        j["points"][i]["boundary_csv"] = name;
    }
    io::write_atomic(dir / "branch.json", io::dump(j));
    out << "wrote " << b.points.size() << " points to " << (dir / "branch.json").string() << " (status " << b.status << ")\n";
    return ok;
}

// ---- export-domain ------------------------------------------------------

struct ExportArgs {
    int dim = 2;
    double lambda = 0.6;
    std::string coeffs;
    int n_alpha = 64;
    int n_t = 64;
    std::string out;
    std::string field;
};

inline int cmd_export_domain(const ExportArgs& a, std::ostream& out) {
    require(a.dim >= 2, "--dim must be >= 2");
    require(a.n_alpha >= 16 && a.n_t >= 16, "grid sizes must be >= 16");
    const std::vector<double> c = a.coeffs.empty() ? std::vector<double>{} : io::parse_list(a.coeffs);
    const DomainShape shape(a.dim, a.lambda, c, make_grid(a.dim, a.n_alpha));
    const Field2D u = solve_torsion(shape, a.n_t);
    nlohmann::ordered_json j = to_json(shape);
    j["neumann"] = neumann_trace(shape, u);
    std::vector<nlohmann::ordered_json> pts;
    for (double alpha : shape.grid().alpha) pts.emplace_back(embed(shape, alpha, 1.0));
    j["boundary_embedded"] = pts;
    emit(a.out, io::dump(j), out);
    if (!a.field.empty()) {
        std::ostringstream csv;
        u.write_csv(csv);
        io::write_atomic(a.field, csv.str());
    }
    return ok;
}

// ---- check --------------------------------------------------------------

struct CheckArgs {
    int n_alpha = 32;
    int n_t = 32;
    double tol = 1e-8;
    std::string out;
};

class Report {
public:
    void record(const std::string& name, bool pass, double measured, double limit, const std::string& note = "") {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s %s: measured %.3e, limit %.3e%s%s\n", pass ? "PASS" : "FAIL", name.c_str(), measured,
                      limit, note.empty() ? "" : ", ", note.c_str());
        text_ += buf;
        failed_ |= !pass;
    }
    void skip(const std::string& name, const std::string& why) { text_ += "SKIP " + name + ": " + why + "\n"; }
    bool failed() const { return failed_; }
    const std::string& text() const { return text_; }

private:
    std::string text_;
    bool failed_ = false;
};

inline int cmd_check(const CheckArgs& a, std::ostream& out, std::ostream& err) {
    require(a.tol > 0.0, "--tol must be positive");
    require(a.n_alpha >= 16 && a.n_t >= 16, "grid sizes must be >= 16");
    Report rep;

    {  // sigma_1 == -1
        double worst = 0.0;
        for (int n = 2; n <= 4; ++n) {
            const SpectralCurve c(n, 1);
            for (int i = 0; i < 20; ++i) worst = std::max(worst, std::abs(sigma(c, 0.05 + 1.4 * (i + 0.5) / 20) + 1.0));
        }
        rep.record("spectrum: sigma_1 = -1", worst <= a.tol, worst, a.tol);
    }
    {  // Riccati and Heun routes agree; bounds; ordering
        double worst = 0.0;
        double bound_slack = 1e300;  // min over j >= 2 of the distance to either bound
        double order_gap = 1e300;    // min over j of sigma_j - sigma_{j-1}
        for (int n = 2; n <= 4; ++n)
            for (int i = 0; i < 6; ++i) {
                const double l = 0.05 + 1.25 * i / 5.0;
                double prev = 0.0;
                for (int j = 0; j <= 12; ++j) {
                    const SpectralCurve c(n, j);
                    const double fh = f_heun(c, l), fr = f_riccati(c, l);
                    worst = std::max(worst, std::abs(fh - fr) / (1.0 + std::abs(fh)));
                    if (j >= 2) bound_slack = std::min({bound_slack, fh - c.lower_bound(l), c.upper_bound(l) - fh});
                    const double s = sigma(c, l);
                    if (j > 0) order_gap = std::min(order_gap, s - prev);
                    prev = s;
                }
            }
        rep.record("spectrum: Riccati vs Heun", worst <= a.tol, worst, a.tol);
        rep.record("spectrum: f_j within bounds (min slack)", bound_slack >= 0.0, bound_slack, 0.0);
        rep.record("spectrum: sigma_j increasing in j (min gap)", order_gap > 0.0, order_gap, 0.0);
    }
    {  // bifurcation points
        double worst_res = 0.0, bound_slack = 1e300;
        bool decreasing = true, positive = true;
        for (int n = 2; n <= 3; ++n) {
            const auto table = lambda_table(n, 12);
            for (std::size_t i = 0; i < table.size(); ++i) {
                const BifurcationPoint& p = table[i];
                const SpectralCurve c(n, p.degree);
                worst_res = std::max(worst_res, std::abs(sigma(c, p.lambda_star)));
                bound_slack = std::min(bound_slack, 1.0 / (c.c_const() - n + 1.0) - p.lambda_star * std::tan(p.lambda_star));
                positive &= p.sigma_prime > 0.0;
                if (i) decreasing &= p.lambda_star < table[i - 1].lambda_star;
            }
        }
        rep.record("bifurcation: |sigma_j(lambda_j)|", worst_res <= 1e-10, worst_res, 1e-10);
        rep.record("bifurcation: lambda_j tan lambda_j bound (min slack)", bound_slack >= 0.0, bound_slack, 0.0);
        rep.record("bifurcation: lambda_j decreasing", decreasing, decreasing ? 0.0 : 1.0, 0.0);
        rep.record("bifurcation: sigma' > 0", positive, positive ? 0.0 : 1.0, 0.0);
    }
    {  // Gram identity of the harmonic basis on the requested grid
        const int m = std::min(8, (a.n_alpha - 2) / 2);
        double worst = 0.0;
        for (int n = 2; n <= 4; ++n) {
            const AxisGrid g = make_grid(n, a.n_alpha);
            const HarmonicBasis basis(n, m);
            for (int l = 0; l <= m; ++l) {
                const auto proj = project_all(g, basis, basis.sample(g, l));
                for (int q = 0; q <= m; ++q) worst = std::max(worst, std::abs(proj[q] - (q == l ? 1.0 : 0.0)));
            }
        }
        rep.record("harmonics: Gram identity", worst <= 1e-12, worst, 1e-12);
    }
    {  // maximum principle and straight-band consistency
        const double lambda = 0.8;
        const DomainShape shape = DomainShape::constant(2, lambda, make_grid(2, a.n_alpha));
        const Field2D u = solve_torsion(shape, a.n_t);
        double min_u = 1e300;
        for (int i = 0; i < u.n_t(); ++i)
            for (int k = 0; k < u.n_alpha(); ++k) min_u = std::min(min_u, u.at(k, i));
        rep.record("pde: maximum principle (min interior u > 0)", min_u > 0.0, min_u, 0.0);
        const double band = solve_band(2, lambda, a.n_t).neumann;
        double worst = 0.0;
        for (double h : neumann_trace(shape, u)) worst = std::max(worst, std::abs(h - band));
        rep.record("pde: 2-D solve equals band profile", worst <= 1e-10, worst, 1e-10);
    }
    const int base = std::min(a.n_alpha, a.n_t);
    if (base < 32) {
        const std::string why = "grid " + std::to_string(a.n_alpha) + "x" + std::to_string(a.n_t) + " too coarse for order estimates";
        err << "warning: convergence-order checks skipped (" << why << ")\n";
        rep.skip("pde: convergence order of u and H", why);
        rep.skip("pde: convergence order of the linearization", why);
    } else {
        const double lambda = 0.8;
        const TorsionProfile torsion(2);
        std::vector<double> eh, eu;
        for (int n : {base, 2 * base, 4 * base}) {
            const DomainShape shape = DomainShape::constant(2, lambda, make_grid(2, n));
            const Field2D u = solve_torsion(shape, n);
            double e1 = 0.0, e2 = 0.0;
            for (double h : neumann_trace(shape, u)) e1 = std::max(e1, std::abs(h - torsion.u_prime(lambda)));
            for (int i = 0; i <= n; ++i)
                for (int k = 0; k < u.n_alpha(); ++k) e2 = std::max(e2, std::abs(u.at(k, i) - torsion.u_diff(lambda, u.t[i])));
            eh.push_back(e1);
            eu.push_back(e2);
        }
        const double oh = observed_order(eh[1], eh[2]), ou = observed_order(eu[1], eu[2]);
        rep.record("pde: convergence order of H", oh >= 1.8, oh, 1.8, "reported as measured order vs minimum");
        rep.record("pde: convergence order of u", ou >= 1.8, ou, 1.8, "reported as measured order vs minimum");

        std::vector<double> el;
        for (int n : {base, 2 * base, 4 * base}) {
            const AxisGrid grid = make_grid(3, n);
            const HarmonicBasis basis(3, 2);
            const auto y = basis.sample(grid, 2);
            const auto r = solve_linearized(3, y, 0.5, grid, n);
            const double s = sigma(SpectralCurve(3, 2), 0.5);
            double e = 0.0;
            for (int k = 0; k < grid.size(); ++k) e = std::max(e, std::abs(r.l_omega[k] - s * y[k]));
            el.push_back(e);
        }
        const double ol = observed_order(el[1], el[2]);
        rep.record("pde: convergence order of the linearization", ol >= 1.8, ol, 1.8, "reported as measured order vs minimum");
    }
    {  // one Newton solve on a coarse branch problem
        BranchOptions opt;
        opt.grids = {std::max(a.n_alpha, 2 * 6 + 2), a.n_t};
        opt.max_degree = 6;
        const BranchProblem problem(2, 2, opt);
        BranchState guess;
        guess.lambda = problem.lambda_j();
        guess.w.assign(problem.max_degree() + 1, 0.0);
        const BranchPoint p = solve_at(problem, 0.01, guess);
        const auto coeffs = phi_coeffs(branch_header(problem), p);
        rep.record("branch: Newton residual at s = 0.01", p.residual_sup <= problem.tol(), p.residual_sup, problem.tol());
        rep.record("branch: pinned Y_j coefficient", coeffs[2] == 0.01, std::abs(coeffs[2] - 0.01), 0.0);
    }

    emit(a.out, rep.text(), out);
    return rep.failed() ? check_failed : ok;
}

} // namespace detail

/// Entry point of the `serrin` command-line tool. Returns the process exit
/// code: 0 success, 1 failed check, 2 configuration error, 3 numerical failure.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral analysis and bifurcating branches of the overdetermined torsion problem on S^N", "serrin"};
    app.set_config("--config", "", "TOML file with default option values (flags take precedence)");
    app.require_subcommand(1);

    std::function<int()> action;

    detail::SigmaArgs sa;
    auto* sigma_cmd = app.add_subcommand("sigma", "Eigenvalue curve sigma_j on a lambda grid (CSV)");
    sigma_cmd->add_option("--dim", sa.dim, "Dimension N")->required();
    sigma_cmd->add_option("--j", sa.degree, "Harmonic degree j")->required();
    sigma_cmd->add_option("--lambda", sa.lambda, "Lambda grid start:stop:count")->required();
    sigma_cmd->add_option("--route", sa.route, "f_j route: heun or riccati")->capture_default_str();
    sigma_cmd->add_option("--ode-abs", sa.ode_abs, "Riccati absolute tolerance")->capture_default_str();
    sigma_cmd->add_option("--ode-rel", sa.ode_rel, "Riccati relative tolerance")->capture_default_str();
    sigma_cmd->add_option("--out", sa.out, "Output path (default stdout)");
    sigma_cmd->callback([&] { action = [&] { return detail::cmd_sigma(sa, out); }; });

    detail::BifArgs ba;
    auto* bif_cmd = app.add_subcommand("bifpoints", "Bifurcation points lambda_j, j = 2..jmax (CSV)");
    bif_cmd->add_option("--dim", ba.dim, "Dimension N")->required();
    bif_cmd->add_option("--jmax", ba.j_max, "Largest degree")->required();
    bif_cmd->add_option("--out", ba.out, "Output path (default stdout)");
    bif_cmd->callback([&] { action = [&] { return detail::cmd_bifpoints(ba, out); }; });

    detail::CheckArgs ca;
    auto* check_cmd = app.add_subcommand("check", "Run the invariant suites and report margins");
    check_cmd->add_option("--n-alpha", ca.n_alpha, "Polar grid size")->capture_default_str();
    check_cmd->add_option("--n-t", ca.n_t, "t grid size")->capture_default_str();
    check_cmd->add_option("--tol", ca.tol, "Tolerance for the algebraic spectral checks")->capture_default_str();
    check_cmd->add_option("--out", ca.out, "Report path (default stdout)");
    check_cmd->callback([&] { action = [&] { return detail::cmd_check(ca, out, err); }; });

    detail::SolveArgs so;
    auto* solve_cmd = app.add_subcommand("solve", "Convergence study of H(lambda) on the straight band (CSV)");
    solve_cmd->add_option("--dim", so.dim, "Dimension N")->required();
    solve_cmd->add_option("--lambda", so.lambda, "Band half-width lambda")->required();
    solve_cmd->add_option("--grids", so.grids, "Comma-separated square grid sizes")->capture_default_str();
    solve_cmd->add_option("--out", so.out, "Output path (default stdout)");
    solve_cmd->callback([&] { action = [&] { return detail::cmd_solve(so, out); }; });

    detail::LinopArgs la;
    auto* lin_cmd = app.add_subcommand("linop", "Apply the discrete linearized operator to Y_j (CSV)");
    lin_cmd->add_option("--dim", la.dim, "Dimension N")->required();
    lin_cmd->add_option("--j", la.degree, "Harmonic degree j")->required();
    lin_cmd->add_option("--lambda", la.lambda, "Band half-width lambda")->required();
    lin_cmd->add_option("--n-alpha", la.n_alpha, "Polar grid size")->capture_default_str();
    lin_cmd->add_option("--n-t", la.n_t, "t grid size")->capture_default_str();
    lin_cmd->add_option("--out", la.out, "Output path (default stdout)");
    lin_cmd->callback([&] { action = [&] { return detail::cmd_linop(la, out, err); }; });

    detail::BranchArgs br;
    auto* branch_cmd = app.add_subcommand("branch", "Continue the bifurcating branch from lambda_j (JSON + CSV)");
    branch_cmd->add_option("--dim", br.dim, "Dimension N")->required();
    branch_cmd->add_option("--j", br.degree, "Bifurcating degree j >= 2")->required();
    branch_cmd->add_option("--smax", br.s_max, "Largest amplitude |s|")->capture_default_str();
    branch_cmd->add_option("--steps", br.steps, "Steps per half-branch")->capture_default_str();
    branch_cmd->add_option("--M", br.max_degree, "Truncation degree (default 2j + 8)");
    branch_cmd->add_option("--n-alpha", br.n_alpha, "Polar grid size")->capture_default_str();
    branch_cmd->add_option("--n-t", br.n_t, "t grid size")->capture_default_str();
    branch_cmd->add_option("--reference", br.reference, "Residual reference: band or profile")->capture_default_str();
    branch_cmd->add_option("--tol", br.min_tol, "Residual tolerance floor")->capture_default_str();
    branch_cmd->add_option("--out-dir", br.out_dir, "Output directory")->capture_default_str();
    branch_cmd->callback([&] { action = [&] { return detail::cmd_branch(br, out); }; });

    detail::ExportArgs ea;
    auto* export_cmd = app.add_subcommand("export-domain", "Export a domain D_phi, its torsion field and Neumann trace");
    export_cmd->add_option("--dim", ea.dim, "Dimension N")->required();
    export_cmd->add_option("--lambda", ea.lambda, "Mean half-width lambda")->required();
    export_cmd->add_option("--coeffs", ea.coeffs, "Comma-separated coefficients of phi - lambda over Y_0..Y_M");
    export_cmd->add_option("--n-alpha", ea.n_alpha, "Polar grid size")->capture_default_str();
    export_cmd->add_option("--n-t", ea.n_t, "t grid size")->capture_default_str();
    export_cmd->add_option("--out", ea.out, "JSON path (default stdout)");
    export_cmd->add_option("--field", ea.field, "Optional CSV path for the torsion field");
    export_cmd->callback([&] { action = [&] { return detail::cmd_export_domain(ea, out); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return config_error;
    }

    try {
        return action ? action() : config_error;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const DomainError& e) {
        err << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const ResolutionError& e) {
        err << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const PreconditionError& e) {
        err << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return numerical_failure;
    }
}

} // namespace serrin::cli
