#pragma once

#include "serrin/error.hpp"
#include "serrin/harmonics.hpp"
#include "serrin/torsion.hpp"

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace serrin {

struct OdeTolerances {
    double abs = 1e-10;
    double rel = 1e-10;
};

/// Eigenvalue curve lambda -> sigma_j(lambda) of the linearized Neumann map
/// at the straight band, for harmonic degree j on S^{N-1}.
class SpectralCurve {
public:
    SpectralCurve(int dim, int degree, OdeTolerances tol = {}) : dim_(dim), degree_(degree), tol_(tol) {
        if (dim < 2) throw DomainError("SpectralCurve: dimension must be >= 2");
        if (degree < 0) throw DomainError("SpectralCurve: degree must be >= 0");
        if (!(tol.abs > 0.0 && tol.rel > 0.0)) throw DomainError("SpectralCurve: tolerances must be positive");
        gamma_ = harmonic_gamma(dim, degree);
        const double n2 = dim - 2.0;
        c_ = 0.5 * (n2 + std::sqrt(n2 * n2 + 4.0 * gamma_));
    }

    int dim() const { return dim_; }
    int degree() const { return degree_; }
    double gamma() const { return gamma_; }
    /// Positive root of c^2 - (N-2)c - gamma_j = 0.
    double c_const() const { return c_; }
    const OdeTolerances& tolerances() const { return tol_; }

    /// c_j tan(lambda) <= f_j(lambda) for j >= 2.
    double lower_bound(double lambda) const { return c_ * std::tan(lambda); }
    /// f_j(lambda) <= N sqrt(gamma_j) / cos(lambda) for j >= 2.
    double upper_bound(double lambda) const { return dim_ * std::sqrt(gamma_) / std::cos(lambda); }

private:
    int dim_;
    int degree_;
    OdeTolerances tol_;
    double gamma_ = 0.0;
    double c_ = 0.0;
};

/// f_j by adaptive Dormand-Prince integration of
///   f' = -f^2 + (N-1) tan(l) f + gamma_j / cos^2(l),  f(0) = 0.
inline double f_riccati(const SpectralCurve& curve, double lambda) {
    namespace odeint = boost::numeric::odeint;
    using State = std::array<double, 1>;

    if (!(lambda >= 0.0 && lambda < std::numbers::pi / 2 - 0.02))
        throw DomainError("f_riccati: lambda must lie in [0, pi/2 - 0.02); use the series route near pi/2");
    if (lambda == 0.0 || curve.degree() == 0) return 0.0;

    const double n1 = curve.dim() - 1.0;
    const double g = curve.gamma();
    auto rhs = [n1, g](const State& f, State& df, double l) {
        const double c = std::cos(l);
        df[0] = -f[0] * f[0] + n1 * std::tan(l) * f[0] + g / (c * c);
    };

    auto stepper = odeint::make_controlled(curve.tolerances().abs, curve.tolerances().rel,
                                           odeint::runge_kutta_dopri5<State>());
    State f{0.0};
    double l = 0.0;
    double dt = std::min(1e-3, lambda);
    long rejected = 0;
    while (l < lambda) {
        if (l + dt > lambda) dt = lambda - l;
        const double l_before = l;
        if (stepper.try_step(rhs, f, l, dt) == odeint::fail) {
            if (++rejected > 100000 || dt < 1e-14)
                throw NumericalError("f_riccati: step-size underflow after last accepted step at lambda = " +
                                     std::to_string(l_before));
            continue;
        }
        if (!std::isfinite(f[0]))
            throw NumericalError("f_riccati: non-finite state after step to lambda = " + std::to_string(l));
    }
    return f[0];
}

/// Power series B_j(z) = sum a_k z^k of the Heun-type initial value problem
///   (1-z^2)^2 B'' - N z (1-z^2) B' - gamma_j B = 0,  B(0) = 1, B'(0) = 0,
/// truncated adaptively so that it is accurate on [0, z_max].
class BProfile {
public:
    static constexpr double kTailTol = 1e-14;
    static constexpr long kMaxOrder = 40'000'000;

    BProfile(int dim, int degree, double z_max) : dim_(dim), degree_(degree), z_max_(z_max) {
        if (!(z_max >= 0.0 && z_max < 1.0)) throw DomainError("BProfile: z_max must lie in [0, 1)");
        const double g = harmonic_gamma(dim, degree);
        const double n = dim;
        // Only even powers are nonzero; store c_i = a_{2i}.
        coeffs_.push_back(1.0);
        if (g == 0.0) return;
        const double z2 = z_max * z_max;
        double prev = 0.0;  // a_{m-2}
        double cur = 1.0;   // a_m
        double pw = 1.0;    // z_max^m
        double value = 1.0;
        double slope = 0.0;
        double last_term = 1.0;
        for (long m = 0;; m += 2) {
            const double md = double(m);
            const double next =
                ((2.0 * md * (md - 1.0) + n * md + g) * cur - (md - 2.0) * (md - 3.0 + n) * prev) / ((md + 2.0) * (md + 1.0));
            prev = cur;
            cur = next;
            coeffs_.push_back(cur);
            pw *= z2;
            const double term = cur * pw;
            const double dterm = (md + 2.0) * cur * pw / (z_max > 0.0 ? z_max : 1.0);
            value += term;
            slope += dterm;
            if (!std::isfinite(value) || !std::isfinite(cur))
                throw NumericalError("BProfile: coefficient overflow at order " + std::to_string(m + 2));
            const double prev_term = last_term;
            last_term = term;
            if (z_max == 0.0) break;
            const bool decaying = std::abs(term) < std::abs(prev_term);
            if (decaying && std::abs(term) + std::abs(prev_term) < kTailTol * std::abs(value) &&
                (md + 2.0) * (std::abs(term) + std::abs(prev_term)) < kTailTol * std::abs(slope) * z_max + 1e-300)
                break;
            if (m + 2 >= kMaxOrder)
                throw NumericalError("BProfile: series tail above tolerance at z = " + std::to_string(z_max) +
                                     " after " + std::to_string(m + 2) + " terms");
        }
    }

    int dim() const { return dim_; }
    int degree() const { return degree_; }
    double z_max() const { return z_max_; }
    /// Highest power kept (even).
    long order() const { return 2 * (static_cast<long>(coeffs_.size()) - 1); }
    /// a_k for k <= order().
    double coeff(long k) const {
        if (k % 2 != 0) return 0.0;
        return coeffs_.at(static_cast<std::size_t>(k / 2));
    }

    struct Eval {
        double value;
        double derivative;
    };

    /// B_j(z) and B_j'(z) for 0 <= z <= z_max, compensated summation.
    Eval evaluate(double z) const {
        if (!(z >= 0.0 && z <= z_max_ * (1.0 + 1e-15)))
            throw DomainError("BProfile: z outside [0, z_max]");
        const double z2 = z * z;
        double v = 0.0, vc = 0.0, d = 0.0, dc = 0.0;
        double pw = 1.0;  // z^{2i}
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            const double t = coeffs_[i] * pw;
            kahan(v, vc, t);
            if (i > 0) kahan(d, dc, 2.0 * double(i) * coeffs_[i] * pw / z);
            pw *= z2;
            if (pw == 0.0) break;
        }
        Eval e{v + vc, d + dc};
        if (z > 0.0 && degree_ > 0 && !(e.value > 0.0 && e.derivative > 0.0))
            throw NumericalError("BProfile: positivity/monotonicity violated at z = " + std::to_string(z));
        return e;
    }

private:
    static void kahan(double& sum, double& comp, double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) comp += (sum - t) + x;
        else comp += (x - t) + sum;
        sum = t;
    }

    int dim_;
    int degree_;
    double z_max_;
    std::vector<double> coeffs_;
};

/// f_j(lambda) = cos(lambda) B_j'(sin lambda) / B_j(sin lambda).
inline double f_heun(const SpectralCurve& curve, double lambda) {
    if (!(lambda >= 0.0 && lambda < std::numbers::pi / 2)) throw DomainError("f_heun: lambda must lie in [0, pi/2)");
    if (lambda == 0.0 || curve.degree() == 0) return 0.0;
    const double z = std::sin(lambda);
    if (!(z < 1.0)) throw DomainError("f_heun: sin(lambda) rounds to 1");
    const BProfile b(curve.dim(), curve.degree(), z);
    const auto e = b.evaluate(z);
    return std::cos(lambda) * e.derivative / e.value;
}

struct BvpProfile {
    std::vector<double> t;
    std::vector<double> b;
    /// One-sided second-order b'(1).
    double slope_at_one = 0.0;
};

/// Second-order finite differences for
///   b'' - (N-1) l tan(l t) b' - l^2 gamma_j b / cos^2(l t) = 0,  b'(0) = 0, b(1) = 1.
inline BvpProfile b_bvp(const SpectralCurve& curve, double lambda, int n_t) {
    if (!(lambda > 0.0 && lambda < std::numbers::pi / 2)) throw DomainError("b_bvp: lambda must lie in (0, pi/2)");
    if (n_t < 16) throw DomainError("b_bvp: need at least 16 intervals");
    const int n = n_t;
    const double h = 1.0 / n;
    const double n1 = curve.dim() - 1.0;
    const double g = curve.gamma();

    BvpProfile out;
    out.t.resize(n + 1);
    for (int i = 0; i <= n; ++i) out.t[i] = i * h;

    // Tridiagonal system for b_0..b_{n-1}; b_n = 1.
    std::vector<double> lo(n, 0.0), di(n, 0.0), up(n, 0.0), rhs(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const double t = out.t[i];
        const double c = std::cos(lambda * t);
        const double p = n1 * lambda * std::tan(lambda * t);
        const double q = lambda * lambda * g / (c * c);
        if (i == 0) {
            di[0] = -2.0 / (h * h) - q;
            up[0] = 2.0 / (h * h);
        } else {
            lo[i] = 1.0 / (h * h) + p / (2.0 * h);
            di[i] = -2.0 / (h * h) - q;
            up[i] = 1.0 / (h * h) - p / (2.0 * h);
        }
    }
    rhs[n - 1] = -up[n - 1];
    up[n - 1] = 0.0;

    for (int i = 1; i < n; ++i) {
        const double w = lo[i] / di[i - 1];
        di[i] -= w * up[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    out.b.assign(n + 1, 1.0);
    if (di[n - 1] == 0.0) throw NumericalError("b_bvp: singular tridiagonal system");
    out.b[n - 1] = rhs[n - 1] / di[n - 1];
    for (int i = n - 2; i >= 0; --i) {
        if (di[i] == 0.0) throw NumericalError("b_bvp: singular tridiagonal system");
        out.b[i] = (rhs[i] - up[i] * out.b[i + 1]) / di[i];
    }
    out.slope_at_one = (3.0 * out.b[n] - 4.0 * out.b[n - 1] + out.b[n - 2]) / (2.0 * h);
    return out;
}

enum class FRoute { heun, riccati };

inline double f_value(const SpectralCurve& curve, double lambda, FRoute route = FRoute::heun) {
    return route == FRoute::heun ? f_heun(curve, lambda) : f_riccati(curve, lambda);
}

/// sigma_j(lambda) = u~'(lambda) ((N-1) tan(lambda) - f_j(lambda)) - 1.
inline double sigma(const SpectralCurve& curve, double lambda, FRoute route = FRoute::heun) {
    if (!(lambda > 0.0 && lambda < std::numbers::pi / 2)) throw DomainError("sigma: lambda must lie in (0, pi/2)");
    const TorsionProfile torsion(curve.dim());
    const double up = torsion.u_prime(lambda);
    const double f = f_value(curve, lambda, route);
    return up * ((curve.dim() - 1.0) * std::tan(lambda) - f) - 1.0;
}

} // namespace serrin
