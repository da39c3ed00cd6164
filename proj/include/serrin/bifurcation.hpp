#pragma once

#include "serrin/error.hpp"
#include "serrin/parallel.hpp"
#include "serrin/spectrum.hpp"
#include "serrin/torsion.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace serrin {

/// Zero lambda_j of sigma_j together with its transversality data.
struct BifurcationPoint {
    int dim = 0;
    int degree = 0;
    double lambda_star = 0.0;
    double sigma_prime = 0.0;
    std::pair<double, double> bracket{0.0, 0.0};
    double residual = 0.0;
};

/// b_j with b_j tan(b_j) = 1 / (c_j - N + 1); every zero of sigma_j lies in (0, b_j].
inline double a_priori_bound(const SpectralCurve& curve) {
    const double k = curve.c_const() - curve.dim() + 1.0;
    if (!(k > 0.0)) throw DomainError("a_priori_bound: requires degree >= 2");
    const double target = 1.0 / k;
    double lo = 0.0, hi = std::numbers::pi / 2;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mid * std::tan(mid) < target ? lo : hi) = mid;
    }
    return hi;
}

/// sigma_j'(l) = u~'(l) (N - 1 - gamma_j) / cos^2(l), valid only where sigma_j(l) = 0.
inline double sigma_prime_closed(const SpectralCurve& curve, double lambda, double root_tol = 1e-8) {
    const double s = sigma(curve, lambda);
    if (!(std::abs(s) <= root_tol))
        throw PreconditionError("sigma_prime_closed: lambda = " + std::to_string(lambda) +
                                " is not a root (|sigma| = " + std::to_string(std::abs(s)) + ")");
    const TorsionProfile torsion(curve.dim());
    const double c = std::cos(lambda);
    return torsion.u_prime(lambda) * (curve.dim() - 1.0 - curve.gamma()) / (c * c);
}

/// Unique zero of sigma_j on (0, pi/2) for j >= 2: bisection on (eps, b_j]
/// down to width 1e-6, then safeguarded secant to |sigma| <= 1e-12.
inline BifurcationPoint lambda_star(const SpectralCurve& curve) {
    if (curve.degree() < 2)
        throw DomainError("lambda_star: no bifurcation for degree " + std::to_string(curve.degree()) +
                          " (sigma_0 < sigma_1 = -1 < 0)");
    auto s = [&](double l) { return sigma(curve, l); };

    double lo = 1e-4;
    double hi = a_priori_bound(curve);
    double s_lo = s(lo);
    double s_hi = s(hi);
    if (!(s_lo < 0.0 && s_hi >= 0.0))
        throw BracketError("lambda_star: no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) +
                           "] (sigma = " + std::to_string(s_lo) + ", " + std::to_string(s_hi) + ")");

    BifurcationPoint bp;
    bp.dim = curve.dim();
    bp.degree = curve.degree();

    if (s_hi == 0.0) {
        lo = hi;
        s_lo = 0.0;
    }
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        const double sm = s(mid);
        if (sm < 0.0) { lo = mid; s_lo = sm; }
        else { hi = mid; s_hi = sm; }
    }

    double x0 = lo, f0 = s_lo, x1 = hi, f1 = s_hi;
    double x = std::abs(f0) < std::abs(f1) ? x0 : x1;
    double fx = std::abs(f0) < std::abs(f1) ? f0 : f1;
    for (int it = 0; it < 60 && std::abs(fx) > 1e-12; ++it) {
        double next = (f1 != f0) ? x1 - f1 * (x1 - x0) / (f1 - f0) : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double fn = s(next);
        if (fn < 0.0) lo = next; else hi = next;
        x0 = x1; f0 = f1;
        x1 = next; f1 = fn;
        x = next; fx = fn;
        if (hi - lo < 4e-16 * hi) break;
    }

    bp.lambda_star = x;
    bp.residual = std::abs(fx);
    bp.bracket = {lo, hi};
    bp.sigma_prime = sigma_prime_closed(curve, x);
    return bp;
}

/// lambda_2 > lambda_3 > ... > lambda_{j_max}; degrees computed in parallel.
inline std::vector<BifurcationPoint> lambda_table(int dim, int j_max, OdeTolerances tol = {}) {
    if (j_max < 2) throw DomainError("lambda_table: j_max must be >= 2");
    std::vector<BifurcationPoint> out(j_max - 1);
    parallel_for(static_cast<int>(out.size()), [&](int i) { out[i] = lambda_star(SpectralCurve(dim, i + 2, tol)); });
    return out;
}

} // namespace serrin
