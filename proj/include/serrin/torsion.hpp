#pragma once

#include "serrin/error.hpp"
#include "serrin/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace serrin {

/// Even solution u~ of the latitude ODE
///   cos^{1-N}(th) d/dth ( cos^{N-1}(th) u~'(th) ) = -1   on (-pi/2, pi/2),
/// i.e. the torsion function of the straight band around the equator of S^N.
/// Only derivatives and differences of u~ are exposed; the additive constant
/// (u~(0) = 1) never enters any result.
class TorsionProfile {
public:
    static constexpr double kPoleGuard = 1e-8;

    explicit TorsionProfile(int dim, int quad_order = 16) : dim_(dim), quad_order_(quad_order) {
        if (dim < 2) throw DomainError("TorsionProfile: dimension must be >= 2, got " + std::to_string(dim));
        if (quad_order < 4) throw DomainError("TorsionProfile: quadrature order must be >= 4");
    }

    int dim() const { return dim_; }
    int quad_order() const { return quad_order_; }

    /// u~'(th) = -cos^{1-N}(th) * int_0^th cos^{N-1}.
    double u_prime(double theta) const {
        check_angle(theta);
        if (theta == 0.0) return 0.0;
        const double sign = theta < 0.0 ? -1.0 : 1.0;
        const double th = std::abs(theta);
        const int p = dim_ - 1;
        auto integrand = [p](double x) { return std::pow(std::cos(x), p); };
        const double integral = quad::integrate(integrand, 0.0, th, quad_order_);
        return -sign * integral / std::pow(std::cos(th), p);
    }

    /// u~'' = -1 + (N-1) tan(th) u~'(th), straight from the ODE.
    double u_second(double theta) const {
        const double up = u_prime(theta);
        return -1.0 + (dim_ - 1) * std::tan(theta) * up;
    }

    /// u~(lambda t) - u~(lambda): the straight-band torsion function in the
    /// stretched variable t in [-1, 1]. Nonnegative, even in t, zero at |t| = 1.
    double u_diff(double lambda, double t) const {
        if (!(lambda > 0.0 && lambda < std::numbers::pi / 2 - kPoleGuard))
            throw DomainError("u_diff: lambda must lie in (0, pi/2)");
        if (!(std::abs(t) <= 1.0)) throw DomainError("u_diff: t must lie in [-1, 1]");
        const double lo = lambda * std::abs(t);
        if (lo >= lambda) return 0.0;
        auto minus_up = [this](double x) { return -u_prime(x); };
        return quad::integrate(minus_up, lo, lambda, quad_order_, 1e-14);
    }

private:
    static void check_angle(double theta) {
        if (!(std::abs(theta) <= std::numbers::pi / 2 - kPoleGuard))
            throw DomainError("torsion profile evaluated at |theta| >= pi/2 (theta = " + std::to_string(theta) + ")");
    }

    int dim_;
    int quad_order_;
};

} // namespace serrin
