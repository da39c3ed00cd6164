#include "serrin/spectrum.hpp"
#include "serrin/torsion.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace serrin;

namespace {

// N = 2: the band harmonic is cosh(j s) cos(j alpha) in the Mercator
// coordinate s = atanh(sin th), so f_j = j tanh(j s) / cos(l).
double f_planar(int j, double l) { return j * std::tanh(j * std::atanh(std::sin(l))) / std::cos(l); }

double b_planar(int j, double z) {
    const double r = (1.0 + z) / (1.0 - z);
    return 0.5 * (std::pow(r, 0.5 * j) + std::pow(r, -0.5 * j));
}

} // namespace

TEST(Spectrum, CurveConstants) {
    const SpectralCurve c(3, 2);
    EXPECT_DOUBLE_EQ(c.gamma(), 6.0);
    EXPECT_NEAR(c.c_const() * c.c_const() - (3 - 2) * c.c_const() - c.gamma(), 0.0, 1e-14);
    EXPECT_THROW(SpectralCurve(1, 2), DomainError);
    EXPECT_THROW(SpectralCurve(3, -1), DomainError);
    EXPECT_THROW(SpectralCurve(3, 2, {0.0, 1e-10}), DomainError);
}

TEST(Spectrum, PlanarClosedFormForBothRoutes) {
    for (int j = 0; j <= 10; ++j)
        for (double l : {0.05, 0.4, 0.9, 1.3}) {
            const SpectralCurve c(2, j);
            const double exact = f_planar(j, l);
            EXPECT_NEAR(f_heun(c, l), exact, 1e-11 * (1.0 + exact)) << "j=" << j << " l=" << l;
            EXPECT_NEAR(f_riccati(c, l), exact, 1e-8 * (1.0 + exact)) << "j=" << j << " l=" << l;
        }
}

TEST(Spectrum, SeriesMatchesPlanarProfile) {
    for (int j : {1, 2, 5, 9}) {
        const BProfile b(2, j, 0.95);
        for (double z : {0.0, 0.3, 0.7, 0.95}) {
            const auto e = b.evaluate(z);
            EXPECT_NEAR(e.value, b_planar(j, z), 1e-12 * b_planar(j, z));
            const double h = 1e-6;
            const double zz = std::min(z, 0.95 - h);
            const double fd = (b_planar(j, zz + h) - b_planar(j, std::max(0.0, zz - h))) / (zz >= h ? 2.0 * h : zz + h);
            if (z > 0.0 && z < 0.95) EXPECT_NEAR(b.evaluate(zz).derivative, fd, 1e-6 * (1.0 + std::abs(fd)));
        }
        for (long k = 1; k <= b.order(); k += 2) EXPECT_EQ(b.coeff(k), 0.0);
    }
    EXPECT_THROW(BProfile(2, 2, 1.0), DomainError);
    EXPECT_THROW(BProfile(2, 2, 0.5).evaluate(0.6), DomainError);
}

TEST(Spectrum, SeriesSatisfiesTheDifferentialEquation) {
    // (1-z^2)^2 B'' - N z (1-z^2) B' - gamma B = 0, B'' by differences of B'.
    for (int n = 3; n <= 5; ++n)
        for (int j : {2, 4, 7}) {
            const BProfile b(n, j, 0.9);
            const double g = harmonic_gamma(n, j);
            for (double z : {0.2, 0.5, 0.8}) {
                const double h = 1e-5;
                const auto e = b.evaluate(z);
                const double d2 = (b.evaluate(z + h).derivative - b.evaluate(z - h).derivative) / (2.0 * h);
                const double w = 1.0 - z * z;
                const double res = w * w * d2 - n * z * w * e.derivative - g * e.value;
                EXPECT_NEAR(res, 0.0, 1e-6 * (g * e.value + 1.0)) << "N=" << n << " j=" << j << " z=" << z;
            }
        }
}

TEST(Spectrum, DegreeOneCurveIsConstant) {
    for (int n = 2; n <= 4; ++n) {
        const SpectralCurve c(n, 1);
        for (int i = 0; i < 20; ++i) {
            const double l = 0.05 + 1.4 * (i + 0.5) / 20.0;
            EXPECT_NEAR(f_heun(c, l), (n - 1) * std::tan(l), 1e-10 * (1.0 + std::tan(l)));
            EXPECT_NEAR(sigma(c, l), -1.0, 1e-8);
        }
    }
}

TEST(Spectrum, DegreeZeroClosedForm) {
    // f_0 = 0 so sigma_0 = (N-1) tan(l) u~'(l) - 1; for N = 2 that is -1/cos^2.
    EXPECT_NEAR(sigma(SpectralCurve(2, 0), 0.4), -1.0 / (std::cos(0.4) * std::cos(0.4)), 1e-13);
    const TorsionProfile t(4);
    EXPECT_NEAR(sigma(SpectralCurve(4, 0), 0.7), 3.0 * std::tan(0.7) * t.u_prime(0.7) - 1.0, 1e-13);
}

TEST(Spectrum, RoutesAgreeAcrossDimensions) {
    for (int n = 2; n <= 4; ++n)
        for (int j = 0; j <= 12; ++j)
            for (int i = 0; i < 8; ++i) {
                const double l = 0.05 + 1.25 * i / 7.0;
                const SpectralCurve c(n, j);
                const double fh = f_heun(c, l);
                EXPECT_LE(std::abs(fh - f_riccati(c, l)) / (1.0 + std::abs(fh)), 1e-8) << "N=" << n << " j=" << j << " l=" << l;
            }
}

TEST(Spectrum, BoundsAndOrderingOnRandomSamples) {
    for (int trial = 0; trial < 200; ++trial) {
        const int n = test::uniform_int(2, 6);
        const int j = test::uniform_int(2, 20);
        const double l = test::uniform(0.01, 1.5);
        const SpectralCurve c(n, j);
        const double f = f_heun(c, l);
        EXPECT_LE(c.lower_bound(l), f * (1.0 + 1e-12)) << "N=" << n << " j=" << j << " l=" << l;
        EXPECT_LE(f, c.upper_bound(l)) << "N=" << n << " j=" << j << " l=" << l;
        EXPECT_GT(sigma(c, l), sigma(SpectralCurve(n, j - 1), l));
    }
}

TEST(Spectrum, BoundaryValueRouteConvergesAtSecondOrder) {
    for (int n : {2, 3, 4})
        for (int j : {2, 5}) {
            const SpectralCurve c(n, j);
            const double l = 0.7;
            const double f = f_heun(c, l);
            double prev = 0.0;
            for (int nt : {64, 128, 256, 512}) {
                const auto p = b_bvp(c, l, nt);
                EXPECT_NEAR(p.b.back(), 1.0, 1e-14);
                const double err = std::abs(p.slope_at_one / l - f);
                if (nt > 64) EXPECT_GE(test::order(prev, err), 1.8) << "N=" << n << " j=" << j << " nt=" << nt;
                prev = err;
            }
        }
    EXPECT_THROW(b_bvp(SpectralCurve(2, 2), 0.5, 8), DomainError);
}

TEST(Spectrum, DomainGuards) {
    const SpectralCurve c(3, 2);
    EXPECT_THROW(sigma(c, 0.0), DomainError);
    EXPECT_THROW(sigma(c, std::numbers::pi / 2), DomainError);
    EXPECT_THROW(f_riccati(c, 1.56), DomainError);
    EXPECT_NO_THROW(f_heun(c, 1.56));
    EXPECT_THROW(f_riccati(SpectralCurve(3, 2, {1e-30, 1e-30}), 1.0), NumericalError);
}

TEST(Spectrum, AsymptoticsNearZeroAndNearThePole) {
    for (int n = 2; n <= 4; ++n)
        for (int j = 0; j <= 12; ++j) {
            const double s = sigma(SpectralCurve(n, j), 0.002);
            EXPECT_GT(s, -1.05);
            EXPECT_LT(s, -0.95);
        }
    for (int j : {8, 16, 32, 64}) EXPECT_GT(sigma(SpectralCurve(3, j), 1.55), 0.0);
}
