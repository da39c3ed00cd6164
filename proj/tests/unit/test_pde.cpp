#include "serrin/pde.hpp"
#include "serrin/spectrum.hpp"
#include "serrin/torsion.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace serrin;

namespace {

DomainShape wavy(int dim, int n_alpha) {
    return DomainShape(dim, 0.6, {0.0, 0.02, 0.06, 0.0, 0.03}, make_grid(dim, n_alpha));
}

// U(th) = u~(th) - u~(0), the band torsion function in the original angle.
double band_potential(const TorsionProfile& tp, double th) {
    return quad::integrate([&](double x) { return tp.u_prime(x); }, 0.0, th, 16, 1e-14);
}

} // namespace

TEST(Pde, StraightBandSolutionConvergesAtSecondOrder) {
    for (int n : {2, 3})
        for (double l : {0.4, 0.8, 1.2}) {
            const TorsionProfile tp(n);
            double prev_u = 0.0, prev_h = 0.0;
            for (int size : {32, 64, 128}) {
                const DomainShape s = DomainShape::constant(n, l, make_grid(n, size));
                const Field2D u = solve_torsion(s, size);
                double eu = 0.0, eh = 0.0;
                for (int i = 0; i <= size; ++i)
                    for (int k = 0; k < size; ++k) eu = std::max(eu, std::abs(u.at(k, i) - tp.u_diff(l, u.t[i])));
                for (double h : neumann_trace(s, u)) eh = std::max(eh, std::abs(h - tp.u_prime(l)));
                if (size > 32) {
                    EXPECT_GE(test::order(prev_u, eu), 1.8) << "N=" << n << " l=" << l;
                    EXPECT_GE(test::order(prev_h, eh), 1.8) << "N=" << n << " l=" << l;
                }
                prev_u = eu;
                prev_h = eh;
            }
        }
}

TEST(Pde, BandProfileEqualsTheTwoDimensionalSolve) {
    for (int n : {2, 3, 4}) {
        const DomainShape s = DomainShape::constant(n, 0.9, make_grid(n, 24));
        const Field2D u = solve_torsion(s, 40);
        const BandProfile b = solve_band(n, 0.9, 40);
        for (int i = 0; i <= 40; ++i)
            for (int k = 0; k < 24; ++k) EXPECT_NEAR(u.at(k, i), b.u[i], 1e-12);
        for (double h : evaluate_H(s, 40)) EXPECT_NEAR(h, b.neumann, 1e-11);
    }
}

TEST(Pde, ConstantsAreAnnihilatedOnAnyShape) {
    for (int n : {2, 3, 4}) {
        const DiscreteOperator op = assemble(wavy(n, 20), 20);
        const Eigen::VectorXd r = op.interior * Eigen::VectorXd::Ones(op.interior.cols()) + op.boundary * Eigen::VectorXd::Ones(op.n_alpha);
        EXPECT_LE(r.cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Pde, StraightBandOperatorIsSymmetric) {
    const DiscreteOperator op = assemble(DomainShape::constant(3, 0.7, make_grid(3, 16)), 16);
    const Eigen::SparseMatrix<double> diff = op.interior - Eigen::SparseMatrix<double>(op.interior.transpose());
    EXPECT_LE(diff.norm(), 1e-13 * op.interior.norm());
}

TEST(Pde, PulledBackBandPotentialIsReproducedOnWavyDomains) {
    // U(th) solves -Laplace U = 1 on the whole sphere band, whatever the shape;
    // its conormal derivative at th = phi is cos(phi) u~'(phi) / sqrt(cos^2 phi + phi'^2).
    for (int n : {2, 3}) {
        const TorsionProfile tp(n);
        double prev_u = 0.0, prev_h = 0.0;
        for (int size : {32, 64, 128}) {
            const DomainShape s = wavy(n, size);
            const DiscreteOperator op = assemble(s, size);
            Eigen::VectorXd g(size);
            for (int k = 0; k < size; ++k) g(k) = band_potential(tp, s.phi_nodes()[k]);
            const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(op.volume.data(), op.volume.size()) - op.boundary * g;
            const Eigen::VectorXd x = detail::sparse_solve(op.interior, rhs, size, size);
            Field2D u(s.grid().alpha, op.t);
            double eu = 0.0;
            for (int i = 0; i <= size; ++i)
                for (int k = 0; k < size; ++k) {
                    u.at(k, i) = i < size ? x(op.index(k, i)) : g(k);
                    eu = std::max(eu, std::abs(u.at(k, i) - band_potential(tp, s.phi_nodes()[k] * op.t[i])));
                }
            const auto h = neumann_trace(s, u);
            double eh = 0.0;
            for (int k = 0; k < size; ++k) {
                const double p = s.phi_nodes()[k], dp = s.dphi_nodes()[k], c = std::cos(p);
                eh = std::max(eh, std::abs(h[k] - c * tp.u_prime(p) / std::sqrt(c * c + dp * dp)));
            }
            if (size > 32) {
                EXPECT_GE(test::order(prev_u, eu), 1.8) << "N=" << n << " size=" << size;
                EXPECT_GE(test::order(prev_h, eh), 1.7) << "N=" << n << " size=" << size;
            }
            prev_u = eu;
            prev_h = eh;
        }
    }
}

TEST(Pde, MaximumPrinciple) {
    for (int n : {2, 3}) {
        const DomainShape s = wavy(n, 24);
        const Field2D u = solve_torsion(s, 24);
        for (int i = 0; i < 24; ++i)
            for (int k = 0; k < 24; ++k) EXPECT_GT(u.at(k, i), 0.0);
        for (int k = 0; k < 24; ++k) EXPECT_EQ(u.at(k, 24), 0.0);
        for (double h : neumann_trace(s, u)) EXPECT_LT(h, 0.0);
    }
}

TEST(Pde, LinearizedOperatorActsDiagonallyOnHarmonics) {
    for (int n : {2, 3}) {
        for (int j = 0; j <= 3; ++j) {
            const double l = 0.5;
            const double sig = sigma(SpectralCurve(n, j), l);
            double prev = 0.0;
            for (int size : {32, 64, 128}) {
                const AxisGrid g = make_grid(n, size);
                const HarmonicBasis b(n, j);
                const auto y = b.sample(g, j);
                const auto r = solve_linearized(n, y, l, g, size);
                double err = 0.0;
                for (int k = 0; k < size; ++k) err = std::max(err, std::abs(r.l_omega[k] - sig * y[k]));
                if (j == 0) {
                    // Constants lift to constants, which the scheme reproduces exactly.
                    EXPECT_LE(err, 1e-10);
                } else if (size > 32) {
                    EXPECT_GE(test::order(prev, err), 1.8) << "N=" << n << " j=" << j;
                }
                prev = err;
            }
        }
    }
}

TEST(Pde, GridGuards) {
    EXPECT_THROW(solve_torsion(DomainShape::constant(2, 0.5, make_grid(2, 8)), 32), DomainError);
    EXPECT_THROW(solve_torsion(DomainShape::constant(2, 0.5, make_grid(2, 16)), 8), DomainError);
    EXPECT_THROW(solve_band(2, 1.6, 32), DomainError);
    EXPECT_THROW(solve_linearized(2, std::vector<double>(5, 0.0), 0.5, make_grid(2, 16), 16), DomainError);
}
