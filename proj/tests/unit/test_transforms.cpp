#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "hyperradon/transforms.hpp"

using namespace hyperradon;

namespace {

QuadratureSpec tight(double tol = 1e-12)
{
    QuadratureSpec s;
    s.target_rel_tol = tol;
    s.sphere_nodes = 4;
    return s;
}

} // namespace

TEST(Transforms, ZeroProbe)
{
    const SpaceParams sp(FieldKind::real, 0, 4);
    QuadratureSpec q = tight();
    q.abs_tol = 1e-300;
    const QuadResult r = radon(zero_function(sp), sp, 0.3, q);
    EXPECT_EQ(r.value, 0.0);
}

TEST(Transforms, TOfLiesOnHyperboloid)
{
    for (double z : {0.1, 0.5, 0.9}) {
        for (double v : {0.5 * (z - 1 / z) + 1e-3, 0.0, 1.0, 5.0}) {
            EXPECT_NEAR(t_of(z, v).form(), -1.0, 1e-13);
        }
    }
    EXPECT_THROW(t_of(0.5, -5.0), Error);
}

TEST(Transforms, DirectMatchesReduced)
{
    const SpaceParams sp(FieldKind::real, 0, 2);
    const TestFunction f = gaussian_radial(sp);
    for (double s : {-1.0, 0.0, 0.5, 1.5}) {
        const QuadResult a = radon_direct(f, sp, s, tight(1e-10));
        const QuadResult b = radon_reduced(f, sp, s, tight(1e-12));
        EXPECT_LE(std::abs(a.value - b.value), 3 * (a.err + b.err) + 1e-12 * std::abs(b.value)) << "s=" << s;
    }
}

TEST(Transforms, DirectMatchesReducedComplex)
{
    // Three box dimensions (tail in C, imaginary w) under the coarse direct rule.
    const SpaceParams sp(FieldKind::complex, 0, 1);
    const TestFunction f = gaussian_radial(sp);
    QuadratureSpec direct = tight(1e-3);
    direct.nodes_per_dim = 4;
    direct.panel_width = 1;
    direct.truncation_radius = 5;
    direct.doubling_rounds = 1;
    for (double s : {0.0, 1.0}) {
        const QuadResult a = radon_direct(f, sp, s, direct);
        const QuadResult b = radon_reduced(f, sp, s, tight(1e-12));
        EXPECT_LE(std::abs(a.value - b.value), 3 * (a.err + b.err)) << "s=" << s;
        EXPECT_LE(std::abs(a.value - b.value), 1e-3 * std::abs(b.value)) << "s=" << s;
    }
}

// On (R,0,2) with the gaussian exp(-beta sinh^2 t) the reduced integral
// folds to Af(s) + Af(-s) = 2 pi sqrt(pi / beta).
TEST(Transforms, GaussianR02Pairing)
{
    const SpaceParams sp(FieldKind::real, 0, 2);
    for (double beta : {1.0, 2.5}) {
        const TestFunction f = gaussian_radial(sp, beta);
        for (double s : {0.0, 0.4, 1.3, 2.0}) {
            const double sum = abel(f, sp, s, tight()).value + abel(f, sp, -s, tight()).value;
            EXPECT_NEAR(sum, 2 * std::numbers::pi * std::sqrt(std::numbers::pi / beta), 1e-9) << s;
        }
    }
}

TEST(Transforms, SymmetricOnEqualRank)
{
    const SpaceParams sp(FieldKind::real, 1, 1);
    const TestFunction f = gaussian_radial(sp);
    QuadratureSpec q = tight(1e-10);
    for (double s : {0.3, 1.2}) {
        const QuadResult a = abel(f, sp, s, q), b = abel(f, sp, -s, q);
        EXPECT_LE(std::abs(a.value - b.value), 3 * (a.err + b.err) + 1e-10 * std::abs(a.value));
    }
}

TEST(Transforms, BumpSupportEqualRank)
{
    const SpaceParams sp(FieldKind::real, 1, 1);
    const TestFunction f = bump_radial(sp, 1.0);
    QuadratureSpec q = tight(1e-10);
    q.abs_tol = 1e-14;
    q.panel_width = 0.25;
    EXPECT_GT(abel(f, sp, 0.5, q).value, 1e-3);
    EXPECT_EQ(abel(f, sp, 1.1, q).value, 0.0);
    EXPECT_EQ(abel(f, sp, -1.5, q).value, 0.0);
}

TEST(Transforms, ReducedNeedsExpansionRegime)
{
    const SpaceParams sp(FieldKind::real, 1, 1);
    try {
        radon_reduced(gaussian_radial(sp), sp, 0.0, tight());
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), errc::incompatible);
    }
    EXPECT_THROW(radon(gaussian_radial(SpaceParams(FieldKind::real, 0, 3)), sp, 0.0, tight()), Error);
}

TEST(Transforms, FOfZIdentity)
{
    const SpaceParams sp(FieldKind::real, 0, 4);
    const TestFunction f = gaussian_radial(sp);
    const QuadratureSpec q = tight(1e-10);
    for (double s : {0.5, 2.0}) {
        const QuadResult F = f_of_z(f, sp, std::exp(-s), q);
        const QuadResult R = radon_reduced(f, sp, s, q);
        EXPECT_NEAR(F.value * std::exp(-sp.d() * s), R.value, 1e-8 * std::abs(R.value)) << s;
    }
}

TEST(Transforms, GHomogeneityAndSymmetry)
{
    const SpaceParams sp(FieldKind::real, 1, 3);
    const TestFunction f = gaussian_radial(sp);
    const GIntegrator G(f, sp, tight(1e-11));
    const int degree = sp.d() * sp.p + sp.d() - 1;
    const GPoint t{0.3, -1.2, 0.4};
    const double g0 = G(t).value;
    ASSERT_GT(std::abs(g0), 0.0);
    // Larger a widens the integrand past the truncation box.
    for (double a : {0.5, 1.5}) {
        EXPECT_NEAR(G(GPoint{a * t.t1, a * t.t2, a * t.t3}).value, std::pow(a, degree) * g0, 1e-8 * std::abs(g0));
    }
    EXPECT_NEAR(G(GPoint{t.t1, -t.t2, t.t3}).value, g0, 1e-9 * std::abs(g0));
    EXPECT_NEAR(G(GPoint{-t.t1, t.t2, -t.t3}).value, g0, 1e-9 * std::abs(g0));
    EXPECT_THROW(G(GPoint{2.0, 0.1, 0.1}), Error);
}

TEST(Transforms, XOperator)
{
    const SpaceParams sp(FieldKind::real, 0, 4);
    const TestFunction f = angular_modulated(sp);
    const GIntegrator G(f, sp, tight(1e-11));
    const GPoint t{-0.7, -1.0, -0.7};
    EXPECT_EQ(x_operator_g(G, t, 0), G(t).value);
    const double xp = x_operator_g(G, t, 1);
    const double xm = x_operator_g(G, GPoint{0.7, -1.0, 0.7}, 1);
    EXPECT_LE(std::abs(xp + xm), 1e-6 * std::abs(G(t).value));
    EXPECT_THROW(x_operator_g(G, t, 4), Error);
    EXPECT_THROW(x_operator_g(G, t, -1), Error);
}

TEST(Transforms, TaylorParity)
{
    const SpaceParams sp(FieldKind::real, 0, 4);
    const TestFunction f = gaussian_radial(sp);
    const TaylorResult t = taylor_coeffs(f, sp, tight(1e-11), 2);
    ASSERT_EQ(t.c.size(), 2u);
    EXPECT_GT(t.c[0], 0.0);
    EXPECT_LE(std::abs(t.c[1]), 1e-6 * t.c[0]);
    // Remainder after c0: e^{ds} Rf(s) - c0 = O(e^{-2s}).
    for (double s : {3.0, 4.0}) {
        const double F = std::exp(sp.d() * s) * radon_reduced(f, sp, s, tight()).value;
        EXPECT_LE(std::abs(F - t.c[0]), 50 * t.c[0] * std::exp(-2 * s) + 10 * t.err[0]) << s;
    }
    EXPECT_THROW(taylor_coeffs(f, SpaceParams(FieldKind::real, 0, 1), tight()), Error);
}

TEST(Transforms, ApplyLAnnihilatesRoots)
{
    const OperatorD D = build_D(SpaceParams(FieldKind::complex, 0, 4)); // xi^3 - 10 xi^2 + 9 xi
    const double h = 0.05;
    const int n = 201;
    for (double lam : {0.0, 1.0, -1.0, 3.0, -3.0}) {
        std::vector<double> af(n), err(n, 0.0);
        for (int i = 0; i < n; ++i) {
            af[i] = std::exp(lam * (-5.0 + i * h)) + 2.0;
        }
        const LApplied l = apply_L(af, err, h, D, 1.0);
        EXPECT_EQ(l.margin, 12);
        EXPECT_FALSE(l.adf[11].has_value());
        EXPECT_TRUE(l.adf[12].has_value());
        double mx = 0.0;
        for (double a : af) {
            mx = std::max(mx, std::abs(a));
        }
        for (int i = l.margin; i < n - l.margin; ++i) {
            EXPECT_LE(std::abs(*l.adf[i]), 1e-5 * mx) << "lambda=" << lam << " i=" << i;
        }
    }
}

TEST(Transforms, ApplyLEigenvalue)
{
    const OperatorD D = build_D(SpaceParams(FieldKind::real, 0, 4)); // xi^2 - xi
    const double h = 0.05;
    const int n = 121;
    std::vector<double> af(n), err(n, 0.0);
    for (int i = 0; i < n; ++i) {
        af[i] = std::exp(-2.0 * (-3.0 + i * h));
    }
    const LApplied l = apply_L(af, err, h, D, 1.0);
    for (int i = l.margin; i < n - l.margin; ++i) {
        EXPECT_NEAR(*l.adf[i], D.L(4.0) * af[i], 1e-9 * D.L(4.0) * af[i]);
    }
}

TEST(Transforms, ApplyLGridTooCoarse)
{
    const OperatorD D = build_D(SpaceParams(FieldKind::real, 0, 4));
    std::vector<double> af(100, 1.0), err(100, 1e-6);
    try {
        apply_L(af, err, 0.01, D);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), errc::grid_too_coarse);
    }
    EXPECT_NO_THROW(apply_L(af, std::vector<double>(100, 0.0), 0.01, D));
}

TEST(Transforms, GridDeterministic)
{
    const SpaceParams sp(FieldKind::real, 0, 4);
    const TestFunction f = gaussian_radial(sp);
    const GridSpec g{-1.0, 1.0, 0.25};
    QuadratureSpec q = tight(1e-10);
    const TransformGrid a = compute_grid(f, sp, g, q);
    q.threads = 3;
    const TransformGrid b = compute_grid(f, sp, g, q);
    ASSERT_EQ(a.size(), 9u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a.af[i], b.af[i]);
        EXPECT_EQ(a.s[i], g.at(i));
        EXPECT_NEAR(a.af[i], std::exp(rho_1(sp) * a.s[i]) * a.rf[i], 1e-15 * std::abs(a.af[i]));
    }
}
