#include <gtest/gtest.h>

#include "hyperradon/params.hpp"

using namespace hyperradon;

namespace {

SpaceParams R(int p, int q) { return SpaceParams(FieldKind::real, p, q); }
SpaceParams C(int p, int q) { return SpaceParams(FieldKind::complex, p, q); }
SpaceParams H(int p, int q) { return SpaceParams(FieldKind::quaternion, p, q); }

std::vector<double> lambdas_of(const std::vector<SeriesParam>& v)
{
    std::vector<double> out;
    for (const auto& s : v) {
        out.push_back(s.lambda.value());
    }
    return out;
}

} // namespace

TEST(Params, Validation)
{
    EXPECT_THROW(SpaceParams(FieldKind::real, -1, 2), Error);
    EXPECT_THROW(SpaceParams(FieldKind::real, 0, 0), Error);
    EXPECT_THROW(SpaceParams(FieldKind::complex, 0, 2, Variant::real_nonprojective), Error);
    EXPECT_NO_THROW(SpaceParams(FieldKind::real, 0, 6, Variant::real_nonprojective));
    EXPECT_EQ(R(0, 4).d(), 1);
    EXPECT_EQ(C(0, 4).d(), 2);
    EXPECT_EQ(H(0, 4).d(), 4);
}

TEST(Params, RhoQ)
{
    EXPECT_EQ(rho_q(R(0, 4)), 2.0);
    EXPECT_EQ(rho_q(C(1, 2)), 4.0);
    EXPECT_EQ(rho_q(H(0, 1)), 5.0);
    EXPECT_EQ(to_string(rho_q_half(R(0, 1))), "1/2");
}

TEST(Params, Rho1)
{
    EXPECT_EQ(rho_1(R(0, 4)), 2.0);
    EXPECT_EQ(rho_1(C(1, 2)), 2.0);
    EXPECT_EQ(rho_1(R(0, 4)) - 1, 1.0);
}

TEST(Params, RhoIdentities)
{
    for (FieldKind f : {FieldKind::real, FieldKind::complex, FieldKind::quaternion}) {
        for (int p = 0; p <= 6; ++p) {
            for (int q = 1; q <= 6; ++q) {
                const SpaceParams sp(f, p, q);
                const int d = sp.d();
                EXPECT_GE(rho_q(sp), rho_1(sp));
                EXPECT_EQ(rho_q(sp) - rho_1(sp), d * std::min(p, q));
                if (p < q) {
                    EXPECT_EQ(rho_1(sp) - d, d * (q - p) / 2.0 - 1.0);
                }
            }
        }
    }
}

TEST(Params, K0Eps)
{
    auto a = k0_eps(R(0, 4));
    EXPECT_EQ(a.k0, 1);
    EXPECT_EQ(a.eps.value(), 1.0);
    auto b = k0_eps(R(0, 5));
    EXPECT_EQ(b.k0, 2);
    EXPECT_EQ(b.eps.value(), 0.5);
    auto c = k0_eps(C(0, 4));
    EXPECT_EQ(c.k0, 3);
    EXPECT_EQ(c.eps.value(), 1.0);
    EXPECT_THROW(k0_eps(R(1, 1)), Error);
    EXPECT_THROW(k0_eps(R(2, 1)), Error);
    for (int twice = 1; twice <= 30; ++twice) {
        const SpaceParams sp = R(0, twice);
        const auto ke = k0_eps(sp);
        EXPECT_LT(ke.k0, twice / 2.0);
        EXPECT_GE(ke.k0 + 1, twice / 2.0);
        EXPECT_TRUE(ke.eps.twice == 1 || ke.eps.twice == 2);
    }
}

TEST(Params, DiscreteSeriesR04)
{
    const auto ds = discrete_series(R(0, 4), 6.0);
    ASSERT_EQ(ds.size(), 3u);
    EXPECT_EQ(lambdas_of(ds), (std::vector<double>{1, 3, 5}));
    EXPECT_EQ(ds[0].mu.value(), 0.0);
    EXPECT_EQ(ds[1].mu.value(), 2.0);
    EXPECT_EQ(ds[2].mu.value(), 4.0);
    EXPECT_FALSE(ds[0].cuspidal);
    EXPECT_TRUE(ds[0].spherical);
    EXPECT_TRUE(ds[1].cuspidal);
    EXPECT_TRUE(ds[2].cuspidal);
}

TEST(Params, DiscreteSeriesQEqualsOne)
{
    const auto ds = discrete_series(R(0, 1), 8.0);
    EXPECT_EQ(lambdas_of(ds), (std::vector<double>{1.5, 3.5, 5.5, 7.5}));
    for (const auto& s : ds) {
        EXPECT_TRUE(s.cuspidal);
        EXPECT_FALSE(s.spherical);
    }
}

TEST(Params, DiscreteSeriesNonprojective)
{
    const SpaceParams sp(FieldKind::real, 0, 6, Variant::real_nonprojective);
    std::vector<double> nc;
    for (const auto& s : discrete_series(sp, 2.0)) {
        if (!s.cuspidal) {
            nc.push_back(s.lambda.value());
        }
    }
    std::sort(nc.rbegin(), nc.rend());
    EXPECT_EQ(nc, (std::vector<double>{2, 1}));
    EXPECT_EQ(noncuspidal(sp), (std::vector<double>{2, 1}));
}

TEST(Params, Noncuspidal)
{
    EXPECT_EQ(noncuspidal(R(0, 4)), (std::vector<double>{1}));
    EXPECT_EQ(noncuspidal(C(0, 4)), (std::vector<double>{3, 1}));
    EXPECT_TRUE(noncuspidal(R(1, 3)).empty());
    EXPECT_EQ(noncuspidal(H(0, 2)), (std::vector<double>{3, 1}));
    EXPECT_TRUE(noncuspidal(R(2, 1)).empty());
}

// Both descriptions of the projective non-cuspidal set, the even mu <= 0
// members of the series and the even-j exponents, agree.
TEST(Params, NoncuspidalDescriptionsAgree)
{
    for (FieldKind f : {FieldKind::real, FieldKind::complex, FieldKind::quaternion}) {
        for (int p = 0; p <= 40; ++p) {
            for (int q = p + 1; q <= p + 40; ++q) {
                const SpaceParams sp(f, p, q);
                if (sp.codim() > 40) {
                    continue;
                }
                std::vector<double> from_series;
                for (const auto& s : discrete_series(sp, 100.0)) {
                    if (!s.cuspidal) {
                        EXPECT_TRUE(s.spherical) << sp.label();
                        from_series.push_back(s.lambda.value());
                    }
                }
                std::sort(from_series.rbegin(), from_series.rend());
                EXPECT_EQ(from_series, noncuspidal(sp)) << sp.label();
            }
        }
    }
}

TEST(Params, BuildD)
{
    EXPECT_EQ(build_D(R(0, 4)).image_poly, (std::vector<double>{0, -1, 1}));
    EXPECT_EQ(build_D(R(1, 3)).image_poly, (std::vector<double>{0, 1}));
    EXPECT_EQ(build_D(R(1, 3)).order(), 0);
    EXPECT_EQ(build_D(C(0, 4)).image_poly, (std::vector<double>{0, 9, -10, 1}));
    EXPECT_THROW(build_D(R(0, 1)), Error);
    EXPECT_THROW(build_D(R(1, 1)), Error);
}

TEST(Params, ImagePolynomialRoots)
{
    for (const SpaceParams& sp : {R(0, 4), C(0, 4), H(0, 3), R(0, 9)}) {
        const OperatorD D = build_D(sp);
        EXPECT_EQ(D.image_poly.size(), D.lambdas.size() + 2);
        EXPECT_EQ(D.L(0.0), 0.0);
        for (double lam : D.lambdas) {
            EXPECT_NEAR(D.L(lam * lam), 0.0, 1e-9);
            EXPECT_GT(lam, 0.0);
        }
        // simple roots: L' does not vanish there
        for (double lam : D.lambdas) {
            const double x = lam * lam, h = 1e-4;
            EXPECT_GT(std::abs(D.L(x + h) - D.L(x - h)), 1e-8);
        }
    }
}
