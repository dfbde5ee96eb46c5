#include <random>

#include <gtest/gtest.h>

#include "hyperradon/geometry.hpp"

using namespace hyperradon;

namespace {

std::vector<SpaceParams> grid_spaces()
{
    std::vector<SpaceParams> out;
    for (FieldKind f : {FieldKind::real, FieldKind::complex, FieldKind::quaternion}) {
        for (auto [p, q] : {std::pair{0, 1}, {0, 2}, {1, 1}, {1, 3}, {2, 1}, {0, 4}, {2, 3}}) {
            out.emplace_back(f, p, q);
        }
    }
    return out;
}

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double scale)
{
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<double> v(n);
    for (double& x : v) {
        x = u(rng);
    }
    return v;
}

NilpotentParam random_param(std::mt19937_64& rng, const SpaceParams& sp, double scale)
{
    NilpotentParam n = NilpotentParam::zero(sp);
    n.free = random_vec(rng, n.free.size(), scale);
    n.tail = random_vec(rng, n.tail.size(), scale);
    n.w = random_vec(rng, n.w.size(), scale);
    return n;
}

Eigen::VectorXd as_eigen(const AmbientVector& x)
{
    Eigen::VectorXd v(x.layout().size());
    for (int i = 0; i < v.size(); ++i) {
        v(i) = x[i];
    }
    return v;
}

} // namespace

TEST(Geometry, HermitianSelfExamples)
{
    const SpaceParams sp(FieldKind::complex, 1, 2);
    const Layout L(sp);
    const AmbientVector x0 = AmbientVector::base_point(L);
    EXPECT_EQ(hermitian_self(x0), -1.0);
    EXPECT_EQ(hermitian_self(x0.scaled(2.0)), -4.0);
    const double t = 0.8;
    const AmbientVector at = orbit_point(sp, t, NilpotentParam::zero(sp));
    EXPECT_NEAR(at[L.real_index(0)], std::sinh(t), 1e-15);
    EXPECT_NEAR(at[L.real_index(L.last())], std::cosh(t), 1e-15);
    EXPECT_NEAR(hermitian_self(at), -1.0, 1e-14);
}

TEST(Geometry, LayoutRealPartLast)
{
    const Layout L(SpaceParams(FieldKind::quaternion, 1, 2));
    EXPECT_EQ(L.size(), 20);
    EXPECT_EQ(L.positive_size(), 8);
    EXPECT_EQ(L.real_index(0), 3);
    EXPECT_EQ(L.real_index(L.last()), 19);
}

TEST(Geometry, OrbitPointIdentity)
{
    for (const SpaceParams& sp : grid_spaces()) {
        const AmbientVector x = orbit_point(sp, 0.0, NilpotentParam::zero(sp));
        const AmbientVector x0 = AmbientVector::base_point(Layout(sp));
        for (int i = 0; i < x.layout().size(); ++i) {
            EXPECT_EQ(x[i], x0[i]) << sp.label();
        }
    }
}

TEST(Geometry, OrbitPointOnHyperboloid)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> us(-10.0, 10.0);
    for (const SpaceParams& sp : grid_spaces()) {
        for (int k = 0; k < 200; ++k) {
            const double s = us(rng);
            const NilpotentParam n = random_param(rng, sp, 10.0 / std::sqrt(NilpotentParam::box_dim(sp) + 1.0));
            const AmbientVector x = orbit_point(sp, s, n);
            // The coordinates reach e^{s}|n|^2, so the test is relative to |x|^2.
            const double size = positive_norm2(x.layout(), x.coords()) + negative_norm2(x.layout(), x.coords());
            EXPECT_LE(std::abs(hermitian_self(x) + 1.0), 1e-12 * std::max(1.0, size)) << sp.label();
        }
    }
}

TEST(Geometry, OrbitPointMatchesMatrixOracle)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> us(-3.0, 3.0);
    for (const SpaceParams& sp : grid_spaces()) {
        const Layout L(sp);
        const Eigen::VectorXd x0 = as_eigen(AmbientVector::base_point(L));
        for (int k = 0; k < 1000; ++k) {
            const double s = us(rng);
            const NilpotentParam n = random_param(rng, sp, 2.0);
            const Eigen::VectorXd want = matrix_oracle(sp, s, n) * x0;
            const Eigen::VectorXd got = as_eigen(orbit_point(sp, s, n));
            ASSERT_LE((want - got).norm(), 1e-10 * want.norm()) << sp.label() << " s=" << s;
        }
    }
}

TEST(Geometry, NilpotentOrderThree)
{
    std::mt19937_64 rng(3);
    for (const SpaceParams& sp : grid_spaces()) {
        const Eigen::MatrixXd N = nilpotent_matrix(sp, random_param(rng, sp, 1.0));
        const Eigen::MatrixXd N2 = N * N;
        if (sp.p != sp.q) {
            EXPECT_GT(N2.norm(), 1e-6) << sp.label(); // the tail enters N^2
        }
        EXPECT_LE((N2 * N).norm(), 1e-12 * (1 + N.norm() * N2.norm())) << sp.label();
    }
}

TEST(Geometry, ASMatrixCorners)
{
    const SpaceParams sp(FieldKind::complex, 1, 1);
    const Eigen::MatrixXd M = matrix_oracle(sp, 0.7, NilpotentParam::zero(sp));
    const int last = 3 * 2;
    EXPECT_NEAR(M(0, 0), std::cosh(0.7), 1e-15);
    EXPECT_NEAR(M(1, 1), std::cosh(0.7), 1e-15);
    EXPECT_NEAR(M(0, last), std::sinh(0.7), 1e-15);
    EXPECT_NEAR(M(last + 1, 1), std::sinh(0.7), 1e-15);
    EXPECT_EQ(M(2, 2), 1.0);
}

TEST(Geometry, OraclePreservesForm)
{
    std::mt19937_64 rng(5);
    for (const SpaceParams& sp : grid_spaces()) {
        const Layout L(sp);
        const Eigen::MatrixXd M = matrix_oracle(sp, 0.4, random_param(rng, sp, 1.0));
        for (int k = 0; k < 5; ++k) {
            const std::vector<double> x = random_vec(rng, L.size(), 1.0), y = random_vec(rng, L.size(), 1.0);
            Eigen::Map<const Eigen::VectorXd> ex(x.data(), L.size()), ey(y.data(), L.size());
            const Eigen::VectorXd mx = M * ex, my = M * ey;
            std::vector<double> a(L.d), b(L.d);
            hermitian_form(L, x, y, a);
            hermitian_form(L, std::span<const double>(mx.data(), L.size()),
                           std::span<const double>(my.data(), L.size()), b);
            for (int i = 0; i < L.d; ++i) {
                EXPECT_NEAR(a[i], b[i], 1e-11 * (1 + M.norm() * M.norm())) << sp.label();
            }
        }
    }
}

TEST(Geometry, RadialCoordinate)
{
    const SpaceParams sp(FieldKind::real, 1, 2);
    const Layout L(sp);
    EXPECT_EQ(radial_coordinate(AmbientVector::base_point(L)), 0.0);
    for (double t : {-2.0, -0.3, 0.5, 3.0}) {
        EXPECT_NEAR(radial_coordinate(orbit_point(sp, t, NilpotentParam::zero(sp))), std::abs(t), 1e-12);
    }
    AmbientVector spacelike(L);
    spacelike[0] = 1.0;
    EXPECT_THROW(radial_coordinate(spacelike), Error);
}

TEST(Geometry, RadialCoordinateOfOrbitPoints)
{
    std::mt19937_64 rng(13);
    for (const SpaceParams& sp : grid_spaces()) {
        for (int k = 0; k < 20; ++k) {
            const double s = 1.5 * (k % 5) - 3.0;
            const AmbientVector x = orbit_point(sp, s, random_param(rng, sp, 1.0));
            const double c = std::sqrt(negative_norm2(x.layout(), x.coords()));
            EXPECT_NEAR(std::cosh(radial_coordinate(x)), c, 1e-10 * c) << sp.label();
            EXPECT_GE(std::cosh(radial_coordinate(x)), 1.0);
        }
    }
}

TEST(Geometry, RadialCoordinateBlockRotationInvariant)
{
    std::mt19937_64 rng(17);
    for (const SpaceParams& sp : grid_spaces()) {
        const Layout L(sp);
        const AmbientVector x = orbit_point(sp, 0.9, random_param(rng, sp, 1.0));
        const int np = L.positive_size(), nn = L.size() - np;
        const Eigen::MatrixXd A = Eigen::MatrixXd::NullaryExpr(np, np, [&] { return random_vec(rng, 1, 1.0)[0]; });
        const Eigen::MatrixXd B = Eigen::MatrixXd::NullaryExpr(nn, nn, [&] { return random_vec(rng, 1, 1.0)[0]; });
        const Eigen::MatrixXd QA = Eigen::HouseholderQR<Eigen::MatrixXd>(A).householderQ();
        const Eigen::MatrixXd QB = Eigen::HouseholderQR<Eigen::MatrixXd>(B).householderQ();
        const Eigen::VectorXd v = as_eigen(x);
        Eigen::VectorXd r(L.size());
        r.head(np) = QA * v.head(np);
        r.tail(nn) = QB * v.tail(nn);
        const AmbientVector y(L, std::vector<double>(r.data(), r.data() + r.size()));
        EXPECT_NEAR(radial_coordinate(y), radial_coordinate(x), 1e-12) << sp.label();
    }
}

TEST(Geometry, Normalize)
{
    const SpaceParams sp(FieldKind::complex, 0, 2);
    const Layout L(sp);
    const AmbientVector x0 = AmbientVector::base_point(L);
    const AmbientVector y = normalize(x0.scaled(3.0));
    for (int i = 0; i < L.size(); ++i) {
        EXPECT_NEAR(y[i], x0[i], 1e-15);
    }
    const AmbientVector z = orbit_point(sp, 1.3, NilpotentParam::zero(sp)).scaled(0.2);
    const AmbientVector nz = normalize(z), nnz = normalize(nz);
    EXPECT_NEAR(hermitian_self(nz), -1.0, 1e-14);
    for (int i = 0; i < L.size(); ++i) {
        EXPECT_NEAR(nnz[i], nz[i], 1e-15);
    }
    EXPECT_THROW(normalize(AmbientVector(L)), Error);
}

TEST(Geometry, DimensionMismatch)
{
    const SpaceParams sp(FieldKind::real, 1, 3);
    NilpotentParam n = NilpotentParam::zero(sp);
    n.tail.push_back(0.0);
    EXPECT_THROW(orbit_point(sp, 0.0, n), Error);
    EXPECT_EQ(NilpotentParam::box_dim(sp), 3);
    EXPECT_EQ(NilpotentParam::box_dim(SpaceParams(FieldKind::complex, 0, 2)), 5);
}
