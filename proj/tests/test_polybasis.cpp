#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace curvem;
using namespace curvem::testing;

TEST(ScaledMonomialBasis, CountsMatchDimensionFormulas)
{
    for (int s = 0; s <= 4; ++s) {
        EXPECT_EQ(ScaledMonomialBasis<1>(Vec<1>::Zero(), 1.0, s).size(), s + 1);
        EXPECT_EQ(ScaledMonomialBasis<2>(Vec2::Zero(), 1.0, s).size(), (s + 1) * (s + 2) / 2);
        EXPECT_EQ(ScaledMonomialBasis<3>(Vec3::Zero(), 1.0, s).size(), (s * s * s + 6 * s * s + 11 * s + 6) / 6);
        EXPECT_EQ(poly_dim(3, s), (s * s * s + 6 * s * s + 11 * s + 6) / 6);
    }
    EXPECT_EQ(ScaledMonomialBasis<3>(Vec3::Zero(), 1.0, 2).size(), 10);
    EXPECT_EQ(poly_dim(2, -1), 0);
}

TEST(ScaledMonomialBasis, GradedLexOrder)
{
    const auto idx = multi_indices<2>(2);
    const std::vector<MultiIndex<2>> expected{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
    EXPECT_EQ(idx, expected);
}

TEST(ScaledMonomialBasis, ConstantFirstAndGradientZero)
{
    const ScaledMonomialBasis<2> b(Vec2(0.3, -1.0), 0.7, 3);
    const Vec2 x(1.1, 0.4);
    EXPECT_EQ(b.values(x)(0), 1.0);
    EXPECT_EQ(b.gradients(x).col(0).norm(), 0.0);
}

TEST(ScaledMonomialBasis, LaplacianOfXiSquared)
{
    const double h = 0.37;
    const ScaledMonomialBasis<2> b(Vec2(0.2, 0.1), h, 2);
    const int i = b.index_of({2, 0});
    const MatrixXd lap = b.laplacian_map();
    ASSERT_EQ(lap.rows(), 1);
    EXPECT_NEAR(lap(0, i), 2.0 / (h * h), 1e-12);
    for (int j = 0; j < b.size(); ++j)
        if (j != i && j != b.index_of({0, 2})) EXPECT_EQ(lap(0, j), 0.0);
}

TEST(ScaledMonomialBasis, DerivativeMapMatchesFiniteDifferences)
{
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const ScaledMonomialBasis<3> b(Vec3(0.1, 0.2, 0.3), 0.8, 3);
    VectorXd c(b.size());
    for (int i = 0; i < c.size(); ++i) c(i) = u(rng);
    const auto lower = ScaledMonomialBasis<3>(b.center(), b.diameter(), 2);
    const Vec3 x(0.4, -0.2, 0.5);
    for (int d = 0; d < 3; ++d) {
        Vec3 e = Vec3::Zero();
        e(d) = 1e-6;
        const double fd = (b.evaluate(c, x + e) - b.evaluate(c, x - e)) / 2e-6;
        EXPECT_NEAR(lower.evaluate(b.derivative_map(d) * c, x), fd, 1e-7);
        EXPECT_NEAR(b.evaluate_gradient(c, x)(d), fd, 1e-7);
    }
}

TEST(L2Orthonormalize, UnitSquareDegreeZero)
{
    const auto r = Region2D::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}).domain_rule(2);
    const ScaledMonomialBasis<2> b(Vec2(0.5, 0.5), std::sqrt(2.0), 0);
    const auto ob = l2_orthonormalize(b, r);
    EXPECT_NEAR(ob.transform(0, 0), 1.0, 1e-14);
}

TEST(L2Orthonormalize, UnitSquareDegreeOneOrthogonal)
{
    const auto r = Region2D::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}).domain_rule(4);
    const ScaledMonomialBasis<2> b(Vec2(0.5, 0.5), std::sqrt(2.0), 1);
    const auto ob = l2_orthonormalize(b, r);
    const MatrixXd g = ob.transform * b.gram(r) * ob.transform.transpose();
    EXPECT_LE((g - MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(L2Orthonormalize, RandomPentagonsRecomputedGram)
{
    std::mt19937 rng(5);
    for (int t = 0; t < 20; ++t) {
        auto p = random_polygon(rng);
        const Region2D reg = Region2D::polygon(p);
        for (int s = 1; s <= 4; ++s) {
            const ScaledMonomialBasis<2> b(reg.centroid(), reg.diameter(), s);
            const auto ob = l2_orthonormalize(b, reg.domain_rule(2 * s));
            // independent check on a finer rule
            const auto fine = reg.domain_rule(2 * s + 4);
            MatrixXd g = MatrixXd::Zero(b.size(), b.size());
            for (std::size_t q = 0; q < fine.size(); ++q) {
                const VectorXd m = ob.transform * b.values(fine.points[q]);
                g.noalias() += fine.weights[q] * m * m.transpose();
            }
            EXPECT_LE((g - MatrixXd::Identity(b.size(), b.size())).cwiseAbs().maxCoeff(), 1e-10);
        }
    }
}

TEST(L2Orthonormalize, IllConditionedRejected)
{
    MatrixXd g = MatrixXd::Identity(2, 2);
    g(1, 1) = 1e-16;
    EXPECT_THROW(l2_orthonormalize(g), ProjectorError);
}

TEST(L2Project, IdentityOnMonomials)
{
    const Region2D reg = Region2D::polygon({{0, 0}, {2, 0}, {2.5, 1}, {1, 2}, {-0.5, 1}});
    const ScaledMonomialBasis<2> b(reg.centroid(), reg.diameter(), 3);
    const auto r = reg.domain_rule(6);
    const auto ob = l2_orthonormalize(b, r);
    const MatrixXd g = b.gram(r);
    for (int j = 0; j < b.size(); ++j) {
        const VectorXd c = l2_project(ob, g.col(j));
        EXPECT_LE((c - VectorXd::Unit(b.size(), j)).cwiseAbs().maxCoeff(), 1e-10);
    }
    EXPECT_EQ(l2_project(ob, VectorXd::Zero(b.size())).norm(), 0.0);
    EXPECT_THROW(l2_project(ob, VectorXd::Zero(3)), ProjectorError);
}

TEST(L2Project, CubicOnSquareResidualOrthogonal)
{
    const Region2D reg = Region2D::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    const ScaledMonomialBasis<2> b(reg.centroid(), reg.diameter(), 1);
    const auto r = reg.domain_rule(6);
    const auto ob = l2_orthonormalize(b, r);
    auto f = [](const Vec2& x) { return x.x() * x.x() * x.x(); };
    VectorXd mom = VectorXd::Zero(b.size());
    for (std::size_t q = 0; q < r.size(); ++q) mom += r.weights[q] * f(r.points[q]) * b.values(r.points[q]);
    const VectorXd c = l2_project(ob, mom);
    VectorXd res = VectorXd::Zero(b.size());
    for (std::size_t q = 0; q < r.size(); ++q)
        res += r.weights[q] * (f(r.points[q]) - b.evaluate(c, r.points[q])) * b.values(r.points[q]);
    EXPECT_LE(res.cwiseAbs().maxCoeff(), 1e-10);
}

TEST(L2Project, RandomPolynomialIdempotence)
{
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 25; ++t) {
        const Region2D reg = Region2D::polygon(random_polygon(rng));
        const int s = 1 + t % 4;
        const ScaledMonomialBasis<2> b(reg.centroid(), reg.diameter(), s);
        const auto r = reg.domain_rule(2 * s);
        const auto ob = l2_orthonormalize(b, r);
        VectorXd c(b.size());
        for (int i = 0; i < c.size(); ++i) c(i) = u(rng);
        const VectorXd once = l2_project(ob, b.gram(r) * c);
        EXPECT_LE((once - c).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(ScaledMonomialBasis, AffineScaleEquivariance)
{
    // the same datum on a translated and scaled element has the same coefficients
    const std::vector<Vec2> p{{0, 0}, {1, 0.2}, {0.8, 1}, {-0.1, 0.7}};
    const double lambda = 37.0;
    const Vec2 shift(5.0, -3.0);
    std::vector<Vec2> q;
    for (const auto& x : p) q.push_back(lambda * x + shift);
    const Region2D a = Region2D::polygon(p), b = Region2D::polygon(q);
    const ScaledMonomialBasis<2> ba(a.centroid(), a.diameter(), 3), bb(b.centroid(), b.diameter(), 3);
    auto datum_a = [&](const Vec2& x) { return ba.values(x)(7); };
    auto datum_b = [&](const Vec2& x) { return bb.values(x)(7); };
    const auto ra = a.domain_rule(6), rb = b.domain_rule(6);
    VectorXd ma = VectorXd::Zero(10), mb = VectorXd::Zero(10);
    for (std::size_t i = 0; i < ra.size(); ++i) ma += ra.weights[i] * datum_a(ra.points[i]) * ba.values(ra.points[i]) / a.area();
    for (std::size_t i = 0; i < rb.size(); ++i) mb += rb.weights[i] * datum_b(rb.points[i]) * bb.values(rb.points[i]) / b.area();
    const VectorXd ca = l2_project(l2_orthonormalize(ba, ra), ma * a.area());
    const VectorXd cb = l2_project(l2_orthonormalize(bb, rb), mb * b.area());
    EXPECT_LE((ca - cb).cwiseAbs().maxCoeff(), 1e-9);
}
