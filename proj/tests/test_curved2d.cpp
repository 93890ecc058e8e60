#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace curvem;
using namespace curvem::testing;

namespace {

Piece2D quarter_arc()
{
    return Piece2D::curved(std::make_shared<const Curve>(Curve::arc({0, 0}, 1.0, 0.0, pi / 2)), false);
}

bool has_curve(const Mesh2D& m, std::size_t e)
{
    const auto& c = m.elements[e].edge_curve;
    return std::any_of(c.begin(), c.end(), [](int x) { return x >= 0; });
}

void expect_structure(const LocalSpace<2>& s, const StiffnessOptions& o, const std::string& what)
{
    SCOPED_TRACE(what);
    const ElementMatrices em = local_stiffness(s, o);
    const MatrixXd& k = em.stiffness;
    EXPECT_LE((k - k.transpose()).norm(), 1e-12 * k.norm());
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(k);
    const double lmax = eig.eigenvalues().maxCoeff();
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-12 * lmax);
    int zeros = 0;
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) zeros += eig.eigenvalues()(i) < 1e-10 * lmax;
    EXPECT_EQ(zeros, 1);
    EXPECT_LE((k * s.D.col(0)).norm(), 1e-11 * k.norm() * s.D.col(0).norm());
    const MatrixXd a = polynomial_energy(s);
    EXPECT_LE((s.D.transpose() * k * s.D - a).cwiseAbs().maxCoeff(), 1e-9 * a.cwiseAbs().maxCoeff());
}

} // namespace

TEST(GeneratorSet, CountsForDegreesOneToThree)
{
    EXPECT_EQ(generator_count(1), 1);
    EXPECT_EQ(generator_count(2), 4);
    EXPECT_EQ(generator_count(3), 8);
    const Piece2D eta = quarter_arc();
    for (int k = 1; k <= 4; ++k) EXPECT_EQ(build_generator_set(eta, k, Vec2(1, 1)).size(), (k + 1) * (k + 2) / 2 - 2);
}

TEST(GeneratorSet, TriangleOnTheBulgeSide)
{
    const GeneratorSet g = build_generator_set(quarter_arc(), 1, Vec2(1, 1));
    // equilateral on the chord, apex beyond the arc
    EXPECT_NEAR((g.apex - g.a).norm(), std::sqrt(2.0), 1e-14);
    EXPECT_NEAR((g.apex - g.b).norm(), std::sqrt(2.0), 1e-14);
    EXPECT_GT(g.apex.x() + g.apex.y(), 1.0);
}

TEST(Midwife, ReproducesPolynomialTraces)
{
    const Piece2D eta = quarter_arc();
    for (int k = 1; k <= 3; ++k) {
        const auto q = make_problem<2>("poly" + std::to_string(k));
        const GeneratorSet g = build_generator_set(eta, k, Vec2(1, 1));
        VectorXd v(g.size());
        for (int i = 0; i < g.size(); ++i) v(i) = q.u(g.points[static_cast<std::size_t>(i)]);
        const MidwifeTrace tr = midwife_trace(g, v, q.u(g.a), q.u(g.b), eta);
        for (double t : {0.0, 0.13, 0.5, 0.77, 1.0}) EXPECT_NEAR(tr(t), q.u(eta.point(t)), 1e-12);
    }
}

TEST(Midwife, StraightEdgeIgnoresApexAtDegreeOne)
{
    const Piece2D eta = Piece2D::curved(std::make_shared<const Curve>(Curve::polyline({{0, 0}, {2, 1}})), false);
    const GeneratorSet g = build_generator_set(eta, 1, Vec2(1, -2));
    VectorXd v(1);
    v << 0.3;
    const MidwifeTrace a = midwife_trace(g, v, 1.0, -2.0, eta);
    v << 17.0;
    const MidwifeTrace b = midwife_trace(g, v, 1.0, -2.0, eta);
    for (double t : {0.1, 0.5, 0.9}) EXPECT_NEAR(a(t), b(t), 1e-12);
}

TEST(Midwife, ArcTraceSeesTheApex)
{
    const Piece2D eta = quarter_arc();
    const GeneratorSet g = build_generator_set(eta, 1, Vec2(1, 1));
    const double delta = 0.01;
    VectorXd v(1);
    v << 0.0;
    const double t0 = midwife_trace(g, v, 0.0, 0.0, eta)(0.5);
    v << delta;
    const double t1 = midwife_trace(g, v, 0.0, 0.0, eta)(0.5);
    // barycentric weight of the apex at the arc midpoint
    const Vec2 x = eta.point(0.5);
    Eigen::Matrix3d m;
    m << g.a.x(), g.b.x(), g.apex.x(), g.a.y(), g.b.y(), g.apex.y(), 1, 1, 1;
    const Eigen::Vector3d lam = m.inverse() * Eigen::Vector3d(x.x(), x.y(), 1.0);
    EXPECT_GT(std::abs(lam(2)), 0.05);
    EXPECT_NEAR(t1 - t0, lam(2) * delta, 1e-14);
}

TEST(Generators, QuarterDiskElementStiffness)
{
    const Mesh2D m = quarter_disk_triangle(BoundaryKind::neumann);
    const Discretization<2> d = build_discretization(m, 1, CurvedStrategy::generators);
    const LocalSpace<2>& s = d.spaces[0];
    EXPECT_EQ(s.count(DofKind::generator), 1);
    const ElementMatrices em = local_stiffness(s);
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(em.stiffness);
    EXPECT_GT(eig.eigenvalues()(1), 1e-8 * eig.eigenvalues().maxCoeff());
    EXPECT_GE(eig.eigenvalues()(0), -1e-12 * eig.eigenvalues().maxCoeff());
    EXPECT_LE((em.stiffness * s.D.col(0)).cwiseAbs().maxCoeff(), 1e-11 * em.stiffness.norm());
    // stabilization vanishes on generator representations of polynomials
    EXPECT_LE((em.stability * s.D).cwiseAbs().maxCoeff(), 1e-11);
}

TEST(Subset, TriangleLikeCountsAreSquare)
{
    for (int k = 1; k <= 4; ++k) {
        EXPECT_EQ(2 * k + 1 + k * (k - 1) / 2, (k + 1) * (k + 2) / 2);
        for (auto st : {CurvedStrategy::subset, CurvedStrategy::subset_mfd}) {
            const Discretization<2> d = build_discretization(quarter_disk_triangle(BoundaryKind::neumann), k, st);
            const LocalSpace<2>& s = d.spaces[0];
            EXPECT_EQ(s.count(DofKind::vertex) + s.count(DofKind::edge_moment) + s.count(DofKind::interior), poly_dim(2, k));
            EXPECT_EQ(s.size(), poly_dim(2, k));
        }
    }
}

TEST(Subset, TriangleLikeAffineIsExactEverywhere)
{
    const Discretization<2> d = build_discretization(quarter_disk_triangle(BoundaryKind::neumann), 1, CurvedStrategy::subset);
    auto u = [](const Vec2& x) { return 0.5 - 2.0 * x.x() + 3.0 * x.y(); };
    const VectorXd c = compute_pinabla(d.spaces[0]) * d.interpolate(u);
    const auto b = d.spaces[0].basis();
    for (const auto& piece : d.spaces[0].pieces)
        for (std::size_t q = 0; q < piece.size(); ++q) {
            EXPECT_NEAR(b.evaluate(c, piece.points[q]), u(piece.points[q]), 1e-13);
            const VectorXd trace = piece.values.row(static_cast<Eigen::Index>(q)).transpose();
            EXPECT_NEAR(trace.dot(d.interpolate(u)), u(piece.points[q]), 1e-13);
        }
}

TEST(Subset, DependentEndpointConstraintsRejected)
{
    MatrixXd rows(3, 3);
    rows << 1, 0, 0, 1, 0, 0, 0, 1, 0;
    EXPECT_THROW(subset_operator(rows, {0, 1, 2}, 3, {0, 1}, false), ProjectorError);
    EXPECT_THROW(subset_operator(rows, {0, 1, 2}, 3, {}, true), ProjectorError);
}

TEST(CurvedStiffness, StructureForEveryStrategy)
{
    for (auto bc : {BoundaryKind::dirichlet, BoundaryKind::neumann})
        for (auto st : {CurvedStrategy::generators, CurvedStrategy::subset, CurvedStrategy::subset_mfd}) {
            DiskMeshOptions o;
            o.n = 2;
            o.arc_bc = bc;
            const Mesh2D m = disk_mesh(o);
            for (int k = 1; k <= 3; ++k) {
                const Discretization<2> d = build_discretization(m, k, st);
                for (std::size_t e = 0; e < m.elements.size(); ++e) {
                    if (!has_curve(m, e)) continue;
                    for (auto c : {Consistency::pinabla, Consistency::grad_l2})
                        for (auto sb : {Stabilization::dofi, Stabilization::boundary_l2, Stabilization::tangential}) {
                            StiffnessOptions so;
                            so.consistency = c;
                            so.stabilization = sb;
                            expect_structure(d.spaces[e], so,
                                             std::string(to_string(bc)) + " " + to_string(st) + " k=" + std::to_string(k) + " " +
                                                 to_string(c) + "/" + to_string(sb));
                        }
                }
            }
        }
}

TEST(Ribbon, ElementStructure)
{
    const Mesh2D m = ribbon_mesh({});
    for (int k = 1; k <= 3; ++k) {
        const Discretization<2> d = build_discretization(m, k, CurvedStrategy::ribbon);
        for (const auto& s : d.spaces) expect_structure(s, {}, "ribbon k=" + std::to_string(k) + " element " + std::to_string(s.element));
    }
}

TEST(Ribbon, DirichletRejected)
{
    RunConfig c;
    c.mesh = "gen:quarter-ribbon:2";
    c.bc = BoundaryKind::dirichlet;
    c.strategy = CurvedStrategy::ribbon;
    EXPECT_THROW(run_solve(c), InputError);
}

TEST(PatchTest, QuarterDiskEveryStrategy)
{
    for (int k = 1; k <= 3; ++k) {
        for (auto bc : {BoundaryKind::dirichlet, BoundaryKind::neumann})
            for (auto st : {CurvedStrategy::generators, CurvedStrategy::subset, CurvedStrategy::subset_mfd}) {
                RunConfig c;
                c.mesh = "gen:quarter-disk:3";
                c.degree = k;
                c.bc = bc;
                c.strategy = st;
                c.solver = SolverMethod::dense;
                const RunReport r = run_solve(c);
                EXPECT_LE(r.max_dof_error, 1e-8) << to_string(bc) << ' ' << to_string(st) << " k=" << k;
            }
        RunConfig c;
        c.mesh = "gen:quarter-ribbon:3";
        c.degree = k;
        c.strategy = CurvedStrategy::ribbon;
        c.solver = SolverMethod::dense;
        EXPECT_LE(run_solve(c).max_dof_error, 1e-8) << "ribbon k=" << k;
    }
}

TEST(PatchTest, FullDiskGenerators)
{
    RunConfig c;
    c.mesh = "gen:disk:2";
    c.degree = 2;
    c.problem = "harmonic2";
    const RunReport r = run_solve(c);
    EXPECT_LE(r.max_dof_error, 1e-9);
}

TEST(Babuska, CurvedBeatsChordOnTheDisk)
{
    RunConfig c;
    c.degree = 2;
    c.problem = "exp";
    c.mesh = "gen:disk:6";
    const RunReport curved = run_solve(c);
    c.mesh = "gen:disk-chord:6";
    const RunReport chord = run_solve(c);
    EXPECT_LE(curved.h1, chord.h1);
}

TEST(Babuska, ChordMeshSharesTheVertices)
{
    DiskMeshOptions o;
    o.n = 3;
    o.quarter = false;
    const Mesh2D a = disk_mesh(o);
    o.chords = true;
    const Mesh2D b = disk_mesh(o);
    ASSERT_EQ(a.vertices.size(), b.vertices.size());
    for (std::size_t i = 0; i < a.vertices.size(); ++i) EXPECT_EQ(a.vertices[i], b.vertices[i]);
    EXPECT_TRUE(b.curves.size() > 0 && !b.facet_source.empty());
}
