#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace curvem;
using namespace curvem::testing;

namespace {

struct Structure {
    double asymmetry = 0.0;  // |K - K^T| / |K|
    double min_eig = 0.0;    // relative to the largest
    int zero_eigs = 0;
    double constant_residual = 0.0;
    double consistency = 0.0; // |D^T K D - a(p, q)| / |a|
};

template <int Dim>
Structure structure(const LocalSpace<Dim>& s, const StiffnessOptions& o)
{
    const ElementMatrices em = local_stiffness(s, o);
    const MatrixXd& k = em.stiffness;
    Structure r;
    const double kn = k.norm();
    r.asymmetry = (k - k.transpose()).norm() / kn;
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (k + k.transpose()));
    const double lmax = eig.eigenvalues().maxCoeff();
    r.min_eig = eig.eigenvalues().minCoeff() / lmax;
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) r.zero_eigs += eig.eigenvalues()(i) < 1e-10 * lmax;
    r.constant_residual = (k * s.D.col(0)).norm() / (kn * s.D.col(0).norm());
    const MatrixXd a = polynomial_energy(s);
    r.consistency = (s.D.transpose() * k * s.D - a).cwiseAbs().maxCoeff() / a.cwiseAbs().maxCoeff();
    return r;
}

std::vector<StiffnessOptions> all_options()
{
    std::vector<StiffnessOptions> out;
    for (auto c : {Consistency::pinabla, Consistency::grad_l2})
        for (auto s : {Stabilization::dofi, Stabilization::boundary_l2, Stabilization::tangential}) {
            StiffnessOptions o;
            o.consistency = c;
            o.stabilization = s;
            out.push_back(o);
        }
    return out;
}

} // namespace

TEST(LocalStiffness, StructureOnStraightPolygons)
{
    std::mt19937 rng(31);
    std::vector<std::vector<Vec2>> polys{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 0}, {3, 0}, {3, 2}, {1.5, 4}, {0, 2}}};
    for (int i = 0; i < 6; ++i) polys.push_back(random_polygon(rng));
    const Mesh2D vor = voronoi_mesh();
    for (int e = 0; e < 4; ++e) {
        std::vector<Vec2> p;
        for (int v : vor.elements[static_cast<std::size_t>(e)].v) p.push_back(vor.vertices[static_cast<std::size_t>(v)]);
        polys.push_back(p);
    }
    for (const auto& p : polys)
        for (int k = 1; k <= 3; ++k) {
            const LocalSpace<2> s = polygon_space(p, k);
            for (const auto& o : all_options()) {
                const Structure r = structure(s, o);
                SCOPED_TRACE(std::string(to_string(o.consistency)) + "/" + to_string(o.stabilization) + " k=" + std::to_string(k));
                EXPECT_LE(r.asymmetry, 1e-12);
                EXPECT_GE(r.min_eig, -1e-12);
                EXPECT_EQ(r.zero_eigs, 1);
                EXPECT_LE(r.constant_residual, 1e-11);
                EXPECT_LE(r.consistency, 1e-9);
            }
        }
}

TEST(LocalStiffness, DofiScaleInvariance)
{
    const std::vector<Vec2> p{{0, 0}, {1, 0.1}, {1.2, 0.9}, {0.4, 1.3}, {-0.2, 0.6}};
    for (double lambda : {1e-3, 0.25, 40.0})
        for (int k = 1; k <= 3; ++k) {
            std::vector<Vec2> q;
            for (const auto& x : p) q.push_back(lambda * x + Vec2(2.0, -1.0));
            const MatrixXd a = local_stiffness(polygon_space(p, k)).stiffness;
            const MatrixXd b = local_stiffness(polygon_space(q, k)).stiffness;
            EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-8 * a.cwiseAbs().maxCoeff());
        }
}

TEST(LocalStiffness, StabilizationVanishesOnPolynomials)
{
    const LocalSpace<2> s = polygon_space({{0, 0}, {2, 0}, {2.5, 1}, {1, 2}, {-0.5, 1}}, 3);
    for (const auto& o : all_options()) {
        const ElementMatrices em = local_stiffness(s, o);
        EXPECT_LE((em.stability * s.D).cwiseAbs().maxCoeff(), 1e-10 * em.stability.cwiseAbs().maxCoeff());
    }
}

TEST(LocalLoad, DegreeOneVertexAverage)
{
    const LocalSpace<2> s = polygon_space({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, 1);
    const VectorXd l = local_load<2>(s, [](const Vec2&) { return 1.0; });
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(l(i), 0.25, 1e-15);
}

TEST(LocalLoad, ConstantTestFunctionGivesIntegral)
{
    std::mt19937 rng(4);
    for (int k = 1; k <= 3; ++k) {
        const LocalSpace<2> s = polygon_space(random_polygon(rng), k);
        auto f = [](const Vec2& x) { return 1.0 + x.x() - 2.0 * x.y() * x.y(); };
        const double exact = s.volume.integrate(f);
        // the dofs of the constant 1 are the first column of D
        const double l = s.D.col(0).dot(local_load<2>(s, f));
        EXPECT_NEAR(l, exact, 1e-10 * std::max(1.0, std::abs(exact)));
    }
}

TEST(DofCounts, StraightPolygon)
{
    for (int k = 1; k <= 4; ++k) {
        const LocalSpace<2> s = polygon_space({{0, 0}, {2, 0}, {2.5, 1}, {1, 2}, {-0.5, 1}}, k);
        EXPECT_EQ(s.count(DofKind::vertex), 5);
        EXPECT_EQ(s.count(DofKind::edge_moment), 5 * (k - 1));
        EXPECT_EQ(s.count(DofKind::interior), k * (k - 1) / 2);
    }
}

TEST(ComputeErrors, InterpolantOfPolynomialIsExact)
{
    const Mesh2D m = voronoi_mesh();
    for (int k = 1; k <= 3; ++k) {
        const Discretization<2> d = build_discretization(m, k);
        const auto p = make_problem<2>("poly" + std::to_string(k));
        const ErrorNorms e = compute_errors(d, d.interpolate(p.u), p.u, p.grad);
        EXPECT_LT(e.l2, 1e-10);
        EXPECT_LT(e.h1, 1e-10);
    }
}

TEST(ComputeErrors, ZeroAgainstZero)
{
    const Discretization<2> d = build_discretization(square_mesh(3), 2);
    const ErrorNorms e = compute_errors<2>(d, VectorXd::Zero(d.size()), [](const Vec2&) { return 0.0; },
                                          [](const Vec2&) { return Vec2::Zero().eval(); });
    EXPECT_EQ(e.l2, 0.0);
    EXPECT_EQ(e.h1, 0.0);
}

TEST(PatchTest, StraightMeshesAllVariants)
{
    for (const std::string mesh : {"gen:square:4", "gen:voronoi:32"})
        for (int k = 1; k <= 3; ++k)
            for (const auto& o : all_options()) {
                RunConfig c;
                c.mesh = mesh;
                c.degree = k;
                c.stiffness = o;
                c.solver = SolverMethod::dense;
                const RunReport r = run_solve(c);
                SCOPED_TRACE(mesh + " k=" + std::to_string(k) + " " + to_string(o.consistency) + "/" + to_string(o.stabilization));
                EXPECT_LE(r.max_dof_error, 1e-9);
                EXPECT_TRUE(r.patch_pass);
            }
}

TEST(PatchTest, NeumannSquare)
{
    for (int k = 1; k <= 3; ++k) {
        RunConfig c;
        c.mesh = "gen:voronoi:32";
        c.degree = k;
        c.bc = BoundaryKind::neumann;
        const RunReport r = run_solve(c);
        EXPECT_LE(r.max_dof_error, 1e-9) << "k=" << k;
        ASSERT_TRUE(r.compatibility_residual.has_value());
        EXPECT_LE(*r.compatibility_residual, 1e-10);
    }
}

TEST(Solve, LinearDirichletExample)
{
    RunConfig c;
    c.mesh = "gen:square:4";
    c.problem = "x";
    const RunReport r = run_solve(c);
    EXPECT_LT(r.l2, 1e-10);
    EXPECT_TRUE(r.patch_pass);
}

TEST(Convergence, DegreeOneSquareH1Rate)
{
    RunConfig c;
    c.problem = "sin";
    c.mesh = "gen:square:8";
    const RunReport a = run_solve(c);
    c.mesh = "gen:square:16";
    const RunReport b = run_solve(c);
    const double rate = std::log(a.h1 / b.h1) / std::log(a.h / b.h);
    EXPECT_GE(rate, 0.8);
    EXPECT_LE(rate, 1.2);
}

TEST(Neumann, PinChoiceChangesOnlyAConstant)
{
    const Mesh2D m = square_mesh(6, BoundaryKind::neumann);
    const auto p = make_problem<2>("sin");
    Discretization<2> d = build_discretization(m, 2);
    const Assembled<2> a = assemble(d, p.data(), {});
    const VectorXd x0 = solve(a.system).x;
    Discretization<2> d2 = d;
    d2.pin = d.vertex_dof[20];
    const VectorXd x1 = solve(assemble(d2, p.data(), {}).system).x;
    EXPECT_GT((x1 - x0).norm(), 1e-3);
    EXPECT_LE(h1_seminorm_difference(d, x0, x1), 1e-8);
    // at k = 2 every dof is a value or an average, so all shift alike
    const VectorXd diff = x1 - x0;
    EXPECT_LE((diff.array() - diff(0)).abs().maxCoeff(), 1e-8);
}

TEST(Neumann, IncompatibleDataRejected)
{
    RunConfig c;
    c.mesh = "gen:square:4";
    c.bc = BoundaryKind::neumann;
    c.neumann_offset = 0.5;
    try {
        run_solve(c);
        FAIL() << "expected an InputError";
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("residual"), std::string::npos);
    }
}
