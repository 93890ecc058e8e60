#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace curvem;
using namespace curvem::testing;

namespace {

Mesh3D unit_tetra()
{
    Mesh3D m;
    const int a = m.add_vertex({0, 0, 0}), b = m.add_vertex({1, 0, 0}), c = m.add_vertex({0, 1, 0}), d = m.add_vertex({0, 0, 1});
    m.add_element({m.add_face({a, c, b}), m.add_face({a, b, d}), m.add_face({b, c, d}), m.add_face({a, d, c})});
    m.set_all_tags(BoundaryKind::dirichlet);
    return m;
}

void expect_structure(const LocalSpace<3>& s, const StiffnessOptions& o, const std::string& what)
{
    SCOPED_TRACE(what);
    const MatrixXd k = local_stiffness(s, o).stiffness;
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

TEST(Vem3D, TetraDofCountsMatchPolynomialDimension)
{
    for (int k = 1; k <= 4; ++k) {
        const LocalSpace<3> s = polyhedron_space(unit_tetra(), k);
        EXPECT_EQ(s.count(DofKind::vertex), 4);
        EXPECT_EQ(s.count(DofKind::edge_moment), 6 * (k - 1));
        EXPECT_EQ(s.count(DofKind::face_moment), 4 * k * (k - 1) / 2);
        EXPECT_EQ(s.count(DofKind::interior), (k - 1) * k * (k + 1) / 6);
        // P_{k-2} interior moments and P_{k-2} face moments complete the count
        EXPECT_GE(s.size(), poly_dim(3, k));
    }
}

TEST(Vem3D, CubeDofCounts)
{
    const LocalSpace<3> c = polyhedron_space(random_affine_hex(7), 2);
    EXPECT_EQ(c.count(DofKind::vertex), 8);
    EXPECT_EQ(c.count(DofKind::edge_moment), 12);
    EXPECT_EQ(c.count(DofKind::face_moment), 6);
    EXPECT_EQ(c.count(DofKind::interior), 1);
}

TEST(Vem3D, StructureOnStraightElements)
{
    std::vector<std::pair<std::string, Mesh3D>> ms{{"tetra", unit_tetra()}, {"prism", split_prism()}};
    for (unsigned i = 0; i < 3; ++i) ms.push_back({"hex" + std::to_string(i), random_affine_hex(40 + i)});
    for (const auto& [name, m] : ms)
        for (int k = 1; k <= 2; ++k) {
            const LocalSpace<3> s = polyhedron_space(m, k);
            for (auto c : {Consistency::pinabla, Consistency::grad_l2})
                for (auto sb : {Stabilization::dofi, Stabilization::boundary_l2}) {
                    StiffnessOptions o;
                    o.consistency = c;
                    o.stabilization = sb;
                    expect_structure(s, o, name + " k=" + std::to_string(k) + " " + to_string(c) + "/" + to_string(sb));
                }
        }
}

TEST(Vem3D, StructureOnCurvedElements)
{
    for (auto bc : {BoundaryKind::dirichlet, BoundaryKind::neumann})
        for (int k = 1; k <= 2; ++k) {
            OctantMeshOptions o;
            o.n = 2;
            o.sphere_bc = bc;
            const Discretization<3> d = build_discretization(sphere_octant_mesh(o), k);
            for (const auto& s : d.spaces) expect_structure(s, {}, std::string("octant ") + to_string(bc) + " k=" + std::to_string(k));
            CubeMeshOptions c;
            c.curved_x1 = true;
            c.bc = bc;
            const Discretization<3> dc = build_discretization(cube_mesh(c), k);
            for (const auto& s : dc.spaces) expect_structure(s, {}, std::string("cube-curved ") + to_string(bc) + " k=" + std::to_string(k));
        }
}

TEST(Vem3D, StiffnessScalesLinearly)
{
    const Mesh3D m = random_affine_hex(5);
    Mesh3D big = m;
    const double lambda = 3.5;
    for (auto& v : big.vertices) v *= lambda;
    for (int k = 1; k <= 2; ++k) {
        const MatrixXd a = local_stiffness(polyhedron_space(m, k)).stiffness;
        const MatrixXd b = local_stiffness(polyhedron_space(big, k)).stiffness;
        // vertex values and moments are scale free, so K(lambda x) = lambda K(x)
        EXPECT_LE((b - lambda * a).cwiseAbs().maxCoeff(), 1e-9 * b.cwiseAbs().maxCoeff());
    }
}

TEST(PatchTest3D, EveryMesh)
{
    for (int k = 1; k <= 2; ++k)
        for (const std::string mesh : {"gen:cube:2", "gen:hex:1", "gen:prism:1", "gen:octant:2", "gen:cube-curved:2"})
            for (auto bc : {BoundaryKind::dirichlet, BoundaryKind::neumann}) {
                RunConfig c;
                c.mesh = mesh;
                c.degree = k;
                c.bc = bc;
                c.solver = SolverMethod::dense;
                const RunReport r = run_solve(c);
                EXPECT_EQ(r.dim, 3);
                EXPECT_LE(r.max_dof_error, 1e-8) << mesh << ' ' << to_string(bc) << " k=" << k;
            }
}

TEST(Vem3D, OctantInterpolantOfPolynomialIsExact)
{
    const Discretization<3> d = build_discretization(sphere_octant_mesh({}), 2);
    const auto p = make_problem<3>("poly2");
    const ErrorNorms e = compute_errors(d, d.interpolate(p.u), p.u, p.grad);
    EXPECT_LT(e.l2, 1e-10);
    EXPECT_LT(e.h1, 1e-10);
}

TEST(Convergence3D, DegreeOneCubeH1Rate)
{
    RunConfig c;
    c.problem = "sin";
    c.mesh = "gen:cube:4";
    const RunReport a = run_solve(c);
    c.mesh = "gen:cube:8";
    const RunReport b = run_solve(c);
    const double rate = std::log(a.h1 / b.h1) / std::log(a.h / b.h);
    EXPECT_GE(rate, 0.8);
    EXPECT_LE(rate, 1.3);
}

TEST(Vem3D, TetraLikeSystemIsSquare)
{
    for (int k = 1; k <= 4; ++k) {
        const int rows = (3 * k + 1) + 3 * k * (k - 1) / 2 + k * (k - 1) * (k - 2) / 6;
        EXPECT_EQ(rows, poly_dim(3, k));
        EXPECT_EQ(4 + 3 * (k - 1) + 3 * poly_dim(2, k - 2) + poly_dim(3, k - 3), poly_dim(3, k));
    }
    // the octant cones are tetra-like: three flat faces and one spherical face
    for (int k = 1; k <= 3; ++k) {
        OctantMeshOptions o;
        o.n = 1;
        o.sphere_bc = BoundaryKind::neumann;
        const Discretization<3> d = build_discretization(sphere_octant_mesh(o), k);
        const LocalSpace<3>& s = d.spaces[0];
        EXPECT_EQ(s.count(DofKind::vertex), 4);
        EXPECT_EQ(s.count(DofKind::face_moment), 3 * poly_dim(2, k - 2));
        EXPECT_EQ(s.count(DofKind::interior), poly_dim(3, k - 2));
    }
}
