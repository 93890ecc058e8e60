#include "test_support.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace curvem;
using namespace curvem::testing;

namespace {

// int_P x^a y^b by the boundary integral of x^(a+1) y^b / (a+1) dy, exact on
// each straight edge with a high Gauss rule.
double green_moment(const std::vector<Vec2>& poly, int a, int b)
{
    const auto& g = gauss_legendre(12);
    double s = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2 p = poly[i], q = poly[(i + 1) % poly.size()];
        for (std::size_t j = 0; j < g.nodes.size(); ++j) {
            const Vec2 x = p + g.nodes[j] * (q - p);
            s += g.weights[j] * std::pow(x.x(), a + 1) * std::pow(x.y(), b) / (a + 1) * (q.y() - p.y());
        }
    }
    return s;
}

double shoelace(const std::vector<Vec2>& p)
{
    double a = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) a += cross2(p[i], p[(i + 1) % p.size()]);
    return 0.5 * a;
}

} // namespace

TEST(ElementMeasures, UnitSquare)
{
    const Mesh2D m = square_mesh(1);
    const auto em = element_measures(m, 0);
    EXPECT_NEAR(em.measure, 1.0, 1e-14);
    EXPECT_NEAR((em.centroid - Vec2(0.5, 0.5)).norm(), 0.0, 1e-14);
    EXPECT_NEAR(em.diameter, std::sqrt(2.0), 1e-14);
}

TEST(ElementMeasures, UnitCube)
{
    CubeMeshOptions o;
    o.n = 1;
    const auto em = element_measures(cube_mesh(o), 0);
    EXPECT_NEAR(em.measure, 1.0, 1e-13);
    EXPECT_NEAR((em.centroid - Vec3(0.5, 0.5, 0.5)).norm(), 0.0, 1e-13);
    EXPECT_NEAR(em.diameter, std::sqrt(3.0), 1e-14);
}

TEST(ElementMeasures, QuarterDiskAreaFromGreen)
{
    const auto em = element_measures(quarter_disk_triangle(BoundaryKind::dirichlet), 0);
    EXPECT_NEAR(em.measure, pi / 4, 1e-10);
    // centroid of the quarter disk: 4/(3 pi) on both axes
    EXPECT_NEAR(em.centroid.x(), 4.0 / (3.0 * pi), 1e-10);
    EXPECT_NEAR(em.diameter, std::sqrt(2.0), 1e-12);
}

TEST(ElementMeasures, DegenerateElementRejected)
{
    Mesh2D m;
    m.add_vertex({0, 0});
    m.add_vertex({1, 0});
    m.add_vertex({2, 0});
    m.add_element({0, 1, 2});
    EXPECT_THROW(element_measures(m, 0), GeometryError);
}

TEST(DomainQuadrature, SquareX2Y)
{
    const auto r = Region2D::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}).domain_rule(2);
    EXPECT_NEAR(r.integrate([](const Vec2& x) { return x.x() * x.x() * x.y(); }), 1.0 / 6.0, 1e-13);
    EXPECT_NEAR(r.total_weight(), 1.0, 1e-14);
}

TEST(DomainQuadrature, PentagonShoelace)
{
    const std::vector<Vec2> p{{0, 0}, {3, 0}, {3, 2}, {1.5, 4}, {0, 2}};
    const auto r = Region2D::polygon(p).domain_rule(0);
    EXPECT_NEAR(r.total_weight(), shoelace(p), 1e-12 * shoelace(p));
}

TEST(DomainQuadrature, QuarterDisk)
{
    const Mesh2D m = quarter_disk_triangle(BoundaryKind::dirichlet);
    const auto r = element_region(m, 0).domain_rule(4);
    EXPECT_NEAR(r.total_weight(), pi / 4, 1e-8);
    // int x dA over the quarter disk = 1/3
    EXPECT_NEAR(r.integrate([](const Vec2& x) { return x.x(); }), 1.0 / 3.0, 1e-10);
}

TEST(DomainQuadrature, NonStarShapedFanRejected)
{
    // a "C" shape seen from a point outside its kernel
    const auto r = Region2D::polygon({{0, 0}, {3, 0}, {3, 1}, {1, 1}, {1, 2}, {3, 2}, {3, 3}, {0, 3}});
    EXPECT_THROW(r.fan_rule(Vec2(2.5, 1.5), 2), GeometryError);
}

TEST(DomainQuadrature, RandomPolygonsExactOnMonomials)
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const auto p = random_polygon(rng);
        const Region2D reg = Region2D::polygon(p);
        for (int order = 0; order <= 6; ++order) {
            const auto r = reg.domain_rule(order);
            EXPECT_NEAR(r.total_weight(), reg.area(), 1e-12 * reg.area());
            for (int a = 0; a <= order; ++a)
                for (int b = 0; a + b <= order; ++b) {
                    const double exact = green_moment(p, a, b);
                    const double q = r.integrate([&](const Vec2& x) { return std::pow(x.x(), a) * std::pow(x.y(), b); });
                    double scale = 0.0;
                    for (const auto& x : p) scale = std::max(scale, x.norm());
                    EXPECT_NEAR(q, exact, 1e-12 * reg.area() * std::pow(scale, a + b) + 1e-15);
                }
        }
    }
}

TEST(BoundaryQuadrature, UnitSegment)
{
    for (int order : {0, 3, 9}) {
        const auto r = Region2D::piece_rule(Piece2D::segment({0, 0}, {1, 0}), order);
        double s = 0.0;
        for (double w : r.weights) s += w;
        EXPECT_NEAR(s, 1.0, 1e-15);
    }
}

TEST(BoundaryQuadrature, QuarterCircle)
{
    auto c = std::make_shared<const Curve>(Curve::arc({0, 0}, 1.0, 0.0, pi / 2));
    const auto r = Region2D::piece_rule(Piece2D::curved(c, false), 8);
    double len = 0.0, ix = 0.0;
    for (std::size_t q = 0; q < r.size(); ++q) {
        len += r.weights[q];
        ix += r.weights[q] * r.points[q].x();
    }
    EXPECT_NEAR(len, pi / 2, 1e-10);
    EXPECT_NEAR(ix, 1.0, 1e-9);
}

TEST(Curve, EndpointsAndInvalid)
{
    const Curve c = Curve::arc({1, 2}, 2.0, 0.0, pi);
    EXPECT_NEAR((c.point(0.0) - Vec2(3, 2)).norm(), 0.0, 1e-14);
    EXPECT_NEAR((c.point(1.0) - Vec2(-1, 2)).norm(), 0.0, 1e-14);
    EXPECT_NEAR(c.length(), 2.0 * pi, 1e-12);
    EXPECT_THROW(Curve::arc({0, 0}, -1.0, 0.0, 1.0), Error);
    EXPECT_THROW(Curve::arc({0, 0}, 1.0, 0.5, 0.5), Error);
}

TEST(CurvedArea, GreenMatchesSubdivision)
{
    const Mesh2D m = disk_mesh({});
    for (std::size_t e = 0; e < m.elements.size(); ++e) {
        const Region2D r = element_region(m, static_cast<int>(e));
        const auto q = r.domain_rule(12);
        EXPECT_NEAR(q.total_weight(), r.area(), 1e-8 * r.area());
    }
}

TEST(ValidateMesh, UniformSquarePasses)
{
    const auto rep = validate_mesh(square_mesh(4));
    EXPECT_TRUE(rep.pass);
    EXPECT_NEAR(rep.min_edge_ratio, 0.25 / (0.25 * std::sqrt(2.0)), 1e-12);
}

TEST(ValidateMesh, FlippedSharedEdgeListed)
{
    Mesh2D m;
    for (Vec2 x : {Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1), Vec2(2, 0), Vec2(2, 1)}) m.add_vertex(x);
    m.add_element({0, 1, 2, 3});
    m.add_element({5, 4, 1, 2}); // clockwise: edge 1->2 traversed twice
    m.set_all_tags(BoundaryKind::dirichlet);
    const auto rep = validate_mesh(m);
    EXPECT_FALSE(rep.pass);
    ASSERT_FALSE(rep.conformity.empty());
    EXPECT_NE(rep.conformity.front().find("same direction"), std::string::npos);
}

TEST(ValidateMesh, SliverQuadFails)
{
    Mesh2D m;
    for (Vec2 x : {Vec2(0, 0), Vec2(1, 0), Vec2(1, 1e-4), Vec2(0, 1e-4)}) m.add_vertex(x);
    m.add_element({0, 1, 2, 3});
    m.set_all_tags(BoundaryKind::dirichlet);
    const auto rep = validate_mesh(m);
    EXPECT_FALSE(rep.pass);
    EXPECT_LT(rep.min_edge_ratio, 0.05);
}

TEST(ValidateMesh, GeneratedMeshesPass)
{
    EXPECT_TRUE(validate_mesh(voronoi_mesh()).pass);
    EXPECT_TRUE(validate_mesh(disk_mesh({})).pass);
    EXPECT_TRUE(validate_mesh(cube_mesh({})).pass);
    EXPECT_TRUE(validate_mesh(sphere_octant_mesh({})).pass);
}

TEST(Ribbon, CircleCounts)
{
    const DiskDomain dom{Vec2::Zero(), 1.0};
    const Ribbon r = build_ribbon(dom, 0.0, 2.0 * pi, 16, 0.2);
    EXPECT_EQ(r.triangles.size(), 32u);
    EXPECT_EQ(r.inner.size(), 16u);
    for (const auto& x : r.inner) EXPECT_LT(x.norm(), 1.0);
    for (const auto& x : r.outer) EXPECT_GT(x.norm(), 1.0);
    // outer chords stay outside the circle
    for (std::size_t i = 0; i < r.outer.size(); ++i) EXPECT_GT((0.5 * (r.outer[i] + r.outer[(i + 1) % 16])).norm(), 1.0);
}

TEST(Ribbon, EveryClippedRegionNonEmpty)
{
    const Ribbon r = build_ribbon({Vec2::Zero(), 1.0}, 0.0, 2.0 * pi, 16, 0.2);
    for (const auto& t : r.triangles) EXPECT_GT(t.clipped.area(), 0.0);
}

TEST(Ribbon, TilesTheDisk)
{
    const Ribbon r = build_ribbon({Vec2::Zero(), 1.0}, 0.0, 2.0 * pi, 16, 0.2);
    double a = std::abs(shoelace(r.inner));
    for (const auto& t : r.triangles) a += t.clipped.area();
    EXPECT_NEAR(a, pi, 1e-10 * pi);
}

TEST(Ribbon, ThickRibbonRejected)
{
    EXPECT_THROW(build_ribbon({Vec2::Zero(), 1.0}, 0.0, 2.0 * pi, 8, 2.0), GeometryError);
}

TEST(Geometry3D, OctantVolumeAndSphereArea)
{
    const Mesh3D m = sphere_octant_mesh({4, 1.0});
    double vol = 0.0;
    for (std::size_t e = 0; e < m.elements.size(); ++e) vol += element_measures(m, static_cast<int>(e), 6).measure;
    EXPECT_NEAR(vol, pi / 6.0, 1e-10);
    const Topology3D t = build_topology(m);
    double area = 0.0;
    for (std::size_t f = 0; f < m.faces.size(); ++f)
        if (m.is_curved(static_cast<int>(f))) area += face_geometry(m, t, static_cast<int>(f), 6).rule.total_weight();
    EXPECT_NEAR(area, pi / 2.0, 1e-10);
}

TEST(Geometry3D, ConeRuleExactOnPolynomials)
{
    const Mesh3D m = random_affine_hex(3);
    const Topology3D t = build_topology(m);
    std::vector<FaceGeometry> faces;
    for (std::size_t f = 0; f < m.faces.size(); ++f) faces.push_back(face_geometry(m, t, static_cast<int>(f), 4));
    const auto g = element_geometry(m, 0, faces, 4);
    // affine image of the unit cube: int x_i = det * (A e/2 + shift)_i
    CubeMeshOptions o;
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) o.map(i, j) += 0.3 * u(rng);
    if (o.map.determinant() < 0.0) o.map.col(0) *= -1.0;
    const double det = o.map.determinant();
    EXPECT_NEAR(g.volume, det, 1e-12);
    EXPECT_NEAR((g.centroid - o.map * Vec3(0.5, 0.5, 0.5)).norm(), 0.0, 1e-12);
    const Vec3 c = o.map * Vec3(0.5, 0.5, 0.5);
    EXPECT_NEAR(g.rule.integrate([&](const Vec3& x) { return (x - c).x(); }), 0.0, 1e-12);
}

TEST(Geometry3D, OpenElementRejected)
{
    Mesh3D m = cube_mesh({});
    m.elements[0].faces.pop_back();
    const auto t = build_topology(m);
    ASSERT_FALSE(t.conformity.empty());
    EXPECT_NE(t.conformity.front().find("boundary not closed"), std::string::npos) << t.conformity.front();
    EXPECT_THROW(build_discretization(m, 1), InputError);
}

TEST(MeshIo, RoundTrip2D)
{
    const Mesh2D m = disk_mesh({});
    std::ostringstream a;
    write_mesh(a, m);
    std::istringstream in(a.str());
    const Mesh2D back = std::get<Mesh2D>(read_mesh(in));
    std::ostringstream b;
    write_mesh(b, back);
    EXPECT_EQ(a.str(), b.str());
    EXPECT_EQ(back.elements.size(), m.elements.size());
}

TEST(MeshIo, RoundTrip3D)
{
    const Mesh3D m = sphere_octant_mesh({});
    std::ostringstream a;
    write_mesh(a, m);
    std::istringstream in(a.str());
    const Mesh3D back = std::get<Mesh3D>(read_mesh(in));
    std::ostringstream b;
    write_mesh(b, back);
    EXPECT_EQ(a.str(), b.str());
}

TEST(MeshIo, RejectsMalformedInput)
{
    auto parse = [](const std::string& s) {
        std::istringstream in(s);
        return read_mesh(in);
    };
    EXPECT_THROW(parse("vemmesh 2\nvertex 0 0 0\npolygon 0 1 2\n"), InputError);
    EXPECT_THROW(parse("vemmesh 2\nvertex 1 0 0\n"), InputError);
    EXPECT_THROW(parse("vemmesh 2\nvertex 0 0 0\nvertex 1 1 0\nvertex 2 0 1\nelem2d 0 0 1.5 2\n"), InputError);
    EXPECT_THROW(parse("vertex 0 0 0\n"), InputError);
    EXPECT_THROW(parse(""), InputError);
    EXPECT_NO_THROW(parse("# comment\nvemmesh 2\nvertex 0 0 0 # origin\n"));
}
