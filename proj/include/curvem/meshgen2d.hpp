#pragma once

// Built-in 2D meshes: uniform squares, a centroidal Voronoi mesh, quarter and
// full disks with curved boundary edges (or their chord facets) and the
// ribbon-coupled disk.

#include "curvem/curved2d.hpp"
#include "curvem/mesh2d.hpp"

#include <random>

namespace curvem {

namespace detail {

// Vertex index with tolerance-based merging.
class VertexPool {
public:
    VertexPool(Mesh2D& m, double tol) : m_(m), tol_(tol) {}

    int get(const Vec2& x)
    {
        const auto key = std::make_pair(std::llround(x.x() / cell()), std::llround(x.y() / cell()));
        for (long long dx = -1; dx <= 1; ++dx)
            for (long long dy = -1; dy <= 1; ++dy) {
                auto it = grid_.find({key.first + dx, key.second + dy});
                if (it == grid_.end()) continue;
                for (int id : it->second)
                    if ((m_.vertices[static_cast<std::size_t>(id)] - x).norm() <= tol_) return id;
            }
        const int id = m_.add_vertex(x);
        grid_[key].push_back(id);
        return id;
    }

private:
    double cell() const { return 4.0 * tol_; }
    Mesh2D& m_;
    double tol_;
    std::map<std::pair<long long, long long>, std::vector<int>> grid_;
};

inline std::vector<int> dedupe_loop(std::vector<int> v)
{
    std::vector<int> out;
    for (int x : v)
        if (out.empty() || out.back() != x) out.push_back(x);
    while (out.size() > 1 && out.front() == out.back()) out.pop_back();
    return out;
}

} // namespace detail

/// n x n squares on [0,1]^2, all boundary edges tagged `bc`.
inline Mesh2D square_mesh(int n, BoundaryKind bc = BoundaryKind::dirichlet)
{
    if (n < 1) throw InputError("square_mesh: n must be >= 1");
    Mesh2D m;
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) m.add_vertex(Vec2(static_cast<double>(i) / n, static_cast<double>(j) / n));
    auto id = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) m.add_element({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    m.set_all_tags(bc);
    return m;
}

/// Centroidal Voronoi tessellation of [0,1]^2 with `cells` cells, built by
/// Lloyd iterations from seeded random generators.
inline Mesh2D voronoi_mesh(int cells = 32, unsigned seed = 10u, int lloyd_iterations = 60,
                           BoundaryKind bc = BoundaryKind::dirichlet)
{
    if (cells < 2) throw InputError("voronoi_mesh: need at least two cells");
    std::mt19937 rng(seed);
    auto uniform = [&rng]() { return (static_cast<double>(rng()) + 0.5) / 4294967296.0; };
    std::vector<Vec2> sites(static_cast<std::size_t>(cells));
    for (auto& s : sites) s = Vec2(0.05 + 0.9 * uniform(), 0.05 + 0.9 * uniform());
    const std::vector<Vec2> box{Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)};

    auto cell_of = [&](std::size_t i) {
        std::vector<Vec2> poly = box;
        for (std::size_t j = 0; j < sites.size() && poly.size() >= 3; ++j) {
            if (j == i) continue;
            const Vec2 nrm = sites[i] - sites[j];
            poly = detail::clip_halfplane(poly, HalfPlane{nrm, nrm.dot(0.5 * (sites[i] + sites[j]))}, 0.0);
        }
        return poly;
    };

    for (int it = 0; it < lloyd_iterations; ++it)
        for (std::size_t i = 0; i < sites.size(); ++i) sites[i] = Region2D::polygon(cell_of(i)).centroid();

    Mesh2D m;
    detail::VertexPool pool(m, 1e-10);
    for (std::size_t i = 0; i < sites.size(); ++i) {
        std::vector<int> ids;
        for (const auto& x : cell_of(i)) ids.push_back(pool.get(x));
        m.add_element(detail::dedupe_loop(ids));
    }
    // a cell edge may pass through a vertex that a neighbour created: split it
    for (auto& el : m.elements) {
        std::vector<int> v;
        const std::size_t n = el.v.size();
        for (std::size_t i = 0; i < n; ++i) {
            const int a = el.v[i], b = el.v[(i + 1) % n];
            v.push_back(a);
            const Vec2 xa = m.vertices[static_cast<std::size_t>(a)], xb = m.vertices[static_cast<std::size_t>(b)];
            std::vector<std::pair<double, int>> inner;
            for (std::size_t c = 0; c < m.vertices.size(); ++c) {
                if (static_cast<int>(c) == a || static_cast<int>(c) == b) continue;
                const Vec2 x = m.vertices[c];
                const double t = (x - xa).dot(xb - xa) / (xb - xa).squaredNorm();
                if (t > 1e-9 && t < 1 - 1e-9 && std::abs(cross2(xb - xa, x - xa)) < 1e-10 * (xb - xa).norm())
                    inner.emplace_back(t, static_cast<int>(c));
            }
            std::sort(inner.begin(), inner.end());
            for (auto [t, c] : inner) v.push_back(c);
        }
        el.v = v;
        el.edge_curve.assign(v.size(), -1);
    }
    m.set_all_tags(bc);
    return m;
}

struct DiskMeshOptions {
    int n = 2;                 // cells per quarter side of the reference square
    double radius = 1.0;
    bool quarter = true;       // quarter disk in the first quadrant, or full disk
    bool chords = false;       // boundary arcs replaced by straight facets
    BoundaryKind arc_bc = BoundaryKind::dirichlet;
    BoundaryKind axis_bc = BoundaryKind::dirichlet;
};

namespace detail {

// Concentric map of [0,1]^2 onto the quarter disk: squares of side r go to
// arcs of radius r with uniformly spaced angles.
inline Vec2 concentric_quarter(double a, double b, double radius)
{
    if (a == 0.0 && b == 0.0) return Vec2::Zero();
    double r, phi;
    if (a >= b) {
        r = a;
        phi = 0.25 * pi * b / a;
    } else {
        r = b;
        phi = 0.5 * pi - 0.25 * pi * a / b;
    }
    return radius * r * Vec2(std::cos(phi), std::sin(phi));
}

inline Vec2 rotate_quarter(const Vec2& x, int q)
{
    Vec2 y = x;
    for (int i = 0; i < q; ++i) y = Vec2(-y.y(), y.x());
    return y;
}

// Adds the mapped quarter mesh (radius scaled) rotated by q quarter turns.
// Arcs decorate the outer edges unless `straight`; corner cells are split on
// the diagonal so that every element has at most one boundary arc.
inline void add_concentric_quarter(Mesh2D& m, VertexPool& pool, int n, double radius, int q, bool split_corner,
                                   std::vector<std::pair<EdgeKey, int>>* arcs)
{
    auto vid = [&](int i, int j) {
        return pool.get(rotate_quarter(concentric_quarter(static_cast<double>(i) / n, static_cast<double>(j) / n, radius), q));
    };
    auto attach = [&](std::vector<int> v) {
        std::vector<int> curve(v.size(), -1);
        for (std::size_t e = 0; e < v.size(); ++e) {
            const int a = v[e], b = v[(e + 1) % v.size()];
            const Vec2 xa = m.vertices[static_cast<std::size_t>(a)], xb = m.vertices[static_cast<std::size_t>(b)];
            if (std::abs(xa.norm() - radius) < 1e-12 * radius && std::abs(xb.norm() - radius) < 1e-12 * radius && arcs) {
                curve[e] = m.add_curve(Curve::arc_through(Vec2::Zero(), radius, xa, xb));
                arcs->emplace_back(edge_key(a, b), curve[e]);
            }
        }
        m.add_element(std::move(v), std::move(curve));
    };
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const int v00 = vid(i, j), v10 = vid(i + 1, j), v11 = vid(i + 1, j + 1), v01 = vid(i, j + 1);
            if (split_corner && i == n - 1 && j == n - 1) {
                attach({v00, v10, v11});
                attach({v00, v11, v01});
            } else {
                attach({v00, v10, v11, v01});
            }
        }
}

inline void tag_disk_boundary(Mesh2D& m, BoundaryKind arc_bc, BoundaryKind axis_bc, double radius)
{
    const Topology2D t = build_topology(m);
    m.tags.clear();
    for (std::size_t e = 0; e < t.edges.size(); ++e) {
        if (!t.is_boundary(static_cast<int>(e)) || m.ghost_edges.count(t.edges[e])) continue;
        const Vec2 xa = m.vertices[static_cast<std::size_t>(t.edges[e].first)];
        const Vec2 xb = m.vertices[static_cast<std::size_t>(t.edges[e].second)];
        const bool on_circle = std::abs(xa.norm() - radius) < 1e-9 * radius && std::abs(xb.norm() - radius) < 1e-9 * radius;
        m.tags[t.edges[e]] = on_circle ? arc_bc : axis_bc;
    }
}

} // namespace detail

/// Quarter disk {x, y >= 0, |x| <= R} or full disk of radius R from the
/// concentric map of an n x n grid per quadrant. Boundary edges on the circle
/// carry arcs (2n per quadrant) or, with `chords`, straight facets that
/// remember their arc for boundary data.
inline Mesh2D disk_mesh(const DiskMeshOptions& o)
{
    if (o.n < 1) throw InputError("disk_mesh: n must be >= 1");
    if (!(o.radius > 0.0)) throw InputError("disk_mesh: radius must be positive");
    Mesh2D m;
    detail::VertexPool pool(m, 1e-12 * o.radius);
    std::vector<std::pair<EdgeKey, int>> arcs;
    for (int q = 0; q < (o.quarter ? 1 : 4); ++q) detail::add_concentric_quarter(m, pool, o.n, o.radius, q, true, &arcs);
    if (o.chords) {
        for (auto& el : m.elements) el.edge_curve.assign(el.v.size(), -1);
        for (const auto& [key, c] : arcs) m.facet_source[key] = c;
    }
    detail::tag_disk_boundary(m, o.arc_bc, o.axis_bc, o.radius);
    return m;
}

struct RibbonMeshOptions {
    int n = 2;
    double radius = 1.0;
    bool quarter = true;
    double thickness = 0.0; // 0: the chord length of a boundary segment
};

/// Disk of radius R covered by a straight polygonal VEM mesh of radius
/// R - thickness/2 plus a ribbon of triangles clipped to the disk. Ribbon
/// triangles carry their clipped region; the outer edges are ghosts. All
/// domain boundary is Neumann.
inline Mesh2D ribbon_mesh(const RibbonMeshOptions& o)
{
    if (o.n < 1) throw InputError("ribbon_mesh: n must be >= 1");
    const int segs = (o.quarter ? 2 : 8) * o.n;
    const double span = o.quarter ? 0.5 * pi : 2.0 * pi;
    const double tau = o.thickness > 0.0 ? o.thickness : 2.0 * o.radius * std::sin(0.5 * span / segs);
    DiskDomain dom;
    dom.radius = o.radius;
    if (o.quarter) dom.halfplanes = {HalfPlane{Vec2(0, 1), 0.0}, HalfPlane{Vec2(1, 0), 0.0}};
    const Ribbon rb = build_ribbon(dom, 0.0, span, segs, tau);

    Mesh2D m;
    detail::VertexPool pool(m, 1e-12 * o.radius);
    for (int q = 0; q < (o.quarter ? 1 : 4); ++q) detail::add_concentric_quarter(m, pool, o.n, rb.inner_radius, q, false, nullptr);
    std::vector<int> ids;
    for (const auto& x : rb.points) ids.push_back(pool.get(x));
    for (const auto& t : rb.triangles) {
        const int e = m.add_element({ids[static_cast<std::size_t>(t.v[0])], ids[static_cast<std::size_t>(t.v[1])],
                                     ids[static_cast<std::size_t>(t.v[2])]});
        m.elements[static_cast<std::size_t>(e)].clipped = std::make_shared<const Region2D>(t.clipped);
    }
    const Topology2D topo = build_topology(m);
    for (std::size_t e = 0; e < topo.edges.size(); ++e) {
        if (!topo.is_boundary(static_cast<int>(e))) continue;
        if (m.elements[static_cast<std::size_t>(topo.edge_elements[e][0])].clipped)
            m.ghost_edges.insert(topo.edges[e]);
        else
            m.tags[topo.edges[e]] = BoundaryKind::neumann;
    }
    return m;
}

} // namespace curvem
