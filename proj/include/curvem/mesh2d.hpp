#pragma once

#include "curvem/region.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

namespace curvem {

enum class BoundaryKind { dirichlet, neumann };

inline const char* to_string(BoundaryKind b) { return b == BoundaryKind::dirichlet ? "dirichlet" : "neumann"; }

using EdgeKey = std::pair<int, int>;

inline EdgeKey edge_key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

struct Mesh2D {
    struct Element {
        std::vector<int> v;                       // counterclockwise
        std::vector<int> edge_curve;              // per local edge v[i] -> v[i+1]; -1 when straight
        std::shared_ptr<const Region2D> clipped;  // ribbon triangle: its part inside the domain
    };

    std::vector<Vec2> vertices;
    std::vector<std::shared_ptr<const Curve>> curves;
    std::vector<Element> elements;
    std::map<EdgeKey, BoundaryKind> tags;
    std::map<EdgeKey, int> facet_source; // chord edges standing in for a curve
    std::set<EdgeKey> ghost_edges;       // ribbon edges lying outside the domain

    int add_vertex(const Vec2& x)
    {
        vertices.push_back(x);
        return static_cast<int>(vertices.size()) - 1;
    }

    int add_curve(Curve c)
    {
        curves.push_back(std::make_shared<const Curve>(std::move(c)));
        return static_cast<int>(curves.size()) - 1;
    }

    int add_element(std::vector<int> v, std::vector<int> edge_curve = {})
    {
        if (edge_curve.empty()) edge_curve.assign(v.size(), -1);
        if (edge_curve.size() != v.size()) throw InputError("Mesh2D::add_element: edge_curve size mismatch");
        elements.push_back({std::move(v), std::move(edge_curve), nullptr});
        return static_cast<int>(elements.size()) - 1;
    }

    void set_all_tags(BoundaryKind b);
};

struct Topology2D {
    std::vector<EdgeKey> edges;
    std::map<EdgeKey, int> index;
    std::vector<std::vector<int>> element_edges;
    std::vector<std::vector<int>> edge_elements;
    std::vector<int> edge_curve;  // curve id per global edge, -1 when straight
    std::vector<std::string> conformity;

    bool is_boundary(int e) const { return edge_elements[static_cast<std::size_t>(e)].size() == 1; }
};

inline Topology2D build_topology(const Mesh2D& m)
{
    Topology2D t;
    std::map<std::pair<int, int>, int> directed;
    t.element_edges.resize(m.elements.size());
    for (std::size_t ei = 0; ei < m.elements.size(); ++ei) {
        const auto& el = m.elements[ei];
        const std::size_t n = el.v.size();
        for (std::size_t i = 0; i < n; ++i) {
            const int a = el.v[i], b = el.v[(i + 1) % n];
            if (a < 0 || b < 0 || a >= static_cast<int>(m.vertices.size()) || b >= static_cast<int>(m.vertices.size()))
                throw InputError("element " + std::to_string(ei) + ": vertex id out of range");
            if (a == b) throw InputError("element " + std::to_string(ei) + ": repeated vertex on an edge");
            const EdgeKey k = edge_key(a, b);
            auto it = t.index.find(k);
            int id;
            if (it == t.index.end()) {
                id = static_cast<int>(t.edges.size());
                t.index.emplace(k, id);
                t.edges.push_back(k);
                t.edge_elements.emplace_back();
                t.edge_curve.push_back(el.edge_curve[i]);
            } else {
                id = it->second;
                if (t.edge_curve[static_cast<std::size_t>(id)] != el.edge_curve[i])
                    t.conformity.push_back("edge (" + std::to_string(k.first) + "," + std::to_string(k.second) +
                                           ") has inconsistent curve attachment");
            }
            if (++directed[{a, b}] > 1)
                t.conformity.push_back("edge (" + std::to_string(a) + "," + std::to_string(b) +
                                       ") traversed in the same direction by two elements (flipped or duplicated)");
            t.edge_elements[static_cast<std::size_t>(id)].push_back(static_cast<int>(ei));
            t.element_edges[ei].push_back(id);
        }
    }
    for (std::size_t e = 0; e < t.edges.size(); ++e)
        if (t.edge_elements[e].size() > 2)
            t.conformity.push_back("edge (" + std::to_string(t.edges[e].first) + "," + std::to_string(t.edges[e].second) +
                                   ") shared by more than two elements");
    // coincident but distinct vertices used by elements break conformity
    std::set<int> used;
    for (const auto& el : m.elements) used.insert(el.v.begin(), el.v.end());
    std::vector<int> ids(used.begin(), used.end());
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
        const auto& pa = m.vertices[static_cast<std::size_t>(a)];
        const auto& pb = m.vertices[static_cast<std::size_t>(b)];
        return pa.x() < pb.x() || (pa.x() == pb.x() && pa.y() < pb.y());
    });
    double scale = 0.0;
    for (int i : ids) scale = std::max(scale, m.vertices[static_cast<std::size_t>(i)].norm());
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            const auto& a = m.vertices[static_cast<std::size_t>(ids[i])];
            const auto& b = m.vertices[static_cast<std::size_t>(ids[j])];
            if (b.x() - a.x() > 1e-12 * (1.0 + scale)) break;
            if ((a - b).norm() <= 1e-12 * (1.0 + scale))
                t.conformity.push_back("vertices " + std::to_string(ids[i]) + " and " + std::to_string(ids[j]) +
                                       " coincide (duplicated vertex)");
        }
    return t;
}

inline void Mesh2D::set_all_tags(BoundaryKind b)
{
    const Topology2D t = build_topology(*this);
    tags.clear();
    for (std::size_t e = 0; e < t.edges.size(); ++e)
        if (t.is_boundary(static_cast<int>(e)) && !ghost_edges.count(t.edges[e])) tags[t.edges[e]] = b;
}

/// Boundary loop of an element as a region, curved edges included.
inline Region2D element_region(const Mesh2D& m, int e)
{
    const auto& el = m.elements.at(static_cast<std::size_t>(e));
    if (el.clipped) return *el.clipped;
    std::vector<Piece2D> pieces;
    const std::size_t n = el.v.size();
    if (n < 3) throw GeometryError("element " + std::to_string(e) + ": fewer than three vertices");
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = m.vertices[static_cast<std::size_t>(el.v[i])];
        const Vec2& b = m.vertices[static_cast<std::size_t>(el.v[(i + 1) % n])];
        const int c = el.edge_curve[i];
        if (c < 0) {
            pieces.push_back(Piece2D::segment(a, b));
            continue;
        }
        const auto& curve = m.curves.at(static_cast<std::size_t>(c));
        const double tol = 1e-9 * std::max(curve->length(), (b - a).norm());
        const Vec2 g0 = curve->point(0.0), g1 = curve->point(1.0);
        Piece2D p;
        if ((g0 - a).norm() <= tol && (g1 - b).norm() <= tol)
            p = Piece2D::curved(curve, false);
        else if ((g1 - a).norm() <= tol && (g0 - b).norm() <= tol)
            p = Piece2D::curved(curve, true);
        else
            throw GeometryError("element " + std::to_string(e) + ": curve " + std::to_string(c) +
                                " endpoints do not match edge vertices");
        p.a = a;
        p.b = b;
        pieces.push_back(p);
    }
    try {
        return Region2D(std::move(pieces));
    } catch (const GeometryError& err) {
        throw GeometryError("element " + std::to_string(e) + ": " + err.what());
    }
}

struct ElementMeasures {
    double measure;
    Vec2 centroid;
    double diameter;
};

inline ElementMeasures element_measures(const Mesh2D& m, int e)
{
    const Region2D r = element_region(m, e);
    return {r.area(), r.centroid(), r.diameter()};
}

struct ElementDiagnostics {
    int id = -1;
    double area = 0.0;
    double diameter = 0.0;
    double min_edge_ratio = 0.0;
    bool star_shaped = true;
    bool ok = true;
    std::string message;
};

struct MeshReport {
    bool pass = true;
    double min_edge_ratio = 0.0;
    std::vector<ElementDiagnostics> elements;
    std::vector<std::string> conformity;
    std::vector<std::string> issues;

    std::string summary() const
    {
        std::ostringstream os;
        os << (pass ? "pass" : "fail") << ": " << elements.size() << " elements, min edge ratio " << min_edge_ratio;
        for (const auto& c : conformity) os << "\n  conformity: " << c;
        for (const auto& c : issues) os << "\n  " << c;
        return os.str();
    }
};

/// Advisory checks: centroid visibility of the boundary, edge/diameter
/// ratios against rho_geom, conformity, curved edges on the boundary only.
inline MeshReport validate_mesh(const Mesh2D& m, double rho_geom = 0.05)
{
    MeshReport rep;
    Topology2D topo;
    try {
        topo = build_topology(m);
    } catch (const Error& e) {
        rep.pass = false;
        rep.issues.push_back(e.what());
        return rep;
    }
    rep.conformity = topo.conformity;
    rep.min_edge_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t ei = 0; ei < m.elements.size(); ++ei) {
        ElementDiagnostics d;
        d.id = static_cast<int>(ei);
        try {
            // ribbon triangles are judged on T itself, not on the clipped part
            const auto& el = m.elements[ei];
            std::vector<Vec2> poly;
            for (int v : el.v) poly.push_back(m.vertices[static_cast<std::size_t>(v)]);
            const Region2D r = el.clipped ? Region2D::polygon(poly) : element_region(m, static_cast<int>(ei));
            d.area = r.area();
            d.diameter = r.diameter();
            double emin = std::numeric_limits<double>::infinity();
            for (const auto& p : r.pieces()) emin = std::min(emin, p.length());
            d.min_edge_ratio = emin / d.diameter;
            const Vec2 c = r.centroid();
            for (const auto& p : r.pieces()) {
                for (auto [t, w] : p.parameter_rule(4)) {
                    (void)w;
                    if (cross2(p.point(t) - c, p.derivative(t)) <= 0.0) d.star_shaped = false;
                }
                if (cross2(p.a - c, p.b - p.a) <= 0.0 && p.kind == Piece2D::Kind::segment) d.star_shaped = false;
            }
            if (!d.star_shaped) {
                d.ok = false;
                d.message = "boundary not visible from the centroid";
            }
            if (d.min_edge_ratio < rho_geom) {
                d.ok = false;
                d.message += (d.message.empty() ? "" : "; ") + std::string("edge ratio below rho_geom");
            }
        } catch (const Error& e) {
            d.ok = false;
            d.star_shaped = false;
            d.message = e.what();
        }
        for (std::size_t i = 0; i < m.elements[ei].v.size(); ++i) {
            const int c = m.elements[ei].edge_curve[i];
            if (c >= 0 && !topo.is_boundary(topo.element_edges[ei][i])) {
                d.ok = false;
                d.message += (d.message.empty() ? "" : "; ") + std::string("curved edge inside the domain");
            }
        }
        int curved = 0;
        for (int c : m.elements[ei].edge_curve) curved += (c >= 0);
        if (curved > 1) {
            d.ok = false;
            d.message += (d.message.empty() ? "" : "; ") + std::string("more than one curved edge");
        }
        rep.min_edge_ratio = std::min(rep.min_edge_ratio, d.min_edge_ratio);
        rep.pass = rep.pass && d.ok;
        rep.elements.push_back(d);
    }
    for (std::size_t e = 0; e < topo.edges.size(); ++e)
        if (topo.is_boundary(static_cast<int>(e)) && !m.ghost_edges.count(topo.edges[e]) && !m.tags.count(topo.edges[e]))
            rep.issues.push_back("boundary edge (" + std::to_string(topo.edges[e].first) + "," +
                                 std::to_string(topo.edges[e].second) + ") has no tag");
    if (!rep.conformity.empty() || !rep.issues.empty()) rep.pass = false;
    return rep;
}

} // namespace curvem
