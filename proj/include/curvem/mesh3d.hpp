#pragma once

// Polyhedral meshes: planar faces, spherical boundary faces and the great
// circle arcs they create on neighbouring flat faces. Face frames, face and
// cone quadrature, element measures and validation.

#include "curvem/mesh2d.hpp"

#include <array>
#include <set>

namespace curvem {

struct Sphere {
    Vec3 center = Vec3::Zero();
    double radius = 1.0;
};

struct Mesh3D {
    static constexpr int flat = -1;
    static constexpr int declared_curved = -2; // curved face whose geometry is flat

    struct Face {
        std::vector<int> v;
        int surface = flat; // sphere id, flat or declared_curved
    };
    struct Element {
        std::vector<int> faces;
    };

    std::vector<Vec3> vertices;
    std::vector<Sphere> spheres;
    std::vector<Face> faces;
    std::vector<Element> elements;
    std::map<int, BoundaryKind> tags; // per boundary face

    int add_vertex(const Vec3& x)
    {
        vertices.push_back(x);
        return static_cast<int>(vertices.size()) - 1;
    }
    int add_sphere(const Sphere& s)
    {
        if (!(s.radius > 0.0)) throw GeometryError("sphere radius must be positive");
        spheres.push_back(s);
        return static_cast<int>(spheres.size()) - 1;
    }
    int add_face(std::vector<int> v, int surface = flat)
    {
        if (v.size() < 3) throw InputError("face needs at least three vertices");
        faces.push_back({std::move(v), surface});
        return static_cast<int>(faces.size()) - 1;
    }
    int add_element(std::vector<int> f)
    {
        elements.push_back({std::move(f)});
        return static_cast<int>(elements.size()) - 1;
    }
    bool is_curved(int f) const { return faces.at(static_cast<std::size_t>(f)).surface != flat; }

    void set_all_tags(BoundaryKind b);
};

struct Topology3D {
    std::vector<EdgeKey> edges;
    std::map<EdgeKey, int> index;
    std::vector<std::vector<int>> face_edges;    // per face, local edge v[i] -> v[i+1]
    std::vector<std::vector<int>> face_elements;
    std::vector<std::vector<int>> edge_faces;
    std::vector<int> edge_sphere;                // sphere id when the edge is an arc, else -1
    std::vector<std::string> conformity;

    bool is_boundary_face(int f) const { return face_elements[static_cast<std::size_t>(f)].size() == 1; }
};

inline Topology3D build_topology(const Mesh3D& m)
{
    Topology3D t;
    const std::size_t nv = m.vertices.size();
    t.face_edges.resize(m.faces.size());
    t.face_elements.resize(m.faces.size());
    for (std::size_t f = 0; f < m.faces.size(); ++f) {
        const auto& v = m.faces[f].v;
        const int s = m.faces[f].surface;
        if (s >= static_cast<int>(m.spheres.size()) || s < Mesh3D::declared_curved)
            throw InputError("face " + std::to_string(f) + ": unknown surface id " + std::to_string(s));
        for (std::size_t i = 0; i < v.size(); ++i) {
            const int a = v[i], b = v[(i + 1) % v.size()];
            if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= nv || static_cast<std::size_t>(b) >= nv)
                throw InputError("face " + std::to_string(f) + ": vertex id out of range");
            if (a == b) throw InputError("face " + std::to_string(f) + ": repeated vertex on an edge");
            const EdgeKey k = edge_key(a, b);
            auto it = t.index.find(k);
            int id;
            if (it == t.index.end()) {
                id = static_cast<int>(t.edges.size());
                t.index.emplace(k, id);
                t.edges.push_back(k);
                t.edge_faces.emplace_back();
                t.edge_sphere.push_back(-1);
            } else {
                id = it->second;
            }
            t.edge_faces[static_cast<std::size_t>(id)].push_back(static_cast<int>(f));
            t.face_edges[f].push_back(id);
            if (s >= 0) {
                int& es = t.edge_sphere[static_cast<std::size_t>(id)];
                if (es >= 0 && es != s)
                    t.conformity.push_back("edge (" + std::to_string(k.first) + "," + std::to_string(k.second) +
                                           ") lies on two different spheres");
                es = s;
            }
        }
    }
    for (std::size_t e = 0; e < m.elements.size(); ++e) {
        std::map<int, int> count;
        std::set<int> seen;
        for (int f : m.elements[e].faces) {
            if (f < 0 || static_cast<std::size_t>(f) >= m.faces.size())
                throw InputError("element " + std::to_string(e) + ": face id out of range");
            if (!seen.insert(f).second) throw InputError("element " + std::to_string(e) + ": repeated face");
            t.face_elements[static_cast<std::size_t>(f)].push_back(static_cast<int>(e));
            for (int id : t.face_edges[static_cast<std::size_t>(f)]) ++count[id];
        }
        for (auto [id, c] : count)
            if (c != 2)
                t.conformity.push_back("element " + std::to_string(e) + ": edge (" + std::to_string(t.edges[static_cast<std::size_t>(id)].first) +
                                       "," + std::to_string(t.edges[static_cast<std::size_t>(id)].second) +
                                       ") is shared by " + std::to_string(c) + " of its faces (boundary not closed)");
    }
    for (std::size_t f = 0; f < m.faces.size(); ++f) {
        if (t.face_elements[f].size() > 2)
            t.conformity.push_back("face " + std::to_string(f) + " shared by more than two elements");
        if (m.is_curved(static_cast<int>(f)) && t.face_elements[f].size() != 1)
            t.conformity.push_back("curved face " + std::to_string(f) + " is not on the domain boundary");
    }
    return t;
}

inline void Mesh3D::set_all_tags(BoundaryKind b)
{
    const Topology3D t = build_topology(*this);
    tags.clear();
    for (std::size_t f = 0; f < faces.size(); ++f)
        if (t.is_boundary_face(static_cast<int>(f))) tags[static_cast<int>(f)] = b;
}

/// Orthonormal 2D frame of a face: origin at the vertex average, e1 along the
/// first edge, normal by Newell's formula for the stored vertex loop.
struct FaceFrame {
    Vec3 origin, e1, e2, normal;

    Vec2 to2d(const Vec3& x) const { return Vec2((x - origin).dot(e1), (x - origin).dot(e2)); }
    Vec3 to3d(const Vec2& x) const { return origin + x.x() * e1 + x.y() * e2; }
};

inline FaceFrame face_frame(const std::vector<Vec3>& p)
{
    FaceFrame fr;
    fr.origin = Vec3::Zero();
    for (const auto& x : p) fr.origin += x;
    fr.origin /= static_cast<double>(p.size());
    Vec3 n = Vec3::Zero();
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Vec3& a = p[i];
        const Vec3& b = p[(i + 1) % p.size()];
        n += Vec3((a.y() - b.y()) * (a.z() + b.z()), (a.z() - b.z()) * (a.x() + b.x()), (a.x() - b.x()) * (a.y() + b.y()));
    }
    if (!(n.norm() > 0.0)) throw GeometryError("face has zero area");
    fr.normal = n.normalized();
    Vec3 e1 = p[1] - p[0];
    e1 -= e1.dot(fr.normal) * fr.normal;
    fr.e1 = e1.normalized();
    fr.e2 = fr.normal.cross(fr.e1);
    return fr;
}

/// Great circle arc of a sphere from a to b (shorter way).
struct Arc3D {
    Vec3 center = Vec3::Zero();
    double radius = 1.0;
    Vec3 u = Vec3::UnitX(), w = Vec3::UnitY();
    double angle = 0.0;

    static Arc3D between(const Sphere& s, const Vec3& a, const Vec3& b)
    {
        Arc3D r;
        r.center = s.center;
        r.radius = s.radius;
        const Vec3 pa = a - s.center, pb = b - s.center;
        const double tol = 1e-9 * s.radius;
        if (std::abs(pa.norm() - s.radius) > tol || std::abs(pb.norm() - s.radius) > tol)
            throw GeometryError("arc endpoints are not on the sphere");
        r.u = pa.normalized();
        Vec3 w = pb - pb.dot(r.u) * r.u;
        if (!(w.norm() > 1e-12 * s.radius)) throw GeometryError("arc endpoints are coincident or antipodal");
        r.w = w.normalized();
        r.angle = std::atan2(pb.dot(r.w), pb.dot(r.u));
        return r;
    }

    Vec3 point(double t) const { return center + radius * (std::cos(t * angle) * u + std::sin(t * angle) * w); }
    Vec3 derivative(double t) const { return radius * angle * (-std::sin(t * angle) * u + std::cos(t * angle) * w); }
    double length() const { return radius * angle; }
    Vec3 plane_normal() const { return u.cross(w); }
};

/// Quadrature and shape data of one face (shared by both neighbours).
struct FaceGeometry {
    FaceFrame frame;
    bool sphere = false;
    Region2D region;            // flat faces, in frame coordinates
    std::vector<Vec2> points2d; // flat faces
    QuadratureRule<3> rule;
    QuadratureRule<2> rule2d;   // flat faces, same nodes as `rule`
    double area = 0.0;
    Vec2 centroid2d = Vec2::Zero();
    double diameter = 0.0;
    std::vector<int> arc_edges; // local edges that are arcs
};

inline int sphere_rule_order(int order) { return std::max(order, 8) + 6; }

inline FaceGeometry face_geometry(const Mesh3D& m, const Topology3D& t, int f, int order)
{
    const auto& face = m.faces.at(static_cast<std::size_t>(f));
    std::vector<Vec3> p;
    for (int v : face.v) p.push_back(m.vertices[static_cast<std::size_t>(v)]);
    FaceGeometry g;
    g.frame = face_frame(p);
    const std::string name = "face " + std::to_string(f);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j) g.diameter = std::max(g.diameter, (p[i] - p[j]).norm());

    if (face.surface >= 0) {
        const Sphere& s = m.spheres[static_cast<std::size_t>(face.surface)];
        g.sphere = true;
        Vec3 c = Vec3::Zero();
        for (const auto& x : p) c += x;
        c /= static_cast<double>(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (std::abs((p[i] - s.center).norm() - s.radius) > 1e-9 * s.radius)
                throw GeometryError(name + ": vertex off its sphere");
            const Vec3& a = p[i];
            const Vec3& b = p[(i + 1) % p.size()];
            const Vec3 tn = (a - c).cross(b - c);
            if (!(tn.norm() > 0.0)) throw GeometryError(name + ": degenerate fan triangle");
            const Vec3 nt = tn.normalized();
            // split so that no sub-triangle subtends more than pi/8
            auto angle = [&](const Vec3& x, const Vec3& y) {
                const Vec3 u = (x - s.center).normalized(), w = (y - s.center).normalized();
                return std::atan2(u.cross(w).norm(), u.dot(w));
            };
            const double span = std::max({angle(a, b), angle(b, c), angle(c, a)});
            const int sub = std::max(1, static_cast<int>(std::ceil(span / (pi / 8.0))));
            auto node = [&](int i, int j) { return Vec3(c + (a - c) * (static_cast<double>(i) / sub) + (b - c) * (static_cast<double>(j) / sub)); };
            for (int i = 0; i < sub; ++i)
                for (int j = 0; i + j < sub; ++j) {
                    std::vector<std::array<Vec3, 3>> tris{{node(i, j), node(i + 1, j), node(i, j + 1)}};
                    if (i + j + 1 < sub) tris.push_back({node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)});
                    for (const auto& tri : tris) {
                        const auto tr = triangle_rule<3>(tri[0], tri[1], tri[2], sphere_rule_order(order));
                        for (std::size_t q = 0; q < tr.size(); ++q) {
                            const Vec3 y = tr.points[q] - s.center;
                            const double r = y.norm();
                            g.rule.append(s.center + s.radius * y / r,
                                          tr.weights[q] * s.radius * s.radius * std::abs(y.dot(nt)) / (r * r * r));
                        }
                    }
                }
        }
        g.area = g.rule.total_weight();
        for (const auto& x : g.rule.points)
            for (const auto& y : p) g.diameter = std::max(g.diameter, (x - y).norm());
        return g;
    }

    for (const auto& x : p)
        if (std::abs((x - g.frame.origin).dot(g.frame.normal)) > 1e-10 * g.diameter)
            throw GeometryError(name + ": vertices are not coplanar");
    std::vector<Piece2D> pieces;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Vec2 a = g.frame.to2d(p[i]), b = g.frame.to2d(p[(i + 1) % p.size()]);
        g.points2d.push_back(a);
        const int sid = t.edge_sphere[static_cast<std::size_t>(t.face_edges[static_cast<std::size_t>(f)][i])];
        if (sid < 0 || face.surface == Mesh3D::declared_curved) {
            pieces.push_back(Piece2D::segment(a, b));
            continue;
        }
        const Sphere& s = m.spheres[static_cast<std::size_t>(sid)];
        if (std::abs((s.center - g.frame.origin).dot(g.frame.normal)) > 1e-9 * s.radius)
            throw GeometryError(name + ": plane of a face with an arc edge must contain the sphere center");
        Piece2D pc = Piece2D::curved(std::make_shared<const Curve>(Curve::arc_through(g.frame.to2d(s.center), s.radius, a, b)), false);
        pc.a = a;
        pc.b = b;
        pieces.push_back(pc);
        g.arc_edges.push_back(static_cast<int>(i));
    }
    try {
        g.region = Region2D(std::move(pieces));
    } catch (const GeometryError& e) {
        throw GeometryError(name + ": " + e.what());
    }
    g.area = g.region.area();
    g.centroid2d = g.region.centroid();
    g.diameter = std::max(g.diameter, g.region.diameter());
    g.rule2d = g.region.domain_rule(order);
    for (std::size_t q = 0; q < g.rule2d.size(); ++q) g.rule.append(g.frame.to3d(g.rule2d.points[q]), g.rule2d.weights[q]);
    return g;
}

/// Element boundary seen from the element: per face, the sign turning the
/// face normal outward, and outward normals at the face nodes.
struct ElementGeometry3D {
    std::vector<double> sign;                  // per local face, for the frame normal
    std::vector<std::vector<Vec3>> normals;    // per local face, per node
    double volume = 0.0;
    Vec3 centroid = Vec3::Zero();
    double diameter = 0.0;
    QuadratureRule<3> rule;                    // cone rule from the centroid
    int curved_face = -1;                      // local index
};

inline ElementGeometry3D element_geometry(const Mesh3D& m, int e, const std::vector<FaceGeometry>& faces, int order)
{
    const auto& el = m.elements.at(static_cast<std::size_t>(e));
    const std::string name = "element " + std::to_string(e);
    ElementGeometry3D g;
    std::vector<Vec3> verts;
    for (int f : el.faces)
        for (int v : m.faces[static_cast<std::size_t>(f)].v) verts.push_back(m.vertices[static_cast<std::size_t>(v)]);
    Vec3 c0 = Vec3::Zero();
    for (const auto& x : verts) c0 += x;
    c0 /= static_cast<double>(verts.size());
    for (std::size_t i = 0; i < el.faces.size(); ++i) {
        const int f = el.faces[i];
        const auto& fg = faces[static_cast<std::size_t>(f)];
        if (m.is_curved(f)) {
            if (g.curved_face >= 0) throw InputError(name + " has more than one curved face");
            g.curved_face = static_cast<int>(i);
        }
        double sg;
        std::vector<Vec3> nrm;
        if (fg.sphere) {
            const Sphere& s = m.spheres[static_cast<std::size_t>(m.faces[static_cast<std::size_t>(f)].surface)];
            Vec3 mid = Vec3::Zero();
            for (const auto& x : fg.rule.points) mid += x;
            mid = s.center + s.radius * (mid / static_cast<double>(fg.rule.size()) - s.center).normalized();
            sg = (mid - s.center).dot(mid - c0) >= 0.0 ? 1.0 : -1.0;
            for (const auto& x : fg.rule.points) nrm.push_back(sg * (x - s.center) / s.radius);
        } else {
            const double side = (fg.frame.origin - c0).dot(fg.frame.normal);
            if (side == 0.0) throw GeometryError(name + ": cannot orient face " + std::to_string(f));
            sg = side > 0.0 ? 1.0 : -1.0;
            nrm.assign(fg.rule.size(), sg * fg.frame.normal);
        }
        g.sign.push_back(sg);
        g.normals.push_back(std::move(nrm));
    }
    // divergence theorem about c0
    double vol = 0.0;
    Vec3 mom = Vec3::Zero();
    for (std::size_t i = 0; i < el.faces.size(); ++i) {
        const auto& fg = faces[static_cast<std::size_t>(el.faces[i])];
        for (std::size_t q = 0; q < fg.rule.size(); ++q) {
            const Vec3 y = fg.rule.points[q] - c0;
            const Vec3& n = g.normals[i][q];
            vol += fg.rule.weights[q] * y.dot(n) / 3.0;
            mom += 0.5 * fg.rule.weights[q] * y.cwiseProduct(y).cwiseProduct(n);
        }
    }
    double diam = 0.0;
    for (std::size_t i = 0; i < verts.size(); ++i)
        for (std::size_t j = i + 1; j < verts.size(); ++j) diam = std::max(diam, (verts[i] - verts[j]).norm());
    if (g.curved_face >= 0) {
        const auto& fg = faces[static_cast<std::size_t>(el.faces[static_cast<std::size_t>(g.curved_face)])];
        for (const auto& x : fg.rule.points)
            for (const auto& y : verts) diam = std::max(diam, (x - y).norm());
    }
    g.diameter = diam;
    if (!(vol > 1e-14 * diam * diam * diam)) throw GeometryError(name + ": non-positive volume (" + std::to_string(vol) + ")");
    g.volume = vol;
    g.centroid = c0 + mom / vol;

    const auto& gr = gauss_legendre(gauss_points_for(order + 2));
    const double tol = 1e-12 * diam;
    for (std::size_t i = 0; i < el.faces.size(); ++i) {
        const auto& fg = faces[static_cast<std::size_t>(el.faces[i])];
        for (std::size_t q = 0; q < fg.rule.size(); ++q) {
            const Vec3 y = fg.rule.points[q] - g.centroid;
            const double hgt = y.dot(g.normals[i][q]);
            if (hgt < -tol)
                throw GeometryError(name + ": not star-shaped with respect to its centroid (face " + std::to_string(el.faces[i]) + ")");
            for (std::size_t j = 0; j < gr.nodes.size(); ++j) {
                const double r = gr.nodes[j];
                g.rule.append(g.centroid + r * y, fg.rule.weights[q] * hgt * r * r * gr.weights[j]);
            }
        }
    }
    return g;
}

struct ElementMeasures3D {
    double measure;
    Vec3 centroid;
    double diameter;
};

inline ElementMeasures3D element_measures(const Mesh3D& m, int e, int order = 4)
{
    const Topology3D t = build_topology(m);
    std::vector<FaceGeometry> faces(m.faces.size());
    for (int f : m.elements.at(static_cast<std::size_t>(e)).faces) faces[static_cast<std::size_t>(f)] = face_geometry(m, t, f, order);
    const auto g = element_geometry(m, e, faces, order);
    return {g.volume, g.centroid, g.diameter};
}

/// Advisory checks mirroring the 2D report: closed boundaries, planarity,
/// positive volume, star-shapedness from the centroid, face-size ratio.
inline MeshReport validate_mesh(const Mesh3D& m, double rho_geom = 0.05)
{
    MeshReport rep;
    Topology3D t;
    try {
        t = build_topology(m);
    } catch (const Error& e) {
        rep.pass = false;
        rep.issues.push_back(e.what());
        return rep;
    }
    rep.conformity = t.conformity;
    rep.min_edge_ratio = std::numeric_limits<double>::infinity();
    std::vector<FaceGeometry> faces(m.faces.size());
    std::vector<std::string> face_err(m.faces.size());
    for (std::size_t f = 0; f < m.faces.size(); ++f) {
        try {
            faces[f] = face_geometry(m, t, static_cast<int>(f), 4);
        } catch (const Error& e) {
            face_err[f] = e.what();
        }
    }
    for (std::size_t e = 0; e < m.elements.size(); ++e) {
        ElementDiagnostics d;
        d.id = static_cast<int>(e);
        std::string msg;
        for (int f : m.elements[e].faces)
            if (!face_err[static_cast<std::size_t>(f)].empty()) msg = face_err[static_cast<std::size_t>(f)];
        if (msg.empty()) {
            try {
                const auto g = element_geometry(m, static_cast<int>(e), faces, 4);
                d.area = g.volume;
                d.diameter = g.diameter;
                double emin = std::numeric_limits<double>::infinity();
                for (int f : m.elements[e].faces) {
                    const auto& v = m.faces[static_cast<std::size_t>(f)].v;
                    for (std::size_t i = 0; i < v.size(); ++i)
                        emin = std::min(emin, (m.vertices[static_cast<std::size_t>(v[i])] - m.vertices[static_cast<std::size_t>(v[(i + 1) % v.size()])]).norm());
                }
                d.min_edge_ratio = emin / g.diameter;
                if (d.min_edge_ratio < rho_geom) msg = "edge ratio below rho_geom";
            } catch (const Error& err) {
                d.star_shaped = false;
                msg = err.what();
            }
        }
        d.ok = msg.empty();
        d.message = msg;
        rep.min_edge_ratio = std::min(rep.min_edge_ratio, d.min_edge_ratio);
        rep.pass = rep.pass && d.ok;
        rep.elements.push_back(d);
    }
    for (std::size_t f = 0; f < m.faces.size(); ++f)
        if (t.is_boundary_face(static_cast<int>(f)) && !m.tags.count(static_cast<int>(f)))
            rep.issues.push_back("boundary face " + std::to_string(f) + " has no tag");
    if (!rep.conformity.empty() || !rep.issues.empty()) rep.pass = false;
    return rep;
}

} // namespace curvem
