#pragma once

// Plain-text mesh files.
//
//   vemmesh 2
//   vertex <id> <x> <y>
//   curve <id> arc <cx> <cy> <r> <angle0> <angle1>
//   curve <id> polyline <n> <x0> <y0> ... <x(n-1)> <y(n-1)>
//   elem2d <id> <v0> <v1> ...            (counterclockwise)
//   edgecurve <elem> <local-edge> <curve>
//   facet <v0> <v1> <curve>              (chord standing in for a curve)
//   btag edge <v0> <v1> dirichlet|neumann
//
//   vemmesh 3
//   vertex <id> <x> <y> <z>
//   sphere <id> <cx> <cy> <cz> <r>
//   face <id> flat|curved|sphere:<sid> <v0> <v1> ...
//   elem3d <id> <f0> <f1> ...
//   btag face <f> dirichlet|neumann
//
// Ids are consecutive from 0 in order of appearance. '#' starts a comment.

#include "curvem/mesh3d.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <variant>

namespace curvem {

using AnyMesh = std::variant<Mesh2D, Mesh3D>;

namespace detail {

inline BoundaryKind parse_boundary_kind(const std::string& s)
{
    if (s == "dirichlet") return BoundaryKind::dirichlet;
    if (s == "neumann") return BoundaryKind::neumann;
    throw InputError("unknown boundary kind '" + s + "' (expected dirichlet|neumann)");
}

class LineReader {
public:
    LineReader(std::string text, int line) : in_(std::move(text)), line_(line) {}

    template <class T>
    T next(const char* what)
    {
        T v;
        if (!(in_ >> v)) fail(std::string("expected ") + what);
        return v;
    }
    std::vector<int> rest_ints(const char* what)
    {
        std::vector<int> out;
        std::string tok;
        while (in_ >> tok) {
            int v = 0;
            const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc() || ptr != tok.data() + tok.size()) fail(std::string("bad ") + what + " '" + tok + "'");
            out.push_back(v);
        }
        return out;
    }
    bool done()
    {
        std::string rest;
        return !(in_ >> rest);
    }
    [[noreturn]] void fail(const std::string& msg) const { throw InputError("mesh line " + std::to_string(line_) + ": " + msg); }

private:
    std::istringstream in_;
    int line_;
};

inline void expect_id(LineReader& r, std::size_t expected, const char* what)
{
    const int id = r.next<int>("id");
    if (id != static_cast<int>(expected))
        r.fail(std::string(what) + " id " + std::to_string(id) + " out of sequence (expected " + std::to_string(expected) + ")");
}

} // namespace detail

inline AnyMesh read_mesh(std::istream& in)
{
    std::string raw;
    int line = 0;
    int dim = 0;
    Mesh2D m2;
    Mesh3D m3;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        detail::LineReader r(raw, line);
        std::string key;
        {
            std::istringstream probe(raw);
            if (!(probe >> key)) continue;
        }
        key = r.next<std::string>("record");
        if (dim == 0) {
            if (key != "vemmesh") r.fail("file must start with 'vemmesh <dim>'");
            dim = r.next<int>("dimension");
            if (dim != 2 && dim != 3) r.fail("dimension must be 2 or 3");
            if (!r.done()) r.fail("trailing tokens");
            continue;
        }
        if (key == "vertex") {
            if (dim == 2) {
                detail::expect_id(r, m2.vertices.size(), "vertex");
                const double x = r.next<double>("x"), y = r.next<double>("y");
                m2.add_vertex({x, y});
            } else {
                detail::expect_id(r, m3.vertices.size(), "vertex");
                const double x = r.next<double>("x"), y = r.next<double>("y"), z = r.next<double>("z");
                m3.add_vertex({x, y, z});
            }
        } else if (dim == 2 && key == "curve") {
            detail::expect_id(r, m2.curves.size(), "curve");
            const auto kind = r.next<std::string>("curve kind");
            if (kind == "arc") {
                const double cx = r.next<double>("cx"), cy = r.next<double>("cy"), rad = r.next<double>("radius");
                const double a0 = r.next<double>("angle0"), a1 = r.next<double>("angle1");
                m2.add_curve(Curve::arc({cx, cy}, rad, a0, a1));
            } else if (kind == "polyline") {
                const int n = r.next<int>("point count");
                if (n < 2) r.fail("polyline needs at least two points");
                std::vector<Vec2> p;
                for (int i = 0; i < n; ++i) {
                    const double x = r.next<double>("x");
                    p.emplace_back(x, r.next<double>("y"));
                }
                m2.add_curve(Curve::polyline(std::move(p)));
            } else {
                r.fail("unknown curve kind '" + kind + "'");
            }
        } else if (dim == 2 && key == "elem2d") {
            detail::expect_id(r, m2.elements.size(), "element");
            const auto v = r.rest_ints("vertex id");
            if (v.size() < 3) r.fail("element needs at least three vertices");
            m2.add_element(v);
        } else if (dim == 2 && key == "edgecurve") {
            const int e = r.next<int>("element"), i = r.next<int>("local edge"), c = r.next<int>("curve");
            if (e < 0 || e >= static_cast<int>(m2.elements.size())) r.fail("element id out of range");
            auto& el = m2.elements[static_cast<std::size_t>(e)];
            if (i < 0 || i >= static_cast<int>(el.v.size())) r.fail("local edge out of range");
            if (c < 0 || c >= static_cast<int>(m2.curves.size())) r.fail("curve id out of range");
            el.edge_curve[static_cast<std::size_t>(i)] = c;
        } else if (dim == 2 && key == "facet") {
            const int a = r.next<int>("vertex"), b = r.next<int>("vertex"), c = r.next<int>("curve");
            if (c < 0 || c >= static_cast<int>(m2.curves.size())) r.fail("curve id out of range");
            m2.facet_source[edge_key(a, b)] = c;
        } else if (key == "btag") {
            const auto what = r.next<std::string>("entity kind");
            if (dim == 2) {
                if (what != "edge") r.fail("2D boundary tags apply to edges");
                const int a = r.next<int>("vertex"), b = r.next<int>("vertex");
                m2.tags[edge_key(a, b)] = detail::parse_boundary_kind(r.next<std::string>("boundary kind"));
            } else {
                if (what != "face") r.fail("3D boundary tags apply to faces");
                const int f = r.next<int>("face");
                m3.tags[f] = detail::parse_boundary_kind(r.next<std::string>("boundary kind"));
            }
        } else if (dim == 3 && key == "sphere") {
            detail::expect_id(r, m3.spheres.size(), "sphere");
            const double x = r.next<double>("cx"), y = r.next<double>("cy"), z = r.next<double>("cz");
            m3.add_sphere({Vec3(x, y, z), r.next<double>("radius")});
        } else if (dim == 3 && key == "face") {
            detail::expect_id(r, m3.faces.size(), "face");
            const auto surf = r.next<std::string>("surface");
            int s = Mesh3D::flat;
            if (surf == "curved") {
                s = Mesh3D::declared_curved;
            } else if (surf.rfind("sphere:", 0) == 0) {
                try {
                    s = std::stoi(surf.substr(7));
                } catch (const std::exception&) {
                    r.fail("bad sphere reference '" + surf + "'");
                }
                if (s < 0 || s >= static_cast<int>(m3.spheres.size())) r.fail("sphere id out of range");
            } else if (surf != "flat") {
                r.fail("face surface must be flat, curved or sphere:<id>");
            }
            const auto v = r.rest_ints("vertex id");
            if (v.size() < 3) r.fail("face needs at least three vertices");
            m3.add_face(v, s);
        } else if (dim == 3 && key == "elem3d") {
            detail::expect_id(r, m3.elements.size(), "element");
            const auto f = r.rest_ints("face id");
            if (f.size() < 4) r.fail("element needs at least four faces");
            m3.add_element(f);
        } else {
            r.fail("unknown record '" + key + "'");
        }
        if (key != "elem2d" && key != "face" && key != "elem3d" && !r.done()) r.fail("trailing tokens");
    }
    if (dim == 0) throw InputError("empty mesh file");
    if (dim == 2) return m2;
    return m3;
}

inline AnyMesh read_mesh_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot open mesh file '" + path + "'");
    return read_mesh(in);
}

inline void write_mesh(std::ostream& out, const Mesh2D& m)
{
    for (const auto& el : m.elements)
        if (el.clipped) throw InputError("write_mesh: ribbon meshes cannot be written (they are generated)");
    out << std::setprecision(17) << "vemmesh 2\n";
    for (std::size_t i = 0; i < m.vertices.size(); ++i) out << "vertex " << i << ' ' << m.vertices[i].x() << ' ' << m.vertices[i].y() << '\n';
    for (std::size_t i = 0; i < m.curves.size(); ++i) {
        const Curve& c = *m.curves[i];
        out << "curve " << i;
        if (c.is_arc()) {
            out << " arc " << c.center().x() << ' ' << c.center().y() << ' ' << c.radius() << ' ' << c.angle0() << ' ' << c.angle1() << '\n';
        } else {
            out << " polyline " << c.samples().size();
            for (const auto& p : c.samples()) out << ' ' << p.x() << ' ' << p.y();
            out << '\n';
        }
    }
    for (std::size_t e = 0; e < m.elements.size(); ++e) {
        out << "elem2d " << e;
        for (int v : m.elements[e].v) out << ' ' << v;
        out << '\n';
        for (std::size_t i = 0; i < m.elements[e].edge_curve.size(); ++i)
            if (m.elements[e].edge_curve[i] >= 0) out << "edgecurve " << e << ' ' << i << ' ' << m.elements[e].edge_curve[i] << '\n';
    }
    for (const auto& [k, c] : m.facet_source) out << "facet " << k.first << ' ' << k.second << ' ' << c << '\n';
    for (const auto& [k, b] : m.tags) out << "btag edge " << k.first << ' ' << k.second << ' ' << to_string(b) << '\n';
}

inline void write_mesh(std::ostream& out, const Mesh3D& m)
{
    out << std::setprecision(17) << "vemmesh 3\n";
    for (std::size_t i = 0; i < m.vertices.size(); ++i)
        out << "vertex " << i << ' ' << m.vertices[i].x() << ' ' << m.vertices[i].y() << ' ' << m.vertices[i].z() << '\n';
    for (std::size_t i = 0; i < m.spheres.size(); ++i)
        out << "sphere " << i << ' ' << m.spheres[i].center.x() << ' ' << m.spheres[i].center.y() << ' ' << m.spheres[i].center.z() << ' '
            << m.spheres[i].radius << '\n';
    for (std::size_t f = 0; f < m.faces.size(); ++f) {
        const int s = m.faces[f].surface;
        out << "face " << f << ' ' << (s == Mesh3D::flat ? std::string("flat") : s == Mesh3D::declared_curved ? std::string("curved") : "sphere:" + std::to_string(s));
        for (int v : m.faces[f].v) out << ' ' << v;
        out << '\n';
    }
    for (std::size_t e = 0; e < m.elements.size(); ++e) {
        out << "elem3d " << e;
        for (int f : m.elements[e].faces) out << ' ' << f;
        out << '\n';
    }
    for (const auto& [f, b] : m.tags) out << "btag face " << f << ' ' << to_string(b) << '\n';
}

} // namespace curvem
