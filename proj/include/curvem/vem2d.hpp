#pragma once

// Global unknowns and element spaces for 2D meshes: straight polygons,
// polygons with one curved boundary edge (generators, subset, subset-mfd, or
// data slots on Dirichlet curves) and clipped ribbon triangles.

#include "curvem/curved2d.hpp"
#include "curvem/discretization.hpp"
#include "curvem/mesh2d.hpp"

namespace curvem {

namespace detail {

struct EdgeInfo2D {
    bool boundary = false; // on the domain boundary (ghost edges excluded)
    bool ghost = false;
    bool dirichlet = false;
    bool neumann = false;
    int curve = -1;
    int first = -1;        // first global unknown on the edge
    int count = 0;
    std::vector<double> params; // data slots: curve parameters
    std::vector<double> pweights;
    std::optional<GeneratorSet> generators;
};

// Curve parameter matching the chord parameter u (0 at `a`, 1 at `b`).
inline double chord_to_curve(const Curve& c, const Vec2& a, const Vec2& b, double u)
{
    return (c.point(0.0) - a).norm() <= (c.point(0.0) - b).norm() ? u : 1.0 - u;
}

inline int quadrature_order(int k) { return 2 * k + 2; }

} // namespace detail

/// Global unknowns and per-element local spaces of degree k.
inline Discretization<2> build_discretization(const Mesh2D& m, int k, CurvedStrategy strategy = CurvedStrategy::generators)
{
    if (k < 1) throw InputError("degree must be >= 1 (got " + std::to_string(k) + ")");
    const Topology2D topo = build_topology(m);
    if (!topo.conformity.empty()) throw InputError("non-conforming mesh: " + topo.conformity.front());
    const int order = detail::quadrature_order(k);
    const std::size_t ne = topo.edges.size();

    Discretization<2> d;
    d.degree = k;

    bool ribbon = false;
    for (std::size_t e = 0; e < m.elements.size(); ++e) {
        const auto& el = m.elements[e];
        int curved = 0;
        for (int c : el.edge_curve) curved += (c >= 0);
        if (curved > 1) throw InputError("element " + std::to_string(e) + " has more than one curved edge");
        if (el.clipped) {
            ribbon = true;
            if (el.v.size() != 3 || curved) throw InputError("element " + std::to_string(e) + ": ribbon elements are straight triangles");
        }
    }

    std::vector<detail::EdgeInfo2D> info(ne);
    for (std::size_t e = 0; e < ne; ++e) {
        auto& ei = info[e];
        const auto key = topo.edges[e];
        const bool bnd = topo.is_boundary(static_cast<int>(e));
        ei.ghost = bnd && m.ghost_edges.count(key);
        ei.boundary = bnd && !ei.ghost;
        ei.curve = topo.edge_curve[e];
        const std::string name = "edge (" + std::to_string(key.first) + "," + std::to_string(key.second) + ")";
        if (ei.curve >= 0 && !ei.boundary) throw InputError(name + ": curved edges must lie on the domain boundary");
        if (ei.boundary) {
            auto it = m.tags.find(key);
            if (it == m.tags.end()) throw InputError("boundary " + name + " has no boundary tag");
            ei.dirichlet = it->second == BoundaryKind::dirichlet;
            ei.neumann = !ei.dirichlet;
        }
        if (ribbon && ei.dirichlet)
            throw InputError("ribbon coupling supports full Neumann problems only (" + name + " is Dirichlet)");
        if (ei.curve >= 0 && ei.neumann && strategy == CurvedStrategy::ribbon)
            throw InputError("ribbon strategy needs a ribbon mesh; " + name + " carries a curve");
    }

    // vertices
    const std::size_t nvert = m.vertices.size();
    std::vector<char> used(nvert, 0), vbnd(nvert, 0), vdir(nvert, 0), vany(nvert, 0);
    for (const auto& el : m.elements)
        for (int v : el.v) used[static_cast<std::size_t>(v)] = 1;
    for (std::size_t e = 0; e < ne; ++e) {
        for (int v : {topo.edges[e].first, topo.edges[e].second}) {
            if (info[e].boundary) vbnd[static_cast<std::size_t>(v)] = 1;
            if (info[e].dirichlet) vdir[static_cast<std::size_t>(v)] = 1;
            if (info[e].boundary || info[e].ghost) vany[static_cast<std::size_t>(v)] = 1;
        }
    }
    d.vertex_dof.assign(nvert, -1);
    for (std::size_t v = 0; v < nvert; ++v) {
        if (!used[v]) continue;
        GlobalDof<2> g;
        g.kind = DofKind::vertex;
        g.entity = static_cast<int>(v);
        g.points = {m.vertices[v]};
        g.weights = {1.0};
        g.dirichlet = vdir[v];
        g.on_boundary = vbnd[v];
        d.vertex_dof[v] = d.size();
        d.dofs.push_back(g);
        if (d.pin < 0 && vany[v]) d.pin = d.vertex_dof[v];
    }

    // edges
    for (std::size_t e = 0; e < ne; ++e) {
        auto& ei = info[e];
        const int lo = topo.edges[e].first, hi = topo.edges[e].second;
        const Vec2& xl = m.vertices[static_cast<std::size_t>(lo)];
        const Vec2& xh = m.vertices[static_cast<std::size_t>(hi)];
        ei.first = d.size();
        if (ei.curve < 0) {
            const auto src = m.facet_source.find(topo.edges[e]);
            const Curve* fc = src == m.facet_source.end() ? nullptr : m.curves.at(static_cast<std::size_t>(src->second)).get();
            for (int j = 0; j + 2 <= k; ++j) {
                GlobalDof<2> g;
                g.kind = DofKind::edge_moment;
                g.entity = static_cast<int>(e);
                g.index = j;
                std::tie(g.points, g.weights) = EdgeTrace::moment_functional<2>(xl, xh, j, order);
                if (fc)
                    for (auto& p : g.points) {
                        const double u = (p - xl).dot(xh - xl) / (xh - xl).squaredNorm();
                        p = fc->point(detail::chord_to_curve(*fc, xl, xh, u));
                    }
                g.dirichlet = ei.dirichlet;
                g.on_boundary = ei.boundary;
                d.dofs.push_back(g);
            }
        } else {
            const auto& curve = m.curves.at(static_cast<std::size_t>(ei.curve));
            if (ei.dirichlet) {
                for (auto [t, w] : curve->parameter_rule(order)) {
                    GlobalDof<2> g;
                    g.kind = DofKind::data_slot;
                    g.entity = static_cast<int>(e);
                    g.index = static_cast<int>(ei.params.size());
                    g.points = {curve->point(t)};
                    g.weights = {1.0};
                    g.dirichlet = true;
                    g.on_boundary = true;
                    ei.params.push_back(t);
                    ei.pweights.push_back(w);
                    d.dofs.push_back(g);
                }
            } else if (strategy == CurvedStrategy::generators) {
                // T_eta falls back to the outward side when the curve is flat
                const int el = topo.edge_elements[e][0];
                const auto& ev = m.elements[static_cast<std::size_t>(el)].v;
                Vec2 out = Vec2::Zero();
                for (std::size_t i = 0; i < ev.size(); ++i)
                    if (topo.element_edges[static_cast<std::size_t>(el)][i] == static_cast<int>(e))
                        out = right_normal((m.vertices[static_cast<std::size_t>(ev[(i + 1) % ev.size()])] -
                                            m.vertices[static_cast<std::size_t>(ev[i])]).normalized());
                ei.generators = build_generator_set(Piece2D::curved(curve, false), k, out);
                for (int i = 0; i < ei.generators->size(); ++i) {
                    GlobalDof<2> g;
                    g.kind = DofKind::generator;
                    g.entity = static_cast<int>(e);
                    g.index = i;
                    g.points = {ei.generators->points[static_cast<std::size_t>(i)]};
                    g.weights = {1.0};
                    g.on_boundary = true;
                    d.dofs.push_back(g);
                }
            }
        }
        ei.count = d.size() - ei.first;
    }

    // elements
    for (std::size_t e = 0; e < m.elements.size(); ++e) {
        const auto& el = m.elements[e];
        // ribbon triangles are Lagrange-type: moments up to k-3 make P_k unisolvent
        const int nint = poly_dim(2, el.clipped ? k - 3 : k - 2);
        const std::size_t nv = el.v.size();
        const Region2D region = element_region(m, static_cast<int>(e));
        std::optional<Region2D> tri;
        if (el.clipped) {
            std::vector<Vec2> p;
            for (int v : el.v) p.push_back(m.vertices[static_cast<std::size_t>(v)]);
            tri = Region2D::polygon(p);
        }
        const Region2D& shape = tri ? *tri : region;

        LocalSpace<2> s;
        s.element = static_cast<int>(e);
        s.degree = k;
        s.center = shape.centroid();
        s.diameter = shape.diameter();
        s.measure = region.area();
        s.polynomial = el.clipped != nullptr;
        s.volume = region.domain_rule(order);
        d.h = std::max(d.h, s.diameter);
        const auto basis = s.basis();

        // local layout
        std::vector<int> edge_col(nv);
        for (std::size_t i = 0; i < nv; ++i) {
            s.kinds.push_back(DofKind::vertex);
            s.global.push_back(d.vertex_dof[static_cast<std::size_t>(el.v[i])]);
        }
        for (std::size_t i = 0; i < nv; ++i) {
            const auto& ei = info[static_cast<std::size_t>(topo.element_edges[e][i])];
            edge_col[i] = static_cast<int>(s.kinds.size());
            for (int j = 0; j < ei.count; ++j) {
                s.kinds.push_back(d.dofs[static_cast<std::size_t>(ei.first + j)].kind);
                s.global.push_back(ei.first + j);
            }
        }
        const int int_col = static_cast<int>(s.kinds.size());
        const double int_measure = shape.area();
        const auto int_rule = shape.domain_rule(order + 2);
        const auto low = s.basis(el.clipped ? k - 3 : k - 2);
        for (int a = 0; a < nint; ++a) {
            GlobalDof<2> g;
            g.kind = DofKind::interior;
            g.entity = static_cast<int>(e);
            g.index = a;
            g.points = int_rule.points;
            for (std::size_t q = 0; q < int_rule.size(); ++q)
                g.weights.push_back(int_rule.weights[q] * low.values(int_rule.points[q])(a) / int_measure);
            s.kinds.push_back(DofKind::interior);
            s.global.push_back(d.size());
            d.dofs.push_back(g);
        }
        const int n = s.size();
        s.D = MatrixXd::Zero(n, basis.size());
        s.stab_weights = VectorXd::Ones(n);
        s.interior = MatrixXd::Zero(nint, n);
        for (int a = 0; a < nint; ++a) s.interior(a, int_col + a) = 1.0;
        if (nint > 0) s.D.middleRows(int_col, nint) = basis.gram(shape.domain_rule(2 * k)).topRows(nint) / int_measure;
        for (std::size_t i = 0; i < nv; ++i) s.D.row(static_cast<Eigen::Index>(i)) = basis.values(m.vertices[static_cast<std::size_t>(el.v[i])]).transpose();

        struct Deferred {
            std::size_t piece, local_edge;
            int col_a, col_b;
        };
        std::optional<Deferred> subset;

        for (std::size_t i = 0; i < nv; ++i) {
            const int gid = topo.element_edges[e][i];
            const auto& ei = info[static_cast<std::size_t>(gid)];
            const int va = el.v[i], vb = el.v[(i + 1) % nv];
            const Vec2& xa = m.vertices[static_cast<std::size_t>(va)];
            const Vec2& xb = m.vertices[static_cast<std::size_t>(vb)];
            const int ca = static_cast<int>(i), cb = static_cast<int>((i + 1) % nv);
            if (ei.curve < 0) {
                const bool a_lo = va < vb;
                std::vector<int> cols{a_lo ? ca : cb, a_lo ? cb : ca};
                for (int j = 0; j < ei.count; ++j) cols.push_back(edge_col[i] + j);
                if (ei.count > 0)
                    s.D.middleRows(edge_col[i], ei.count) =
                        EdgeTrace::moment_rows(basis, a_lo ? xa : xb, a_lo ? xb : xa, k);
                if (s.polynomial) continue;
                TracePiece<2> p = straight_edge_piece(xa, xb, a_lo, cols, n, k, order);
                p.entity = gid;
                p.on_domain_boundary = ei.boundary;
                p.neumann = ei.neumann;
                const auto src = m.facet_source.find(topo.edges[static_cast<std::size_t>(gid)]);
                if (src != m.facet_source.end()) {
                    const Curve& c = *m.curves.at(static_cast<std::size_t>(src->second));
                    const double len = (xb - xa).norm();
                    for (std::size_t q = 0; q < p.size(); ++q) {
                        const double u = (p.points[q] - xa).dot(xb - xa) / (len * len);
                        const double t = detail::chord_to_curve(c, xa, xb, u);
                        const Vec2 dg = c.derivative(t) * (t == u ? 1.0 : -1.0);
                        p.data_points[q] = c.point(t);
                        p.data_normals[q] = right_normal(dg.normalized());
                        p.data_scale[q] = dg.norm() / len;
                    }
                }
                s.pieces.push_back(std::move(p));
                continue;
            }

            const Piece2D& pc = region.pieces()[i];
            const auto& curve = *m.curves.at(static_cast<std::size_t>(ei.curve));
            // columns of gamma(0), gamma(1)
            const int c0 = pc.reversed ? cb : ca, c1 = pc.reversed ? ca : cb;
            TracePiece<2> p;
            p.entity = gid;
            p.on_domain_boundary = true;
            p.neumann = ei.neumann;
            if (ei.dirichlet) {
                const double c = generator_count(k);
                const double len = curve.length();
                p.values = MatrixXd::Zero(static_cast<Eigen::Index>(ei.params.size()), n);
                for (std::size_t q = 0; q < ei.params.size(); ++q) {
                    const double t = ei.params[q];
                    const Vec2 dg = curve.derivative(t) * (pc.reversed ? -1.0 : 1.0);
                    const Vec2 x = curve.point(t);
                    const int col = edge_col[i] + static_cast<int>(q);
                    p.points.push_back(x);
                    p.weights.push_back(ei.pweights[q] * dg.norm());
                    p.normals.push_back(right_normal(dg.normalized()));
                    p.values(static_cast<Eigen::Index>(q), col) = 1.0;
                    s.D.row(col) = basis.values(x).transpose();
                    s.stab_weights(col) = c * ei.pweights[q] * dg.norm() / len;
                }
                p.default_data_sampling();
                s.pieces.push_back(std::move(p));
                continue;
            }
            const BoundaryRule<2> br = Region2D::piece_rule(pc, order);
            p.points = br.points;
            p.weights = br.weights;
            p.normals = br.normals;
            p.default_data_sampling();
            if (ei.generators) {
                const auto& gs = *ei.generators;
                const ScaledMonomialBasis<2> tb((gs.a + gs.b + gs.apex) / 3.0, (gs.b - gs.a).norm(), k);
                const MatrixXd cm = midwife_matrix(gs, tb);
                std::vector<int> cols{c0, c1};
                for (int j = 0; j < gs.size(); ++j) {
                    cols.push_back(edge_col[i] + j);
                    s.D.row(edge_col[i] + j) = basis.values(gs.points[static_cast<std::size_t>(j)]).transpose();
                }
                MatrixXd scatter = MatrixXd::Zero(cm.cols(), n);
                for (std::size_t j = 0; j < cols.size(); ++j) scatter(static_cast<Eigen::Index>(j), cols[j]) = 1.0;
                std::vector<std::vector<Vec2>> tang(1);
                for (double t : br.params) tang[0].push_back(pc.unit_tangent(t));
                set_polynomial_trace(p, tb, cm * scatter, tang);
                s.pieces.push_back(std::move(p));
                continue;
            }
            subset = Deferred{s.pieces.size(), i, ca, cb};
            s.pieces.push_back(std::move(p));
        }

        if (subset) {
            std::vector<int> rows(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = i;
            const MatrixXd l = subset_operator(s.D, rows, n, {subset->col_a, subset->col_b}, strategy == CurvedStrategy::subset_mfd);
            auto& p = s.pieces[subset->piece];
            const Piece2D& pc = region.pieces()[subset->local_edge];
            const BoundaryRule<2> br = Region2D::piece_rule(pc, order);
            std::vector<std::vector<Vec2>> tang(1);
            for (double t : br.params) tang[0].push_back(pc.unit_tangent(t));
            set_polynomial_trace(p, basis, l, tang);
        }

        if (s.polynomial) {
            Eigen::FullPivLU<MatrixXd> lu(s.D);
            if (!lu.isInvertible()) throw ProjectorError("ribbon element " + std::to_string(e) + ": dofs are not unisolvent on P_k");
            const MatrixXd inv = lu.inverse();
            for (const auto& pc : region.pieces()) {
                if (!pc.on_domain_boundary) continue;
                const BoundaryRule<2> br = Region2D::piece_rule(pc, order);
                TracePiece<2> p;
                p.points = br.points;
                p.weights = br.weights;
                p.normals = br.normals;
                p.on_domain_boundary = true;
                p.neumann = true;
                p.default_data_sampling();
                set_polynomial_trace(p, basis, inv, {});
                s.pieces.push_back(std::move(p));
            }
        }
        d.spaces.push_back(std::move(s));
    }

    for (const auto& g : d.dofs) d.any_dirichlet = d.any_dirichlet || g.dirichlet;
    for (const auto& ei : info) d.any_neumann = d.any_neumann || ei.neumann;
    d.any_neumann = d.any_neumann || ribbon;
    return d;
}

/// Local space of a single straight polygon (counterclockwise vertices), with
/// local unknowns ordered as vertices, edge moments per edge, interior moments.
inline LocalSpace<2> polygon_space(const std::vector<Vec2>& poly, int k)
{
    Mesh2D m;
    std::vector<int> ids;
    for (const auto& x : poly) ids.push_back(m.add_vertex(x));
    m.add_element(ids);
    m.set_all_tags(BoundaryKind::dirichlet);
    auto d = build_discretization(m, k);
    return std::move(d.spaces.front());
}

} // namespace curvem
