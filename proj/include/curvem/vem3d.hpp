#pragma once

// Global unknowns and element spaces for polyhedral meshes. Flat faces carry
// the usual face moments and their traces come from the face energy
// projection. A curved boundary face (sphere patch or declared curved) carries
// moments of the Dirichlet data when Dirichlet, and otherwise the trace of a
// polynomial p* fitted to the element dofs that do not live on it.

#include "curvem/curved2d.hpp"
#include "curvem/discretization.hpp"
#include "curvem/mesh3d.hpp"

namespace curvem {

namespace detail {

struct EdgeInfo3D {
    bool boundary = false;
    bool dirichlet = false;
    std::optional<Arc3D> arc; // from the lower to the higher vertex id
    int first = -1;
    int count = 0;
    std::vector<double> params, pweights;
};

struct FaceInfo3D {
    bool boundary = false;
    bool dirichlet = false;
    bool neumann = false;
    bool curved = false;
    int first = -1;
    int count = 0;
    MatrixXd psi; // Dirichlet curved faces: moment weights at the face nodes
};

// Orthonormal (for (1/|F|) int_F) basis of span{P_k, P_{k-1} n} on a curved
// face, tabulated at the face nodes. Every boundary integral the projectors
// need is a moment against this span.
inline MatrixXd curved_face_moment_basis(const FaceGeometry& fg, const std::vector<Vec3>& normals, int k)
{
    Vec3 c = Vec3::Zero();
    for (std::size_t q = 0; q < fg.rule.size(); ++q) c += fg.rule.weights[q] * fg.rule.points[q];
    c /= fg.area;
    const ScaledMonomialBasis<3> bk(c, fg.diameter, k), bl(c, fg.diameter, k - 1);
    const auto nq = static_cast<Eigen::Index>(fg.rule.size());
    MatrixXd phi(nq, bk.size() + 3 * bl.size());
    for (Eigen::Index q = 0; q < nq; ++q) {
        const auto& x = fg.rule.points[static_cast<std::size_t>(q)];
        const VectorXd l = bl.values(x);
        phi.row(q).head(bk.size()) = bk.values(x).transpose();
        for (int d = 0; d < 3; ++d) phi.row(q).segment(bk.size() + d * bl.size(), bl.size()) = normals[static_cast<std::size_t>(q)](d) * l.transpose();
    }
    VectorXd w(nq);
    for (Eigen::Index q = 0; q < nq; ++q) w(q) = fg.rule.weights[static_cast<std::size_t>(q)] / fg.area;
    const MatrixXd gram = phi.transpose() * w.asDiagonal() * phi;
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(gram);
    const double top = es.eigenvalues().maxCoeff();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < gram.rows(); ++i)
        if (es.eigenvalues()(i) > 1e-11 * top) keep.push_back(i);
    MatrixXd t(gram.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j)
        t.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(keep[j]) / std::sqrt(es.eigenvalues()(keep[j]));
    return phi * t;
}

} // namespace detail

inline Discretization<3> build_discretization(const Mesh3D& m, int k)
{
    if (k < 1) throw InputError("degree must be >= 1 (got " + std::to_string(k) + ")");
    const Topology3D topo = build_topology(m);
    if (!topo.conformity.empty()) throw InputError("non-conforming mesh: " + topo.conformity.front());
    const int order = 2 * k + 2;
    const std::size_t nfaces = m.faces.size(), nedges = topo.edges.size();

    std::vector<FaceGeometry> geos(nfaces);
    for (std::size_t f = 0; f < nfaces; ++f) geos[f] = face_geometry(m, topo, static_cast<int>(f), order);

    std::vector<detail::FaceInfo3D> finfo(nfaces);
    for (std::size_t f = 0; f < nfaces; ++f) {
        auto& fi = finfo[f];
        fi.boundary = topo.is_boundary_face(static_cast<int>(f));
        fi.curved = m.is_curved(static_cast<int>(f));
        if (!fi.boundary) continue;
        auto it = m.tags.find(static_cast<int>(f));
        if (it == m.tags.end()) throw InputError("boundary face " + std::to_string(f) + " has no boundary tag");
        fi.dirichlet = it->second == BoundaryKind::dirichlet;
        fi.neumann = !fi.dirichlet;
    }
    std::vector<detail::EdgeInfo3D> einfo(nedges);
    for (std::size_t e = 0; e < nedges; ++e) {
        auto& ei = einfo[e];
        int flat_faces = 0;
        for (int f : topo.edge_faces[e]) {
            const auto& fi = finfo[static_cast<std::size_t>(f)];
            ei.boundary = ei.boundary || fi.boundary;
            ei.dirichlet = ei.dirichlet || fi.dirichlet;
            flat_faces += !fi.curved;
        }
        const int sid = topo.edge_sphere[e];
        if (sid < 0) continue;
        const auto key = topo.edges[e];
        ei.arc = Arc3D::between(m.spheres[static_cast<std::size_t>(sid)], m.vertices[static_cast<std::size_t>(key.first)],
                                m.vertices[static_cast<std::size_t>(key.second)]);
        if (!ei.dirichlet && flat_faces > 1)
            throw InputError("edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                             "): a Neumann arc may border only one flat face");
    }

    Discretization<3> d;
    d.degree = k;

    // vertices
    const std::size_t nvert = m.vertices.size();
    std::vector<char> used(nvert, 0), vbnd(nvert, 0), vdir(nvert, 0);
    for (const auto& el : m.elements)
        for (int f : el.faces)
            for (int v : m.faces[static_cast<std::size_t>(f)].v) used[static_cast<std::size_t>(v)] = 1;
    for (std::size_t f = 0; f < nfaces; ++f)
        for (int v : m.faces[f].v) {
            if (finfo[f].boundary) vbnd[static_cast<std::size_t>(v)] = 1;
            if (finfo[f].dirichlet) vdir[static_cast<std::size_t>(v)] = 1;
        }
    d.vertex_dof.assign(nvert, -1);
    for (std::size_t v = 0; v < nvert; ++v) {
        if (!used[v]) continue;
        GlobalDof<3> g;
        g.kind = DofKind::vertex;
        g.entity = static_cast<int>(v);
        g.points = {m.vertices[v]};
        g.weights = {1.0};
        g.dirichlet = vdir[v];
        g.on_boundary = vbnd[v];
        d.vertex_dof[v] = d.size();
        d.dofs.push_back(g);
        if (d.pin < 0 && vbnd[v]) d.pin = d.vertex_dof[v];
    }

    // edges
    const auto& arc_rule = gauss_legendre(gauss_points_for(std::max(order, 8) + 4));
    for (std::size_t e = 0; e < nedges; ++e) {
        auto& ei = einfo[e];
        const Vec3& xl = m.vertices[static_cast<std::size_t>(topo.edges[e].first)];
        const Vec3& xh = m.vertices[static_cast<std::size_t>(topo.edges[e].second)];
        ei.first = d.size();
        if (!ei.arc) {
            for (int j = 0; j + 2 <= k; ++j) {
                GlobalDof<3> g;
                g.kind = DofKind::edge_moment;
                g.entity = static_cast<int>(e);
                g.index = j;
                std::tie(g.points, g.weights) = EdgeTrace::moment_functional<3>(xl, xh, j, order);
                g.dirichlet = ei.dirichlet;
                g.on_boundary = ei.boundary;
                d.dofs.push_back(g);
            }
        } else if (ei.dirichlet) {
            for (std::size_t q = 0; q < arc_rule.nodes.size(); ++q) {
                GlobalDof<3> g;
                g.kind = DofKind::data_slot;
                g.entity = static_cast<int>(e);
                g.index = static_cast<int>(q);
                g.points = {ei.arc->point(arc_rule.nodes[q])};
                g.weights = {1.0};
                g.dirichlet = true;
                g.on_boundary = true;
                ei.params.push_back(arc_rule.nodes[q]);
                ei.pweights.push_back(arc_rule.weights[q]);
                d.dofs.push_back(g);
            }
        }
        ei.count = d.size() - ei.first;
    }

    // faces
    const int nfm = poly_dim(2, k - 2);
    for (std::size_t f = 0; f < nfaces; ++f) {
        auto& fi = finfo[f];
        const auto& fg = geos[f];
        fi.first = d.size();
        if (!fi.curved) {
            const ScaledMonomialBasis<2> fb(fg.centroid2d, fg.diameter, k - 2);
            for (int a = 0; a < nfm; ++a) {
                GlobalDof<3> g;
                g.kind = DofKind::face_moment;
                g.entity = static_cast<int>(f);
                g.index = a;
                g.points = fg.rule.points;
                for (std::size_t q = 0; q < fg.rule.size(); ++q)
                    g.weights.push_back(fg.rule.weights[q] * fb.values(fg.rule2d.points[q])(a) / fg.area);
                g.dirichlet = fi.dirichlet;
                g.on_boundary = fi.boundary;
                d.dofs.push_back(g);
            }
        } else if (fi.dirichlet) {
            std::vector<Vec3> nrm;
            if (fg.sphere) {
                const Sphere& sp = m.spheres[static_cast<std::size_t>(m.faces[f].surface)];
                for (const auto& x : fg.rule.points) nrm.push_back((x - sp.center) / sp.radius);
            } else {
                nrm.assign(fg.rule.size(), fg.frame.normal);
            }
            fi.psi = detail::curved_face_moment_basis(fg, nrm, k);
            for (Eigen::Index a = 0; a < fi.psi.cols(); ++a) {
                GlobalDof<3> g;
                g.kind = DofKind::data_slot;
                g.entity = static_cast<int>(f);
                g.index = static_cast<int>(a);
                g.points = fg.rule.points;
                for (std::size_t q = 0; q < fg.rule.size(); ++q)
                    g.weights.push_back(fg.rule.weights[q] * fi.psi(static_cast<Eigen::Index>(q), a) / fg.area);
                g.dirichlet = true;
                g.on_boundary = true;
                d.dofs.push_back(g);
            }
        }
        fi.count = d.size() - fi.first;
    }

    // elements
    const int nint = poly_dim(3, k - 2);
    for (std::size_t e = 0; e < m.elements.size(); ++e) {
        const auto& el = m.elements[e];
        const ElementGeometry3D eg = element_geometry(m, static_cast<int>(e), geos, order);
        LocalSpace<3> s;
        s.element = static_cast<int>(e);
        s.degree = k;
        s.center = eg.centroid;
        s.diameter = eg.diameter;
        s.measure = eg.volume;
        s.volume = eg.rule;
        d.h = std::max(d.h, s.diameter);
        const auto basis = s.basis();

        std::map<int, int> vcol, ecol;
        for (int f : el.faces)
            for (int v : m.faces[static_cast<std::size_t>(f)].v)
                if (!vcol.count(v)) {
                    vcol[v] = s.size();
                    s.kinds.push_back(DofKind::vertex);
                    s.global.push_back(d.vertex_dof[static_cast<std::size_t>(v)]);
                }
        const int nverts = s.size();
        std::vector<int> edge_order;
        for (int f : el.faces)
            for (int eid : topo.face_edges[static_cast<std::size_t>(f)])
                if (!ecol.count(eid)) {
                    ecol[eid] = s.size();
                    edge_order.push_back(eid);
                    const auto& ei = einfo[static_cast<std::size_t>(eid)];
                    for (int j = 0; j < ei.count; ++j) {
                        s.kinds.push_back(d.dofs[static_cast<std::size_t>(ei.first + j)].kind);
                        s.global.push_back(ei.first + j);
                    }
                }
        std::vector<int> fcol;
        for (int f : el.faces) {
            const auto& fi = finfo[static_cast<std::size_t>(f)];
            fcol.push_back(s.size());
            for (int j = 0; j < fi.count; ++j) {
                s.kinds.push_back(d.dofs[static_cast<std::size_t>(fi.first + j)].kind);
                s.global.push_back(fi.first + j);
            }
        }
        const int int_col = s.size();
        const auto low = s.basis(k - 2);
        for (int a = 0; a < nint; ++a) {
            GlobalDof<3> g;
            g.kind = DofKind::interior;
            g.entity = static_cast<int>(e);
            g.index = a;
            g.points = eg.rule.points;
            for (std::size_t q = 0; q < eg.rule.size(); ++q)
                g.weights.push_back(eg.rule.weights[q] * low.values(eg.rule.points[q])(a) / eg.volume);
            s.kinds.push_back(DofKind::interior);
            s.global.push_back(d.size());
            d.dofs.push_back(g);
        }
        const int n = s.size();
        s.D = MatrixXd::Zero(n, basis.size());
        s.stab_weights = VectorXd::Ones(n);
        s.interior = MatrixXd::Zero(nint, n);
        for (int a = 0; a < nint; ++a) s.interior(a, int_col + a) = 1.0;
        if (nint > 0) s.D.middleRows(int_col, nint) = basis.gram(eg.rule).topRows(nint) / eg.volume;
        for (auto [v, c] : vcol) s.D.row(c) = basis.values(m.vertices[static_cast<std::size_t>(v)]).transpose();
        for (int eid : edge_order) {
            const auto& ei = einfo[static_cast<std::size_t>(eid)];
            const int c = ecol[eid];
            if (!ei.arc) {
                if (ei.count > 0)
                    s.D.middleRows(c, ei.count) = EdgeTrace::moment_rows(basis, m.vertices[static_cast<std::size_t>(topo.edges[static_cast<std::size_t>(eid)].first)],
                                                                         m.vertices[static_cast<std::size_t>(topo.edges[static_cast<std::size_t>(eid)].second)], k);
                continue;
            }
            for (int q = 0; q < ei.count; ++q) {
                s.D.row(c + q) = basis.values(ei.arc->point(ei.params[static_cast<std::size_t>(q)])).transpose();
                s.stab_weights(c + q) = (k + 1) * ei.pweights[static_cast<std::size_t>(q)];
            }
        }
        for (std::size_t i = 0; i < el.faces.size(); ++i) {
            const int f = el.faces[i];
            const auto& fi = finfo[static_cast<std::size_t>(f)];
            const auto& fg = geos[static_cast<std::size_t>(f)];
            if (!fi.curved) {
                if (nfm == 0) continue;
                const ScaledMonomialBasis<2> fb(fg.centroid2d, fg.diameter, k - 2);
                MatrixXd rows = MatrixXd::Zero(nfm, basis.size());
                for (std::size_t q = 0; q < fg.rule.size(); ++q)
                    rows.noalias() += (fg.rule.weights[q] / fg.area) * fb.values(fg.rule2d.points[q]) * basis.values(fg.rule.points[q]).transpose();
                s.D.middleRows(fcol[i], nfm) = rows;
                continue;
            }
            if (fi.count == 0) continue;
            for (std::size_t q = 0; q < fg.rule.size(); ++q)
                s.D.middleRows(fcol[i], fi.count).noalias() +=
                    (fg.rule.weights[q] / fg.area) * fi.psi.row(static_cast<Eigen::Index>(q)).transpose() * basis.values(fg.rule.points[q]).transpose();
        }

        // flat faces: trace of the face energy projection
        for (std::size_t i = 0; i < el.faces.size(); ++i) {
            const int f = el.faces[i];
            const auto& fi = finfo[static_cast<std::size_t>(f)];
            if (fi.curved) continue;
            const auto& fg = geos[static_cast<std::size_t>(f)];
            const auto& fv = m.faces[static_cast<std::size_t>(f)].v;
            const std::size_t nfv = fv.size();

            LocalSpace<2> fs;
            fs.element = s.element;
            fs.degree = k;
            fs.center = fg.centroid2d;
            fs.diameter = fg.diameter;
            fs.measure = fg.area;
            fs.volume = fg.rule2d;
            std::vector<int> map;
            for (int v : fv) {
                fs.kinds.push_back(DofKind::vertex);
                map.push_back(vcol[v]);
            }
            std::vector<int> fecol(nfv);
            for (std::size_t j = 0; j < nfv; ++j) {
                const int eid = topo.face_edges[static_cast<std::size_t>(f)][j];
                fecol[j] = fs.size();
                for (int c = 0; c < einfo[static_cast<std::size_t>(eid)].count; ++c) {
                    fs.kinds.push_back(s.kinds[static_cast<std::size_t>(ecol[eid] + c)]);
                    map.push_back(ecol[eid] + c);
                }
            }
            const int fmc = fs.size();
            for (int c = 0; c < fi.count; ++c) {
                fs.kinds.push_back(DofKind::interior);
                map.push_back(fcol[i] + c);
            }
            const int nl = fs.size();
            const auto fb = fs.basis();
            fs.D = MatrixXd::Zero(nl, fb.size());
            fs.stab_weights = VectorXd::Ones(nl);
            fs.interior = MatrixXd::Zero(nfm, nl);
            for (int a = 0; a < nfm; ++a) fs.interior(a, fmc + a) = 1.0;
            if (nfm > 0) fs.D.middleRows(fmc, nfm) = fb.gram(fg.rule2d).topRows(nfm) / fg.area;
            for (std::size_t j = 0; j < nfv; ++j) fs.D.row(static_cast<Eigen::Index>(j)) = fb.values(fg.points2d[j]).transpose();

            std::optional<std::size_t> subset_piece, subset_edge;
            for (std::size_t j = 0; j < nfv; ++j) {
                const int eid = topo.face_edges[static_cast<std::size_t>(f)][j];
                const auto& ei = einfo[static_cast<std::size_t>(eid)];
                const int va = fv[j], vb = fv[(j + 1) % nfv];
                const Vec2& xa = fg.points2d[j];
                const Vec2& xb = fg.points2d[(j + 1) % nfv];
                const int ca = static_cast<int>(j), cb = static_cast<int>((j + 1) % nfv);
                const bool a_lo = va < vb;
                if (!ei.arc || m.faces[static_cast<std::size_t>(f)].surface == Mesh3D::declared_curved) {
                    std::vector<int> cols{a_lo ? ca : cb, a_lo ? cb : ca};
                    for (int c = 0; c < ei.count; ++c) cols.push_back(fecol[j] + c);
                    if (ei.count > 0) fs.D.middleRows(fecol[j], ei.count) = EdgeTrace::moment_rows(fb, a_lo ? xa : xb, a_lo ? xb : xa, k);
                    fs.pieces.push_back(straight_edge_piece(xa, xb, a_lo, cols, nl, k, order));
                    continue;
                }
                if (ei.dirichlet) {
                    TracePiece<2> p;
                    p.values = MatrixXd::Zero(ei.count, nl);
                    for (int q = 0; q < ei.count; ++q) {
                        const double t = ei.params[static_cast<std::size_t>(q)];
                        const Vec3 d3 = ei.arc->derivative(t) * (a_lo ? 1.0 : -1.0);
                        const Vec2 d2(d3.dot(fg.frame.e1), d3.dot(fg.frame.e2));
                        const Vec2 x = fg.frame.to2d(ei.arc->point(t));
                        p.points.push_back(x);
                        p.weights.push_back(ei.pweights[static_cast<std::size_t>(q)] * d2.norm());
                        p.normals.push_back(right_normal(d2.normalized()));
                        p.values(q, fecol[j] + q) = 1.0;
                        fs.D.row(fecol[j] + q) = fb.values(x).transpose();
                    }
                    p.default_data_sampling();
                    fs.pieces.push_back(std::move(p));
                    continue;
                }
                const BoundaryRule<2> br = Region2D::piece_rule(fg.region.pieces()[j], order);
                TracePiece<2> p;
                p.points = br.points;
                p.weights = br.weights;
                p.normals = br.normals;
                p.default_data_sampling();
                subset_piece = fs.pieces.size();
                subset_edge = j;
                fs.pieces.push_back(std::move(p));
            }
            if (subset_piece) {
                const std::size_t j = *subset_edge;
                std::vector<int> rows(static_cast<std::size_t>(nl));
                for (int r = 0; r < nl; ++r) rows[static_cast<std::size_t>(r)] = r;
                const MatrixXd l = subset_operator(fs.D, rows, nl, {static_cast<int>(j), static_cast<int>((j + 1) % nfv)}, false);
                const Piece2D& pc = fg.region.pieces()[j];
                const BoundaryRule<2> br = Region2D::piece_rule(pc, order);
                std::vector<std::vector<Vec2>> tang(1);
                for (double t : br.params) tang[0].push_back(pc.unit_tangent(t));
                set_polynomial_trace(fs.pieces[*subset_piece], fb, l, tang);
            }
            const MatrixXd pif = compute_pinabla(fs);
            MatrixXd scatter = MatrixXd::Zero(nl, n);
            for (int j = 0; j < nl; ++j) scatter(j, map[static_cast<std::size_t>(j)]) = 1.0;
            const MatrixXd op = pif * scatter;
            VectorXd root(nl);
            for (int j = 0; j < nl; ++j) root(j) = std::sqrt(s.stab_weights(map[static_cast<std::size_t>(j)]));

            TracePiece<3> p;
            p.entity = f;
            p.on_domain_boundary = fi.boundary;
            p.neumann = fi.neumann;
            p.points = fg.rule.points;
            p.weights = fg.rule.weights;
            p.normals = eg.normals[i];
            const auto nq = static_cast<Eigen::Index>(fg.rule.size());
            p.values.resize(nq, n);
            p.tangential.assign(2, MatrixXd(nq, n));
            p.tangents.assign(2, {});
            for (Eigen::Index q = 0; q < nq; ++q) {
                const Vec2& x = fg.rule2d.points[static_cast<std::size_t>(q)];
                p.values.row(q) = fb.values(x).transpose() * op;
                const auto g = fb.gradients(x);
                p.tangential[0].row(q) = g.row(0) * op;
                p.tangential[1].row(q) = g.row(1) * op;
                p.tangents[0].push_back(fg.frame.e1);
                p.tangents[1].push_back(fg.frame.e2);
            }
            p.dof_defect = root.asDiagonal() * (MatrixXd::Identity(nl, nl) - fs.D * pif) * scatter;
            p.default_data_sampling();
            s.pieces.push_back(std::move(p));
        }

        // curved face
        if (eg.curved_face >= 0) {
            const std::size_t i = static_cast<std::size_t>(eg.curved_face);
            const int f = el.faces[i];
            const auto& fi = finfo[static_cast<std::size_t>(f)];
            const auto& fg = geos[static_cast<std::size_t>(f)];
            TracePiece<3> p;
            p.entity = f;
            p.on_domain_boundary = true;
            p.neumann = fi.neumann;
            p.points = fg.rule.points;
            p.weights = fg.rule.weights;
            p.normals = eg.normals[i];
            if (fi.dirichlet) {
                p.values = MatrixXd::Zero(static_cast<Eigen::Index>(fg.rule.size()), n);
                p.values.middleCols(fcol[i], fi.count) = fi.psi;
                p.default_data_sampling();
            } else {
                // vertex values, straight-edge and flat-face moments, interior moments up to k-3
                std::vector<int> rows;
                for (int c = 0; c < nverts; ++c) rows.push_back(c);
                for (int eid : edge_order)
                    if (!einfo[static_cast<std::size_t>(eid)].arc)
                        for (int c = 0; c < einfo[static_cast<std::size_t>(eid)].count; ++c) rows.push_back(ecol[eid] + c);
                for (std::size_t j = 0; j < el.faces.size(); ++j)
                    if (j != i)
                        for (int c = 0; c < finfo[static_cast<std::size_t>(el.faces[j])].count; ++c) rows.push_back(fcol[j] + c);
                for (int a = 0; a < poly_dim(3, k - 3); ++a) rows.push_back(int_col + a);
                MatrixXd a(static_cast<Eigen::Index>(rows.size()), basis.size());
                MatrixXd select = MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), n);
                for (std::size_t r = 0; r < rows.size(); ++r) {
                    a.row(static_cast<Eigen::Index>(r)) = s.D.row(rows[r]);
                    select(static_cast<Eigen::Index>(r), rows[r]) = 1.0;
                }
                const MatrixXd l = lsq_operator(a, "curved face of element " + std::to_string(e)) * select;
                p.default_data_sampling();
                set_polynomial_trace(p, basis, l, {});
            }
            s.pieces.push_back(std::move(p));
        }
        d.spaces.push_back(std::move(s));
    }

    for (const auto& g : d.dofs) d.any_dirichlet = d.any_dirichlet || g.dirichlet;
    for (const auto& fi : finfo) d.any_neumann = d.any_neumann || fi.neumann;
    return d;
}

/// Local space of the single element of `m`, with every boundary face Dirichlet.
inline LocalSpace<3> polyhedron_space(Mesh3D m, int k)
{
    if (m.elements.size() != 1) throw InputError("polyhedron_space: mesh must hold exactly one element");
    m.set_all_tags(BoundaryKind::dirichlet);
    auto d = build_discretization(m, k);
    return std::move(d.spaces.front());
}

} // namespace curvem
