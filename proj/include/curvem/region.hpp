#pragma once

// Planar regions bounded by straight segments and curves: measures via
// Green's theorem, fan quadrature from the centroid (curved pieces use the
// blending map x = c + s (gamma(t) - c)), boundary quadrature, and clipping of
// convex polygons against a disk.

#include "curvem/curve.hpp"
#include "curvem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace curvem {

/// Quadrature on one boundary piece, with geometric data at every node.
template <int Dim>
struct BoundaryRule {
    std::vector<Vec<Dim>> points;
    std::vector<double> weights;
    std::vector<Vec<Dim>> normals;
    std::vector<double> params;

    std::size_t size() const { return points.size(); }
};

class Region2D {
public:
    Region2D() = default;

    explicit Region2D(std::vector<Piece2D> pieces) : pieces_(std::move(pieces))
    {
        if (pieces_.size() < 2) throw GeometryError("Region2D: need at least two boundary pieces");
        double scale = 0.0;
        for (const auto& p : pieces_) scale = std::max(scale, p.length());
        for (std::size_t i = 0; i < pieces_.size(); ++i) {
            const auto& nxt = pieces_[(i + 1) % pieces_.size()];
            if ((pieces_[i].b - nxt.a).norm() > 1e-9 * std::max(scale, 1e-300))
                throw GeometryError("Region2D: boundary loop is not closed at piece " + std::to_string(i));
        }
        compute_measures();
    }

    /// Straight-sided polygon, counterclockwise.
    static Region2D polygon(const std::vector<Vec2>& v)
    {
        std::vector<Piece2D> p;
        for (std::size_t i = 0; i < v.size(); ++i) p.push_back(Piece2D::segment(v[i], v[(i + 1) % v.size()]));
        return Region2D(std::move(p));
    }

    const std::vector<Piece2D>& pieces() const { return pieces_; }
    std::vector<Piece2D>& pieces() { return pieces_; }
    double area() const { return area_; }
    const Vec2& centroid() const { return centroid_; }
    double diameter() const { return diameter_; }

    bool has_curved() const
    {
        return std::any_of(pieces_.begin(), pieces_.end(), [](const Piece2D& p) { return p.kind == Piece2D::Kind::curve; });
    }

    double perimeter() const
    {
        double l = 0.0;
        for (const auto& p : pieces_) l += p.length();
        return l;
    }

    /// Fan rule from the centroid, exact to `order` on straight-sided regions.
    QuadratureRule<2> domain_rule(int order) const { return fan_rule(centroid_, order); }

    QuadratureRule<2> fan_rule(const Vec2& c, int order) const
    {
        QuadratureRule<2> r;
        const auto& gs = gauss_legendre(gauss_points_for(order + 1));
        const double tol = 1e-13 * diameter_ * diameter_;
        for (std::size_t ip = 0; ip < pieces_.size(); ++ip) {
            const auto& piece = pieces_[ip];
            for (auto [t, wt] : piece.parameter_rule(order)) {
                const Vec2 g = piece.point(t);
                const double jac = cross2(g - c, piece.derivative(t));
                if (jac < -tol)
                    throw GeometryError("domain quadrature: region is not star-shaped with respect to the fan center (piece " +
                                        std::to_string(ip) + ")");
                for (std::size_t i = 0; i < gs.nodes.size(); ++i) {
                    const double s = gs.nodes[i];
                    r.append(c + s * (g - c), wt * gs.weights[i] * s * jac);
                }
            }
        }
        return r;
    }

    BoundaryRule<2> boundary_rule(std::size_t piece, int order) const { return piece_rule(pieces_.at(piece), order); }

    static BoundaryRule<2> piece_rule(const Piece2D& p, int order)
    {
        BoundaryRule<2> r;
        for (auto [t, w] : p.parameter_rule(order)) {
            const Vec2 d = p.derivative(t);
            r.points.push_back(p.point(t));
            r.weights.push_back(w * d.norm());
            r.normals.push_back(right_normal(d.normalized()));
            r.params.push_back(t);
        }
        return r;
    }

    /// All vertices (piece start points) in loop order.
    std::vector<Vec2> corner_points() const
    {
        std::vector<Vec2> v;
        for (const auto& p : pieces_) v.push_back(p.a);
        return v;
    }

private:
    void compute_measures()
    {
        // Green: |P| = 1/2 \oint (x y' - y x'), int x = \oint x^2/2 dy, int y = -\oint y^2/2 dx
        double a = 0.0, mx = 0.0, my = 0.0;
        for (const auto& p : pieces_) {
            for (auto [t, w] : p.parameter_rule(4)) {
                const Vec2 x = p.point(t);
                const Vec2 d = p.derivative(t);
                a += 0.5 * w * (x.x() * d.y() - x.y() * d.x());
                mx += 0.5 * w * x.x() * x.x() * d.y();
                my -= 0.5 * w * x.y() * x.y() * d.x();
            }
        }
        double diam = 0.0;
        std::vector<Vec2> pts;
        for (const auto& p : pieces_) {
            auto b = p.bounding_points();
            pts.insert(pts.end(), b.begin(), b.end());
        }
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) diam = std::max(diam, (pts[i] - pts[j]).norm());
        diameter_ = diam;
        if (!(a > 1e-14 * diam * diam)) throw GeometryError("Region2D: non-positive area (" + std::to_string(a) + ")");
        area_ = a;
        centroid_ = Vec2(mx / a, my / a);
    }

    std::vector<Piece2D> pieces_;
    double area_ = 0.0;
    Vec2 centroid_ = Vec2::Zero();
    double diameter_ = 0.0;
};

/// Closed half-plane {x : normal . x >= offset}.
struct HalfPlane {
    Vec2 normal;
    double offset;
    double signed_distance(const Vec2& x) const { return normal.dot(x) - offset; }
};

/// Disk, optionally intersected with half-planes (e.g. the quarter disk).
struct DiskDomain {
    Vec2 center = Vec2::Zero();
    double radius = 1.0;
    std::vector<HalfPlane> halfplanes;

    bool contains(const Vec2& x, double tol = 0.0) const
    {
        if ((x - center).norm() > radius + tol) return false;
        for (const auto& h : halfplanes)
            if (h.signed_distance(x) < -tol) return false;
        return true;
    }
};

namespace detail {

inline std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, const HalfPlane& h, double tol)
{
    std::vector<Vec2> out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % n];
        const double dp = h.signed_distance(p), dq = h.signed_distance(q);
        const bool ip = dp >= -tol, iq = dq >= -tol;
        if (ip) out.push_back(p);
        if (ip != iq) {
            const double t = dp / (dp - dq);
            if (t > 1e-14 && t < 1.0 - 1e-14) out.push_back(p + t * (q - p));
        }
    }
    return out;
}

} // namespace detail

/// Omega_T = domain ∩ T for a convex counterclockwise polygon T. Returns
/// nullopt when the intersection has no interior. Pieces on the domain
/// boundary (arcs, and segments on a half-plane line) are flagged.
inline std::optional<Region2D> clip_to_disk(const std::vector<Vec2>& polygon, const DiskDomain& dom)
{
    double scale = 0.0;
    for (std::size_t i = 0; i < polygon.size(); ++i) scale = std::max(scale, (polygon[i] - polygon[(i + 1) % polygon.size()]).norm());
    const double tol = 1e-12 * std::max(scale, dom.radius);

    std::vector<Vec2> poly = polygon;
    for (const auto& h : dom.halfplanes) {
        poly = detail::clip_halfplane(poly, h, tol);
        if (poly.size() < 3) return std::nullopt;
    }

    const Vec2 c = dom.center;
    const double R = dom.radius;
    enum class Ev { vertex, enter, exit };
    struct Event {
        Vec2 x;
        Ev kind;
    };
    std::vector<Event> ev;
    const std::size_t n = poly.size();
    bool any_cross = false, all_inside = true;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 p = poly[i];
        const Vec2 d = poly[(i + 1) % n] - p;
        const double cc = (p - c).squaredNorm() - R * R;
        if (cc < 0.0)
            ev.push_back({p, Ev::vertex});
        else
            all_inside = false;
        const double a = d.squaredNorm();
        const double b = 2.0 * d.dot(p - c);
        const double disc = b * b - 4.0 * a * cc;
        if (disc <= 0.0) continue;
        const double sq = std::sqrt(disc);
        const double t1 = (-b - sq) / (2.0 * a), t2 = (-b + sq) / (2.0 * a);
        if (t1 > 1e-14 && t1 < 1.0 - 1e-14) {
            ev.push_back({p + t1 * d, Ev::enter});
            any_cross = true;
        }
        if (t2 > 1e-14 && t2 < 1.0 - 1e-14) {
            ev.push_back({p + t2 * d, Ev::exit});
            any_cross = true;
        }
    }

    auto on_halfplane_line = [&](const Vec2& x) {
        return std::any_of(dom.halfplanes.begin(), dom.halfplanes.end(),
                           [&](const HalfPlane& h) { return std::abs(h.signed_distance(x)) < tol; });
    };

    std::vector<Piece2D> pieces;
    if (!any_cross) {
        if (!all_inside) {
            bool center_inside = true;
            for (std::size_t i = 0; i < n; ++i)
                if (cross2(poly[(i + 1) % n] - poly[i], c - poly[i]) <= 0.0) center_inside = false;
            if (center_inside) throw GeometryError("clip_to_disk: disk lies entirely inside the polygon (unsupported)");
            return std::nullopt;
        }
        for (std::size_t i = 0; i < n; ++i) pieces.push_back(Piece2D::segment(poly[i], poly[(i + 1) % n]));
    } else {
        const std::size_t m = ev.size();
        for (std::size_t i = 0; i < m; ++i) {
            const Event& x = ev[i];
            const Event& y = ev[(i + 1) % m];
            if (x.kind == Ev::exit) {
                if (y.kind != Ev::enter) throw GeometryError("clip_to_disk: inconsistent crossing sequence");
                const double ax = std::atan2(x.x.y() - c.y(), x.x.x() - c.x());
                double ay = std::atan2(y.x.y() - c.y(), y.x.x() - c.x());
                while (ay <= ax) ay += 2.0 * pi;
                auto arc = std::make_shared<const Curve>(Curve::arc(c, R, ax, ay));
                Piece2D p = Piece2D::curved(arc, false);
                p.a = x.x;
                p.b = y.x;
                p.on_domain_boundary = true;
                pieces.push_back(p);
            } else {
                if ((y.x - x.x).norm() < 1e-14 * scale) continue;
                pieces.push_back(Piece2D::segment(x.x, y.x));
            }
        }
    }
    for (auto& p : pieces)
        if (p.kind == Piece2D::Kind::segment && on_halfplane_line(p.a) && on_halfplane_line(p.b)) p.on_domain_boundary = true;
    Region2D r(std::move(pieces));
    return r;
}

} // namespace curvem
