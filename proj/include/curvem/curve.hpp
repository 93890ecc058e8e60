#pragma once

#include "curvem/common.hpp"
#include "curvem/quadrature.hpp"

#include <cmath>
#include <memory>

namespace curvem {

/// Boundary curve gamma : [0,1] -> R^2. Circular arcs are first class; a
/// polyline through sample points is the fallback for anything else.
class Curve {
public:
    enum class Kind { arc, polyline };

    static Curve arc(const Vec2& center, double radius, double angle0, double angle1)
    {
        if (!(radius > 0.0)) throw GeometryError("Curve::arc: radius must be positive");
        if (angle0 == angle1) throw GeometryError("Curve::arc: angle1 must differ from angle0");
        if (std::abs(angle1 - angle0) >= 2.0 * pi) throw GeometryError("Curve::arc: arc must not close on itself");
        Curve c;
        c.kind_ = Kind::arc;
        c.center_ = center;
        c.radius_ = radius;
        c.a0_ = angle0;
        c.a1_ = angle1;
        return c;
    }

    /// Shortest arc of the circle (center, radius) from p to q.
    static Curve arc_through(const Vec2& center, double radius, const Vec2& p, const Vec2& q)
    {
        const double a0 = std::atan2(p.y() - center.y(), p.x() - center.x());
        double a1 = std::atan2(q.y() - center.y(), q.x() - center.x());
        while (a1 - a0 > pi) a1 -= 2.0 * pi;
        while (a1 - a0 < -pi) a1 += 2.0 * pi;
        return arc(center, radius, a0, a1);
    }

    static Curve polyline(std::vector<Vec2> points)
    {
        if (points.size() < 2) throw GeometryError("Curve::polyline: need at least two points");
        for (std::size_t i = 0; i + 1 < points.size(); ++i)
            if ((points[i + 1] - points[i]).norm() == 0.0) throw GeometryError("Curve::polyline: repeated sample point");
        Curve c;
        c.kind_ = Kind::polyline;
        c.samples_ = std::move(points);
        return c;
    }

    Kind kind() const { return kind_; }
    bool is_arc() const { return kind_ == Kind::arc; }
    const Vec2& center() const { return center_; }
    double radius() const { return radius_; }
    double angle0() const { return a0_; }
    double angle1() const { return a1_; }
    const std::vector<Vec2>& samples() const { return samples_; }

    /// True when the geometry is a single straight segment.
    bool is_straight() const { return kind_ == Kind::polyline && samples_.size() == 2; }

    int segments() const { return kind_ == Kind::arc ? 1 : static_cast<int>(samples_.size()) - 1; }

    Vec2 point(double t) const
    {
        if (kind_ == Kind::arc) {
            const double a = a0_ + t * (a1_ - a0_);
            return center_ + radius_ * Vec2(std::cos(a), std::sin(a));
        }
        auto [i, u] = locate(t);
        return samples_[i] + u * (samples_[i + 1] - samples_[i]);
    }

    Vec2 derivative(double t) const
    {
        if (kind_ == Kind::arc) {
            const double a = a0_ + t * (a1_ - a0_);
            return radius_ * (a1_ - a0_) * Vec2(-std::sin(a), std::cos(a));
        }
        auto [i, u] = locate(t);
        (void)u;
        return static_cast<double>(segments()) * (samples_[i + 1] - samples_[i]);
    }

    double length() const
    {
        if (kind_ == Kind::arc) return radius_ * std::abs(a1_ - a0_);
        double l = 0.0;
        for (std::size_t i = 0; i + 1 < samples_.size(); ++i) l += (samples_[i + 1] - samples_[i]).norm();
        return l;
    }

    /// Parameter-space rule on [0,1] (composite over polyline segments).
    /// `order` is the polynomial exactness wanted in the pulled-back integrand.
    std::vector<std::pair<double, double>> parameter_rule(int order) const
    {
        std::vector<std::pair<double, double>> r;
        if (kind_ == Kind::arc) {
            // pieces of at most pi/8 keep the trigonometric integrands resolved
            const int m = std::max(1, static_cast<int>(std::ceil(std::abs(a1_ - a0_) / (pi / 8.0) - 1e-12)));
            const auto& g = gauss_legendre(gauss_points_for(std::max(order, 8) + 4));
            for (int s = 0; s < m; ++s)
                for (std::size_t i = 0; i < g.nodes.size(); ++i) r.emplace_back((s + g.nodes[i]) / m, g.weights[i] / m);
            return r;
        }
        const int m = segments();
        const auto& g = gauss_legendre(gauss_points_for(order));
        for (int s = 0; s < m; ++s)
            for (std::size_t i = 0; i < g.nodes.size(); ++i) r.emplace_back((s + g.nodes[i]) / m, g.weights[i] / m);
        return r;
    }

    /// Points spread along the curve, used for diameters and bounding checks.
    std::vector<Vec2> bounding_points(int n = 32) const
    {
        std::vector<Vec2> p;
        if (kind_ == Kind::polyline) return samples_;
        for (int i = 0; i <= n; ++i) p.push_back(point(static_cast<double>(i) / n));
        return p;
    }

private:
    std::pair<std::size_t, double> locate(double t) const
    {
        const int m = segments();
        double x = t * m;
        int i = static_cast<int>(std::floor(x));
        if (i < 0) i = 0;
        if (i > m - 1) i = m - 1;
        return {static_cast<std::size_t>(i), x - i};
    }

    Kind kind_ = Kind::polyline;
    Vec2 center_ = Vec2::Zero();
    double radius_ = 1.0;
    double a0_ = 0.0, a1_ = 1.0;
    std::vector<Vec2> samples_;
};

/// One boundary piece of a planar region: a straight segment or an oriented curve.
struct Piece2D {
    enum class Kind { segment, curve };

    Kind kind = Kind::segment;
    Vec2 a = Vec2::Zero(), b = Vec2::Zero();
    std::shared_ptr<const Curve> curve;
    bool reversed = false;
    bool on_domain_boundary = false;

    static Piece2D segment(const Vec2& a, const Vec2& b)
    {
        Piece2D p;
        p.a = a;
        p.b = b;
        return p;
    }

    static Piece2D curved(std::shared_ptr<const Curve> c, bool reversed)
    {
        Piece2D p;
        p.kind = Kind::curve;
        p.curve = std::move(c);
        p.reversed = reversed;
        p.a = p.point(0.0);
        p.b = p.point(1.0);
        return p;
    }

    bool is_straight() const { return kind == Kind::segment || curve->is_straight(); }

    Vec2 point(double t) const
    {
        if (kind == Kind::segment) return a + t * (b - a);
        return curve->point(reversed ? 1.0 - t : t);
    }

    Vec2 derivative(double t) const
    {
        if (kind == Kind::segment) return b - a;
        return reversed ? Vec2(-curve->derivative(1.0 - t)) : curve->derivative(t);
    }

    Vec2 unit_tangent(double t) const { return derivative(t).normalized(); }

    /// Outward unit normal for a counterclockwise loop.
    Vec2 outward_normal(double t) const { return right_normal(unit_tangent(t)); }

    double length() const { return kind == Kind::segment ? (b - a).norm() : curve->length(); }

    std::vector<std::pair<double, double>> parameter_rule(int order) const
    {
        if (kind == Kind::segment) {
            std::vector<std::pair<double, double>> r;
            const auto& g = gauss_legendre(gauss_points_for(order));
            for (std::size_t i = 0; i < g.nodes.size(); ++i) r.emplace_back(g.nodes[i], g.weights[i]);
            return r;
        }
        auto r = curve->parameter_rule(order);
        if (reversed)
            for (auto& [t, w] : r) t = 1.0 - t;
        return r;
    }

    std::vector<Vec2> bounding_points() const
    {
        if (kind == Kind::segment) return {a, b};
        return curve->bounding_points();
    }
};

} // namespace curvem
