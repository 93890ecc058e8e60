#pragma once

#include "curvem/common.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

namespace curvem {

template <int Dim>
struct QuadratureRule {
    std::vector<Vec<Dim>> points;
    std::vector<double> weights;

    std::size_t size() const { return points.size(); }

    double total_weight() const
    {
        double s = 0.0;
        for (double w : weights) s += w;
        return s;
    }

    void append(const Vec<Dim>& p, double w)
    {
        points.push_back(p);
        weights.push_back(w);
    }

    void append(const QuadratureRule& other)
    {
        points.insert(points.end(), other.points.begin(), other.points.end());
        weights.insert(weights.end(), other.weights.begin(), other.weights.end());
    }

    template <class F>
    double integrate(F&& f) const
    {
        double s = 0.0;
        for (std::size_t q = 0; q < points.size(); ++q) s += weights[q] * f(points[q]);
        return s;
    }
};

struct GaussRule1D {
    std::vector<double> nodes;   // on [0,1]
    std::vector<double> weights; // sum to 1
};

namespace detail {

// Newton iteration on the Legendre recurrence; nodes mapped to [0,1].
inline GaussRule1D compute_gauss_legendre(int n)
{
    GaussRule1D r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = x;
                p0 = 1.0;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = x;
                p0 = 1.0;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
        }
        r.nodes[n - 1 - i] = 0.5 * (x + 1.0);
        r.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp); // (2/((1-x^2)p'^2)) / 2
    }
    return r;
}

} // namespace detail

/// Gauss-Legendre rule with n points on [0,1] (exact to degree 2n-1). Cached.
inline const GaussRule1D& gauss_legendre(int n)
{
    if (n < 1) n = 1;
    static std::map<int, GaussRule1D> cache;
    static std::mutex m;
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, detail::compute_gauss_legendre(n)).first;
    return it->second;
}

/// Points needed for exactness of degree `order` in one variable.
inline int gauss_points_for(int order) { return order < 0 ? 1 : order / 2 + 1; }

/// Gauss rule on the segment [a,b] exact for polynomials of degree `order`.
template <int Dim>
QuadratureRule<Dim> segment_rule(const Vec<Dim>& a, const Vec<Dim>& b, int order)
{
    const auto& g = gauss_legendre(gauss_points_for(order));
    QuadratureRule<Dim> r;
    const double len = (b - a).norm();
    for (std::size_t i = 0; i < g.nodes.size(); ++i) r.append(a + g.nodes[i] * (b - a), g.weights[i] * len);
    return r;
}

/// Collapsed (Duffy) tensor rule on a flat triangle, exact to degree `order`.
template <int Dim>
QuadratureRule<Dim> triangle_rule(const Vec<Dim>& a, const Vec<Dim>& b, const Vec<Dim>& c, int order)
{
    const auto& gt = gauss_legendre(gauss_points_for(order));
    const auto& gs = gauss_legendre(gauss_points_for(order + 1));
    double area2 = 0.0;
    if constexpr (Dim == 2) {
        area2 = std::abs(cross2(b - a, c - a));
    } else {
        area2 = (b - a).cross(c - a).norm();
    }
    QuadratureRule<Dim> r;
    for (std::size_t i = 0; i < gs.nodes.size(); ++i) {
        const double s = gs.nodes[i];
        for (std::size_t j = 0; j < gt.nodes.size(); ++j) {
            const double t = gt.nodes[j];
            Vec<Dim> p = a + s * ((b - a) + t * (c - b));
            r.append(p, gs.weights[i] * gt.weights[j] * s * area2);
        }
    }
    return r;
}

/// Collapsed tensor rule on a tetrahedron, exact to degree `order`.
inline QuadratureRule<3> tetra_rule(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, int order)
{
    const auto& gr = gauss_legendre(gauss_points_for(order + 2));
    const auto& gs = gauss_legendre(gauss_points_for(order + 1));
    const auto& gt = gauss_legendre(gauss_points_for(order));
    const double vol6 = std::abs((b - a).dot((c - a).cross(d - a)));
    QuadratureRule<3> q;
    for (std::size_t i = 0; i < gr.nodes.size(); ++i) {
        const double r = gr.nodes[i];
        for (std::size_t j = 0; j < gs.nodes.size(); ++j) {
            const double s = gs.nodes[j];
            for (std::size_t l = 0; l < gt.nodes.size(); ++l) {
                const double t = gt.nodes[l];
                Vec3 p = a + r * ((b - a) + s * ((c - b) + t * (d - c)));
                q.append(p, gr.weights[i] * gs.weights[j] * gt.weights[l] * r * r * s * vol6);
            }
        }
    }
    return q;
}

} // namespace curvem
