#pragma once

#include "curvem/curvem.hpp"

#include <random>

namespace curvem::testing {

// Convex polygon with 3..8 vertices on a perturbed circle, random centre and
// scale, angular gaps bounded below so no edge is a sliver.
inline std::vector<Vec2> random_polygon(std::mt19937& rng)
{
    std::uniform_int_distribution<int> nv(3, 8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = nv(rng);
    std::vector<double> gaps(static_cast<std::size_t>(n));
    double total = 0.0;
    for (auto& g : gaps) total += (g = 0.5 + u(rng));
    const double scale = std::pow(10.0, -1.5 + 2.5 * u(rng));
    const Vec2 c(4.0 * u(rng) - 2.0, 4.0 * u(rng) - 2.0);
    const double stretch = 0.6 + 0.8 * u(rng);
    std::vector<Vec2> p;
    double a = 2.0 * pi * u(rng);
    for (double g : gaps) {
        p.push_back(c + scale * Vec2(stretch * std::cos(a), std::sin(a)));
        a += 2.0 * pi * g / total;
    }
    return p;
}

inline Mesh2D quarter_disk_triangle(BoundaryKind bc)
{
    Mesh2D m;
    m.add_vertex({0, 0});
    m.add_vertex({1, 0});
    m.add_vertex({0, 1});
    const int c = m.add_curve(Curve::arc({0, 0}, 1.0, 0.0, pi / 2));
    m.add_element({0, 1, 2}, {-1, c, -1});
    m.set_all_tags(bc);
    return m;
}

inline Mesh2D as_mesh2d(const AnyMesh& m) { return std::get<Mesh2D>(m); }
inline Mesh3D as_mesh3d(const AnyMesh& m) { return std::get<Mesh3D>(m); }

// Exact energy of two polynomials on the element's volume rule.
template <int Dim>
MatrixXd polynomial_energy(const LocalSpace<Dim>& s)
{
    const auto b = s.basis();
    MatrixXd a = MatrixXd::Zero(b.size(), b.size());
    for (std::size_t q = 0; q < s.volume.size(); ++q) {
        const auto g = b.gradients(s.volume.points[q]);
        a.noalias() += s.volume.weights[q] * g.transpose() * g;
    }
    return a;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

} // namespace curvem::testing
