#pragma once

// Generated 3D meshes: structured cubes (optionally under an affine map, or
// with the x = 1 side declared curved), a split prism and the sphere octant
// made of cone elements over a radially projected triangulation.

#include "curvem/mesh3d.hpp"

#include <random>

namespace curvem {

namespace detail {

class FacePool {
public:
    explicit FacePool(Mesh3D& m) : m_(m) {}

    int get(const std::vector<int>& v, int surface = Mesh3D::flat)
    {
        std::vector<int> key = v;
        std::sort(key.begin(), key.end());
        auto it = ids_.find(key);
        if (it != ids_.end()) return it->second;
        const int id = m_.add_face(v, surface);
        ids_.emplace(std::move(key), id);
        return id;
    }

private:
    Mesh3D& m_;
    std::map<std::vector<int>, int> ids_;
};

} // namespace detail

struct CubeMeshOptions {
    int n = 2;
    BoundaryKind bc = BoundaryKind::dirichlet;
    Eigen::Matrix3d map = Eigen::Matrix3d::Identity();
    Vec3 shift = Vec3::Zero();
    bool curved_x1 = false; // declare the x = 1 side curved
};

/// n^3 hexahedra of the unit cube, each face a planar quadrilateral.
inline Mesh3D cube_mesh(const CubeMeshOptions& o)
{
    if (o.n < 1) throw InputError("cube_mesh: n must be >= 1");
    if (std::abs(o.map.determinant()) < 1e-12) throw InputError("cube_mesh: singular map");
    const int n = o.n;
    Mesh3D m;
    auto vid = [n](int i, int j, int l) { return (l * (n + 1) + j) * (n + 1) + i; };
    for (int l = 0; l <= n; ++l)
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i) m.add_vertex(o.map * Vec3(i, j, l) / n + o.shift);
    detail::FacePool pool(m);
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                std::vector<int> f;
                f.push_back(pool.get({vid(i, j, l), vid(i, j + 1, l), vid(i + 1, j + 1, l), vid(i + 1, j, l)}));
                f.push_back(pool.get({vid(i, j, l + 1), vid(i + 1, j, l + 1), vid(i + 1, j + 1, l + 1), vid(i, j + 1, l + 1)}));
                f.push_back(pool.get({vid(i, j, l), vid(i + 1, j, l), vid(i + 1, j, l + 1), vid(i, j, l + 1)}));
                f.push_back(pool.get({vid(i, j + 1, l), vid(i, j + 1, l + 1), vid(i + 1, j + 1, l + 1), vid(i + 1, j + 1, l)}));
                f.push_back(pool.get({vid(i, j, l), vid(i, j, l + 1), vid(i, j + 1, l + 1), vid(i, j + 1, l)}));
                const int fx = pool.get({vid(i + 1, j, l), vid(i + 1, j + 1, l), vid(i + 1, j + 1, l + 1), vid(i + 1, j, l + 1)});
                if (o.curved_x1 && i + 1 == n) m.faces[static_cast<std::size_t>(fx)].surface = Mesh3D::declared_curved;
                f.push_back(fx);
                m.add_element(f);
            }
    m.set_all_tags(o.bc);
    return m;
}

/// Unit cube under x -> A x with A = I + `amplitude` * (uniform [-1,1] entries).
inline Mesh3D random_affine_hex(unsigned seed, double amplitude = 0.3)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CubeMeshOptions o;
    o.n = 1;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) o.map(i, j) += amplitude * u(rng);
    if (o.map.determinant() < 0.0) o.map.col(0) *= -1.0;
    return cube_mesh(o);
}

/// Triangular prism whose y = 0 side is split into two coplanar triangles.
inline Mesh3D split_prism()
{
    Mesh3D m;
    const int a = m.add_vertex({0, 0, 0}), b = m.add_vertex({1, 0, 0}), c = m.add_vertex({0, 1, 0});
    const int a1 = m.add_vertex({0, 0, 1}), b1 = m.add_vertex({1, 0, 1}), c1 = m.add_vertex({0, 1, 1});
    std::vector<int> f;
    f.push_back(m.add_face({a, c, b}));
    f.push_back(m.add_face({a1, b1, c1}));
    f.push_back(m.add_face({a, b, b1}));
    f.push_back(m.add_face({a, b1, a1}));
    f.push_back(m.add_face({b, c, c1, b1}));
    f.push_back(m.add_face({a, a1, c1, c}));
    m.add_element(f);
    m.set_all_tags(BoundaryKind::dirichlet);
    return m;
}

struct OctantMeshOptions {
    int n = 2;
    double radius = 1.0;
    BoundaryKind sphere_bc = BoundaryKind::dirichlet;
    BoundaryKind plane_bc = BoundaryKind::dirichlet;
};

/// Octant of the ball {|x| < R, x, y, z > 0}: the face x + y + z = 1 is split
/// into n^2 triangles whose vertices are projected to the sphere; every
/// element is the cone from the origin over one spherical triangle.
inline Mesh3D sphere_octant_mesh(const OctantMeshOptions& o)
{
    if (o.n < 1) throw InputError("sphere_octant_mesh: n must be >= 1");
    const int n = o.n;
    Mesh3D m;
    const int s = m.add_sphere({Vec3::Zero(), o.radius});
    const int origin = m.add_vertex(Vec3::Zero());
    std::map<std::pair<int, int>, int> id;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j) {
            const Vec3 p(n - i - j, i, j);
            id[{i, j}] = m.add_vertex(o.radius * p.normalized());
        }
    detail::FacePool pool(m);
    std::vector<int> sphere_faces;
    auto cone = [&](int a, int b, int c) {
        const int fs = m.add_face({a, b, c}, s);
        sphere_faces.push_back(fs);
        m.add_element({fs, pool.get({origin, b, a}), pool.get({origin, c, b}), pool.get({origin, a, c})});
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; i + j < n; ++j) {
            cone(id[{i, j}], id[{i + 1, j}], id[{i, j + 1}]);
            if (i + j + 1 < n) cone(id[{i + 1, j}], id[{i + 1, j + 1}], id[{i, j + 1}]);
        }
    const Topology3D t = build_topology(m);
    for (std::size_t f = 0; f < m.faces.size(); ++f)
        if (t.is_boundary_face(static_cast<int>(f))) m.tags[static_cast<int>(f)] = m.is_curved(static_cast<int>(f)) ? o.sphere_bc : o.plane_bc;
    return m;
}

} // namespace curvem
