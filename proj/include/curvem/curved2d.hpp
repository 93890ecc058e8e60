#pragma once

// Curved boundary edges in 2D: generating points on the auxiliary triangle
// and the midwife interpolant, the subset-of-dofs reconstruction (with its
// MFD flavour), and the ribbon of clipped triangles around a circular
// boundary.

#include "curvem/local_space.hpp"
#include "curvem/lsq.hpp"
#include "curvem/region.hpp"

#include <array>

namespace curvem {

enum class CurvedStrategy { generators, subset, subset_mfd, ribbon };

inline const char* to_string(CurvedStrategy s)
{
    switch (s) {
    case CurvedStrategy::generators: return "generators";
    case CurvedStrategy::subset: return "subset";
    case CurvedStrategy::subset_mfd: return "subset-mfd";
    case CurvedStrategy::ribbon: return "ribbon";
    }
    return "?";
}

inline CurvedStrategy parse_curved_strategy(const std::string& s)
{
    if (s == "generators") return CurvedStrategy::generators;
    if (s == "subset") return CurvedStrategy::subset;
    if (s == "subset-mfd") return CurvedStrategy::subset_mfd;
    if (s == "ribbon") return CurvedStrategy::ribbon;
    throw InputError("unknown curved strategy '" + s + "' (generators|subset|subset-mfd|ribbon)");
}

/// Generating points of a curved edge A -> B on the equilateral triangle T_eta
/// built on the chord Q = AB. Slot order: apex, then the k-1 points on
/// A-apex, on B-apex, on A-B, then the interior lattice points.
struct GeneratorSet {
    Vec2 a, b, apex;
    int degree = 1;
    std::vector<Vec2> points;

    int size() const { return static_cast<int>(points.size()); }

    /// Lattice in interpolation order: A, B, then the generating points.
    std::vector<Vec2> lattice() const
    {
        std::vector<Vec2> l{a, b};
        l.insert(l.end(), points.begin(), points.end());
        return l;
    }
};

inline int generator_count(int k) { return (k + 1) * (k + 2) / 2 - 2; }

/// `outward` orients T_eta when the edge has no bulge (straight curve).
inline GeneratorSet build_generator_set(const Piece2D& eta, int k, const Vec2& outward)
{
    if (k < 1) throw InputError("build_generator_set: degree must be >= 1");
    GeneratorSet g;
    g.degree = k;
    g.a = eta.point(0.0);
    g.b = eta.point(1.0);
    const Vec2 q = g.b - g.a;
    const double len = q.norm();
    const Vec2 left(-q.y() / len, q.x() / len);
    const double bulge = left.dot(eta.point(0.5) - g.a);
    double side = bulge > 1e-12 * len ? 1.0 : (bulge < -1e-12 * len ? -1.0 : (left.dot(outward) >= 0.0 ? 1.0 : -1.0));
    g.apex = 0.5 * (g.a + g.b) + side * (std::sqrt(3.0) / 2.0) * len * left;
    auto at = [&](int i, int j, int l) { return Vec2((i * g.a + j * g.b + l * g.apex) / k); };
    g.points.push_back(g.apex);
    for (int l = 1; l < k; ++l) g.points.push_back(at(k - l, 0, l));
    for (int l = 1; l < k; ++l) g.points.push_back(at(0, k - l, l));
    for (int j = 1; j < k; ++j) g.points.push_back(at(k - j, j, 0));
    for (int i = 1; i < k; ++i)
        for (int j = 1; i + j < k; ++j) g.points.push_back(at(i, j, k - i - j));
    if (g.size() != generator_count(k)) throw ProjectorError("build_generator_set: lattice count mismatch");
    return g;
}

/// Coefficients (in `basis`) of the P_k interpolant of values on the lattice
/// [A, B, generating points]: a (basis size) x (lattice size) matrix.
inline MatrixXd midwife_matrix(const GeneratorSet& g, const ScaledMonomialBasis<2>& basis)
{
    const auto lat = g.lattice();
    const MatrixXd v = basis.value_matrix(lat);
    if (v.rows() != v.cols()) throw ProjectorError("midwife_matrix: lattice size does not match dim P_k");
    Eigen::FullPivLU<MatrixXd> lu(v);
    if (!lu.isInvertible()) throw ProjectorError("midwife_matrix: generating points are not unisolvent");
    return lu.inverse();
}

/// Trace t -> p(gamma(t)) of the midwife interpolant.
struct MidwifeTrace {
    ScaledMonomialBasis<2> basis;
    VectorXd coeffs;
    Piece2D eta;

    double operator()(double t) const { return basis.evaluate(coeffs, eta.point(t)); }
};

inline MidwifeTrace midwife_trace(const GeneratorSet& g, const VectorXd& generator_values, double value_a, double value_b,
                                  const Piece2D& eta)
{
    if (generator_values.size() != g.size()) throw InputError("midwife_trace: expected " + std::to_string(g.size()) + " values");
    double h = (g.b - g.a).norm();
    const Vec2 c = (g.a + g.b + g.apex) / 3.0;
    ScaledMonomialBasis<2> basis(c, h, g.degree);
    VectorXd vals(g.size() + 2);
    vals << value_a, value_b, generator_values;
    return {basis, midwife_matrix(g, basis) * vals, eta};
}

/// Subset-of-dofs reconstruction p* = L u over the element basis.
/// rows: D restricted to the unknowns that define p*; endpoint rows are
/// imposed exactly unless `mfd` (plain least squares on all rows).
inline MatrixXd subset_operator(const MatrixXd& d_rows, const std::vector<int>& row_cols, int n,
                                const std::vector<int>& endpoint_rows, bool mfd)
{
    const auto m = d_rows.rows();
    MatrixXd select = MatrixXd::Zero(m, n);
    for (Eigen::Index i = 0; i < m; ++i) select(i, row_cols[static_cast<std::size_t>(i)]) = 1.0;
    if (mfd) return lsq_operator(d_rows, "subset-mfd least squares") * select;
    std::vector<int> free_rows;
    for (Eigen::Index i = 0; i < m; ++i)
        if (std::find(endpoint_rows.begin(), endpoint_rows.end(), static_cast<int>(i)) == endpoint_rows.end())
            free_rows.push_back(static_cast<int>(i));
    MatrixXd a(static_cast<Eigen::Index>(free_rows.size()), d_rows.cols());
    MatrixXd sa(static_cast<Eigen::Index>(free_rows.size()), n);
    for (std::size_t i = 0; i < free_rows.size(); ++i) {
        a.row(static_cast<Eigen::Index>(i)) = d_rows.row(free_rows[i]);
        sa.row(static_cast<Eigen::Index>(i)) = select.row(free_rows[i]);
    }
    MatrixXd e(static_cast<Eigen::Index>(endpoint_rows.size()), d_rows.cols());
    MatrixXd se(static_cast<Eigen::Index>(endpoint_rows.size()), n);
    for (std::size_t i = 0; i < endpoint_rows.size(); ++i) {
        e.row(static_cast<Eigen::Index>(i)) = d_rows.row(endpoint_rows[i]);
        se.row(static_cast<Eigen::Index>(i)) = select.row(endpoint_rows[i]);
    }
    const auto op = constrained_lsq_operator(a, e, "subset constrained least squares");
    return op.from_rhs * sa + op.from_constraints * se;
}

// ---------------------------------------------------------------------------
// Ribbon

struct Ribbon {
    struct Triangle {
        std::array<int, 3> v; // indices into `points`
        Region2D clipped;
    };
    std::vector<Vec2> points;      // inner points first, then outer points
    int n_inner = 0;
    std::vector<Triangle> triangles;
    std::vector<Vec2> inner;       // Q~ boundary (open or closed chain)
    std::vector<Vec2> outer;       // Pi~ boundary
    double inner_radius = 0.0, outer_radius = 0.0;
    bool closed = false;
};

/// Ribbon of quads around the arc {center + R(cos a, sin a), a in [a0,a1]}
/// (a full loop when a1 - a0 = 2 pi), split into triangles and clipped to the
/// domain. Inner points sit at R - thickness/2; outer points at a radius whose
/// chords stay thickness/2 outside the circle.
inline Ribbon build_ribbon(const DiskDomain& dom, double angle0, double angle1, int n_segments, double thickness)
{
    if (n_segments < 3) throw GeometryError("build_ribbon: need at least 3 segments");
    if (!(thickness > 0.0)) throw GeometryError("build_ribbon: thickness must be positive");
    const double R = dom.radius;
    const double span = angle1 - angle0;
    if (!(span > 0.0) || span > 2.0 * pi + 1e-12) throw GeometryError("build_ribbon: bad angle range");
    Ribbon r;
    r.closed = std::abs(span - 2.0 * pi) < 1e-12;
    const double dth = span / n_segments;
    if (dth >= pi / 2.0) throw GeometryError("build_ribbon: segments too coarse for a convex ribbon");
    r.inner_radius = R - 0.5 * thickness;
    r.outer_radius = R / std::cos(0.5 * dth) + 0.5 * thickness;
    if (!(r.inner_radius > 1e-12 * R))
        throw GeometryError("build_ribbon: thickness " + std::to_string(thickness) +
                            " collapses the inner polygon (ribbon self-intersects)");
    const int np = r.closed ? n_segments : n_segments + 1;
    for (int i = 0; i < np; ++i) {
        const double a = angle0 + i * dth;
        r.inner.push_back(dom.center + r.inner_radius * Vec2(std::cos(a), std::sin(a)));
        r.outer.push_back(dom.center + r.outer_radius * Vec2(std::cos(a), std::sin(a)));
    }
    r.points = r.inner;
    r.points.insert(r.points.end(), r.outer.begin(), r.outer.end());
    r.n_inner = np;
    for (int i = 0; i < n_segments; ++i) {
        const int i0 = i, i1 = (i + 1) % np;
        const int o0 = np + i0, o1 = np + i1;
        for (std::array<int, 3> t : {std::array<int, 3>{i0, o0, o1}, std::array<int, 3>{i0, o1, i1}}) {
            std::vector<Vec2> poly{r.points[static_cast<std::size_t>(t[0])], r.points[static_cast<std::size_t>(t[1])],
                                   r.points[static_cast<std::size_t>(t[2])]};
            if (cross2(poly[1] - poly[0], poly[2] - poly[0]) <= 0.0) throw GeometryError("build_ribbon: inverted ribbon triangle");
            auto clipped = clip_to_disk(poly, dom);
            if (!clipped || clipped->area() <= 1e-14 * R * R)
                throw GeometryError("build_ribbon: ribbon triangle " + std::to_string(r.triangles.size()) +
                                    " does not meet the domain");
            r.triangles.push_back({t, *clipped});
        }
    }
    return r;
}

} // namespace curvem
