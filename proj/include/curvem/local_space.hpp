#pragma once

// Element-local description shared by every construction in the library.
//
// A LocalSpace carries n local unknowns (degrees of freedom and, on curved
// edges, generator or data slots) and everything the projectors need:
//   * boundary pieces with quadrature and the linear map unknowns -> trace
//     values at the nodes (and tangential derivatives when known),
//   * interior moments (1/|P|) int_P v m_a, |a| <= k-2, as rows over unknowns,
//   * a volume rule, and
//   * D, the unknowns of every scaled monomial m_j (column j).

#include "curvem/polybasis.hpp"
#include "curvem/quadrature.hpp"

#include <Eigen/LU>

#include <map>
#include <mutex>

namespace curvem {

enum class DofKind { vertex, edge_moment, face_moment, interior, generator, data_slot };

inline const char* to_string(DofKind k)
{
    switch (k) {
    case DofKind::vertex: return "vertex";
    case DofKind::edge_moment: return "edge-moment";
    case DofKind::face_moment: return "face-moment";
    case DofKind::interior: return "interior";
    case DofKind::generator: return "generator";
    case DofKind::data_slot: return "data-slot";
    }
    return "?";
}

template <int Dim>
struct TracePiece {
    std::vector<Vec<Dim>> points;
    std::vector<double> weights;
    std::vector<Vec<Dim>> normals;
    MatrixXd values; // nq x n

    // One matrix per tangent direction (nq x n) with the matching unit
    // tangents per node. Empty when the tangential derivative is not known.
    std::vector<MatrixXd> tangential;
    std::vector<std::vector<Vec<Dim>>> tangents;

    // Flat faces in 3D: weighted dof residual (I - D_f Pi_f) of the face
    // function, scattered to element columns. Empty otherwise.
    MatrixXd dof_defect;

    bool on_domain_boundary = false;
    bool neumann = false;
    int entity = -1;

    // Where boundary data is sampled. Differs from `points` only on chord
    // facets that stand in for a curve: data then comes from the curve, with
    // `data_scale` = |gamma'| / |chord| preserving the flux.
    std::vector<Vec<Dim>> data_points;
    std::vector<Vec<Dim>> data_normals;
    std::vector<double> data_scale;

    std::size_t size() const { return points.size(); }

    void default_data_sampling()
    {
        data_points = points;
        data_normals = normals;
        data_scale.assign(points.size(), 1.0);
    }
};

template <int Dim>
struct LocalSpace {
    int element = -1;
    int degree = 1;
    Vec<Dim> center = Vec<Dim>::Zero();
    double diameter = 1.0;
    double measure = 0.0;

    std::vector<DofKind> kinds;
    std::vector<int> global;
    VectorXd stab_weights;

    std::vector<TracePiece<Dim>> pieces;
    MatrixXd interior;
    QuadratureRule<Dim> volume;
    MatrixXd D;

    // Ribbon elements: the local functions are the polynomials themselves,
    // D is square and no projection or stabilization is involved.
    bool polynomial = false;

    int size() const { return static_cast<int>(kinds.size()); }
    ScaledMonomialBasis<Dim> basis(int deg) const { return ScaledMonomialBasis<Dim>(center, diameter, deg); }
    ScaledMonomialBasis<Dim> basis() const { return basis(degree); }

    int count(DofKind k) const
    {
        int c = 0;
        for (auto x : kinds) c += (x == k);
        return c;
    }

    double boundary_measure() const
    {
        double s = 0.0;
        for (const auto& p : pieces)
            for (double w : p.weights) s += w;
        return s;
    }
};

/// Piece whose trace is the polynomial m^T C (C: basis size x n).
template <int Dim>
void set_polynomial_trace(TracePiece<Dim>& piece, const ScaledMonomialBasis<Dim>& basis, const MatrixXd& coeffs,
                          const std::vector<std::vector<Vec<Dim>>>& tangents)
{
    const auto nq = static_cast<Eigen::Index>(piece.points.size());
    piece.values.resize(nq, coeffs.cols());
    piece.tangential.assign(tangents.size(), MatrixXd(nq, coeffs.cols()));
    piece.tangents = tangents;
    for (Eigen::Index q = 0; q < nq; ++q) {
        const auto& x = piece.points[static_cast<std::size_t>(q)];
        piece.values.row(q) = basis.values(x).transpose() * coeffs;
        if (!tangents.empty()) {
            const auto g = basis.gradients(x);
            for (std::size_t d = 0; d < tangents.size(); ++d)
                piece.tangential[d].row(q) = (tangents[d][static_cast<std::size_t>(q)].transpose() * g) * coeffs;
        }
    }
}

/// Straight-edge traces from endpoint values and moments.
///
/// On an edge with canonical direction tau (from the lower to the higher
/// global vertex id), midpoint x_e and length |e|, let s = (x - x_e).tau/|e|
/// in [-1/2, 1/2]. The k-1 edge dofs are (1/|e|) int_e v s^j, j = 0..k-2, and
/// the trace in P_k(e) is fixed by those plus the two endpoint values.
class EdgeTrace {
public:
    /// (k+1) x (k+1): coefficients in s^0..s^k from [v_lo, v_hi, mu_0..mu_{k-2}].
    static const MatrixXd& reconstruction(int k)
    {
        static std::map<int, MatrixXd> cache;
        static std::mutex m;
        std::lock_guard<std::mutex> lock(m);
        auto it = cache.find(k);
        if (it != cache.end()) return it->second;
        MatrixXd a = MatrixXd::Zero(k + 1, k + 1);
        for (int j = 0; j <= k; ++j) {
            a(0, j) = std::pow(-0.5, j);
            a(1, j) = std::pow(0.5, j);
        }
        for (int i = 0; i + 2 <= k; ++i)
            for (int j = 0; j <= k; ++j) {
                const int p = i + j;
                // int_{-1/2}^{1/2} s^p ds
                a(2 + i, j) = (p % 2 == 1) ? 0.0 : 2.0 * std::pow(0.5, p + 1) / (p + 1);
            }
        return cache.emplace(k, a.inverse()).first->second;
    }

    static VectorXd value_row(int k, double s)
    {
        VectorXd r(k + 1);
        for (int j = 0; j <= k; ++j) r(j) = std::pow(s, j);
        return reconstruction(k).transpose() * r;
    }

    /// d/ds of the trace, as a row over [v_lo, v_hi, mu...].
    static VectorXd slope_row(int k, double s)
    {
        VectorXd r = VectorXd::Zero(k + 1);
        for (int j = 1; j <= k; ++j) r(j) = j * std::pow(s, j - 1);
        return reconstruction(k).transpose() * r;
    }

    /// Rows (1/|e|) int_e m_i s^j over a scaled basis, j = 0..k-2.
    template <int Dim>
    static MatrixXd moment_rows(const ScaledMonomialBasis<Dim>& basis, const Vec<Dim>& lo, const Vec<Dim>& hi, int k)
    {
        const int nm = std::max(k - 1, 0);
        MatrixXd rows = MatrixXd::Zero(nm, basis.size());
        if (nm == 0) return rows;
        const auto& g = gauss_legendre(gauss_points_for(basis.degree() + k));
        for (std::size_t q = 0; q < g.nodes.size(); ++q) {
            const double s = g.nodes[q] - 0.5;
            const VectorXd m = basis.values(Vec<Dim>(0.5 * (lo + hi) + s * (hi - lo)));
            for (int j = 0; j < nm; ++j) rows.row(j) += g.weights[q] * std::pow(s, j) * m.transpose();
        }
        return rows;
    }

    /// Quadrature points/weights for the functional (1/|e|) int_e u s^j.
    template <int Dim>
    static std::pair<std::vector<Vec<Dim>>, std::vector<double>> moment_functional(const Vec<Dim>& lo, const Vec<Dim>& hi,
                                                                                  int j, int order)
    {
        const auto& g = gauss_legendre(gauss_points_for(order + j));
        std::vector<Vec<Dim>> pts;
        std::vector<double> w;
        for (std::size_t q = 0; q < g.nodes.size(); ++q) {
            const double s = g.nodes[q] - 0.5;
            pts.push_back(0.5 * (lo + hi) + s * (hi - lo));
            w.push_back(g.weights[q] * std::pow(s, j));
        }
        return {pts, w};
    }
};

/// Builds the trace piece of a straight edge traversed from `a` to `b`.
/// `cols` = local columns of [v_lo, v_hi, mu_0..mu_{k-2}] where lo/hi refer
/// to the canonical edge direction; `a_is_lo` tells which endpoint `a` is.
inline TracePiece<2> straight_edge_piece(const Vec2& a, const Vec2& b, bool a_is_lo, const std::vector<int>& cols, int n,
                                         int k, int order)
{
    TracePiece<2> p;
    const Vec2 d = b - a;
    const double len = d.norm();
    const Vec2 t = d / len;
    const Vec2 nrm = right_normal(t);
    const auto& g = gauss_legendre(gauss_points_for(order));
    p.values = MatrixXd::Zero(static_cast<Eigen::Index>(g.nodes.size()), n);
    p.tangential.assign(1, MatrixXd::Zero(static_cast<Eigen::Index>(g.nodes.size()), n));
    p.tangents.assign(1, {});
    const double sign = a_is_lo ? 1.0 : -1.0; // ds/dt along a->b, in units of 1/len
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
        const double u = g.nodes[q];
        const double s = a_is_lo ? u - 0.5 : 0.5 - u;
        p.points.push_back(a + u * d);
        p.weights.push_back(g.weights[q] * len);
        p.normals.push_back(nrm);
        const VectorXd vr = EdgeTrace::value_row(k, s);
        const VectorXd sr = EdgeTrace::slope_row(k, s) * (sign / len);
        for (int c = 0; c <= k; ++c) {
            p.values(static_cast<Eigen::Index>(q), cols[static_cast<std::size_t>(c)]) += vr(c);
            p.tangential[0](static_cast<Eigen::Index>(q), cols[static_cast<std::size_t>(c)]) += sr(c);
        }
        p.tangents[0].push_back(t);
    }
    p.default_data_sampling();
    return p;
}

} // namespace curvem
