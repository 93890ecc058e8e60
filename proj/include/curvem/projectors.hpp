#pragma once

// Computable projectors, each a dense matrix from local unknowns to
// coefficients over the element's scaled monomials.

#include "curvem/local_space.hpp"
#include "curvem/lsq.hpp"
#include "curvem/region.hpp"

namespace curvem {

namespace detail {

// sum_q w (grad m_i . n) trace_q  (basis size x n)
template <int Dim>
MatrixXd boundary_flux_rows(const LocalSpace<Dim>& s, const ScaledMonomialBasis<Dim>& basis)
{
    MatrixXd b = MatrixXd::Zero(basis.size(), s.size());
    for (const auto& p : s.pieces)
        for (std::size_t q = 0; q < p.size(); ++q) {
            const VectorXd dn = basis.gradients(p.points[q]).transpose() * p.normals[q];
            b.noalias() += p.weights[q] * dn * p.values.row(static_cast<Eigen::Index>(q));
        }
    return b;
}

// sum_q w m_i(x_q) n_d trace_q, one matrix per direction d
template <int Dim>
std::vector<MatrixXd> boundary_normal_moments(const LocalSpace<Dim>& s, const ScaledMonomialBasis<Dim>& basis)
{
    std::vector<MatrixXd> out(Dim, MatrixXd::Zero(basis.size(), s.size()));
    for (const auto& p : s.pieces)
        for (std::size_t q = 0; q < p.size(); ++q) {
            const VectorXd m = basis.values(p.points[q]);
            for (int d = 0; d < Dim; ++d)
                out[static_cast<std::size_t>(d)].noalias() += (p.weights[q] * p.normals[q](d)) * m * p.values.row(static_cast<Eigen::Index>(q));
        }
    return out;
}

} // namespace detail

/// Energy projection onto P_k: int grad(Pv).grad p = int grad v.grad p for all
/// p, computed as -int v lap p + int_{dP} v dp/dn, with the constant fixed by
/// int_{dP} (Pv - v) = 0.
template <int Dim>
MatrixXd compute_pinabla(const LocalSpace<Dim>& s)
{
    const auto basis = s.basis();
    const int nk = basis.size();
    MatrixXd g = basis.stiffness(s.volume);
    MatrixXd b = detail::boundary_flux_rows(s, basis);
    if (s.degree >= 2) b.noalias() -= s.measure * basis.laplacian_map().transpose() * s.interior;

    VectorXd avg = VectorXd::Zero(nk);
    VectorXd trace_avg = VectorXd::Zero(s.size());
    for (const auto& p : s.pieces)
        for (std::size_t q = 0; q < p.size(); ++q) {
            avg += p.weights[q] * basis.values(p.points[q]);
            trace_avg += p.weights[q] * p.values.row(static_cast<Eigen::Index>(q)).transpose();
        }
    g.row(0) = avg.transpose();
    b.row(0) = trace_avg.transpose();

    Eigen::ColPivHouseholderQR<MatrixXd> qr(g);
    qr.setThreshold(rank_tolerance);
    if (qr.rank() < nk)
        throw ProjectorError("compute_pinabla: stiffness of the polynomial basis is singular beyond constants (element " +
                             std::to_string(s.element) + ")");
    return qr.solve(b);
}

/// L2 projection of grad v onto [P_s]^Dim; entry d maps unknowns to the
/// coefficients of the d-th component.
template <int Dim>
std::vector<MatrixXd> compute_grad_l2(const LocalSpace<Dim>& s, int target)
{
    const int kl = s.degree - 2;
    if (target > kl + 1)
        throw ProjectorError("compute_grad_l2: target degree " + std::to_string(target) + " exceeds k_L + 1 = " +
                             std::to_string(kl + 1) + " (interior moments only up to degree k-2)");
    if (target < 0) throw ProjectorError("compute_grad_l2: negative target degree");
    const auto basis = s.basis(target);
    const MatrixXd mass = basis.gram(s.volume);
    auto rhs = detail::boundary_normal_moments(s, basis);
    Eigen::LDLT<MatrixXd> ldlt(mass);
    std::vector<MatrixXd> out;
    for (int d = 0; d < Dim; ++d) {
        MatrixXd r = rhs[static_cast<std::size_t>(d)];
        if (target >= 1) {
            const MatrixXd dm = basis.derivative_map(d); // P_{s-1} x P_s
            r.noalias() -= s.measure * dm.transpose() * s.interior.topRows(dm.rows());
        }
        out.push_back(ldlt.solve(r));
    }
    return out;
}

/// Least-squares fit of the unknown vector by dofs of polynomials.
template <int Dim>
MatrixXd compute_dofi_projector(const LocalSpace<Dim>& s)
{
    return lsq_operator(s.D, "compute_dofi_projector (element " + std::to_string(s.element) + ")");
}

/// Number of distinct supporting lines of the edges of a straight polygon.
inline int min_covering_lines(const std::vector<Vec2>& poly)
{
    double h = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i)
        for (std::size_t j = i + 1; j < poly.size(); ++j) h = std::max(h, (poly[i] - poly[j]).norm());
    struct Line {
        Vec2 dir;
        Vec2 point;
    };
    std::vector<Line> lines;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = poly[i];
        const Vec2 d = (poly[(i + 1) % n] - a).normalized();
        bool found = false;
        for (const auto& l : lines) {
            if (std::abs(cross2(l.dir, d)) < 1e-9 && std::abs(cross2(l.dir, a - l.point)) < 1e-9 * h) {
                found = true;
                break;
            }
        }
        if (!found) lines.push_back({d, a});
    }
    return static_cast<int>(lines.size());
}

inline int min_covering_lines(const Region2D& r) { return min_covering_lines(r.corner_points()); }

/// Serendipity projector. For k < S(P) the boundary equations
/// int_{dP} (v - Pv) q = 0, q in P_k, determine Pv; otherwise they are stacked
/// with the interior moments up to degree r, k - S <= r <= k - 2, and solved in
/// least squares. Boundary equations are normalized by |dP| so that both
/// blocks are dimensionless.
inline MatrixXd compute_serendipity_projector(const LocalSpace<2>& s, int covering_lines, int r)
{
    const int k = s.degree;
    const auto basis = s.basis();
    const int nk = basis.size();
    const double perim = s.boundary_measure();
    MatrixXd ab = MatrixXd::Zero(nk, nk);
    MatrixXd bb = MatrixXd::Zero(nk, s.size());
    for (const auto& p : s.pieces)
        for (std::size_t q = 0; q < p.size(); ++q) {
            const VectorXd m = basis.values(p.points[q]);
            ab.noalias() += (p.weights[q] / perim) * m * m.transpose();
            bb.noalias() += (p.weights[q] / perim) * m * p.values.row(static_cast<Eigen::Index>(q));
        }
    if (k < covering_lines) {
        Eigen::ColPivHouseholderQR<MatrixXd> qr(ab);
        qr.setThreshold(rank_tolerance);
        if (qr.rank() < nk) throw ProjectorError("compute_serendipity_projector: boundary system is rank deficient");
        return qr.solve(bb);
    }
    if (r < k - covering_lines || r > k - 2)
        throw ProjectorError("compute_serendipity_projector: r = " + std::to_string(r) + " outside [" +
                             std::to_string(k - covering_lines) + ", " + std::to_string(k - 2) + "]");
    const int nr = poly_dim(2, r);
    const MatrixXd gi = basis.gram(s.volume).topRows(nr) / s.measure;
    MatrixXd a(nk + nr, nk), b(nk + nr, s.size());
    a << ab, gi;
    b << bb, s.interior.topRows(nr);
    return lsq_operator(a, "compute_serendipity_projector") * b;
}

} // namespace curvem
