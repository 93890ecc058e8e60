#pragma once

// Dense least-squares kernels. Rank decisions use column-pivoted QR with a
// relative threshold so results are reproducible across platforms.

#include "curvem/common.hpp"

#include <Eigen/QR>

namespace curvem {

inline constexpr double rank_tolerance = 1e-10;

inline int numerical_rank(const MatrixXd& a, double tol = rank_tolerance)
{
    if (a.size() == 0) return 0;
    Eigen::ColPivHouseholderQR<MatrixXd> qr(a);
    qr.setThreshold(tol);
    return static_cast<int>(qr.rank());
}

/// Linear map X with x = X b the least-squares solution of a x ~ b.
/// Throws ProjectorError when a has deficient column rank.
inline MatrixXd lsq_operator(const MatrixXd& a, const std::string& what, double tol = rank_tolerance)
{
    Eigen::ColPivHouseholderQR<MatrixXd> qr(a);
    qr.setThreshold(tol);
    if (qr.rank() < a.cols())
        throw ProjectorError(what + ": rank " + std::to_string(qr.rank()) + " < " + std::to_string(a.cols()) +
                             " (polynomials not identified by the given data)");
    return qr.solve(MatrixXd::Identity(a.rows(), a.rows()));
}

/// Orthonormal basis of ker(e) (columns), via full QR of e^T.
inline MatrixXd nullspace(const MatrixXd& e, double tol = rank_tolerance)
{
    const Eigen::Index n = e.cols();
    if (e.rows() == 0) return MatrixXd::Identity(n, n);
    Eigen::ColPivHouseholderQR<MatrixXd> qr(e.transpose());
    qr.setThreshold(tol);
    const Eigen::Index r = qr.rank();
    const MatrixXd q = qr.householderQ() * MatrixXd::Identity(n, n);
    return q.rightCols(n - r);
}

/// Equality-constrained least squares: min |a x - b| subject to e x = d.
/// Returns the maps (Xb, Xd) with x = Xb b + Xd d. Solved with the nullspace
/// method; the constraint rows must be independent.
struct ConstrainedLsq {
    MatrixXd from_rhs;
    MatrixXd from_constraints;
};

inline ConstrainedLsq constrained_lsq_operator(const MatrixXd& a, const MatrixXd& e, const std::string& what,
                                               double tol = rank_tolerance)
{
    const Eigen::Index n = a.cols();
    if (e.cols() != n) throw ProjectorError(what + ": constraint width mismatch");
    ConstrainedLsq out;
    if (numerical_rank(e, tol) < e.rows()) throw ProjectorError(what + ": dependent equality constraints");
    // particular solution x0 = e^+ d
    const MatrixXd epinv = e.rows() ? MatrixXd(e.completeOrthogonalDecomposition().pseudoInverse()) : MatrixXd(n, 0);
    const MatrixXd z = nullspace(e, tol);
    if (z.cols() == 0) {
        out.from_rhs = MatrixXd::Zero(n, a.rows());
        out.from_constraints = epinv;
        return out;
    }
    const MatrixXd az = a * z;
    const MatrixXd y = lsq_operator(az, what, tol); // (n - r) x rows(a)
    out.from_rhs = z * y;
    out.from_constraints = epinv - z * y * a * epinv;
    return out;
}

} // namespace curvem
