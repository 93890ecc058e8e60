#pragma once

// Row-compressed symmetric systems, Jacobi-preconditioned CG and a dense
// LDL^T fallback.

#include "curvem/common.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

namespace curvem {

struct CsrMatrix {
    int rows = 0, cols = 0;
    std::vector<int> row_ptr{0};
    std::vector<int> col;
    std::vector<double> val;

    static CsrMatrix from_triplets(int n, int m, std::vector<std::tuple<int, int, double>> t)
    {
        for (const auto& [i, j, v] : t) {
            (void)v;
            if (i < 0 || i >= n || j < 0 || j >= m) throw Error("CsrMatrix: triplet index out of range");
        }
        std::sort(t.begin(), t.end(), [](const auto& a, const auto& b) {
            return std::get<0>(a) < std::get<0>(b) || (std::get<0>(a) == std::get<0>(b) && std::get<1>(a) < std::get<1>(b));
        });
        CsrMatrix a;
        a.rows = n;
        a.cols = m;
        a.row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
        for (std::size_t k = 0; k < t.size();) {
            const auto [i, j, v0] = t[k];
            double v = v0;
            std::size_t l = k + 1;
            while (l < t.size() && std::get<0>(t[l]) == i && std::get<1>(t[l]) == j) v += std::get<2>(t[l++]);
            a.col.push_back(j);
            a.val.push_back(v);
            ++a.row_ptr[static_cast<std::size_t>(i) + 1];
            k = l;
        }
        for (int i = 0; i < n; ++i) a.row_ptr[static_cast<std::size_t>(i) + 1] += a.row_ptr[static_cast<std::size_t>(i)];
        return a;
    }

    std::size_t nnz() const { return val.size(); }

    VectorXd multiply(const VectorXd& x) const
    {
        VectorXd y = VectorXd::Zero(rows);
        for (int i = 0; i < rows; ++i) {
            double s = 0.0;
            for (int k = row_ptr[static_cast<std::size_t>(i)]; k < row_ptr[static_cast<std::size_t>(i) + 1]; ++k)
                s += val[static_cast<std::size_t>(k)] * x(col[static_cast<std::size_t>(k)]);
            y(i) = s;
        }
        return y;
    }

    double at(int i, int j) const
    {
        const auto b = col.begin() + row_ptr[static_cast<std::size_t>(i)];
        const auto e = col.begin() + row_ptr[static_cast<std::size_t>(i) + 1];
        auto it = std::lower_bound(b, e, j);
        return (it != e && *it == j) ? val[static_cast<std::size_t>(it - col.begin())] : 0.0;
    }

    VectorXd diagonal() const
    {
        VectorXd d = VectorXd::Zero(rows);
        for (int i = 0; i < rows; ++i) d(i) = at(i, i);
        return d;
    }

    MatrixXd dense() const
    {
        MatrixXd d = MatrixXd::Zero(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int k = row_ptr[static_cast<std::size_t>(i)]; k < row_ptr[static_cast<std::size_t>(i) + 1]; ++k)
                d(i, col[static_cast<std::size_t>(k)]) += val[static_cast<std::size_t>(k)];
        return d;
    }

    /// max |a_ij - a_ji|
    double asymmetry() const
    {
        double m = 0.0;
        for (int i = 0; i < rows; ++i)
            for (int k = row_ptr[static_cast<std::size_t>(i)]; k < row_ptr[static_cast<std::size_t>(i) + 1]; ++k)
                m = std::max(m, std::abs(val[static_cast<std::size_t>(k)] - at(col[static_cast<std::size_t>(k)], i)));
        return m;
    }
};

struct Constraint {
    int dof;
    double value;
};

struct LinearSystem {
    CsrMatrix matrix;
    VectorXd rhs;
    std::vector<Constraint> constraints;
};

/// Symmetric elimination: rhs -= A(:,c) g, then identity rows/columns.
inline LinearSystem apply_constraints(const LinearSystem& sys)
{
    const int n = sys.matrix.rows;
    std::vector<char> fixed(static_cast<std::size_t>(n), 0);
    VectorXd g = VectorXd::Zero(n);
    for (const auto& c : sys.constraints) {
        if (c.dof < 0 || c.dof >= n) throw Error("apply_constraints: dof out of range");
        fixed[static_cast<std::size_t>(c.dof)] = 1;
        g(c.dof) = c.value;
    }
    LinearSystem out;
    out.rhs = sys.rhs - sys.matrix.multiply(g);
    std::vector<std::tuple<int, int, double>> t;
    t.reserve(sys.matrix.nnz());
    const auto& a = sys.matrix;
    for (int i = 0; i < n; ++i) {
        if (fixed[static_cast<std::size_t>(i)]) {
            t.emplace_back(i, i, 1.0);
            out.rhs(i) = g(i);
            continue;
        }
        for (int k = a.row_ptr[static_cast<std::size_t>(i)]; k < a.row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
            const int j = a.col[static_cast<std::size_t>(k)];
            if (!fixed[static_cast<std::size_t>(j)]) t.emplace_back(i, j, a.val[static_cast<std::size_t>(k)]);
        }
    }
    out.matrix = CsrMatrix::from_triplets(n, n, std::move(t));
    return out;
}

enum class SolverMethod { cg, dense };

inline const char* to_string(SolverMethod m) { return m == SolverMethod::cg ? "cg" : "dense"; }

inline SolverMethod parse_solver(const std::string& s)
{
    if (s == "cg") return SolverMethod::cg;
    if (s == "dense") return SolverMethod::dense;
    throw InputError("unknown solver '" + s + "' (cg|dense)");
}

struct SolveReport {
    VectorXd x;
    int iterations = 0;
    double residual = 0.0; // |Ax - b| / |b|
    bool converged = false;
    std::vector<double> history;
    std::string method;
};

inline constexpr int dense_limit = 2000;

inline SolveReport solve(const CsrMatrix& a, const VectorXd& b, SolverMethod method = SolverMethod::cg, double tol = 1e-12,
                         int max_iter = 0)
{
    const int n = a.rows;
    SolveReport rep;
    const double bn = b.norm();
    if (bn == 0.0) {
        rep.x = VectorXd::Zero(n);
        rep.converged = true;
        rep.method = method == SolverMethod::cg ? "cg" : "dense";
        return rep;
    }
    if (method == SolverMethod::dense) {
        if (n > dense_limit) throw SolverError("dense solver limited to n <= " + std::to_string(dense_limit));
        rep.method = "dense";
        Eigen::LDLT<MatrixXd> ldlt(a.dense());
        if (ldlt.info() != Eigen::Success) throw SolverError("dense LDL^T factorization failed");
        rep.x = ldlt.solve(b);
    } else {
        rep.method = "cg";
        if (max_iter <= 0) max_iter = std::max(1000, 10 * n);
        VectorXd dinv = a.diagonal();
        for (int i = 0; i < n; ++i) {
            if (!(dinv(i) > 0.0)) throw SolverError("cg: non-positive diagonal entry at row " + std::to_string(i));
            dinv(i) = 1.0 / dinv(i);
        }
        VectorXd x = VectorXd::Zero(n);
        VectorXd r = b;
        VectorXd z = dinv.cwiseProduct(r);
        VectorXd p = z;
        double rz = r.dot(z);
        for (int it = 0; it < max_iter; ++it) {
            const VectorXd ap = a.multiply(p);
            const double pap = p.dot(ap);
            if (!(pap > 0.0)) throw SolverError("cg: negative curvature detected (matrix not SPD) at iteration " + std::to_string(it));
            const double alpha = rz / pap;
            x += alpha * p;
            r -= alpha * ap;
            const double rel = r.norm() / bn;
            rep.history.push_back(rel);
            rep.iterations = it + 1;
            if (rel <= tol) break;
            z = dinv.cwiseProduct(r);
            const double rz_new = r.dot(z);
            p = z + (rz_new / rz) * p;
            rz = rz_new;
        }
        rep.x = x;
    }
    rep.residual = (a.multiply(rep.x) - b).norm() / bn;
    rep.converged = rep.residual <= 10.0 * tol;
    if (!rep.converged) {
        std::ostringstream msg;
        msg << rep.method << ": relative residual " << rep.residual << " above " << 10.0 * tol << " after " << rep.iterations
            << " iterations; last residuals:";
        const std::size_t from = rep.history.size() > 5 ? rep.history.size() - 5 : 0;
        for (std::size_t i = from; i < rep.history.size(); ++i) msg << ' ' << rep.history[i];
        throw SolverError(msg.str());
    }
    return rep;
}

inline SolveReport solve(const LinearSystem& sys, SolverMethod method = SolverMethod::cg, double tol = 1e-12, int max_iter = 0)
{
    const LinearSystem c = apply_constraints(sys);
    return solve(c.matrix, c.rhs, method, tol, max_iter);
}

} // namespace curvem
