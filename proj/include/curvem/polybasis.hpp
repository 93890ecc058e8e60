#pragma once

// Scaled monomials m_a(x) = ((x - x_P) / h_P)^a on an element, edge or face.
//
// Multi-indices are enumerated in graded-lex order, fixed for the whole
// library: by total degree first, then lexicographically descending in the
// leading exponent. In 2D degree 2 reads (2,0), (1,1), (0,2); in 3D degree 1
// reads (1,0,0), (0,1,0), (0,0,1).

#include "curvem/common.hpp"
#include "curvem/quadrature.hpp"

#include <array>
#include <map>

namespace curvem {

/// dim P_k(R^d); zero for k < 0.
inline int poly_dim(int dim, int degree)
{
    if (degree < 0) return 0;
    const int k = degree;
    switch (dim) {
    case 1: return k + 1;
    case 2: return (k + 1) * (k + 2) / 2;
    case 3: return (k + 1) * (k + 2) * (k + 3) / 6;
    default: throw Error("poly_dim: unsupported dimension");
    }
}

template <int Dim>
using MultiIndex = std::array<int, Dim>;

template <int Dim>
std::vector<MultiIndex<Dim>> multi_indices(int degree)
{
    std::vector<MultiIndex<Dim>> out;
    for (int d = 0; d <= degree; ++d) {
        if constexpr (Dim == 1) {
            out.push_back({d});
        } else if constexpr (Dim == 2) {
            for (int a = d; a >= 0; --a) out.push_back({a, d - a});
        } else {
            for (int a = d; a >= 0; --a)
                for (int b = d - a; b >= 0; --b) out.push_back({a, b, d - a - b});
        }
    }
    return out;
}

template <int Dim>
int total_degree(const MultiIndex<Dim>& a)
{
    int s = 0;
    for (int v : a) s += v;
    return s;
}

template <int Dim>
class ScaledMonomialBasis {
public:
    ScaledMonomialBasis() = default;

    ScaledMonomialBasis(const Vec<Dim>& center, double diameter, int degree)
        : center_(center), h_(diameter), degree_(degree), idx_(multi_indices<Dim>(degree))
    {
        if (!(diameter > 0.0)) throw GeometryError("ScaledMonomialBasis: diameter must be positive");
        for (std::size_t i = 0; i < idx_.size(); ++i) lookup_[idx_[i]] = static_cast<int>(i);
    }

    int size() const { return static_cast<int>(idx_.size()); }
    int degree() const { return degree_; }
    double diameter() const { return h_; }
    const Vec<Dim>& center() const { return center_; }
    const std::vector<MultiIndex<Dim>>& indices() const { return idx_; }

    int index_of(const MultiIndex<Dim>& a) const
    {
        auto it = lookup_.find(a);
        return it == lookup_.end() ? -1 : it->second;
    }

    Vec<Dim> scaled(const Vec<Dim>& x) const { return (x - center_) / h_; }

    VectorXd values(const Vec<Dim>& x) const
    {
        const auto pw = powers(scaled(x));
        VectorXd v(size());
        for (int i = 0; i < size(); ++i) {
            double p = 1.0;
            for (int d = 0; d < Dim; ++d) p *= pw(d, idx_[i][d]);
            v(i) = p;
        }
        return v;
    }

    /// Column i holds the gradient of m_i at x.
    Eigen::Matrix<double, Dim, Eigen::Dynamic> gradients(const Vec<Dim>& x) const
    {
        const auto pw = powers(scaled(x));
        Eigen::Matrix<double, Dim, Eigen::Dynamic> g(Dim, size());
        for (int i = 0; i < size(); ++i) {
            for (int d = 0; d < Dim; ++d) {
                const int ad = idx_[i][d];
                if (ad == 0) {
                    g(d, i) = 0.0;
                    continue;
                }
                double p = ad / h_;
                for (int e = 0; e < Dim; ++e) p *= (e == d) ? pw(e, ad - 1) : pw(e, idx_[i][e]);
                g(d, i) = p;
            }
        }
        return g;
    }

    /// Row q holds all basis values at points[q].
    template <class Points>
    MatrixXd value_matrix(const Points& points) const
    {
        MatrixXd m(static_cast<Eigen::Index>(points.size()), size());
        for (std::size_t q = 0; q < points.size(); ++q) m.row(static_cast<Eigen::Index>(q)) = values(points[q]).transpose();
        return m;
    }

    /// Coefficient map of d/dx_dir : P_s -> P_{s-1} (rows: target basis of degree s-1).
    MatrixXd derivative_map(int dir) const
    {
        const ScaledMonomialBasis lower = lower_basis(degree_ - 1);
        MatrixXd m = MatrixXd::Zero(lower.size(), size());
        for (int i = 0; i < size(); ++i) {
            MultiIndex<Dim> a = idx_[i];
            if (a[dir] == 0) continue;
            const double c = a[dir] / h_;
            a[dir] -= 1;
            m(lower.index_of(a), i) = c;
        }
        return m;
    }

    /// Coefficient map of the Laplacian : P_s -> P_{s-2}.
    MatrixXd laplacian_map() const
    {
        const ScaledMonomialBasis lower = lower_basis(degree_ - 2);
        MatrixXd m = MatrixXd::Zero(lower.size(), size());
        for (int i = 0; i < size(); ++i) {
            for (int d = 0; d < Dim; ++d) {
                MultiIndex<Dim> a = idx_[i];
                if (a[d] < 2) continue;
                const double c = a[d] * (a[d] - 1) / (h_ * h_);
                a[d] -= 2;
                m(lower.index_of(a), i) += c;
            }
        }
        return m;
    }

    /// Same center and diameter, different degree (empty basis for degree < 0).
    ScaledMonomialBasis lower_basis(int degree) const
    {
        ScaledMonomialBasis b;
        b.center_ = center_;
        b.h_ = h_;
        b.degree_ = degree;
        b.idx_ = multi_indices<Dim>(degree);
        for (std::size_t i = 0; i < b.idx_.size(); ++i) b.lookup_[b.idx_[i]] = static_cast<int>(i);
        return b;
    }

    /// Embedding of a lower-degree basis with the same center/diameter: leading rows.
    int leading(int degree) const { return poly_dim(Dim, degree); }

    /// Gram matrix (int m_i m_j) under a quadrature rule.
    MatrixXd gram(const QuadratureRule<Dim>& rule) const
    {
        MatrixXd g = MatrixXd::Zero(size(), size());
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const VectorXd v = values(rule.points[q]);
            g.noalias() += rule.weights[q] * v * v.transpose();
        }
        return g;
    }

    /// Stiffness matrix (int grad m_i . grad m_j) under a quadrature rule.
    MatrixXd stiffness(const QuadratureRule<Dim>& rule) const
    {
        MatrixXd g = MatrixXd::Zero(size(), size());
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto gr = gradients(rule.points[q]);
            g.noalias() += rule.weights[q] * gr.transpose() * gr;
        }
        return g;
    }

    /// Moments (int f m_i) of a scalar function.
    template <class F>
    VectorXd moments(const QuadratureRule<Dim>& rule, F&& f) const
    {
        VectorXd m = VectorXd::Zero(size());
        for (std::size_t q = 0; q < rule.size(); ++q) m += rule.weights[q] * f(rule.points[q]) * values(rule.points[q]);
        return m;
    }

    double evaluate(const VectorXd& coeffs, const Vec<Dim>& x) const { return values(x).dot(coeffs); }

    Vec<Dim> evaluate_gradient(const VectorXd& coeffs, const Vec<Dim>& x) const { return gradients(x) * coeffs; }

private:
    Eigen::Matrix<double, Dim, Eigen::Dynamic> powers(const Vec<Dim>& xi) const
    {
        Eigen::Matrix<double, Dim, Eigen::Dynamic> pw(Dim, degree_ + 1);
        for (int d = 0; d < Dim; ++d) {
            pw(d, 0) = 1.0;
            for (int j = 1; j <= degree_; ++j) pw(d, j) = pw(d, j - 1) * xi(d);
        }
        return pw;
    }

    Vec<Dim> center_ = Vec<Dim>::Zero();
    double h_ = 1.0;
    int degree_ = -1;
    std::vector<MultiIndex<Dim>> idx_;
    std::map<MultiIndex<Dim>, int> lookup_;
};

/// L2-orthonormalized scaled monomials: row j of `transform` holds the
/// coefficients of the orthonormal function m~_j in the monomial basis.
struct OrthonormalBasis {
    MatrixXd transform;
    MatrixXd gram;
};

inline constexpr double gram_condition_limit = 1e14;

/// Orthonormalize from a Gram matrix via Cholesky (m~ = L^{-1} m).
inline OrthonormalBasis l2_orthonormalize(const MatrixXd& gram)
{
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(gram);
    const double lmax = eig.eigenvalues().maxCoeff();
    const double lmin = eig.eigenvalues().minCoeff();
    if (!(lmin > 0.0) || lmax / lmin > gram_condition_limit)
        throw ProjectorError("l2_orthonormalize: Gram matrix too ill-conditioned (element too distorted for this degree)");
    Eigen::LLT<MatrixXd> llt(gram);
    const MatrixXd L = llt.matrixL();
    OrthonormalBasis ob;
    ob.transform = L.triangularView<Eigen::Lower>().solve(MatrixXd::Identity(gram.rows(), gram.cols()));
    ob.gram = gram;
    return ob;
}

template <int Dim>
OrthonormalBasis l2_orthonormalize(const ScaledMonomialBasis<Dim>& basis, const QuadratureRule<Dim>& rule)
{
    return l2_orthonormalize(basis.gram(rule));
}

/// Coefficients of the L2 projection onto P_s from the moments (int v m_j).
inline VectorXd l2_project(const OrthonormalBasis& ob, const VectorXd& moments)
{
    if (moments.size() != ob.transform.rows())
        throw ProjectorError("l2_project: moment vector length " + std::to_string(moments.size()) + " does not match basis size " +
                             std::to_string(ob.transform.rows()));
    // sum_j m~_j (int v m~_j)
    return ob.transform.transpose() * (ob.transform * moments);
}

} // namespace curvem
