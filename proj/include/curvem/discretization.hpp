#pragma once

// Dimension-independent part of the discrete problem: global unknowns with
// their defining functionals, assembly, boundary conditions and errors.

#include "curvem/solver.hpp"
#include "curvem/stiffness.hpp"

#include <sstream>
#include <tuple>

namespace curvem {

/// Global unknown. Its value for a function u is sum_q weights[q] u(points[q])
/// (point value, moment, or generator value).
template <int Dim>
struct GlobalDof {
    DofKind kind = DofKind::vertex;
    int entity = -1;
    int index = 0;
    bool dirichlet = false;
    bool on_boundary = false;
    std::vector<Vec<Dim>> points;
    std::vector<double> weights;

    template <class F>
    double apply(F&& u) const
    {
        double s = 0.0;
        for (std::size_t q = 0; q < points.size(); ++q) s += weights[q] * u(points[q]);
        return s;
    }
};

template <int Dim>
struct Discretization {
    int degree = 1;
    std::vector<GlobalDof<Dim>> dofs;
    std::vector<LocalSpace<Dim>> spaces;
    int pin = -1;            // first boundary vertex unknown
    bool any_dirichlet = false;
    bool any_neumann = false;
    double h = 0.0;          // max element diameter
    std::vector<int> vertex_dof;

    int size() const { return static_cast<int>(dofs.size()); }

    template <class F>
    VectorXd interpolate(F&& u) const
    {
        VectorXd v(size());
        for (int i = 0; i < size(); ++i) v(i) = dofs[static_cast<std::size_t>(i)].apply(u);
        return v;
    }

    VectorXd gather(const VectorXd& global, const LocalSpace<Dim>& s) const
    {
        VectorXd l(s.size());
        for (int i = 0; i < s.size(); ++i) l(i) = global(s.global[static_cast<std::size_t>(i)]);
        return l;
    }

    std::map<DofKind, int> counts() const
    {
        std::map<DofKind, int> c;
        for (const auto& d : dofs) ++c[d.kind];
        return c;
    }
};

template <int Dim>
using FluxFunction = std::function<double(const Vec<Dim>&, const Vec<Dim>&)>;

template <int Dim>
struct ProblemData {
    ScalarFunction<Dim> f;
    ScalarFunction<Dim> g_dirichlet;
    FluxFunction<Dim> g_neumann; // (x, outward normal) -> du/dn
};

template <int Dim>
struct Assembled {
    LinearSystem system;
    std::vector<ElementMatrices> elements;
    double compatibility_residual = 0.0;
    double integral_f = 0.0;
    double integral_g = 0.0;
};

inline constexpr double compatibility_tolerance = 1e-8;

template <int Dim>
std::vector<ElementMatrices> element_matrices(const Discretization<Dim>& d, const StiffnessOptions& o)
{
    std::vector<ElementMatrices> out;
    out.reserve(d.spaces.size());
    for (const auto& s : d.spaces) out.push_back(local_stiffness(s, o));
    return out;
}

/// Neumann contribution of one space, sum over its Neumann pieces.
template <int Dim>
VectorXd local_neumann(const LocalSpace<Dim>& s, const FluxFunction<Dim>& g, double* integral = nullptr)
{
    VectorXd r = VectorXd::Zero(s.size());
    for (const auto& p : s.pieces) {
        if (!p.on_domain_boundary || !p.neumann) continue;
        for (std::size_t q = 0; q < p.size(); ++q) {
            const double gv = p.weights[q] * p.data_scale[q] * g(p.data_points[q], p.data_normals[q]);
            r += gv * p.values.row(static_cast<Eigen::Index>(q)).transpose();
            if (integral) *integral += gv;
        }
    }
    return r;
}

/// Global matrix and right-hand side with Dirichlet values or the Neumann pin
/// recorded as constraints.
template <int Dim>
Assembled<Dim> assemble(const Discretization<Dim>& d, const ProblemData<Dim>& data, const StiffnessOptions& o)
{
    Assembled<Dim> a;
    a.elements = element_matrices(d, o);
    const int n = d.size();
    std::vector<std::tuple<int, int, double>> t;
    VectorXd rhs = VectorXd::Zero(n);
    for (std::size_t e = 0; e < d.spaces.size(); ++e) {
        const auto& s = d.spaces[e];
        const auto& k = a.elements[e].stiffness;
        VectorXd l = data.f ? local_load(s, data.f) : VectorXd::Zero(s.size());
        if (data.f) a.integral_f += s.volume.integrate(data.f);
        if (d.any_neumann && data.g_neumann) l += local_neumann(s, data.g_neumann, &a.integral_g);
        for (int i = 0; i < s.size(); ++i) {
            const int gi = s.global[static_cast<std::size_t>(i)];
            if (gi < 0 || gi >= n) throw Error("assemble: local-to-global index out of range");
            rhs(gi) += l(i);
            for (int j = 0; j < s.size(); ++j) t.emplace_back(gi, s.global[static_cast<std::size_t>(j)], k(i, j));
        }
    }
    a.system.matrix = CsrMatrix::from_triplets(n, n, std::move(t));
    a.system.rhs = rhs;
    if (d.any_dirichlet) {
        if (!data.g_dirichlet) throw InputError("assemble: Dirichlet boundary present but no Dirichlet data");
        for (int i = 0; i < n; ++i)
            if (d.dofs[static_cast<std::size_t>(i)].dirichlet)
                a.system.constraints.push_back({i, d.dofs[static_cast<std::size_t>(i)].apply(data.g_dirichlet)});
    } else {
        a.compatibility_residual =
            std::abs(a.integral_g + a.integral_f) / std::max({std::abs(a.integral_f), std::abs(a.integral_g), 1.0});
        if (a.compatibility_residual > compatibility_tolerance)
        {
            std::ostringstream msg;
            msg << "incompatible Neumann data: |int g_N + int f| relative residual " << a.compatibility_residual << " exceeds "
                << compatibility_tolerance;
            throw InputError(msg.str());
        }
        if (d.pin < 0) throw InputError("assemble: no boundary vertex available to pin");
        a.system.constraints.push_back({d.pin, 0.0});
    }
    return a;
}

struct ErrorNorms {
    double l2 = 0.0;
    double h1 = 0.0;
};

/// Element-wise errors against the projected discrete solution: L2 against
/// the dof-least-squares projection (energy projection where D is not
/// injective), H1 seminorm against Pi^0_{k-1} grad u_h. Ribbon elements use
/// their polynomial directly.
template <int Dim>
ErrorNorms compute_errors(const Discretization<Dim>& d, const VectorXd& uh, const ScalarFunction<Dim>& u,
                          const std::function<Vec<Dim>(const Vec<Dim>&)>& grad_u)
{
    ErrorNorms e;
    for (const auto& s : d.spaces) {
        const VectorXd ul = d.gather(uh, s);
        const auto basis = s.basis();
        VectorXd pc;
        std::vector<VectorXd> gc;
        if (s.polynomial) {
            pc = s.D.partialPivLu().solve(ul);
        } else {
            try {
                pc = compute_dofi_projector(s) * ul;
            } catch (const ProjectorError&) {
                pc = compute_pinabla(s) * ul;
            }
            for (const auto& m : compute_grad_l2(s, s.degree - 1)) gc.push_back(m * ul);
        }
        const auto gbasis = s.basis(s.degree - 1);
        for (std::size_t q = 0; q < s.volume.size(); ++q) {
            const auto& x = s.volume.points[q];
            const double w = s.volume.weights[q];
            const double diff = u(x) - basis.evaluate(pc, x);
            e.l2 += w * diff * diff;
            Vec<Dim> gh;
            if (s.polynomial) {
                gh = basis.evaluate_gradient(pc, x);
            } else {
                const VectorXd m = gbasis.values(x);
                for (int c = 0; c < Dim; ++c) gh(c) = m.dot(gc[static_cast<std::size_t>(c)]);
            }
            e.h1 += w * (grad_u(x) - gh).squaredNorm();
        }
    }
    e.l2 = std::sqrt(std::max(e.l2, 0.0));
    e.h1 = std::sqrt(std::max(e.h1, 0.0));
    return e;
}

/// H1 seminorm of the difference of two discrete functions.
template <int Dim>
double h1_seminorm_difference(const Discretization<Dim>& d, const VectorXd& a, const VectorXd& b)
{
    double s2 = 0.0;
    const VectorXd diff = a - b;
    for (const auto& s : d.spaces) {
        const VectorXd ul = d.gather(diff, s);
        const auto gbasis = s.basis(s.degree - 1);
        std::vector<VectorXd> gc;
        if (s.polynomial) {
            const VectorXd pc = s.D.partialPivLu().solve(ul);
            const auto basis = s.basis();
            for (std::size_t q = 0; q < s.volume.size(); ++q)
                s2 += s.volume.weights[q] * basis.evaluate_gradient(pc, s.volume.points[q]).squaredNorm();
            continue;
        }
        for (const auto& m : compute_grad_l2(s, s.degree - 1)) gc.push_back(m * ul);
        for (std::size_t q = 0; q < s.volume.size(); ++q) {
            const VectorXd m = gbasis.values(s.volume.points[q]);
            double g2 = 0.0;
            for (int c = 0; c < Dim; ++c) g2 += std::pow(m.dot(gc[static_cast<std::size_t>(c)]), 2);
            s2 += s.volume.weights[q] * g2;
        }
    }
    return std::sqrt(std::max(s2, 0.0));
}

} // namespace curvem
