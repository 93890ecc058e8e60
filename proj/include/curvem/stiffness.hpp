#pragma once

// Local stiffness (consistency + stabilization) and local load.

#include "curvem/projectors.hpp"

#include <functional>

namespace curvem {

enum class Consistency { pinabla, grad_l2 };
enum class Stabilization { dofi, boundary_l2, tangential };

inline const char* to_string(Consistency c) { return c == Consistency::pinabla ? "pinabla" : "grad-l2"; }

inline const char* to_string(Stabilization s)
{
    switch (s) {
    case Stabilization::dofi: return "dofi";
    case Stabilization::boundary_l2: return "boundary-l2";
    case Stabilization::tangential: return "tangential";
    }
    return "?";
}

inline Consistency parse_consistency(const std::string& s)
{
    if (s == "pinabla") return Consistency::pinabla;
    if (s == "grad-l2") return Consistency::grad_l2;
    throw InputError("unknown consistency '" + s + "' (pinabla|grad-l2)");
}

inline Stabilization parse_stabilization(const std::string& s)
{
    if (s == "dofi") return Stabilization::dofi;
    if (s == "boundary-l2") return Stabilization::boundary_l2;
    if (s == "tangential") return Stabilization::tangential;
    throw InputError("unknown stabilization '" + s + "' (dofi|boundary-l2|tangential)");
}

struct StiffnessOptions {
    Consistency consistency = Consistency::pinabla;
    Stabilization stabilization = Stabilization::dofi;
    double stab_coeff = 1.0;
};

struct ElementMatrices {
    MatrixXd consistency;
    MatrixXd stability;
    MatrixXd stiffness;
    MatrixXd pinabla;
    std::vector<MatrixXd> grad;
};

template <int Dim>
using ScalarFunction = std::function<double(const Vec<Dim>&)>;

namespace detail {

template <int Dim>
MatrixXd stabilization_matrix(const LocalSpace<Dim>& s, const MatrixXd& pin, const StiffnessOptions& o)
{
    const auto basis = s.basis();
    const int n = s.size();
    const double h = s.diameter;
    MatrixXd st = MatrixXd::Zero(n, n);
    switch (o.stabilization) {
    case Stabilization::dofi: {
        const MatrixXd r = MatrixXd::Identity(n, n) - s.D * pin;
        st = r.transpose() * s.stab_weights.asDiagonal() * r;
        st *= std::pow(h, Dim - 2);
        break;
    }
    case Stabilization::boundary_l2:
    case Stabilization::tangential: {
        const bool tangential = o.stabilization == Stabilization::tangential;
        for (const auto& p : s.pieces) {
            if (tangential && !p.tangential.empty()) {
                for (std::size_t d = 0; d < p.tangential.size(); ++d)
                    for (std::size_t q = 0; q < p.size(); ++q) {
                        const auto g = basis.gradients(p.points[q]);
                        const Eigen::RowVectorXd r = p.tangential[d].row(static_cast<Eigen::Index>(q)) -
                                                     (p.tangents[d][q].transpose() * g) * pin;
                        st.noalias() += (p.weights[q] * h) * r.transpose() * r;
                    }
            } else {
                // data slots and polynomial traces without a tangential part
                for (std::size_t q = 0; q < p.size(); ++q) {
                    const Eigen::RowVectorXd r = p.values.row(static_cast<Eigen::Index>(q)) - basis.values(p.points[q]).transpose() * pin;
                    st.noalias() += (p.weights[q] / h) * r.transpose() * r;
                }
            }
            if (p.dof_defect.size() > 0) st.noalias() += h * p.dof_defect.transpose() * p.dof_defect;
        }
        // generator slots are not determined by their traces
        const MatrixXd r = MatrixXd::Identity(n, n) - s.D * pin;
        for (int i = 0; i < n; ++i)
            if (s.kinds[static_cast<std::size_t>(i)] == DofKind::generator)
                st.noalias() += s.stab_weights(i) * std::pow(h, Dim - 2) * r.row(i).transpose() * r.row(i);
        break;
    }
    }
    return o.stab_coeff * st;
}

} // namespace detail

template <int Dim>
ElementMatrices local_stiffness(const LocalSpace<Dim>& s, const StiffnessOptions& o = {})
{
    ElementMatrices em;
    const auto basis = s.basis();
    if (s.polynomial) {
        em.pinabla = s.D.inverse();
        em.consistency = em.pinabla.transpose() * basis.stiffness(s.volume) * em.pinabla;
        em.stability = MatrixXd::Zero(s.size(), s.size());
        em.stiffness = em.consistency;
        return em;
    }
    em.pinabla = compute_pinabla(s);
    if (o.consistency == Consistency::pinabla) {
        em.consistency = em.pinabla.transpose() * basis.stiffness(s.volume) * em.pinabla;
    } else {
        em.grad = compute_grad_l2(s, s.degree - 1);
        const MatrixXd mass = s.basis(s.degree - 1).gram(s.volume);
        em.consistency = MatrixXd::Zero(s.size(), s.size());
        for (const auto& pd : em.grad) em.consistency.noalias() += pd.transpose() * mass * pd;
    }
    em.stability = detail::stabilization_matrix(s, em.pinabla, o);
    em.stiffness = em.consistency + em.stability;
    em.stiffness = 0.5 * (em.stiffness + em.stiffness.transpose());
    return em;
}

/// (f_h, v): k = 1 uses Pi^0_0 f |P| times the vertex average, k >= 2 the
/// interior moments against Pi^0_{k-2} f. Ribbon elements integrate f v directly.
template <int Dim>
VectorXd local_load(const LocalSpace<Dim>& s, const ScalarFunction<Dim>& f)
{
    VectorXd load = VectorXd::Zero(s.size());
    if (s.polynomial) {
        const auto basis = s.basis();
        const MatrixXd inv = s.D.inverse();
        load = inv.transpose() * basis.moments(s.volume, f);
        return load;
    }
    if (s.degree == 1) {
        const double total = s.volume.integrate(f);
        const int nv = s.count(DofKind::vertex);
        for (int i = 0; i < s.size(); ++i)
            if (s.kinds[static_cast<std::size_t>(i)] == DofKind::vertex) load(i) = total / nv;
        return load;
    }
    const auto low = s.basis(s.degree - 2);
    const VectorXd c = low.gram(s.volume).ldlt().solve(low.moments(s.volume, f));
    return s.measure * s.interior.transpose() * c;
}

} // namespace curvem
