#pragma once

// Manufactured solutions of -lap u = f, registered by id.

#include "curvem/discretization.hpp"

namespace curvem {

template <int Dim>
struct Problem {
    std::string id;
    std::string description;
    ScalarFunction<Dim> u;
    std::function<Vec<Dim>(const Vec<Dim>&)> grad;
    ScalarFunction<Dim> f;
    int polynomial_degree = -1; // -1 when u is not a polynomial

    ProblemData<Dim> data() const
    {
        ProblemData<Dim> d;
        d.f = f;
        d.g_dirichlet = u;
        auto g = grad;
        d.g_neumann = [g](const Vec<Dim>& x, const Vec<Dim>& n) { return g(x).dot(n); };
        return d;
    }
};

namespace detail {

template <int Dim>
struct Monomial {
    double c;
    std::array<int, Dim> e;
};

template <int Dim>
Problem<Dim> polynomial_problem(std::string id, std::string desc, std::vector<Monomial<Dim>> terms)
{
    auto value = [](const std::vector<Monomial<Dim>>& t, const Vec<Dim>& x) {
        double s = 0.0;
        for (const auto& m : t) {
            double v = m.c;
            for (int d = 0; d < Dim; ++d) v *= std::pow(x(d), m.e[static_cast<std::size_t>(d)]);
            s += v;
        }
        return s;
    };
    std::array<std::vector<Monomial<Dim>>, Dim> deriv;
    std::vector<Monomial<Dim>> lap;
    int degree = 0;
    for (const auto& m : terms) {
        int deg = 0;
        for (int d = 0; d < Dim; ++d) {
            const int p = m.e[static_cast<std::size_t>(d)];
            deg += p;
            if (p >= 1) {
                auto md = m;
                md.c *= p;
                md.e[static_cast<std::size_t>(d)] -= 1;
                deriv[static_cast<std::size_t>(d)].push_back(md);
            }
            if (p >= 2) {
                auto ml = m;
                ml.c *= -p * (p - 1);
                ml.e[static_cast<std::size_t>(d)] -= 2;
                lap.push_back(ml);
            }
        }
        degree = std::max(degree, deg);
    }
    Problem<Dim> p;
    p.id = std::move(id);
    p.description = std::move(desc);
    p.polynomial_degree = degree;
    p.u = [terms, value](const Vec<Dim>& x) { return value(terms, x); };
    p.grad = [deriv, value](const Vec<Dim>& x) {
        Vec<Dim> g;
        for (int d = 0; d < Dim; ++d) g(d) = value(deriv[static_cast<std::size_t>(d)], x);
        return g;
    };
    p.f = [lap, value](const Vec<Dim>& x) { return value(lap, x); };
    return p;
}

template <int Dim>
std::vector<Monomial<Dim>> mono(std::initializer_list<std::pair<double, std::array<int, 3>>> list)
{
    std::vector<Monomial<Dim>> out;
    for (const auto& [c, e] : list) {
        Monomial<Dim> m{c, {}};
        bool keep = true;
        for (int d = 0; d < 3; ++d) {
            if (d < Dim)
                m.e[static_cast<std::size_t>(d)] = e[static_cast<std::size_t>(d)];
            else if (e[static_cast<std::size_t>(d)] != 0)
                keep = false;
        }
        if (keep) out.push_back(m);
    }
    return out;
}

// Generic polynomial of total degree k (all lower degrees present).
template <int Dim>
std::vector<Monomial<Dim>> generic_polynomial(int k)
{
    std::vector<Monomial<Dim>> t = mono<Dim>({{1.0, {0, 0, 0}}, {1.0, {1, 0, 0}}, {0.5, {0, 1, 0}}, {-0.3, {0, 0, 1}}});
    if (k >= 2)
        for (auto m : mono<Dim>({{1.0, {2, 0, 0}}, {-0.5, {1, 1, 0}}, {0.25, {0, 2, 0}}, {0.3, {1, 0, 1}}, {-0.2, {0, 0, 2}}}))
            t.push_back(m);
    if (k >= 3)
        for (auto m : mono<Dim>({{1.0, {3, 0, 0}}, {-0.4, {1, 2, 0}}, {0.2, {0, 3, 0}}, {0.1, {0, 1, 2}}, {0.15, {0, 0, 3}}}))
            t.push_back(m);
    if (k >= 4)
        for (auto m : mono<Dim>({{0.5, {4, 0, 0}}, {-0.3, {2, 2, 0}}, {0.1, {0, 4, 0}}, {0.2, {1, 1, 2}}}))
            t.push_back(m);
    return t;
}

} // namespace detail

/// Registered ids: x, poly1..poly4, harmonic2 (x^2 - y^2), exp (e^x cos y,
/// harmonic; 3D: e^x cos(y) ... with sqrt2 z), sin (product of sin(pi x_d)).
template <int Dim>
Problem<Dim> make_problem(const std::string& id)
{
    if (id == "x") return detail::polynomial_problem<Dim>(id, "u = x", detail::mono<Dim>({{1.0, {1, 0, 0}}}));
    if (id.size() == 5 && id.rfind("poly", 0) == 0 && id[4] >= '1' && id[4] <= '4') {
        const int k = id[4] - '0';
        return detail::polynomial_problem<Dim>(id, "generic polynomial of degree " + std::to_string(k), detail::generic_polynomial<Dim>(k));
    }
    if (id == "harmonic2")
        return detail::polynomial_problem<Dim>(id, "u = x^2 - y^2", detail::mono<Dim>({{1.0, {2, 0, 0}}, {-1.0, {0, 2, 0}}}));
    Problem<Dim> p;
    p.id = id;
    if (id == "exp") {
        if constexpr (Dim == 2) {
            p.description = "u = exp(x) cos(y)";
            p.u = [](const Vec<Dim>& x) { return std::exp(x(0)) * std::cos(x(1)); };
            p.grad = [](const Vec<Dim>& x) { return Vec<Dim>(std::exp(x(0)) * std::cos(x(1)), -std::exp(x(0)) * std::sin(x(1))); };
        } else {
            p.description = "u = exp(x + y) cos(sqrt(2) z)";
            const double r2 = std::sqrt(2.0);
            p.u = [r2](const Vec<Dim>& x) { return std::exp(x(0) + x(1)) * std::cos(r2 * x(2)); };
            p.grad = [r2](const Vec<Dim>& x) {
                const double e = std::exp(x(0) + x(1));
                return Vec<Dim>(e * std::cos(r2 * x(2)), e * std::cos(r2 * x(2)), -r2 * e * std::sin(r2 * x(2)));
            };
        }
        p.f = [](const Vec<Dim>&) { return 0.0; };
        return p;
    }
    if (id == "sin") {
        p.description = Dim == 2 ? "u = sin(pi x) sin(pi y)" : "u = sin(pi x) sin(pi y) sin(pi z)";
        p.u = [](const Vec<Dim>& x) {
            double v = 1.0;
            for (int d = 0; d < Dim; ++d) v *= std::sin(pi * x(d));
            return v;
        };
        p.grad = [](const Vec<Dim>& x) {
            Vec<Dim> g;
            for (int d = 0; d < Dim; ++d) {
                double v = pi * std::cos(pi * x(d));
                for (int e = 0; e < Dim; ++e)
                    if (e != d) v *= std::sin(pi * x(e));
                g(d) = v;
            }
            return g;
        };
        p.f = [](const Vec<Dim>& x) {
            double v = Dim * pi * pi;
            for (int d = 0; d < Dim; ++d) v *= std::sin(pi * x(d));
            return v;
        };
        return p;
    }
    throw InputError("unknown problem id '" + id + "' (known: x, poly1..poly4, harmonic2, exp, sin)");
}

inline std::vector<std::string> problem_ids() { return {"x", "poly1", "poly2", "poly3", "poly4", "harmonic2", "exp", "sin"}; }

} // namespace curvem
