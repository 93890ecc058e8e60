#pragma once

// Solve runs, convergence studies and the patch-test suite on generated or
// file meshes.

#include "curvem/mesh_io.hpp"
#include "curvem/meshgen2d.hpp"
#include "curvem/meshgen3d.hpp"
#include "curvem/problems.hpp"
#include "curvem/vem2d.hpp"
#include "curvem/vem3d.hpp"

#include <chrono>
#include <cmath>

namespace curvem {

struct RunConfig {
    std::string mesh = "gen:square:4";
    int degree = 1;
    std::optional<BoundaryKind> bc; // unset: generated meshes Dirichlet (ribbons Neumann), files keep their tags
    CurvedStrategy strategy = CurvedStrategy::generators;
    StiffnessOptions stiffness;
    std::string problem;            // empty: poly<degree>
    SolverMethod solver = SolverMethod::cg;
    double tol = 1e-12;
    int max_iter = 0;
    int pin_vertex = -1;            // Neumann: pinned vertex (default: first boundary vertex)
    double neumann_offset = 0.0;    // added to g_N; nonzero makes full Neumann data incompatible
};

struct RunReport {
    int dim = 2;
    std::string mesh, problem, bc, strategy;
    int degree = 1;
    int elements = 0;
    int dofs = 0;
    int constrained = 0;
    double h = 0.0;
    std::map<DofKind, int> counts;
    double l2 = 0.0, h1 = 0.0, max_dof_error = 0.0;
    bool exact_expected = false; // polynomial solution of degree <= k
    bool patch_pass = false;
    std::optional<double> compatibility_residual;
    std::string solver;
    int iterations = 0;
    double residual = 0.0;
    double t_setup = 0.0, t_assemble = 0.0, t_solve = 0.0;
    VectorXd solution;
};

inline constexpr double patch_tolerance = 1e-8;

// ---------------------------------------------------------------------------
// meshes

struct MeshSpec {
    bool generated = false;
    std::string name; // generator name or file path
    int n = 0;
};

inline MeshSpec parse_mesh_spec(const std::string& s)
{
    MeshSpec m;
    if (s.rfind("gen:", 0) != 0) {
        m.name = s;
        return m;
    }
    m.generated = true;
    const std::string rest = s.substr(4);
    const auto colon = rest.find(':');
    m.name = rest.substr(0, colon);
    m.n = -1;
    if (colon != std::string::npos) {
        try {
            std::size_t used = 0;
            m.n = std::stoi(rest.substr(colon + 1), &used);
            if (used != rest.size() - colon - 1) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw InputError("bad mesh size in '" + s + "'");
        }
    }
    return m;
}

inline std::vector<std::string> generator_names()
{
    return {"square", "voronoi", "quarter-disk", "disk", "quarter-disk-chord", "disk-chord", "quarter-ribbon", "disk-ribbon",
            "cube", "cube-curved", "hex", "prism", "octant"};
}

inline bool is_ribbon_generator(const std::string& name) { return name == "quarter-ribbon" || name == "disk-ribbon"; }

/// Generated mesh `name` with size parameter n (-1: default).
inline AnyMesh generate_mesh(const std::string& name, int n, std::optional<BoundaryKind> bc)
{
    const BoundaryKind b = bc.value_or(is_ribbon_generator(name) ? BoundaryKind::neumann : BoundaryKind::dirichlet);
    auto size = [n](int def) {
        const int v = n < 0 ? def : n;
        if (v < 1) throw InputError("mesh size must be >= 1");
        return v;
    };
    if (name == "square") return square_mesh(size(4), b);
    if (name == "voronoi") return voronoi_mesh(size(32), 10u, 60, b);
    if (name == "quarter-disk" || name == "disk" || name == "quarter-disk-chord" || name == "disk-chord") {
        DiskMeshOptions o;
        o.n = size(2);
        o.quarter = name.rfind("quarter", 0) == 0;
        o.chords = name.size() > 6 && name.substr(name.size() - 6) == "-chord";
        o.arc_bc = o.axis_bc = b;
        return disk_mesh(o);
    }
    if (is_ribbon_generator(name)) {
        if (b != BoundaryKind::neumann) throw InputError("ribbon meshes support full Neumann problems only");
        RibbonMeshOptions o;
        o.n = size(2);
        o.quarter = name == "quarter-ribbon";
        return ribbon_mesh(o);
    }
    if (name == "cube" || name == "cube-curved") {
        CubeMeshOptions o;
        o.n = size(2);
        o.bc = b;
        o.curved_x1 = name == "cube-curved";
        return cube_mesh(o);
    }
    if (name == "hex") {
        Mesh3D m = random_affine_hex(static_cast<unsigned>(size(1)));
        m.set_all_tags(b);
        return m;
    }
    if (name == "prism") {
        Mesh3D m = split_prism();
        m.set_all_tags(b);
        return m;
    }
    if (name == "octant") {
        OctantMeshOptions o;
        o.n = size(2);
        o.sphere_bc = o.plane_bc = b;
        return sphere_octant_mesh(o);
    }
    std::string known;
    for (const auto& g : generator_names()) known += (known.empty() ? "" : ", ") + g;
    throw InputError("unknown mesh generator '" + name + "' (known: " + known + ")");
}

inline AnyMesh load_mesh(const std::string& spec, std::optional<BoundaryKind> bc)
{
    const MeshSpec s = parse_mesh_spec(spec);
    if (s.generated) return generate_mesh(s.name, s.n, bc);
    AnyMesh m = read_mesh_file(s.name);
    if (bc) std::visit([&](auto& mesh) { mesh.set_all_tags(*bc); }, m);
    return m;
}

// ---------------------------------------------------------------------------
// solve

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <int Dim>
RunReport run_discretization(Discretization<Dim>& d, const RunConfig& cfg, int elements)
{
    RunReport r;
    r.dim = Dim;
    r.mesh = cfg.mesh;
    r.degree = cfg.degree;
    r.problem = cfg.problem.empty() ? "poly" + std::to_string(cfg.degree) : cfg.problem;
    r.strategy = to_string(cfg.strategy);
    r.elements = elements;
    const Problem<Dim> prob = make_problem<Dim>(r.problem);
    r.exact_expected = prob.polynomial_degree >= 0 && prob.polynomial_degree <= cfg.degree;
    if (!d.any_dirichlet && cfg.pin_vertex >= 0) {
        if (cfg.pin_vertex >= static_cast<int>(d.vertex_dof.size()) || d.vertex_dof[static_cast<std::size_t>(cfg.pin_vertex)] < 0)
            throw InputError("pin vertex " + std::to_string(cfg.pin_vertex) + " is not a mesh vertex");
        d.pin = d.vertex_dof[static_cast<std::size_t>(cfg.pin_vertex)];
    }
    r.bc = d.any_dirichlet ? (d.any_neumann ? "mixed" : "dirichlet") : "neumann";
    r.dofs = d.size();
    r.h = d.h;
    r.counts = d.counts();

    auto t0 = std::chrono::steady_clock::now();
    ProblemData<Dim> data = prob.data();
    if (cfg.neumann_offset != 0.0) {
        auto g = data.g_neumann;
        const double c = cfg.neumann_offset;
        data.g_neumann = [g, c](const Vec<Dim>& x, const Vec<Dim>& n) { return g(x, n) + c; };
    }
    const Assembled<Dim> a = assemble(d, data, cfg.stiffness);
    r.t_assemble = seconds_since(t0);
    if (!d.any_dirichlet) r.compatibility_residual = a.compatibility_residual;
    r.constrained = static_cast<int>(a.system.constraints.size());

    t0 = std::chrono::steady_clock::now();
    const SolveReport s = solve(a.system, cfg.solver, cfg.tol, cfg.max_iter);
    r.t_solve = seconds_since(t0);
    r.solver = s.method;
    r.iterations = s.iterations;
    r.residual = s.residual;
    r.solution = s.x;

    double shift = 0.0;
    if (!d.any_dirichlet) shift = prob.u(d.dofs[static_cast<std::size_t>(d.pin)].points.front());
    const ScalarFunction<Dim> u = [&prob, shift](const Vec<Dim>& x) { return prob.u(x) - shift; };
    const VectorXd iu = d.interpolate(u);
    r.max_dof_error = (s.x - iu).cwiseAbs().maxCoeff();
    const ErrorNorms e = compute_errors(d, s.x, u, prob.grad);
    r.l2 = e.l2;
    r.h1 = e.h1;
    r.patch_pass = r.exact_expected && r.max_dof_error <= patch_tolerance;
    return r;
}

} // namespace detail

inline RunReport run_solve(const AnyMesh& mesh, const RunConfig& cfg)
{
    const auto t0 = std::chrono::steady_clock::now();
    RunReport r;
    if (const auto* m2 = std::get_if<Mesh2D>(&mesh)) {
        Discretization<2> d = build_discretization(*m2, cfg.degree, cfg.strategy);
        const double ts = detail::seconds_since(t0);
        r = detail::run_discretization(d, cfg, static_cast<int>(m2->elements.size()));
        r.t_setup = ts;
    } else {
        const auto& m3 = std::get<Mesh3D>(mesh);
        Discretization<3> d = build_discretization(m3, cfg.degree);
        const double ts = detail::seconds_since(t0);
        r = detail::run_discretization(d, cfg, static_cast<int>(m3.elements.size()));
        r.t_setup = ts;
    }
    return r;
}

inline RunReport run_solve(const RunConfig& cfg) { return run_solve(load_mesh(cfg.mesh, cfg.bc), cfg); }

// ---------------------------------------------------------------------------
// convergence

struct StudyLevel {
    int level = 0;
    double h = 0.0;
    int dofs = 0;
    double l2 = 0.0, h1 = 0.0, max_dof_error = 0.0;
};

struct StudySeries {
    std::string label;
    std::string mesh;
    std::vector<StudyLevel> levels;
    double l2_slope = 0.0, h1_slope = 0.0;
    bool exact = false; // every level below exact_threshold
};

inline constexpr double exact_threshold = 1e-9;

struct StudyReport {
    std::vector<StudySeries> series; // the run itself, then the chord baseline when one exists
};

/// Least-squares slope of log(err) against log(h).
inline double loglog_slope(const std::vector<double>& h, const std::vector<double>& err)
{
    if (h.size() != err.size() || h.size() < 2) throw InputError("loglog_slope: need at least two matching points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double x = std::log(h[i]), y = std::log(std::max(err[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double den = n * sxx - sx * sx;
    if (den == 0.0) throw InputError("loglog_slope: all mesh sizes equal");
    return (n * sxy - sx * sy) / den;
}

/// "2..5" (consecutive) or "2,4,8".
inline std::vector<int> parse_levels(const std::string& s)
{
    std::vector<int> out;
    auto num = [&s](const std::string& t) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(t, &used);
            if (used != t.size() || v < 1) throw std::invalid_argument("bad");
            return v;
        } catch (const std::exception&) {
            throw InputError("bad level list '" + s + "'");
        }
    };
    const auto dots = s.find("..");
    if (dots != std::string::npos) {
        const int a = num(s.substr(0, dots)), b = num(s.substr(dots + 2));
        if (b < a) throw InputError("bad level range '" + s + "'");
        for (int i = a; i <= b; ++i) out.push_back(i);
    } else {
        std::stringstream ss(s);
        std::string t;
        while (std::getline(ss, t, ',')) out.push_back(num(t));
    }
    if (out.size() < 3) throw InputError("a convergence study needs at least three levels (got '" + s + "')");
    return out;
}

inline StudySeries run_series(const std::string& label, const std::string& generator, const RunConfig& cfg,
                              const std::vector<int>& levels)
{
    StudySeries s;
    s.label = label;
    s.mesh = "gen:" + generator;
    std::vector<double> hs, l2, h1;
    s.exact = true;
    for (int l : levels) {
        RunConfig c = cfg;
        c.mesh = "gen:" + generator + ":" + std::to_string(l);
        const RunReport r = run_solve(c);
        s.levels.push_back({l, r.h, r.dofs, r.l2, r.h1, r.max_dof_error});
        hs.push_back(r.h);
        l2.push_back(r.l2);
        h1.push_back(r.h1);
        s.exact = s.exact && r.l2 < exact_threshold && r.h1 < exact_threshold;
    }
    s.l2_slope = loglog_slope(hs, l2);
    s.h1_slope = loglog_slope(hs, h1);
    return s;
}

/// Convergence over generated meshes gen:<name>:<level>. Disk meshes also
/// run the chord-facet baseline on the same vertices.
inline StudyReport run_convergence(const RunConfig& cfg, const std::vector<int>& levels, bool baseline = true)
{
    if (levels.size() < 3) throw InputError("a convergence study needs at least three levels");
    const MeshSpec spec = parse_mesh_spec(cfg.mesh);
    if (!spec.generated) throw InputError("convergence studies need a generated mesh (gen:<name>)");
    StudyReport rep;
    rep.series.push_back(run_series(to_string(cfg.strategy), spec.name, cfg, levels));
    if (baseline && (spec.name == "disk" || spec.name == "quarter-disk"))
        rep.series.push_back(run_series("chord", spec.name + "-chord", cfg, levels));
    return rep;
}

// ---------------------------------------------------------------------------
// patch suite

struct PatchCase {
    std::string name;
    RunConfig config;
};

struct PatchResult {
    std::string name;
    int degree = 1;
    double max_dof_error = 0.0;
    bool pass = false;
    std::string error; // exception text when the run failed
};

/// Order-k patch tests: square, centroidal polygons, quarter disks under every
/// curved strategy, the 2x2x2 cube and the sphere octant.
inline std::vector<PatchCase> patch_cases()
{
    std::vector<PatchCase> out;
    auto add = [&out](const std::string& name, const std::string& mesh, int k, CurvedStrategy st, std::optional<BoundaryKind> bc) {
        RunConfig c;
        c.mesh = mesh;
        c.degree = k;
        c.strategy = st;
        c.bc = bc;
        c.solver = SolverMethod::dense;
        out.push_back({name, c});
    };
    for (int k = 1; k <= 3; ++k) {
        add("square-4x4", "gen:square:4", k, CurvedStrategy::generators, BoundaryKind::dirichlet);
        add("voronoi-32", "gen:voronoi:32", k, CurvedStrategy::generators, BoundaryKind::dirichlet);
        for (auto st : {CurvedStrategy::generators, CurvedStrategy::subset, CurvedStrategy::subset_mfd}) {
            add(std::string("quarter-disk-dirichlet-") + to_string(st), "gen:quarter-disk:3", k, st, BoundaryKind::dirichlet);
            add(std::string("quarter-disk-neumann-") + to_string(st), "gen:quarter-disk:3", k, st, BoundaryKind::neumann);
        }
        add("quarter-ribbon-neumann", "gen:quarter-ribbon:3", k, CurvedStrategy::ribbon, BoundaryKind::neumann);
    }
    for (int k = 1; k <= 2; ++k) {
        add("cube-2x2x2", "gen:cube:2", k, CurvedStrategy::generators, BoundaryKind::dirichlet);
        add("octant-dirichlet", "gen:octant:2", k, CurvedStrategy::generators, BoundaryKind::dirichlet);
        add("octant-neumann", "gen:octant:2", k, CurvedStrategy::generators, BoundaryKind::neumann);
    }
    return out;
}

inline PatchResult run_patch_case(const PatchCase& c)
{
    PatchResult r;
    r.name = c.name;
    r.degree = c.config.degree;
    try {
        const RunReport rep = run_solve(c.config);
        r.max_dof_error = rep.max_dof_error;
        r.pass = rep.patch_pass;
    } catch (const Error& e) {
        r.error = e.what();
        r.max_dof_error = std::numeric_limits<double>::infinity();
    }
    return r;
}

} // namespace curvem
