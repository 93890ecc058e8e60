// vemcli: solve runs, convergence studies, patch tests and projector dumps.

#include "curvem/curvem.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

using json = nlohmann::ordered_json;
using namespace curvem;

namespace {

constexpr const char* schema = "vemcli-report/1";

struct Options {
    RunConfig run;
    std::string bc;
    std::string strategy = "generators";
    std::string stab = "dofi";
    std::string consistency = "pinabla";
    std::string solver = "cg";
    std::string study;
    std::string out = "csv";
    std::string output;
    std::string dump_solution;
    bool timings = false;
    bool no_baseline = false;
    int element = -1;
    double rho_geom = 0.05;
};

std::string num(double v)
{
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void finish_config(Options& o)
{
    if (!o.bc.empty()) {
        if (o.bc != "dirichlet" && o.bc != "neumann") throw InputError("--bc must be dirichlet or neumann");
        o.run.bc = o.bc == "dirichlet" ? BoundaryKind::dirichlet : BoundaryKind::neumann;
    }
    o.run.strategy = parse_curved_strategy(o.strategy);
    o.run.stiffness.stabilization = parse_stabilization(o.stab);
    o.run.stiffness.consistency = parse_consistency(o.consistency);
    o.run.solver = parse_solver(o.solver);
    if (o.run.degree < 1) throw InputError("--degree must be >= 1");
    if (o.run.stiffness.stab_coeff <= 0.0) throw InputError("--stab-coeff must be positive");
    if (o.out != "csv" && o.out != "json") throw InputError("--out must be csv or json");
}

json config_json(const Options& o)
{
    const RunConfig& c = o.run;
    return json{{"mesh", c.mesh},
                {"degree", c.degree},
                {"bc", o.bc.empty() ? "default" : o.bc},
                {"curved_strategy", to_string(c.strategy)},
                {"stab", to_string(c.stiffness.stabilization)},
                {"stab_coeff", c.stiffness.stab_coeff},
                {"consistency", to_string(c.stiffness.consistency)},
                {"problem", c.problem.empty() ? "poly" + std::to_string(c.degree) : c.problem},
                {"solver", to_string(c.solver)},
                {"tol", c.tol},
                {"max_iter", c.max_iter}};
}

class Output {
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw InputError("cannot write '" + path + "'");
        }
    }
    std::ostream& get() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

void write_solution(const std::string& path, const VectorXd& x)
{
    std::ofstream f(path);
    if (!f) throw InputError("cannot write '" + path + "'");
    for (Eigen::Index i = 0; i < x.size(); ++i) f << num(x(i)) << '\n';
}

int cmd_solve(const Options& o)
{
    const RunReport r = run_solve(o.run);
    if (!o.dump_solution.empty()) write_solution(o.dump_solution, r.solution);
    Output out(o.output);
    std::ostream& os = out.get();
    if (o.out == "json") {
        json counts = json::object();
        for (const auto& [k, n] : r.counts) counts[to_string(k)] = n;
        json j{{"schema", schema}, {"command", "solve"}, {"config", config_json(o)}};
        j["result"] = json{{"dim", r.dim},
                           {"bc", r.bc},
                           {"elements", r.elements},
                           {"dofs", r.dofs},
                           {"constrained", r.constrained},
                           {"dof_counts", counts},
                           {"h", r.h},
                           {"l2_error", r.l2},
                           {"h1_error", r.h1},
                           {"max_dof_error", r.max_dof_error},
                           {"exact_expected", r.exact_expected},
                           {"patch_pass", r.patch_pass},
                           {"compatibility_residual", r.compatibility_residual ? json(*r.compatibility_residual) : json(nullptr)},
                           {"solver", {{"method", r.solver}, {"iterations", r.iterations}, {"residual", r.residual}}}};
        if (o.timings) j["timings"] = json{{"setup", r.t_setup}, {"assemble", r.t_assemble}, {"solve", r.t_solve}};
        os << j.dump(2) << '\n';
        return 0;
    }
    os << "# " << schema << " solve\n";
    os << "mesh,dim,degree,bc,curved_strategy,stab,consistency,problem,elements,dofs,h,l2_error,h1_error,max_dof_error,"
          "exact_expected,patch_pass,compatibility_residual,solver,iterations,residual";
    if (o.timings) os << ",t_setup,t_assemble,t_solve";
    os << '\n';
    os << r.mesh << ',' << r.dim << ',' << r.degree << ',' << r.bc << ',' << r.strategy << ','
       << to_string(o.run.stiffness.stabilization) << ',' << to_string(o.run.stiffness.consistency) << ',' << r.problem << ','
       << r.elements << ',' << r.dofs << ',' << num(r.h) << ',' << num(r.l2) << ',' << num(r.h1) << ',' << num(r.max_dof_error)
       << ',' << (r.exact_expected ? "true" : "false") << ',' << (r.patch_pass ? "true" : "false") << ','
       << (r.compatibility_residual ? num(*r.compatibility_residual) : "") << ',' << r.solver << ',' << r.iterations << ','
       << num(r.residual);
    if (o.timings) os << ',' << num(r.t_setup) << ',' << num(r.t_assemble) << ',' << num(r.t_solve);
    os << '\n';
    return 0;
}

int cmd_study(const Options& o)
{
    const auto levels = parse_levels(o.study);
    const StudyReport rep = run_convergence(o.run, levels, !o.no_baseline);
    Output out(o.output);
    std::ostream& os = out.get();
    auto rate = [](const StudyLevel& a, const StudyLevel& b, double StudyLevel::*e) {
        return std::log(b.*e / a.*e) / std::log(b.h / a.h);
    };
    if (o.out == "json") {
        json j{{"schema", schema}, {"command", "study"}, {"config", config_json(o)}, {"levels", levels}};
        json series = json::array();
        for (const auto& s : rep.series) {
            json lv = json::array();
            for (const auto& l : s.levels)
                lv.push_back({{"level", l.level}, {"h", l.h}, {"dofs", l.dofs}, {"l2_error", l.l2}, {"h1_error", l.h1},
                              {"max_dof_error", l.max_dof_error}});
            series.push_back({{"label", s.label},
                              {"mesh", s.mesh},
                              {"levels", lv},
                              {"exact", s.exact},
                              {"l2_slope", s.exact ? json(nullptr) : json(s.l2_slope)},
                              {"h1_slope", s.exact ? json(nullptr) : json(s.h1_slope)}});
        }
        j["series"] = series;
        os << j.dump(2) << '\n';
        return 0;
    }
    os << "# " << schema << " study\n";
    os << "series,mesh,level,h,dofs,l2_error,h1_error,max_dof_error,l2_rate,h1_rate\n";
    for (const auto& s : rep.series) {
        for (std::size_t i = 0; i < s.levels.size(); ++i) {
            const auto& l = s.levels[i];
            os << s.label << ',' << s.mesh << ':' << l.level << ',' << l.level << ',' << num(l.h) << ',' << l.dofs << ','
               << num(l.l2) << ',' << num(l.h1) << ',' << num(l.max_dof_error) << ',';
            if (i > 0 && !s.exact)
                os << num(rate(s.levels[i - 1], l, &StudyLevel::l2)) << ',' << num(rate(s.levels[i - 1], l, &StudyLevel::h1));
            else if (i > 0)
                os << "exact,exact";
            else
                os << ',';
            os << '\n';
        }
        os << s.label << ',' << s.mesh << ",fit,,,,,,";
        if (s.exact)
            os << "exact,exact\n";
        else
            os << num(s.l2_slope) << ',' << num(s.h1_slope) << '\n';
    }
    return 0;
}

int cmd_patch(const Options& o)
{
    Output out(o.output);
    std::ostream& os = out.get();
    std::vector<PatchResult> res;
    bool all = true;
    for (const auto& c : patch_cases()) {
        res.push_back(run_patch_case(c));
        all = all && res.back().pass;
    }
    if (o.out == "json") {
        json cases = json::array();
        for (const auto& r : res)
            cases.push_back({{"name", r.name}, {"degree", r.degree}, {"max_dof_error", r.max_dof_error}, {"pass", r.pass},
                             {"error", r.error}});
        os << json{{"schema", schema}, {"command", "patch"}, {"tolerance", patch_tolerance}, {"pass", all}, {"cases", cases}}.dump(2)
           << '\n';
    } else {
        os << "# " << schema << " patch\n";
        os << "case,degree,max_dof_error,pass,error\n";
        for (const auto& r : res)
            os << r.name << ',' << r.degree << ',' << num(r.max_dof_error) << ',' << (r.pass ? "true" : "false") << ",\"" << r.error
               << "\"\n";
    }
    return all ? 0 : 1;
}

template <int Dim>
void dump_projectors(std::ostream& os, const Discretization<Dim>& d, const std::vector<std::vector<Vec2>>& polygons, int only)
{
    os << "# " << schema << " projectors\n";
    os << "element,projector,row,col,value\n";
    auto emit = [&os](int e, const std::string& name, const MatrixXd& m) {
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) os << e << ',' << name << ',' << i << ',' << j << ',' << num(m(i, j)) << '\n';
    };
    for (std::size_t e = 0; e < d.spaces.size(); ++e) {
        const auto& s = d.spaces[e];
        if (only >= 0 && s.element != only) continue;
        emit(s.element, "D", s.D);
        if (s.polynomial) continue;
        emit(s.element, "pinabla", compute_pinabla(s));
        const auto g = compute_grad_l2(s, s.degree - 1);
        for (std::size_t c = 0; c < g.size(); ++c) emit(s.element, "grad" + std::to_string(c), g[c]);
        try {
            emit(s.element, "dofi", compute_dofi_projector(s));
        } catch (const ProjectorError&) {
        }
        if constexpr (Dim == 2) {
            const auto el = static_cast<std::size_t>(s.element);
            if (el < polygons.size() && !polygons[el].empty()) {
                const int lines = min_covering_lines(polygons[el]);
                emit(s.element, "serendipity", compute_serendipity_projector(s, lines, s.degree - 2));
            }
        }
    }
}

int cmd_projectors(const Options& o)
{
    const AnyMesh mesh = load_mesh(o.run.mesh, o.run.bc);
    Output out(o.output);
    if (const auto* m2 = std::get_if<Mesh2D>(&mesh)) {
        const Discretization<2> d = build_discretization(*m2, o.run.degree, o.run.strategy);
        std::vector<std::vector<Vec2>> polys(m2->elements.size());
        for (std::size_t e = 0; e < m2->elements.size(); ++e) {
            const auto& el = m2->elements[e];
            const bool straight = !el.clipped && std::all_of(el.edge_curve.begin(), el.edge_curve.end(), [](int c) { return c < 0; });
            if (straight)
                for (int v : el.v) polys[e].push_back(m2->vertices[static_cast<std::size_t>(v)]);
        }
        dump_projectors(out.get(), d, polys, o.element);
    } else {
        const Discretization<3> d = build_discretization(std::get<Mesh3D>(mesh), o.run.degree);
        dump_projectors(out.get(), d, {}, o.element);
    }
    return 0;
}

int cmd_mesh(const Options& o)
{
    const AnyMesh mesh = load_mesh(o.run.mesh, o.run.bc);
    Output out(o.output);
    std::visit([&out](const auto& m) { write_mesh(out.get(), m); }, mesh);
    return 0;
}

int cmd_validate(const Options& o)
{
    const AnyMesh mesh = load_mesh(o.run.mesh, o.run.bc);
    const MeshReport rep = std::visit([&o](const auto& m) { return validate_mesh(m, o.rho_geom); }, mesh);
    Output out(o.output);
    std::ostream& os = out.get();
    if (o.out == "json") {
        json el = json::array();
        for (const auto& d : rep.elements)
            if (!d.ok) el.push_back({{"id", d.id}, {"message", d.message}, {"min_edge_ratio", d.min_edge_ratio}});
        os << json{{"schema", schema},         {"command", "validate"},     {"mesh", o.run.mesh},
                   {"pass", rep.pass},         {"elements", rep.elements.size()},
                   {"min_edge_ratio", rep.min_edge_ratio}, {"failed_elements", el},
                   {"conformity", rep.conformity}, {"issues", rep.issues}}
                  .dump(2)
           << '\n';
    } else {
        os << rep.summary() << '\n';
        for (const auto& d : rep.elements)
            if (!d.ok) os << "  element " << d.id << ": " << d.message << '\n';
    }
    return rep.pass ? 0 : 1;
}

void add_run_options(CLI::App* c, Options& o)
{
    c->add_option("--mesh", o.run.mesh, "mesh file or gen:<name>[:n]")->capture_default_str();
    c->add_option("--degree,-k", o.run.degree, "polynomial degree k")->capture_default_str();
    c->add_option("--bc", o.bc, "dirichlet|neumann (overrides mesh tags)");
    c->add_option("--curved-strategy", o.strategy, "generators|subset|subset-mfd|ribbon")->capture_default_str();
    c->add_option("--stab", o.stab, "dofi|boundary-l2|tangential")->capture_default_str();
    c->add_option("--stab-coeff", o.run.stiffness.stab_coeff, "stabilization multiplier")->capture_default_str();
    c->add_option("--consistency", o.consistency, "pinabla|grad-l2")->capture_default_str();
    c->add_option("--problem", o.run.problem, "x|poly1..poly4|harmonic2|exp|sin (default poly<k>)");
    c->add_option("--solver", o.solver, "cg|dense")->capture_default_str();
    c->add_option("--tol", o.run.tol, "relative residual tolerance")->capture_default_str();
    c->add_option("--max-iter", o.run.max_iter, "CG iteration cap (0: 10 n)")->capture_default_str();
    c->add_option("--pin", o.run.pin_vertex, "Neumann: vertex whose value is fixed to 0");
    c->add_option("--neumann-offset", o.run.neumann_offset, "constant added to the Neumann data");
    c->add_option("--out", o.out, "csv|json")->capture_default_str();
    c->add_option("--output,-o", o.output, "report file (default stdout)");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Virtual element solver for the Poisson problem on polytopal meshes with curved boundaries"};
    app.require_subcommand(1);
    Options o;

    auto* solve = app.add_subcommand("solve", "solve one problem, or run a convergence study with --study");
    add_run_options(solve, o);
    solve->add_option("--study", o.study, "levels a..b or l0,l1,... of the generated mesh");
    solve->add_flag("--no-baseline", o.no_baseline, "skip the chord-facet series in disk studies");
    solve->add_flag("--timings", o.timings, "include wall-clock timings");
    solve->add_option("--dump-solution", o.dump_solution, "write the dof vector, one value per line");

    auto* patch = app.add_subcommand("patch", "run the patch-test suite");
    patch->add_option("--out", o.out, "csv|json")->capture_default_str();
    patch->add_option("--output,-o", o.output, "report file (default stdout)");

    auto* proj = app.add_subcommand("projectors", "dump per-element projector matrices as CSV");
    add_run_options(proj, o);
    proj->add_option("--element", o.element, "only this element");

    auto* mesh = app.add_subcommand("mesh", "write a mesh in the text format");
    mesh->add_option("--mesh", o.run.mesh, "mesh file or gen:<name>[:n]")->required();
    mesh->add_option("--bc", o.bc, "dirichlet|neumann");
    mesh->add_option("--output,-o", o.output, "mesh file (default stdout)");

    auto* validate = app.add_subcommand("validate", "check mesh regularity and conformity");
    validate->add_option("--mesh", o.run.mesh, "mesh file or gen:<name>[:n]")->required();
    validate->add_option("--rho-geom", o.rho_geom, "minimum edge/diameter ratio")->capture_default_str();
    validate->add_option("--out", o.out, "csv|json")->capture_default_str();
    validate->add_option("--output,-o", o.output, "report file (default stdout)");

    CLI11_PARSE(app, argc, argv);
    try {
        finish_config(o);
        if (*solve) return o.study.empty() ? cmd_solve(o) : cmd_study(o);
        if (*patch) return cmd_patch(o);
        if (*proj) return cmd_projectors(o);
        if (*mesh) return cmd_mesh(o);
        if (*validate) return cmd_validate(o);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
