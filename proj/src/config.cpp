#include "vxgs/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vxgs/lemmas.hpp"

namespace vxgs {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt(bool b) { return b ? "true" : "false"; }
std::string fmt(int v) { return std::to_string(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }

const json* find(const json& j, const std::string& key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

double get_number(const json& j, const std::string& path, const std::string& key, double dflt,
                  bool required = false) {
    const json* v = find(j, key);
    if (!v) {
        if (required) throw config_error(path + "." + key + ": missing required key");
        return dflt;
    }
    if (!v->is_number()) throw config_error(path + "." + key + ": expected a number");
    return v->get<double>();
}

std::string get_string(const json& j, const std::string& path, const std::string& key,
                       const std::string& dflt, bool required = false) {
    const json* v = find(j, key);
    if (!v) {
        if (required) throw config_error(path + "." + key + ": missing required key");
        return dflt;
    }
    if (!v->is_string()) throw config_error(path + "." + key + ": expected a string");
    return v->get<std::string>();
}

bool get_bool(const json& j, const std::string& path, const std::string& key, bool dflt) {
    const json* v = find(j, key);
    if (!v) return dflt;
    if (!v->is_boolean()) throw config_error(path + "." + key + ": expected a boolean");
    return v->get<bool>();
}

Expr compile_expr(const std::string& src, const std::string& key) {
    try {
        return Expr::parse(src);
    } catch (const parse_error& e) {
        throw config_error(key + ": " + e.what());
    }
}

class CsvWriter {
  public:
    explicit CsvWriter(const std::filesystem::path& path) : out_(path, std::ios::binary) {
        if (!out_) throw config_error("cannot open output file " + path.string());
    }
    void line(const std::string& s) { out_ << s << "\n"; }
    template <typename... Parts>
    void row(const Parts&... parts) {
        bool first = true;
        ((out_ << (first ? "" : ","), first = false, out_ << parts), ...);
        out_ << "\n";
    }

  private:
    std::ofstream out_;
};

void write_profile(const std::filesystem::path& path, const Field& f) {
    CsvWriter csv(path);
    const Grid& g = f.grid();
    if (g.kind() == GridKind::cartesian2d) {
        csv.line("index,coord1,coord2,value");
        for (std::size_t i = 0; i < f.size(); ++i) {
            auto p = g.position(i);
            csv.row(i, fmt(p[0]), fmt(p[1]), fmt(f[i]));
        }
    } else {
        csv.line("index,coord1,value");
        for (std::size_t i = 0; i < f.size(); ++i)
            csv.row(i, fmt(g.position(i)[0]), fmt(f[i]));
    }
}

using Summary = std::vector<std::pair<std::string, std::string>>;

void write_summary(const std::filesystem::path& path, const Summary& rows) {
    CsvWriter csv(path);
    csv.line("key,value");
    for (const auto& [k, v] : rows) csv.row(k, v);
}

struct Built {
    std::shared_ptr<const Grid> grid;
    Exponent p;
    Potential V;
};

Built build_problem(const RunConfig& cfg) {
    auto grid = Grid::build(cfg.dim, cfg.kind, cfg.r_dom, cfg.h);
    Expr pe = compile_expr(cfg.p_expr, "exponent.p_expr");
    Expr ve = compile_expr(cfg.v_expr, "potential.V_expr");
    Field pf = pe.sample(grid);
    if (cfg.clamp_floor) {
        for (std::size_t i = 0; i < pf.size(); ++i) pf[i] = std::max(*cfg.clamp_floor, pf[i]);
    }
    Field vf = ve.sample(grid);
    return Built{grid, Exponent::make(std::move(pf), cfg.p_inf, cfg.tail_tol),
                 Potential::make(std::move(vf), cfg.v_inf, cfg.tail_tol)};
}

Summary base_summary(const RunConfig& cfg) {
    return Summary{
        {"task", std::string(to_string(cfg.task))},
        {"dim", fmt(cfg.dim)},
        {"kind", std::string(to_string(cfg.kind))},
        {"R_dom", fmt(cfg.r_dom)},
        {"h", fmt(cfg.h)},
        {"p_inf", fmt(cfg.p_inf)},
        {"V_inf", fmt(cfg.v_inf)},
        {"seed", fmt(cfg.solver.rng_seed)},
    };
}

void append_state(Summary& s, const GroundState& gs, const std::string& prefix = "") {
    s.emplace_back(prefix + "lambda", fmt(gs.lambda));
    s.emplace_back(prefix + "residual", fmt(gs.residual));
    s.emplace_back(prefix + "iterations", fmt(gs.iterations));
    s.emplace_back(prefix + "constraint_defect", fmt(gs.constraint_defect));
    s.emplace_back(prefix + "converged", fmt(gs.converged));
}

void write_report(const std::filesystem::path& path, const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::binary);
    for (const auto& l : lines) out << l << "\n";
}

void echo(const RunConfig& cfg, const std::vector<std::string>& lines) {
    if (cfg.quiet) return;
    for (const auto& l : lines) std::printf("%s\n", l.c_str());
}

int run_solve(const RunConfig& cfg, const std::filesystem::path& dir) {
    GroundState gs = [&] {
        if (cfg.task == Task::solve) {
            Built b = build_problem(cfg);
            return solve_ground_state(ProblemSpec::make(b.grid, b.p, b.V), cfg.solver);
        }
        // the limit problem only needs the grid and the limit constants
        auto grid = Grid::build(cfg.dim, cfg.kind, cfg.r_dom, cfg.h);
        return solve_limit_problem(cfg.p_inf, cfg.v_inf, grid, cfg.solver);
    }();
    const char* profile = cfg.task == Task::solve ? "ground_state.csv" : "limit_state.csv";
    write_profile(dir / profile, gs.w);
    Summary s = base_summary(cfg);
    append_state(s, gs);
    write_summary(dir / "summary.csv", s);
    std::vector<std::string> rep{
        std::string("task: ") + std::string(to_string(cfg.task)),
        "lambda = " + fmt(gs.lambda),
        "residual = " + fmt(gs.residual) + ", iterations = " + fmt(gs.iterations),
        "constraint defect = " + fmt(gs.constraint_defect),
        std::string("converged: ") + fmt(gs.converged),
    };
    write_report(dir / "report.txt", rep);
    echo(cfg, rep);
    return gs.converged ? 0 : 3;
}

int run_check_criterion(const RunConfig& cfg, const std::filesystem::path& dir) {
    Built b = build_problem(cfg);
    auto spec = ProblemSpec::make(b.grid, b.p, b.V);
    CriterionReport rep = check_criterion(spec, cfg.solver);
    Summary s = base_summary(cfg);
    s.emplace_back("lambda1_upper", fmt(rep.lambda1_upper));
    s.emplace_back("lambda1_inf", fmt(rep.lambda1_inf));
    s.emplace_back("threshold", fmt(rep.threshold));
    s.emplace_back("strict", fmt(rep.strict));
    s.emplace_back("margin", fmt(rep.margin));
    s.emplace_back("lambda_solver", fmt(rep.lambda_solver));
    s.emplace_back("authoritative", fmt(rep.authoritative));
    write_summary(dir / "summary.csv", s);
    std::vector<std::string> lines{
        "criterion check: lambda1_upper = " + fmt(rep.lambda1_upper) +
            " vs threshold = " + fmt(rep.threshold),
        "limit level lambda1_inf = " + fmt(rep.lambda1_inf),
        std::string("strict: ") + fmt(rep.strict) + ", margin = " + fmt(rep.margin),
        std::string("authoritative: ") + fmt(rep.authoritative),
        "trial battery:",
    };
    for (const auto& [label, value] : rep.trials) lines.push_back("  " + label + " = " + fmt(value));
    write_report(dir / "report.txt", lines);
    echo(cfg, lines);
    return rep.authoritative ? 0 : 3;
}

int run_trial_bound(const RunConfig& cfg, const std::filesystem::path& dir) {
    Built b = build_problem(cfg);
    auto spec = ProblemSpec::make(b.grid, b.p, b.V);
    TrialSpec trial{compile_expr(cfg.psi_expr, "trial.psi_expr"), cfg.trial_r, cfg.trial_a};
    double ub = trial_upper_bound(trial, spec);
    double lb = rho_lower_bound(trial, cfg.p_inf, *b.grid);
    Summary s = base_summary(cfg);
    s.emplace_back("psi", cfg.psi_expr);
    s.emplace_back("trial_R", fmt(cfg.trial_r));
    s.emplace_back("trial_a", fmt(cfg.trial_a));
    s.emplace_back("trial_upper_bound", fmt(ub));
    s.emplace_back("rho_lower_bound", fmt(lb));
    write_summary(dir / "summary.csv", s);
    std::vector<std::string> rep{
        "trial upper bound = " + fmt(ub),
        "modular tail lower bound = " + fmt(lb),
    };
    write_report(dir / "report.txt", rep);
    echo(cfg, rep);
    return 0;
}

int run_find_min_a(const RunConfig& cfg, const std::filesystem::path& dir) {
    Built b = build_problem(cfg);
    Expr psi = compile_expr(cfg.psi_expr, "trial.psi_expr");
    MinAResult res = find_min_a(psi, cfg.trial_r, cfg.p_inf, b.V, b.grid, cfg.solver, cfg.scan);
    {
        CsvWriter csv(dir / "probes.csv");
        csv.line("a,strict");
        for (const auto& [a, strict] : res.probes) csv.row(fmt(a), fmt(strict));
    }
    Summary s = base_summary(cfg);
    s.emplace_back("found", fmt(res.found));
    s.emplace_back("min_a", res.found ? fmt(res.a) : "nan");
    if (res.found) {
        s.emplace_back("lambda1_upper", fmt(res.report.lambda1_upper));
        s.emplace_back("threshold", fmt(res.report.threshold));
        s.emplace_back("margin", fmt(res.report.margin));
        s.emplace_back("strict", fmt(res.report.strict));
    }
    write_summary(dir / "summary.csv", s);
    std::vector<std::string> rep;
    if (res.found) {
        rep.push_back("smallest strict depression strength a = " + fmt(res.a));
        rep.push_back("lambda1_upper = " + fmt(res.report.lambda1_upper) +
                      " < threshold = " + fmt(res.report.threshold));
    } else {
        rep.push_back("no strength a <= " + fmt(cfg.scan.a_max) +
                      " achieves a strict criterion on this grid");
    }
    write_report(dir / "report.txt", rep);
    echo(cfg, rep);
    return res.found ? 0 : 4;
}

int run_translate(const RunConfig& cfg, const std::filesystem::path& dir) {
    Built b = build_problem(cfg);
    // the probe is a smooth bump compactly supported in a ball of radius R_dom/6
    double supp = cfg.r_dom / 6.0;
    Field u(b.grid);
    for (std::size_t i = 0; i < b.grid->size(); ++i) {
        double t = b.grid->radius(i) / supp;
        double q = 1.0 - t * t;
        u[i] = (q > 1e-12) ? std::exp(-1.0 / q) : 0.0;
    }
    auto table = translation_experiment(u, b.p, b.V, cfg.shifts);
    {
        CsvWriter csv(dir / "translation.csv");
        csv.line("shift_norm,rho,luxemburg,energy");
        for (const auto& row : table.rows)
            csv.row(fmt(row.shift_norm), fmt(row.rho_val), fmt(row.lux_val), fmt(row.energy_val));
    }
    Summary s = base_summary(cfg);
    s.emplace_back("rho_limit", fmt(table.rho_limit));
    s.emplace_back("lux_limit", fmt(table.lux_limit));
    s.emplace_back("energy_limit", fmt(table.energy_limit));
    write_summary(dir / "summary.csv", s);
    std::vector<std::string> rep{"translation rows: " + std::to_string(table.rows.size()),
                                 "limits: rho = " + fmt(table.rho_limit) +
                                     ", norm = " + fmt(table.lux_limit) +
                                     ", energy = " + fmt(table.energy_limit)};
    for (const auto& row : table.rows)
        rep.push_back("  |y| = " + fmt(row.shift_norm) + ": rho = " + fmt(row.rho_val) +
                      ", norm = " + fmt(row.lux_val) + ", energy = " + fmt(row.energy_val));
    write_report(dir / "report.txt", rep);
    echo(cfg, rep);
    return 0;
}

int run_symmetry(const RunConfig& cfg, const std::filesystem::path& dir) {
    Built b = build_problem(cfg);
    GroundState gs = solve_ground_state(ProblemSpec::make(b.grid, b.p, b.V), cfg.solver);
    AxisReport ar = axial_symmetry_defect(gs.w, cfg.axes);
    write_profile(dir / "ground_state.csv", gs.w);
    Summary s = base_summary(cfg);
    append_state(s, gs);
    s.emplace_back("axis_x", fmt(ar.axis[0]));
    s.emplace_back("axis_y", fmt(ar.axis[1]));
    s.emplace_back("axis_angle", fmt(ar.angle));
    s.emplace_back("defect", fmt(ar.defect));
    write_summary(dir / "summary.csv", s);
    std::vector<std::string> rep{
        "best axis angle = " + fmt(ar.angle) + " rad",
        "axial symmetry defect = " + fmt(ar.defect),
        "lambda = " + fmt(gs.lambda) + ", converged: " + fmt(gs.converged),
    };
    write_report(dir / "report.txt", rep);
    echo(cfg, rep);
    return gs.converged ? 0 : 3;
}

int run_verify_lemmas(const RunConfig& cfg, const std::filesystem::path& dir) {
    auto grid = Grid::build(cfg.dim, cfg.kind, cfg.r_dom, cfg.h);
    auto checks = verify_lemmas(grid, cfg.p_inf, cfg.lemma_fields, cfg.solver.rng_seed);
    bool all = true;
    {
        CsvWriter csv(dir / "lemmas.csv");
        csv.line("check,status,worst");
        for (const auto& c : checks) {
            csv.row(c.name, c.pass ? "pass" : "fail", fmt(c.worst));
            all = all && c.pass;
        }
    }
    Summary s = base_summary(cfg);
    s.emplace_back("checks", fmt(static_cast<int>(checks.size())));
    s.emplace_back("all_pass", fmt(all));
    write_summary(dir / "summary.csv", s);
    std::vector<std::string> rep;
    for (const auto& c : checks)
        rep.push_back(std::string(c.pass ? "pass  " : "FAIL  ") + c.name +
                      "  (worst " + fmt(c.worst) + ")");
    write_report(dir / "report.txt", rep);
    echo(cfg, rep);
    return all ? 0 : 4;
}

} // namespace

Task task_from_string(std::string_view s) {
    if (s == "solve") return Task::solve;
    if (s == "solve-limit") return Task::solve_limit;
    if (s == "check-criterion") return Task::check_criterion;
    if (s == "trial-bound") return Task::trial_bound;
    if (s == "find-min-a") return Task::find_min_a;
    if (s == "translate-experiment") return Task::translate_experiment;
    if (s == "symmetry-defect") return Task::symmetry_defect;
    if (s == "verify-lemmas") return Task::verify_lemmas;
    throw config_error("task: unknown task '" + std::string(s) + "'");
}

std::string_view to_string(Task t) {
    switch (t) {
        case Task::solve: return "solve";
        case Task::solve_limit: return "solve-limit";
        case Task::check_criterion: return "check-criterion";
        case Task::trial_bound: return "trial-bound";
        case Task::find_min_a: return "find-min-a";
        case Task::translate_experiment: return "translate-experiment";
        case Task::symmetry_defect: return "symmetry-defect";
        case Task::verify_lemmas: return "verify-lemmas";
    }
    return "?";
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot read config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw config_error("config root must be an object");

    RunConfig cfg;
    cfg.task = task_from_string(get_string(j, "", "task", "", true));

    if (const json* g = find(j, "grid")) {
        if (!g->is_object()) throw config_error("grid: expected an object");
        cfg.dim = static_cast<int>(get_number(*g, "grid", "dim", 1));
        cfg.kind = grid_kind_from_string(get_string(*g, "grid", "kind", "line1d"));
        cfg.r_dom = get_number(*g, "grid", "R_dom", 20.0);
        cfg.h = get_number(*g, "grid", "h", 0.01);
    }
    if (const json* e = find(j, "exponent")) {
        if (!e->is_object()) throw config_error("exponent: expected an object");
        cfg.p_expr = get_string(*e, "exponent", "p_expr", cfg.p_expr);
        cfg.p_inf = get_number(*e, "exponent", "p_inf", cfg.p_inf);
        if (find(*e, "clamp_floor"))
            cfg.clamp_floor = get_number(*e, "exponent", "clamp_floor", 2.1);
        cfg.tail_tol = get_number(*e, "exponent", "tail_tol", cfg.tail_tol);
    }
    if (const json* v = find(j, "potential")) {
        if (!v->is_object()) throw config_error("potential: expected an object");
        cfg.v_expr = get_string(*v, "potential", "V_expr", cfg.v_expr);
        cfg.v_inf = get_number(*v, "potential", "V_inf", cfg.v_inf);
    }
    if (const json* s = find(j, "solver")) {
        if (!s->is_object()) throw config_error("solver: expected an object");
        cfg.solver.max_iter = static_cast<int>(get_number(*s, "solver", "max_iter", 2000));
        cfg.solver.tol_grad = get_number(*s, "solver", "tol_grad", 1e-5);
        cfg.solver.tol_residual = get_number(*s, "solver", "tol_residual", 1e-6);
        cfg.solver.step_init = get_number(*s, "solver", "step_init", 0.5);
        cfg.solver.armijo_shrink = get_number(*s, "solver", "armijo_shrink", 0.5);
        cfg.solver.armijo_slope = get_number(*s, "solver", "armijo_slope", 1e-4);
        std::string init = get_string(*s, "solver", "init_profile", "gaussian");
        if (init == "gaussian")
            cfg.solver.init_profile = InitProfile::gaussian;
        else if (init == "soliton-guess")
            cfg.solver.init_profile = InitProfile::soliton_guess;
        else
            throw config_error("solver.init_profile: expected 'gaussian' or 'soliton-guess'");
        cfg.solver.rng_seed =
            static_cast<std::uint64_t>(get_number(*s, "solver", "rng_seed", 0.0));
    }
    if (const json* t = find(j, "trial")) {
        if (!t->is_object()) throw config_error("trial: expected an object");
        cfg.psi_expr = get_string(*t, "trial", "psi_expr", cfg.psi_expr);
        cfg.trial_r = get_number(*t, "trial", "R", cfg.trial_r);
        cfg.trial_a = get_number(*t, "trial", "a", cfg.trial_a);
    }
    if (const json* sc = find(j, "scan")) {
        if (!sc->is_object()) throw config_error("scan: expected an object");
        cfg.scan.a0 = get_number(*sc, "scan", "a0", cfg.scan.a0);
        cfg.scan.a_max = get_number(*sc, "scan", "a_max", cfg.scan.a_max);
        cfg.scan.p_floor = get_number(*sc, "scan", "p_floor", cfg.scan.p_floor);
    }
    if (const json* tr = find(j, "translate")) {
        if (!tr->is_object()) throw config_error("translate: expected an object");
        const json* sh = find(*tr, "shifts");
        if (!sh || !sh->is_array()) throw config_error("translate.shifts: expected an array");
        for (const auto& item : *sh) {
            if (item.is_number()) {
                cfg.shifts.push_back({item.get<double>()});
            } else if (item.is_array()) {
                std::vector<double> y;
                for (const auto& c : item) {
                    if (!c.is_number())
                        throw config_error("translate.shifts: expected numeric offsets");
                    y.push_back(c.get<double>());
                }
                cfg.shifts.push_back(std::move(y));
            } else {
                throw config_error("translate.shifts: expected numbers or arrays of numbers");
            }
        }
    }
    if (const json* ax = find(j, "axes")) {
        if (!ax->is_array()) throw config_error("axes: expected an array of [x, y] pairs");
        for (const auto& item : *ax) {
            if (!item.is_array() || item.size() != 2 || !item[0].is_number() ||
                !item[1].is_number())
                throw config_error("axes: expected an array of [x, y] pairs");
            cfg.axes.push_back({item[0].get<double>(), item[1].get<double>()});
        }
    }
    if (const json* lm = find(j, "lemmas")) {
        if (!lm->is_object()) throw config_error("lemmas: expected an object");
        cfg.lemma_fields = static_cast<int>(get_number(*lm, "lemmas", "fields", 200));
    }
    cfg.quiet = get_bool(j, "", "quiet", false);
    if (const json* o = find(j, "output")) {
        if (!o->is_object()) throw config_error("output: expected an object");
        cfg.out_dir = get_string(*o, "output", "dir", cfg.out_dir);
    }

    // cross-field validation; expressions must compile
    compile_expr(cfg.p_expr, "exponent.p_expr");
    compile_expr(cfg.v_expr, "potential.V_expr");
    if (cfg.task == Task::trial_bound || cfg.task == Task::find_min_a)
        compile_expr(cfg.psi_expr, "trial.psi_expr");
    if (cfg.task == Task::translate_experiment) {
        if (cfg.shifts.empty())
            throw config_error("translate.shifts: required for translate-experiment");
        if (cfg.kind == GridKind::radial_nd)
            throw config_error("grid.kind: translate-experiment needs line1d or cartesian2d");
    }
    if (cfg.task == Task::symmetry_defect && cfg.kind != GridKind::cartesian2d)
        throw config_error("grid.kind: symmetry-defect needs a cartesian2d grid");
    if (cfg.task == Task::verify_lemmas && cfg.kind == GridKind::radial_nd)
        throw config_error("grid.kind: verify-lemmas needs a translatable grid");
    try {
        cfg.solver.validate();
    } catch (const invalid_parameter& e) {
        throw config_error(std::string("solver: ") + e.what());
    }
    return cfg;
}

int run(const RunConfig& cfg) {
    try {
        std::filesystem::path dir(cfg.out_dir);
        std::filesystem::create_directories(dir);
        switch (cfg.task) {
            case Task::solve:
            case Task::solve_limit: return run_solve(cfg, dir);
            case Task::check_criterion: return run_check_criterion(cfg, dir);
            case Task::trial_bound: return run_trial_bound(cfg, dir);
            case Task::find_min_a: return run_find_min_a(cfg, dir);
            case Task::translate_experiment: return run_translate(cfg, dir);
            case Task::symmetry_defect: return run_symmetry(cfg, dir);
            case Task::verify_lemmas: return run_verify_lemmas(cfg, dir);
        }
        return 2;
    } catch (const numeric_failure& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 4;
    } catch (const error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    }
}

} // namespace vxgs
