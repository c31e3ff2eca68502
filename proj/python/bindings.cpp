#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vxgs/analysis.hpp"
#include "vxgs/lemmas.hpp"

namespace py = pybind11;
using namespace vxgs;

namespace {

Field field_from_array(std::shared_ptr<const Grid> g, const py::array_t<double>& a) {
    auto buf = a.request();
    if (buf.ndim != 1 || static_cast<std::size_t>(buf.shape[0]) != g->size())
        throw invalid_parameter("array length must equal the grid node count");
    const double* ptr = static_cast<const double*>(buf.ptr);
    return Field(std::move(g), std::vector<double>(ptr, ptr + buf.shape[0]));
}

py::array_t<double> to_array(const std::vector<double>& v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "variable-exponent ground-state toolkit";

    py::register_exception<error>(m, "Error");

    py::enum_<GridKind>(m, "GridKind")
        .value("line1d", GridKind::line1d)
        .value("radialNd", GridKind::radial_nd)
        .value("cartesian2d", GridKind::cartesian2d);

    py::class_<Grid, std::shared_ptr<Grid>>(m, "Grid")
        .def_property_readonly("dim", &Grid::dim)
        .def_property_readonly("kind", &Grid::kind)
        .def_property_readonly("truncation_radius", &Grid::truncation_radius)
        .def_property_readonly("spacing", &Grid::spacing)
        .def("__len__", &Grid::size)
        .def_property_readonly("weights", [](const Grid& g) { return to_array(g.weights()); })
        .def("radius", &Grid::radius)
        .def("position", &Grid::position)
        .def_property_readonly("measure", &Grid::measure);

    m.def("build_grid",
          [](int dim, const std::string& kind, double r_dom, double h) {
              return std::const_pointer_cast<Grid>(
                  Grid::build(dim, grid_kind_from_string(kind), r_dom, h));
          },
          py::arg("dim"), py::arg("kind"), py::arg("r_dom"), py::arg("h"));

    py::class_<Field>(m, "Field")
        .def(py::init(&field_from_array), py::arg("grid"), py::arg("values"))
        .def_property_readonly("grid", [](const Field& f) { return std::const_pointer_cast<Grid>(f.grid_ptr()); })
        .def_property_readonly("values", [](const Field& f) { return to_array(f.values()); })
        .def("__len__", &Field::size)
        .def("is_zero", &Field::is_zero);

    m.def("laplacian", &laplacian);
    m.def("gradient_sq", &gradient_sq);
    m.def("translate", &translate, py::arg("u"), py::arg("y"));
    m.def("integrate", &integrate);
    m.def("inner", &inner);
    m.def("dirichlet_form", &dirichlet_form);

    py::class_<Expr>(m, "Expr")
        .def_static("parse", [](const std::string& s) { return Expr::parse(s); })
        .def("__str__", &Expr::str)
        .def("eval",
             [](const Expr& e, py::kwargs kw) {
                 EvalContext ctx;
                 for (auto item : kw) {
                     auto key = item.first.cast<std::string>();
                     double val = item.second.cast<double>();
                     if (key == "x")
                         ctx.x = val;
                     else if (key == "y")
                         ctx.y = val;
                     else if (key == "z")
                         ctx.z = val;
                     else if (key == "r")
                         ctx.r = val;
                     else
                         throw invalid_parameter("unknown variable '" + key + "'");
                 }
                 return e.eval(ctx);
             })
        .def("sample", &Expr::sample);

    py::class_<Exponent>(m, "Exponent")
        .def_static("make", &Exponent::make, py::arg("samples"), py::arg("p_inf"),
                    py::arg("tail_tol") = 0.05)
        .def_readonly("samples", &Exponent::samples)
        .def_readonly("p_minus", &Exponent::p_minus)
        .def_readonly("p_plus", &Exponent::p_plus)
        .def_readonly("p_inf", &Exponent::p_inf);

    py::class_<Potential>(m, "Potential")
        .def_static("make", &Potential::make, py::arg("samples"), py::arg("v_inf"),
                    py::arg("tail_tol") = 0.05)
        .def_readonly("samples", &Potential::samples)
        .def_readonly("v_inf", &Potential::v_inf);

    m.def("two_star", &two_star);
    m.def("rho", &rho);
    m.def("weighted_modular", &weighted_modular);
    m.def("luxemburg_norm", &luxemburg_norm);
    m.def("sigma", &sigma);
    m.def("rho_inf", &rho_inf);
    m.def("norm_inf", &norm_inf);

    py::class_<ProblemSpec>(m, "ProblemSpec")
        .def_static("make", &ProblemSpec::make, py::arg("grid"), py::arg("p"), py::arg("V"))
        .def_property_readonly("grid", [](const ProblemSpec& s2) { return std::const_pointer_cast<Grid>(s2.grid); })
        .def_readonly("p", &ProblemSpec::p)
        .def_readonly("V", &ProblemSpec::V);

    m.def("energy", &energy);
    m.def("energy_limit", &energy_limit);
    m.def("energy_gradient", &energy_gradient);
    m.def("constraint_gradient", &constraint_gradient);
    m.def("project_to_constraint", &project_to_constraint);
    m.def("euler_lagrange_residual", &euler_lagrange_residual);

    py::enum_<InitProfile>(m, "InitProfile")
        .value("gaussian", InitProfile::gaussian)
        .value("soliton_guess", InitProfile::soliton_guess)
        .value("user", InitProfile::user);

    py::class_<SolveOptions>(m, "SolveOptions")
        .def(py::init<>())
        .def_readwrite("max_iter", &SolveOptions::max_iter)
        .def_readwrite("tol_grad", &SolveOptions::tol_grad)
        .def_readwrite("tol_residual", &SolveOptions::tol_residual)
        .def_readwrite("step_init", &SolveOptions::step_init)
        .def_readwrite("armijo_shrink", &SolveOptions::armijo_shrink)
        .def_readwrite("armijo_slope", &SolveOptions::armijo_slope)
        .def_readwrite("init_profile", &SolveOptions::init_profile)
        .def_readwrite("init_field", &SolveOptions::init_field)
        .def_readwrite("rng_seed", &SolveOptions::rng_seed);

    py::class_<GroundState>(m, "GroundState")
        .def_readonly("w", &GroundState::w)
        .def_readonly("lambda_", &GroundState::lambda)
        .def_readonly("iterations", &GroundState::iterations)
        .def_readonly("residual", &GroundState::residual)
        .def_readonly("constraint_defect", &GroundState::constraint_defect)
        .def_readonly("converged", &GroundState::converged)
        .def_readonly("energy_history", &GroundState::energy_history)
        .def_readonly("defect_history", &GroundState::defect_history);

    m.def("solve_ground_state", &solve_ground_state, py::arg("spec"),
          py::arg("opts") = SolveOptions{});
    m.def("solve_limit_problem", &solve_limit_problem, py::arg("p_inf"), py::arg("v_inf"),
          py::arg("grid"), py::arg("opts") = SolveOptions{});
    m.def("shooting_oracle", &shooting_oracle, py::arg("p_inf"), py::arg("v_inf"), py::arg("dim"));

    py::class_<TrialSpec>(m, "TrialSpec")
        .def(py::init([](const std::string& psi, double R, double a) {
                 return TrialSpec{Expr::parse(psi), R, a};
             }),
             py::arg("psi"), py::arg("R"), py::arg("a") = 0.0)
        .def_readonly("R", &TrialSpec::R)
        .def_readonly("a", &TrialSpec::a);

    py::class_<CriterionReport>(m, "CriterionReport")
        .def_readonly("lambda1_upper", &CriterionReport::lambda1_upper)
        .def_readonly("lambda_solver", &CriterionReport::lambda_solver)
        .def_readonly("lambda1_inf", &CriterionReport::lambda1_inf)
        .def_readonly("threshold", &CriterionReport::threshold)
        .def_readonly("margin", &CriterionReport::margin)
        .def_readonly("strict", &CriterionReport::strict)
        .def_readonly("authoritative", &CriterionReport::authoritative)
        .def_readonly("trials", &CriterionReport::trials);

    m.def("threshold", &threshold, py::arg("p_minus"), py::arg("p_inf"), py::arg("lambda1_inf"));
    m.def("check_criterion", &check_criterion, py::arg("spec"), py::arg("opts") = SolveOptions{});
    m.def("trial_upper_bound", &trial_upper_bound);
    m.def("rho_lower_bound",
          [](const TrialSpec& t, double p_inf, const std::shared_ptr<const Grid>& g) {
              return rho_lower_bound(t, p_inf, *g);
          });

    py::class_<TranslationRow>(m, "TranslationRow")
        .def_readonly("shift", &TranslationRow::shift)
        .def_readonly("shift_norm", &TranslationRow::shift_norm)
        .def_readonly("rho", &TranslationRow::rho_val)
        .def_readonly("lux", &TranslationRow::lux_val)
        .def_readonly("energy", &TranslationRow::energy_val);

    py::class_<TranslationTable>(m, "TranslationTable")
        .def_readonly("rows", &TranslationTable::rows)
        .def_readonly("rho_limit", &TranslationTable::rho_limit)
        .def_readonly("lux_limit", &TranslationTable::lux_limit)
        .def_readonly("energy_limit", &TranslationTable::energy_limit);

    m.def("translation_experiment", &translation_experiment, py::arg("u"), py::arg("p"),
          py::arg("V"), py::arg("shifts"));

    py::class_<AxisReport>(m, "AxisReport")
        .def_readonly("angle", &AxisReport::angle)
        .def_readonly("axis", &AxisReport::axis)
        .def_readonly("defect", &AxisReport::defect);

    m.def("axial_defect", &axial_defect);
    m.def("axial_symmetry_defect", &axial_symmetry_defect, py::arg("w"),
          py::arg("candidate_axes") = std::vector<std::array<double, 2>>{});

    py::class_<MinAScanOptions>(m, "MinAScanOptions")
        .def(py::init<>())
        .def_readwrite("a0", &MinAScanOptions::a0)
        .def_readwrite("a_max", &MinAScanOptions::a_max)
        .def_readwrite("p_floor", &MinAScanOptions::p_floor);

    py::class_<MinAResult>(m, "MinAResult")
        .def_readonly("found", &MinAResult::found)
        .def_readonly("a", &MinAResult::a)
        .def_readonly("report", &MinAResult::report)
        .def_readonly("probes", &MinAResult::probes);

    m.def("find_min_a",
          [](const std::string& psi, double R, double p_inf, const Potential& V,
             const std::shared_ptr<const Grid>& grid, const SolveOptions& opts,
             const MinAScanOptions& scan) {
              return find_min_a(Expr::parse(psi), R, p_inf, V, grid, opts, scan);
          },
          py::arg("psi"), py::arg("R"), py::arg("p_inf"), py::arg("V"), py::arg("grid"),
          py::arg("opts") = SolveOptions{}, py::arg("scan") = MinAScanOptions{});

    m.def("depressed_exponent",
          [](const std::string& psi, double a, double p_inf, double p_floor,
             const std::shared_ptr<const Grid>& grid) {
              return depressed_exponent(Expr::parse(psi), a, p_inf, p_floor, grid);
          },
          py::arg("psi"), py::arg("a"), py::arg("p_inf"), py::arg("p_floor"), py::arg("grid"));
}
