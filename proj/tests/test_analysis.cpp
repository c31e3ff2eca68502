#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "vxgs/analysis.hpp"

using namespace vxgs;

namespace {

Field const_field(const std::shared_ptr<const Grid>& g, double v) {
    Field f(g);
    for (std::size_t i = 0; i < g->size(); ++i) f[i] = v;
    return f;
}

ProblemSpec const_spec(const std::shared_ptr<const Grid>& g, double p_inf, double v_inf) {
    return ProblemSpec::make(g, Exponent::make(const_field(g, p_inf), p_inf),
                             Potential::make(const_field(g, v_inf), v_inf));
}

ProblemSpec well_spec(const std::shared_ptr<const Grid>& g, double p_inf, double depth) {
    Field vf(g);
    for (std::size_t i = 0; i < g->size(); ++i)
        vf[i] = 1.0 - depth * std::exp(-g->radius(i) * g->radius(i));
    return ProblemSpec::make(g, Exponent::make(const_field(g, p_inf), p_inf),
                             Potential::make(vf, 1.0));
}

} // namespace

TEST_CASE("threshold formula") {
    CHECK(threshold(3.0, 3.0, 2.5) == 2.5); // factor one when the extremes agree
    CHECK(std::abs(threshold(3.0, 4.0, 2.0) - std::sqrt(3.0)) < 1e-12);
    CHECK(std::abs(threshold(3.0, 6.0, 1.0) - std::pow(0.5, 1.0 / 3.0)) < 1e-12);

    CHECK_THROWS_AS(threshold(2.0, 4.0, 1.0), invalid_parameter);
    CHECK_THROWS_AS(threshold(4.0, 3.0, 1.0), invalid_parameter);
    CHECK_THROWS_AS(threshold(3.0, 4.0, 0.0), invalid_parameter);

    // monotone increasing in p_minus at fixed p_inf and level
    oracles::Rng rng(1);
    for (int k = 0; k < 100; ++k) {
        double p_inf = rng.range(2.6, 8.0);
        double a = rng.range(2.01, p_inf);
        double b = rng.range(2.01, p_inf);
        if (a > b) std::swap(a, b);
        double lam = rng.range(0.1, 10.0);
        CHECK(threshold(a, p_inf, lam) <= threshold(b, p_inf, lam) * (1.0 + 1e-12));
    }
}

TEST_CASE("trial bound: closed-form energy and upper-bound consistency") {
    auto g = Grid::build(1, GridKind::line1d, 16.0, 0.01);
    auto spec = const_spec(g, 4.0, 1.0);
    TrialSpec trial{Expr::parse("r"), 1.0, 0.0};

    // the energy of exp(-|x|) with V = 1 integrates to 2
    Field e(g);
    for (std::size_t i = 0; i < g->size(); ++i) e[i] = std::exp(-g->radius(i));
    CHECK(energy(e, spec) == doctest::Approx(2.0).epsilon(1e-3));

    double bound = trial_upper_bound(trial, spec);
    SolveOptions opts;
    GroundState gs = solve_ground_state(spec, opts);
    REQUIRE(gs.converged);
    CHECK(bound >= gs.lambda - 1e-6);

    // gaussian decay profile is also admissible
    TrialSpec g2{Expr::parse("r^2/2"), 1.0, 0.0};
    CHECK(trial_upper_bound(g2, spec) >= gs.lambda - 1e-6);

    // a decreasing profile violates the trial contract
    TrialSpec bad{Expr::parse("1/(1+r)"), 1.0, 0.0};
    CHECK_THROWS_AS(trial_upper_bound(bad, spec), invalid_parameter);
}

TEST_CASE("trial bound matches a refined-grid oracle for a depressed exponent") {
    // family p = min(p_inf, p_inf - a/psi) with the smooth profile psi = r^2/2
    auto bound_on = [&](double h) {
        auto g = Grid::build(1, GridKind::line1d, 16.0, h);
        auto p = depressed_exponent(Expr::parse("r^2/2"), 2.0, 4.0, 2.1, g);
        auto spec = ProblemSpec::make(g, p, Potential::make(const_field(g, 1.0), 1.0));
        return trial_upper_bound(TrialSpec{Expr::parse("r^2/2"), 1.0, 2.0}, spec);
    };
    double coarse = bound_on(0.02);
    double fine = bound_on(0.0025);
    CHECK(std::abs(coarse - fine) / fine < 1e-5);
}

TEST_CASE("modular tail lower bound") {
    auto g = Grid::build(1, GridKind::line1d, 15.0, 0.01);
    TrialSpec t0{Expr::parse("r"), 1.0, 0.0};

    // plain tail integral at a = 0: integral of e^{-4|x|} over |x| > 1
    double plain = rho_lower_bound(t0, 4.0, *g);
    double exact = std::exp(-4.0) / 2.0;
    CHECK(std::abs(plain - exact) < 1e-4);

    // doubling a multiplies the bound by e^a
    TrialSpec t1{Expr::parse("r"), 1.0, 1.3};
    TrialSpec t2{Expr::parse("r"), 1.0, 2.6};
    double b1 = rho_lower_bound(t1, 4.0, *g);
    double b2 = rho_lower_bound(t2, 4.0, *g);
    CHECK(b2 / b1 == doctest::Approx(std::exp(1.3)).epsilon(1e-12));
    CHECK(b1 == doctest::Approx(std::exp(1.3) * exact).epsilon(2e-2)); // same closed form scaled
    CHECK(std::abs(b1 - std::exp(1.3) * exact) < 1e-3);
}

TEST_CASE("criterion: autonomous data sit exactly at the threshold") {
    auto g = Grid::build(1, GridKind::line1d, 12.0, 0.05);
    auto spec = const_spec(g, 4.0, 1.0);
    CriterionReport rep = check_criterion(spec, SolveOptions{});
    CHECK(rep.authoritative);
    CHECK_FALSE(rep.strict);
    CHECK(std::abs(rep.margin) <= 0.02 * rep.threshold);
    CHECK(rep.lambda_solver == rep.lambda1_inf); // identical bitwise solves
}

TEST_CASE("criterion: a potential well lowers the level strictly") {
    auto g = Grid::build(1, GridKind::line1d, 12.0, 0.05);
    CriterionReport rep = check_criterion(well_spec(g, 4.0, 0.5), SolveOptions{});
    CHECK(rep.strict);
    CHECK(rep.margin > 0.0);
    CHECK(rep.lambda1_upper < rep.lambda1_inf);
}

TEST_CASE("criterion: exponent depressed on a ball turns strict for large a") {
    auto g = Grid::build(1, GridKind::line1d, 12.0, 0.05);
    auto V = Potential::make(const_field(g, 1.0), 1.0);
    auto spec = ProblemSpec::make(g, depressed_exponent(Expr::parse("r"), 8.0, 4.0, 2.1, g), V);
    CriterionReport rep = check_criterion(spec, SolveOptions{});
    CHECK(rep.strict);
}

TEST_CASE("find_min_a: deep well is already strict at the scan floor") {
    auto g = Grid::build(1, GridKind::line1d, 12.0, 0.05);
    Field vf(g);
    for (std::size_t i = 0; i < g->size(); ++i)
        vf[i] = 1.0 - 0.75 * std::exp(-g->radius(i) * g->radius(i));
    auto V = Potential::make(vf, 1.0);
    MinAScanOptions scan;
    MinAResult res = find_min_a(Expr::parse("r"), 1.0, 4.0, V, g, SolveOptions{}, scan);
    REQUIRE(res.found);
    CHECK(res.a == scan.a0);
    CHECK(res.report.strict);
}

TEST_CASE("find_min_a: reference family brackets the onset of strictness") {
    auto g = Grid::build(1, GridKind::line1d, 12.0, 0.05);
    auto V = Potential::make(const_field(g, 1.0), 1.0);
    SolveOptions opts;
    MinAScanOptions scan;
    MinAResult res = find_min_a(Expr::parse("r"), 1.0, 4.0, V, g, opts, scan);
    REQUIRE(res.found);
    CHECK(res.report.strict);
    CHECK(res.a > scan.a0);

    // bracketing witness by re-evaluation
    auto evaluate = [&](double a) {
        auto spec = ProblemSpec::make(g, depressed_exponent(Expr::parse("r"), a, 4.0, 2.1, g), V);
        return check_criterion(spec, opts).strict;
    };
    CHECK(evaluate(res.a));
    CHECK_FALSE(evaluate(0.5 * res.a));
    // strictness persists along larger strengths
    for (double factor : {2.0, 4.0, 8.0}) CHECK(evaluate(factor * res.a));
}

TEST_CASE("find_min_a: unreachable ceiling reports not-found") {
    auto g = Grid::build(1, GridKind::line1d, 12.0, 0.05);
    auto V = Potential::make(const_field(g, 1.0), 1.0);
    MinAScanOptions scan;
    scan.a0 = 0.001;
    scan.a_max = 0.002; // far below the onset
    MinAResult res = find_min_a(Expr::parse("r"), 1.0, 4.0, V, g, SolveOptions{}, scan);
    CHECK_FALSE(res.found);
    CHECK(std::isnan(res.a));
}

TEST_CASE("translation experiment: autonomous, disjoint, smooth tails") {
    auto g = Grid::build(1, GridKind::line1d, 20.0, 0.02);
    double supp = 3.0;
    Field u(g);
    for (std::size_t i = 0; i < g->size(); ++i) {
        double t = g->radius(i) / supp;
        double q = 1.0 - t * t;
        u[i] = (q > 1e-12) ? std::exp(-1.0 / q) : 0.0;
    }
    std::vector<std::vector<double>> shifts{{4.0}, {8.0}, {12.0}, {16.0}};

    // autonomous: rows equal their limits to near machine precision
    {
        auto p = Exponent::make(const_field(g, 4.0), 4.0);
        auto V = Potential::make(const_field(g, 1.0), 1.0);
        auto tab = translation_experiment(u, p, V, shifts);
        for (const auto& row : tab.rows) {
            CHECK(std::abs(row.rho_val - tab.rho_limit) <= 1e-12);
            CHECK(std::abs(row.lux_val - tab.lux_limit) <= 1e-12);
            CHECK(std::abs(row.energy_val - tab.energy_limit) <= 1e-12);
        }
    }
    // data deviating from the limits only inside |x| < 2: once the support
    // leaves, rows equal limits
    {
        Field pf(g), vf(g);
        for (std::size_t i = 0; i < g->size(); ++i) {
            double r = g->radius(i);
            double t = r / 2.0;
            double q = 1.0 - t * t;
            double b = (q > 1e-12) ? std::exp(-1.0 / q) : 0.0;
            pf[i] = 4.0 - 0.7 * b;
            vf[i] = 1.0 + 0.5 * b;
        }
        auto p = Exponent::make(pf, 4.0);
        auto V = Potential::make(vf, 1.0);
        auto tab = translation_experiment(u, p, V, shifts);
        for (const auto& row : tab.rows) {
            if (row.shift_norm < supp + 2.0) continue;
            CHECK(std::abs(row.rho_val - tab.rho_limit) <= 1e-10);
            CHECK(std::abs(row.lux_val - tab.lux_limit) <= 1e-10);
            CHECK(std::abs(row.energy_val - tab.energy_limit) <= 1e-10);
        }
    }
    // smooth tails: the modular deviation shrinks monotonically and ends
    // below 1e-3
    {
        Field pf(g), vf(g);
        for (std::size_t i = 0; i < g->size(); ++i) {
            double r = g->radius(i);
            pf[i] = 4.0 - 0.5 * std::exp(-r);
            vf[i] = 1.0 + std::exp(-r);
        }
        auto p = Exponent::make(pf, 4.0);
        auto V = Potential::make(vf, 1.0);
        auto tab = translation_experiment(u, p, V, shifts);
        double prev = std::numeric_limits<double>::infinity();
        for (const auto& row : tab.rows) {
            double dev = std::abs(row.rho_val - tab.rho_limit);
            CHECK(dev < prev);
            prev = dev;
        }
        CHECK(prev <= 1e-3);
    }

    // support leaving the domain is an error
    CHECK_THROWS_AS(translation_experiment(u, Exponent::make(const_field(g, 4.0), 4.0),
                                           Potential::make(const_field(g, 1.0), 1.0), {{18.0}}),
                    invalid_shift);
}

TEST_CASE("axial defect: exact symmetries on grid-aligned axes") {
    auto g = Grid::build(2, GridKind::cartesian2d, 6.0, 0.1);
    auto radial = oracles::make_field(
        g, [](double x, double y) { return std::exp(-(x * x + y * y) / 3.0); });
    std::vector<std::array<double, 2>> axes{{1.0, 0.0},
                                            {0.0, 1.0},
                                            {std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2},
                                            {-std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2}};
    for (const auto& a : axes) CHECK(axial_defect(radial, a) <= 1e-8);
    AxisReport best = axial_symmetry_defect(radial, axes);
    CHECK(best.defect <= 1e-8);

    auto odd = oracles::make_field(
        g, [](double x, double y) { return x * std::exp(-(x * x + y * y)); });
    CHECK(axial_defect(odd, {1.0, 0.0}) <= 1e-8); // even across the x-axis
    CHECK(axial_defect(odd, {0.0, 1.0}) > 0.5);   // odd across the y-axis

    AxisReport pick = axial_symmetry_defect(odd, axes);
    CHECK(pick.axis[0] == doctest::Approx(1.0));
    CHECK(std::abs(pick.axis[1]) < 1e-12);
}

TEST_CASE("axial defect: default scan locates a symmetry axis off the lattice") {
    auto g = Grid::build(2, GridKind::cartesian2d, 6.0, 0.1);
    // symmetric about the line at 30 degrees
    double c = std::cos(std::numbers::pi / 6.0), s = std::sin(std::numbers::pi / 6.0);
    auto f = oracles::make_field(g, [&](double x, double y) {
        double along = x * c + y * s;
        double across = -x * s + y * c;
        return (1.0 + along) * std::exp(-(along * along + 2.0 * across * across) / 2.0);
    });
    AxisReport best = axial_symmetry_defect(f, {});
    CHECK(std::abs(best.angle - std::numbers::pi / 6.0) < 0.02);
    CHECK(best.defect < 2e-3); // bilinear reflection error only
}

TEST_CASE("axial defect on the computed minimizer of a radial problem") {
    auto g = Grid::build(2, GridKind::cartesian2d, 8.0, 0.25);
    Field vf(g);
    for (std::size_t i = 0; i < g->size(); ++i)
        vf[i] = 1.0 - 0.5 * std::exp(-g->radius(i) * g->radius(i));
    auto spec = ProblemSpec::make(g, Exponent::make(const_field(g, 3.0), 3.0),
                                  Potential::make(vf, 1.0));
    GroundState gs = solve_ground_state(spec, SolveOptions{});
    REQUIRE(gs.converged);
    AxisReport best = axial_symmetry_defect(
        gs.w, {{1.0, 0.0}, {0.0, 1.0}, {std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2}});
    CHECK(best.defect <= 1e-3);
}
