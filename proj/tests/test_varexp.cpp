#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "vxgs/lemmas.hpp"
#include "vxgs/varexp.hpp"

using namespace vxgs;

namespace {

// measure-1 interval [-1/2, 1/2]
std::shared_ptr<const Grid> unit_measure_grid() { return Grid::build(1, GridKind::line1d, 0.5, 0.05); }

Field const_field(const std::shared_ptr<const Grid>& g, double v) {
    Field f(g);
    for (std::size_t i = 0; i < g->size(); ++i) f[i] = v;
    return f;
}

Exponent const_exponent(const std::shared_ptr<const Grid>& g, double p) {
    return Exponent::make(const_field(g, p), p);
}

} // namespace

TEST_CASE("exponent and potential validation") {
    auto g = Grid::build(1, GridKind::line1d, 10.0, 0.1);
    CHECK_THROWS_AS(const_exponent(g, 2.0), invalid_parameter);  // not > 2
    CHECK_THROWS_AS(const_exponent(g, 1.5), invalid_parameter);
    CHECK_NOTHROW(const_exponent(g, 50.0)); // N = 1: no critical ceiling

    auto g3 = Grid::build(3, GridKind::radial_nd, 10.0, 0.1);
    CHECK_THROWS_AS(const_exponent(g3, 6.0), invalid_parameter); // 2* = 6 at N = 3
    CHECK_NOTHROW(const_exponent(g3, 5.9));
    CHECK(two_star(3) == doctest::Approx(6.0));
    CHECK(std::isinf(two_star(2)));

    // tail deviation beyond 0.9 R violates the hypothesis proxy
    Field bad(g);
    for (std::size_t i = 0; i < g->size(); ++i)
        bad[i] = 4.0 - 0.5 * (g->radius(i) > 9.0 ? 1.0 : std::exp(-g->radius(i)));
    CHECK_THROWS_AS(Exponent::make(bad, 4.0), invalid_parameter);
    CHECK_NOTHROW(Exponent::make(bad, 4.0, /*tail_tol=*/0.6));

    CHECK_THROWS_AS(Potential::make(const_field(g, 1.0), -1.0), invalid_parameter);
    Field vbad(g);
    for (std::size_t i = 0; i < g->size(); ++i) vbad[i] = 1.0 + (g->radius(i) > 9.5 ? 0.2 : 0.0);
    CHECK_THROWS_AS(Potential::make(vbad, 1.0), invalid_parameter);
}

TEST_CASE("modular on simple data") {
    auto g2 = Grid::build(1, GridKind::line1d, 1.0, 0.1); // measure 2
    auto p = const_exponent(g2, 3.5);
    CHECK(rho(const_field(g2, 1.0), p) == doctest::Approx(2.0).epsilon(1e-13));

    auto g1 = unit_measure_grid();
    auto p3 = const_exponent(g1, 3.0);
    CHECK(rho(const_field(g1, 2.0), p3) == doctest::Approx(8.0).epsilon(1e-13));
}

TEST_CASE("modular matches an independent fine-grid quadrature") {
    // smooth decaying field and a sinusoidally varying exponent, checked
    // against the same integrand sampled at h/8
    auto u_of = [](double x) {
        return 1.3 * std::exp(-x * x) + 0.4 * std::exp(-0.5 * (x - 2.0) * (x - 2.0));
    };
    auto p_of = [](double x) { return 3.5 + 0.4 * std::sin(2.0 * x) * std::exp(-x * x / 25.0); };

    auto coarse = Grid::build(1, GridKind::line1d, 12.0, 0.08);
    auto fine = Grid::build(1, GridKind::line1d, 12.0, 0.01);
    auto value_on = [&](const std::shared_ptr<const Grid>& g) {
        auto u = oracles::make_field(g, [&](double x, double) { return u_of(x); });
        Field pf(g);
        for (std::size_t i = 0; i < g->size(); ++i) pf[i] = p_of(g->position(i)[0]);
        return rho(u, Exponent::make(std::move(pf), 3.5));
    };
    double v_coarse = value_on(coarse);
    double v_fine = value_on(fine);
    CHECK(std::abs(v_coarse - v_fine) / v_fine < 1e-8);
}

TEST_CASE("weighted modular: zero, closed form, monotone in gamma") {
    auto g = unit_measure_grid();
    auto p4 = const_exponent(g, 4.0);
    for (double gamma : {0.5, 1.0, 3.0})
        CHECK(weighted_modular(const_field(g, 0.0), p4, gamma) == 0.0);

    // (2/2)^4 / 4 on a measure-1 domain
    CHECK(weighted_modular(const_field(g, 2.0), p4, 2.0) == doctest::Approx(0.25).epsilon(1e-13));

    oracles::Rng rng(3);
    auto u = oracles::random_field(g, rng);
    double prev = weighted_modular(u, p4, 0.25);
    for (double gamma : {0.5, 1.0, 2.0, 4.0}) {
        double cur = weighted_modular(u, p4, gamma);
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK_THROWS_AS(weighted_modular(u, p4, 0.0), invalid_parameter);
}

TEST_CASE("luxemburg norm: constant-exponent closed form and zero convention") {
    auto g = unit_measure_grid();
    auto p4 = const_exponent(g, 4.0);
    // gamma solves (2/gamma)^4/4 = 1 on a measure-1 domain: gamma = sqrt(2)
    CHECK(luxemburg_norm(const_field(g, 2.0), p4) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(luxemburg_norm(const_field(g, 0.0), p4) == 0.0);
}

TEST_CASE("luxemburg norm: two-zone exponent against a scalar bisection oracle") {
    // p = 3 on the left half, p = 5 on the right half of [-1, 1], u = 1.
    // The discrete modular is A/(3 g^3) + B/(5 g^5) with A, B the
    // trapezoid measures of the two zones; its root is found independently.
    auto g = Grid::build(1, GridKind::line1d, 1.0, 0.01);
    Field pf(g);
    double h = g->spacing();
    for (std::size_t i = 0; i < g->size(); ++i)
        pf[i] = (g->position(i)[0] < 0.0) ? 3.0 : 5.0;
    auto p = Exponent::make(pf, 5.0, /*tail_tol=*/3.0); // two-zone test data, tail check relaxed
    double A = 1.0 - 0.5 * h;
    double B = 1.0 + 0.5 * h;
    double root = oracles::bisect(
        [&](double gam) {
            return A / (3.0 * std::pow(gam, 3.0)) + B / (5.0 * std::pow(gam, 5.0)) - 1.0;
        },
        1e-3, 10.0, 1e-14);
    CHECK(luxemburg_norm(const_field(g, 1.0), p) == doctest::Approx(root).epsilon(1e-11));
}

TEST_CASE("sigma from the norm extremes") {
    auto g = Grid::build(1, GridKind::line1d, 6.0, 0.05);
    Field pf(g);
    for (std::size_t i = 0; i < g->size(); ++i)
        pf[i] = 4.0 + std::max(-1.0, std::min(1.0, std::sin(g->position(i)[0]))) *
                          std::exp(-g->radius(i) * g->radius(i) / 4.0);
    auto p = Exponent::make(pf, 4.0);
    REQUIRE(p.p_minus < p.p_plus);

    oracles::Rng rng(11);
    auto base = oracles::random_field(g, rng);
    for (double target : {1.0, 2.0, 0.5}) {
        double n0 = luxemburg_norm(base, p);
        REQUIRE(n0 > 0.0);
        Field u(g);
        for (std::size_t i = 0; i < g->size(); ++i) u[i] = base[i] * target / n0;
        double expect = std::max(std::pow(target, p.p_minus - 1.0),
                                 std::pow(target, p.p_plus - 1.0));
        CHECK(sigma(u, p) == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("constant-exponent modular and norm") {
    auto g2 = Grid::build(1, GridKind::line1d, 1.0, 0.1); // measure 2
    CHECK(rho_inf(const_field(g2, 1.0), 4.0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(norm_inf(const_field(g2, 1.0), 4.0) ==
          doctest::Approx(std::pow(0.5, 0.25)).epsilon(1e-13));
    CHECK(rho_inf(const_field(g2, 0.0), 4.0) == 0.0);
    CHECK(norm_inf(const_field(g2, 0.0), 4.0) == 0.0);

    // cross-check: constant-exponent Luxemburg norm equals norm_inf
    oracles::Rng rng(17);
    auto p35 = const_exponent(g2, 3.5);
    for (int k = 0; k < 20; ++k) {
        auto u = oracles::random_field(g2, rng);
        double a = luxemburg_norm(u, p35);
        double b = norm_inf(u, 3.5);
        CHECK(a == doctest::Approx(b).epsilon(1e-10));
    }
}

TEST_CASE("modular-norm sandwich and unit modular on random fields") {
    auto g = Grid::build(1, GridKind::line1d, 8.0, 0.05);
    auto fams = lemma_exponent_families(g, 3.6);
    oracles::Rng rng(23);
    for (const auto& p : fams) {
        for (int k = 0; k < 20; ++k) {
            auto u = oracles::random_field(g, rng);
            double n = luxemburg_norm(u, p);
            double r = rho(u, p);
            double lo = p.p_minus * std::min(std::pow(n, p.p_plus), std::pow(n, p.p_minus));
            double hi = p.p_plus * std::max(std::pow(n, p.p_plus), std::pow(n, p.p_minus));
            CHECK(lo <= r * (1.0 + 1e-9) + 1e-12);
            CHECK(r <= hi * (1.0 + 1e-9) + 1e-12);
            if (!u.is_zero()) CHECK(std::abs(weighted_modular(u, p, n) - 1.0) <= 1e-10);
        }
    }
}

TEST_CASE("positive 1-homogeneity of the norm") {
    auto g = Grid::build(1, GridKind::line1d, 8.0, 0.05);
    auto fams = lemma_exponent_families(g, 4.0);
    oracles::Rng rng(29);
    auto u = oracles::random_field(g, rng);
    for (const auto& p : fams) {
        double n1 = luxemburg_norm(u, p);
        for (double t : {0.1, 1.0, 7.3}) {
            Field tu(g);
            for (std::size_t i = 0; i < g->size(); ++i) tu[i] = t * u[i];
            CHECK(luxemburg_norm(tu, p) == doctest::Approx(t * n1).epsilon(1e-10));
        }
    }
}

TEST_CASE("norm estimates via the shared battery") {
    auto g = Grid::build(1, GridKind::line1d, 8.0, 0.08);
    auto checks = verify_lemmas(g, 3.8, 30, 777);
    for (const auto& c : checks) {
        INFO(c.name, " worst=", c.worst);
        CHECK(c.pass);
    }
}

TEST_CASE("elementary product bound used by the estimates") {
    // a b <= (1 - 1/q) a^{q/(q-1)} + (1/q) b^q for a, b >= 0, q > 1
    oracles::Rng rng(31);
    for (int k = 0; k < 500; ++k) {
        double a = rng.range(0.0, 5.0), b = rng.range(0.0, 5.0), q = rng.range(1.01, 8.0);
        double lhs = a * b;
        double rhs = (1.0 - 1.0 / q) * std::pow(a, q / (q - 1.0)) + std::pow(b, q) / q;
        CHECK(lhs <= rhs * (1.0 + 1e-12) + 1e-12);
    }
}

TEST_CASE("grid mismatch is rejected") {
    auto g1 = Grid::build(1, GridKind::line1d, 5.0, 0.1);
    auto g2 = Grid::build(1, GridKind::line1d, 5.0, 0.1);
    auto p = const_exponent(g1, 4.0);
    Field u(g2);
    CHECK_THROWS_AS(rho(u, p), grid_mismatch);
}
