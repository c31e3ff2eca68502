#include "vxgs/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vxgs/analysis.hpp"

namespace vxgs {

namespace {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    double uniform() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    }
    double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  private:
    std::uint64_t state_;
};

Field bump_field(const std::shared_ptr<const Grid>& grid, Rng& rng) {
    double r_dom = grid->truncation_radius();
    double scale = std::pow(10.0, rng.range(-1.0, 1.0));
    struct Bump {
        double c, width, amp;
    };
    std::vector<Bump> bumps;
    for (int j = 0; j < 3; ++j) {
        double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        bumps.push_back({rng.range(0.0, 0.4 * r_dom), rng.range(0.4, 1.5),
                         sign * rng.range(0.2, 2.0)});
    }
    Field u(grid);
    for (std::size_t i = 0; i < grid->size(); ++i) {
        double r = grid->radius(i);
        double v = 0.0;
        for (const auto& b : bumps) {
            double t = (r - b.c) / b.width;
            v += b.amp * std::exp(-t * t);
        }
        u[i] = scale * v;
    }
    return u;
}

// quadrature of |u|^{p(x)-1} |v|
double mixed_modular(const Field& u, const Field& v, const Exponent& p) {
    const auto& w = u.grid().weights();
    double s = 0.0, c = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        double a = std::abs(u[i]);
        double term = (a == 0.0) ? 0.0 : w[i] * std::pow(a, p.samples[i] - 1.0) * std::abs(v[i]);
        double x = term - c;
        double t = s + x;
        c = (t - s) - x;
        s = t;
    }
    return s;
}

struct Violation {
    double worst = -1.0;
    void record(double lhs, double rhs) { // checks lhs <= rhs
        worst = std::max(worst, (lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)}));
    }
};

} // namespace

Field random_bump_field(const std::shared_ptr<const Grid>& grid, std::uint64_t seed) {
    Rng rng(seed);
    return bump_field(grid, rng);
}

std::vector<Exponent> lemma_exponent_families(const std::shared_ptr<const Grid>& grid,
                                              double p_inf) {
    double crit = two_star(grid->dim());
    double head = std::isfinite(crit) ? 0.45 * (crit - p_inf) : 1.0;
    double dip = 0.4 * (p_inf - 2.05);
    double up = std::min(0.4, head);
    auto make = [&](auto f) {
        Field p(grid);
        for (std::size_t i = 0; i < grid->size(); ++i) p[i] = f(grid->radius(i));
        return Exponent::make(std::move(p), p_inf);
    };
    std::vector<Exponent> fams;
    fams.push_back(make([&](double) { return p_inf; }));
    fams.push_back(make([&](double r) { return p_inf - dip * std::exp(-r * r); }));
    fams.push_back(make([&](double r) { return p_inf + up * std::exp(-(r - 1.0) * (r - 1.0)); }));
    fams.push_back(make([&](double r) {
        return p_inf - 0.5 * dip * (1.0 + std::sin(2.0 * r)) * std::exp(-r * r / 9.0);
    }));
    fams.push_back(make([&](double r) { return p_inf - dip / (1.0 + r * r); }));
    return fams;
}

std::vector<LemmaCheck> verify_lemmas(const std::shared_ptr<const Grid>& grid, double p_inf,
                                      int fields_per_family, std::uint64_t seed) {
    if (fields_per_family < 2) throw invalid_parameter("need at least 2 fields per family");
    const double slack = 1e-9;

    auto families = lemma_exponent_families(grid, p_inf);
    Rng rng(seed);

    Violation sandwich_lo, sandwich_hi, holder, lipschitz, holder_inf, lipschitz_inf;
    double worst_unit = 0.0;

    for (const auto& p : families) {
        Field prev = bump_field(grid, rng);
        for (int k = 0; k < fields_per_family; ++k) {
            Field u = bump_field(grid, rng);

            double nu = luxemburg_norm(u, p);
            double ru = rho(u, p);
            double lo = p.p_minus * std::min(std::pow(nu, p.p_plus), std::pow(nu, p.p_minus));
            double hi = p.p_plus * std::max(std::pow(nu, p.p_plus), std::pow(nu, p.p_minus));
            sandwich_lo.record(lo, ru);
            sandwich_hi.record(ru, hi);

            if (!u.is_zero())
                worst_unit = std::max(worst_unit, std::abs(weighted_modular(u, p, nu) - 1.0));

            const Field& v = prev;
            holder.record(mixed_modular(u, v, p), p.p_plus * sigma(u, p) * luxemburg_norm(v, p));
            Field diff(grid);
            for (std::size_t i = 0; i < grid->size(); ++i) diff[i] = u[i] - v[i];
            lipschitz.record(std::abs(ru - rho(v, p)),
                             p.p_plus * p.p_plus * (sigma(u, p) + sigma(v, p)) *
                                 luxemburg_norm(diff, p));

            // constant-exponent specializations with the limit exponent
            double su = std::pow(norm_inf(u, p_inf), p_inf - 1.0);
            double sv = std::pow(norm_inf(v, p_inf), p_inf - 1.0);
            Field up_(grid);
            for (std::size_t i = 0; i < grid->size(); ++i) up_[i] = p_inf;
            Exponent pc = Exponent::make(std::move(up_), p_inf);
            holder_inf.record(mixed_modular(u, v, pc), p_inf * su * norm_inf(v, p_inf));
            lipschitz_inf.record(std::abs(rho_inf(u, p_inf) - rho_inf(v, p_inf)),
                                 p_inf * p_inf * (su + sv) * norm_inf(diff, p_inf));

            prev = u;
        }
    }

    std::vector<LemmaCheck> out;
    auto push = [&](std::string name, double worst, double tol) {
        out.push_back({std::move(name), worst <= tol, worst});
    };
    push("modular-norm sandwich (lower)", sandwich_lo.worst, slack);
    push("modular-norm sandwich (upper)", sandwich_hi.worst, slack);
    push("unit modular at the norm", worst_unit, slack);
    push("mixed modular estimate", holder.worst, slack);
    push("modular Lipschitz estimate", lipschitz.worst, slack);
    push("mixed modular estimate (constant exponent)", holder_inf.worst, slack);
    push("modular Lipschitz estimate (constant exponent)", lipschitz_inf.worst, slack);

    // translation limits on translatable grids
    if (grid->kind() != GridKind::radial_nd) {
        double r_dom = grid->truncation_radius();
        double h = grid->spacing();
        double supp = r_dom / 6.0;
        Field u(grid);
        for (std::size_t i = 0; i < grid->size(); ++i) {
            double t = grid->radius(i) / supp;
            double q = 1.0 - t * t;
            u[i] = (q > 1e-12) ? std::exp(-1.0 / q) : 0.0;
        }
        auto shift_of = [&](double frac) {
            double raw = frac * r_dom;
            double snapped = std::round(raw / h) * h;
            std::vector<double> y(grid->kind() == GridKind::cartesian2d ? 2 : 1, 0.0);
            y[0] = snapped;
            return y;
        };
        std::vector<std::vector<double>> shifts = {shift_of(0.25), shift_of(0.45), shift_of(0.65)};

        auto const_field = [&](double value) {
            Field f(grid);
            for (std::size_t i = 0; i < grid->size(); ++i) f[i] = value;
            return f;
        };

        // autonomous data: every row equals its limit
        {
            auto p = Exponent::make(const_field(p_inf), p_inf);
            auto V = Potential::make(const_field(1.0), 1.0);
            auto table = translation_experiment(u, p, V, shifts);
            double worst = 0.0;
            for (const auto& row : table.rows) {
                worst = std::max(worst, std::abs(row.rho_val - table.rho_limit));
                worst = std::max(worst, std::abs(row.lux_val - table.lux_limit));
                worst = std::max(worst, std::abs(row.energy_val - table.energy_limit));
            }
            push("translation limits (autonomous)", worst, 1e-10);
        }
        // data deviating from the limits only inside a ball disjoint from the
        // shifted supports
        {
            double rb = 0.08 * r_dom;
            auto bump_inside = [&](double r) {
                double t = r / rb;
                double q = 1.0 - t * t;
                return (q > 1e-12) ? std::exp(-1.0 / q) : 0.0;
            };
            Field pf(grid), vf(grid);
            double dip = 0.4 * (p_inf - 2.05);
            for (std::size_t i = 0; i < grid->size(); ++i) {
                double b = bump_inside(grid->radius(i));
                pf[i] = p_inf - dip * b;
                vf[i] = 1.0 + 0.5 * b;
            }
            auto p = Exponent::make(std::move(pf), p_inf);
            auto V = Potential::make(std::move(vf), 1.0);
            auto table = translation_experiment(u, p, V, shifts);
            double worst = 0.0;
            for (const auto& row : table.rows) {
                if (row.shift_norm < supp + rb) continue; // supports not yet disjoint
                worst = std::max(worst, std::abs(row.rho_val - table.rho_limit));
                worst = std::max(worst, std::abs(row.lux_val - table.lux_limit));
                worst = std::max(worst, std::abs(row.energy_val - table.energy_limit));
            }
            push("translation limits (disjoint supports)", worst, 1e-10);
        }
        // smooth tails: deviations shrink monotonically and end below 1e-3
        {
            Field pf(grid), vf(grid);
            double dip = std::min(0.5, 0.4 * (p_inf - 2.05));
            for (std::size_t i = 0; i < grid->size(); ++i) {
                double r = grid->radius(i);
                pf[i] = p_inf - dip * std::exp(-r);
                vf[i] = 1.0 + std::exp(-r);
            }
            auto p = Exponent::make(std::move(pf), p_inf);
            auto V = Potential::make(std::move(vf), 1.0);
            auto table = translation_experiment(u, p, V, shifts);
            bool monotone = true;
            double prev_dev = std::numeric_limits<double>::infinity();
            double last_dev = 0.0;
            for (const auto& row : table.rows) {
                double dev = std::abs(row.rho_val - table.rho_limit);
                if (dev > prev_dev) monotone = false;
                prev_dev = dev;
                last_dev = dev;
            }
            out.push_back({"translation limits (smooth tails)", monotone && last_dev <= 1e-3,
                           last_dev});
        }
    }
    return out;
}

} // namespace vxgs
