#include "vxgs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace vxgs {

namespace {

constexpr double kStrictTieBand = 1e-7; // relative band treating near-equality as non-strict

Field sample_exp_minus_psi(const Expr& psi, const std::shared_ptr<const Grid>& grid) {
    Field g(grid);
    for (std::size_t i = 0; i < grid->size(); ++i) {
        EvalContext ctx;
        ctx.r = grid->radius(i);
        g[i] = std::exp(-psi.eval(ctx));
    }
    return g;
}

} // namespace

void TrialSpec::validate(const Grid& g) const {
    if (!(R > 0.0)) throw invalid_parameter("trial radius must be positive");
    if (!(a >= 0.0)) throw invalid_parameter("trial strength must be nonnegative");
    // psi nondecreasing beyond R along the sampled radii
    std::vector<double> radii;
    radii.reserve(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        double r = g.radius(i);
        if (r >= R) radii.push_back(r);
    }
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    double prev = -std::numeric_limits<double>::infinity();
    for (double r : radii) {
        EvalContext ctx;
        ctx.r = r;
        double v = psi.eval(ctx);
        if (v < prev - 1e-12 * std::max(1.0, std::abs(prev)))
            throw invalid_parameter("trial profile psi must be nondecreasing beyond R");
        prev = v;
    }
    // exp(-psi) must have finite discrete H1 energy
    Field trial = sample_exp_minus_psi(psi, g.shared_from_this());
    double h1 = dirichlet_form(trial, trial) + inner(trial, trial);
    if (!std::isfinite(h1)) throw invalid_parameter("trial field has infinite discrete H1 energy");
}

double threshold(double p_minus, double p_inf, double lambda1_inf) {
    if (!(p_minus > 2.0) || !(p_minus <= p_inf) || !std::isfinite(p_inf))
        throw invalid_parameter("threshold requires 2 < p_minus <= p_inf < infinity");
    if (!(lambda1_inf > 0.0)) throw invalid_parameter("threshold requires lambda1_inf > 0");
    return std::pow(p_minus / p_inf, 2.0 / p_inf) * lambda1_inf;
}

double trial_upper_bound(const TrialSpec& trial, const ProblemSpec& spec) {
    trial.validate(*spec.grid);
    Field g = sample_exp_minus_psi(trial.psi, spec.grid);
    if (g.is_zero()) throw invalid_parameter("trial field is numerically zero on this grid");
    double jg = energy(g, spec);
    double ig = luxemburg_norm(g, spec.p);
    return jg / (ig * ig);
}

double rho_lower_bound(const TrialSpec& trial, double p_inf, const Grid& grid) {
    trial.validate(grid);
    auto gp = grid.shared_from_this();
    Field f(gp);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EvalContext ctx;
        ctx.r = grid.radius(i);
        f[i] = std::exp(-p_inf * trial.psi.eval(ctx));
    }
    return std::exp(trial.a) * tail_integrate(f, trial.R);
}

namespace {

CriterionReport criterion_from_battery(const ProblemSpec& spec, const GroundState& gs,
                                       const GroundState& limit,
                                       std::vector<std::pair<std::string, double>> trials) {
    CriterionReport rep;
    rep.lambda_solver = gs.lambda;
    rep.lambda1_inf = limit.lambda;
    rep.threshold = threshold(spec.p.p_minus, spec.p.p_inf, limit.lambda);
    trials.insert(trials.begin(), {"solver", gs.lambda});
    rep.lambda1_upper = trials.front().second;
    for (const auto& t : trials) rep.lambda1_upper = std::min(rep.lambda1_upper, t.second);
    rep.margin = rep.threshold - rep.lambda1_upper;
    rep.strict = rep.lambda1_upper < rep.threshold * (1.0 - kStrictTieBand);
    rep.authoritative = gs.converged && limit.converged;
    rep.trials = std::move(trials);
    return rep;
}

std::vector<std::pair<std::string, double>> default_trials(const ProblemSpec& spec,
                                                           const GroundState& limit) {
    std::vector<std::pair<std::string, double>> out;
    // translated limit minimizer, projected back onto the manifold
    if (!limit.w.is_zero()) {
        Field proj = project_to_constraint(limit.w, spec.p);
        out.emplace_back("limit-minimizer", energy(proj, spec));
        const Grid& g = *spec.grid;
        if (g.kind() != GridKind::radial_nd) {
            // a short shift: moving mass near the wall sheds tail energy under the
            // free-boundary quadrature, which would fake a strict inequality
            double shift = std::round(g.truncation_radius() / 8.0 / g.spacing()) * g.spacing();
            std::vector<double> y(g.kind() == GridKind::cartesian2d ? 2 : 1, 0.0);
            y[0] = shift;
            Field moved = translate(limit.w, y);
            if (!moved.is_zero())
                out.emplace_back("translated-limit-minimizer",
                                 energy(project_to_constraint(moved, spec.p), spec));
        }
    }
    for (const char* psi_src : {"r", "r^2/2"}) {
        TrialSpec t{Expr::parse(psi_src), 1.0, 0.0};
        try {
            out.emplace_back(std::string("exp(-") + psi_src + ")", trial_upper_bound(t, spec));
        } catch (const invalid_parameter&) {
            // trial underflowed on this grid; skip it
        }
    }
    return out;
}

} // namespace

CriterionReport check_criterion(const ProblemSpec& spec, const SolveOptions& opts) {
    GroundState gs = solve_ground_state(spec, opts);
    GroundState limit = solve_limit_problem(spec.p.p_inf, spec.V.v_inf, spec.grid, opts);
    return criterion_from_battery(spec, gs, limit, default_trials(spec, limit));
}

Exponent depressed_exponent(const Expr& psi, double a, double p_inf, double p_floor,
                            const std::shared_ptr<const Grid>& grid) {
    if (!(p_floor > 2.0) || !(p_floor <= p_inf))
        throw invalid_parameter("clamp floor must lie in (2, p_inf]");
    Field p(grid);
    for (std::size_t i = 0; i < grid->size(); ++i) {
        EvalContext ctx;
        ctx.r = grid->radius(i);
        double ps = psi.eval(ctx);
        double v = (ps > 0.0) ? p_inf - a / ps : p_floor;
        p[i] = std::max(p_floor, std::min(p_inf, v));
    }
    // families with large a legitimately sit far below p_inf well past the
    // tail band; the tail check is relaxed accordingly
    return Exponent::make(std::move(p), p_inf, (p_inf - p_floor) + 1.0);
}

MinAResult find_min_a(const Expr& psi, double R, double p_inf, const Potential& V,
                      const std::shared_ptr<const Grid>& grid, const SolveOptions& opts,
                      const MinAScanOptions& scan) {
    if (!(scan.a0 > 0.0) || !(scan.a_max >= scan.a0))
        throw invalid_parameter("scan requires 0 < a0 <= a_max");
    if (V.samples.grid_ptr() != grid) throw grid_mismatch("potential lives on a different grid");
    TrialSpec probe_trial{psi, R, 0.0};
    probe_trial.validate(*grid);

    GroundState limit = solve_limit_problem(p_inf, V.v_inf, grid, opts);

    MinAResult result;
    result.found = false;
    result.a = std::numeric_limits<double>::quiet_NaN();

    auto evaluate = [&](double a) {
        auto spec = ProblemSpec::make(grid, depressed_exponent(psi, a, p_inf, scan.p_floor, grid),
                                      V);
        GroundState gs = solve_ground_state(spec, opts);
        auto trials = default_trials(spec, limit);
        TrialSpec t{psi, R, a};
        trials.emplace_back("exp(-psi)", trial_upper_bound(t, spec));
        CriterionReport rep = criterion_from_battery(spec, gs, limit, std::move(trials));
        result.probes.emplace_back(a, rep.strict);
        return rep;
    };

    double a_prev = 0.0;
    for (double a = scan.a0; a <= scan.a_max * (1.0 + 1e-12); a *= 2.0) {
        CriterionReport rep = evaluate(a);
        if (rep.strict) {
            if (a == scan.a0) { // already strict at the scan floor
                result.found = true;
                result.a = a;
                result.report = rep;
                return result;
            }
            // refine between the last non-strict and this strict strength
            double lo = a_prev, hi = a;
            CriterionReport at_hi = rep;
            while (hi - lo > 0.01 * hi) {
                double mid = 0.5 * (lo + hi);
                CriterionReport rm = evaluate(mid);
                if (rm.strict) {
                    hi = mid;
                    at_hi = rm;
                } else {
                    lo = mid;
                }
            }
            result.found = true;
            result.a = hi;
            result.report = at_hi;
            return result;
        }
        a_prev = a;
    }
    return result; // not found within the scan ceiling
}

TranslationTable translation_experiment(const Field& u, const Exponent& p, const Potential& V,
                                        const std::vector<std::vector<double>>& shifts) {
    require_same_grid(u, p.samples);
    require_same_grid(u, V.samples);
    if (u.grid().kind() == GridKind::radial_nd)
        throw unsupported_operation("translation experiments require line1d or cartesian2d grids");

    std::size_t support = 0;
    for (double v : u.values())
        if (v != 0.0) ++support;
    if (support == 0) throw invalid_parameter("translation experiment requires a nonzero field");

    auto spec = ProblemSpec::make(u.grid_ptr(), p, V);

    TranslationTable table;
    table.rho_limit = rho_inf(u, p.p_inf);
    table.lux_limit = norm_inf(u, p.p_inf);
    table.energy_limit = vxgs::energy_limit(u, V.v_inf);
    for (const auto& y : shifts) {
        Field uy = translate(u, y);
        std::size_t kept = 0;
        for (double v : uy.values())
            if (v != 0.0) ++kept;
        if (kept != support)
            throw invalid_shift("shift moves part of the field's support out of the domain");
        TranslationRow row;
        row.shift = y;
        double s2 = 0.0;
        for (double c : y) s2 += c * c;
        row.shift_norm = std::sqrt(s2);
        row.rho_val = rho(uy, p);
        row.lux_val = luxemburg_norm(uy, p);
        row.energy_val = energy(uy, spec);
        table.rows.push_back(std::move(row));
    }
    return table;
}

namespace {

// reflection of (x, y) across the line through 0 with direction (c, s)
std::array<double, 2> reflect(double x, double y, double c, double s) {
    double dot = x * c + y * s;
    return {2.0 * dot * c - x, 2.0 * dot * s - y};
}

int special_axis_index(double c, double s) {
    // 0: x-axis, 1: diagonal y=x, 2: y-axis, 3: diagonal y=-x, -1 otherwise
    constexpr double eps = 1e-12;
    const double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
    if (std::abs(s) < eps) return 0;
    if (std::abs(c) < eps) return 2;
    if (std::abs(c - inv_sqrt2) < eps && std::abs(s - inv_sqrt2) < eps) return 1;
    if (std::abs(c + inv_sqrt2) < eps && std::abs(s - inv_sqrt2) < eps) return 3;
    if (std::abs(c - inv_sqrt2) < eps && std::abs(s + inv_sqrt2) < eps) return 3;
    if (std::abs(c + inv_sqrt2) < eps && std::abs(s + inv_sqrt2) < eps) return 1;
    return -1;
}

} // namespace

double axial_defect(const Field& w, const std::array<double, 2>& axis) {
    const Grid& g = w.grid();
    if (g.kind() != GridKind::cartesian2d)
        throw unsupported_operation("axial symmetry defect requires a cartesian2d grid");
    if (w.is_zero()) throw invalid_parameter("axial defect undefined for the zero field");

    double len = std::hypot(axis[0], axis[1]);
    if (!(len > 0.0)) throw invalid_parameter("axis direction must be nonzero");
    double c = axis[0] / len, s = axis[1] / len;

    std::size_t n = g.nx();
    double h = g.spacing();
    double r_dom = g.truncation_radius();
    double r_in = r_dom - 2.0 * h; // reflected stencil stays inside the square
    const auto& ax = g.axis();
    const auto& v = w.values();

    int special = special_axis_index(c, s);

    auto reflected_value = [&](std::size_t ix, std::size_t iy) {
        switch (special) {
            case 0: return v[ix * n + (n - 1 - iy)];
            case 1: return v[iy * n + ix];
            case 2: return v[(n - 1 - ix) * n + iy];
            case 3: return v[(n - 1 - iy) * n + (n - 1 - ix)];
            default: break;
        }
        auto q = reflect(ax[ix], ax[iy], c, s);
        // bilinear interpolation
        double fx = (q[0] + r_dom) / h;
        double fy = (q[1] + r_dom) / h;
        auto jx = static_cast<long>(std::floor(fx));
        auto jy = static_cast<long>(std::floor(fy));
        jx = std::clamp<long>(jx, 0, static_cast<long>(n) - 2);
        jy = std::clamp<long>(jy, 0, static_cast<long>(n) - 2);
        double tx = fx - static_cast<double>(jx);
        double ty = fy - static_cast<double>(jy);
        auto at = [&](long i, long j) { return v[static_cast<std::size_t>(i * static_cast<long>(n) + j)]; };
        return (1.0 - tx) * ((1.0 - ty) * at(jx, jy) + ty * at(jx, jy + 1)) +
               tx * ((1.0 - ty) * at(jx + 1, jy) + ty * at(jx + 1, jy + 1));
    };

    double num = 0.0, den = 0.0;
    for (std::size_t ix = 0; ix < n; ++ix) {
        for (std::size_t iy = 0; iy < n; ++iy) {
            if (std::hypot(ax[ix], ax[iy]) > r_in) continue;
            std::size_t id = ix * n + iy;
            double refl = reflected_value(ix, iy);
            double diff = v[id] - 0.5 * (v[id] + refl);
            num += g.weight(id) * diff * diff;
            den += g.weight(id) * v[id] * v[id];
        }
    }
    if (den == 0.0) throw invalid_parameter("field vanishes on the inscribed disk");
    return std::sqrt(num / den);
}

AxisReport axial_symmetry_defect(const Field& w,
                                 const std::vector<std::array<double, 2>>& candidate_axes) {
    auto defect_at = [&](double angle) {
        return axial_defect(w, {std::cos(angle), std::sin(angle)});
    };

    AxisReport best;
    best.defect = std::numeric_limits<double>::infinity();

    if (!candidate_axes.empty()) {
        for (const auto& a : candidate_axes) {
            double d = axial_defect(w, a);
            if (d < best.defect) {
                double len = std::hypot(a[0], a[1]);
                best = AxisReport{std::atan2(a[1] / len, a[0] / len), {a[0] / len, a[1] / len}, d};
                if (best.angle < 0.0) best.angle += std::numbers::pi;
            }
        }
        return best;
    }

    constexpr int kScan = 64;
    double best_angle = 0.0;
    for (int k = 0; k < kScan; ++k) {
        double angle = std::numbers::pi * k / kScan;
        double d = defect_at(angle);
        if (d < best.defect) {
            best.defect = d;
            best_angle = angle;
        }
    }
    // golden-section refinement around the best scanned direction
    double span = std::numbers::pi / kScan;
    double lo = best_angle - span, hi = best_angle + span;
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = defect_at(x1), f2 = defect_at(x2);
    for (int it = 0; it < 40; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = defect_at(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = defect_at(x2);
        }
    }
    double angle = 0.5 * (lo + hi);
    double d = defect_at(angle);
    if (d > best.defect) { // keep the scanned direction if refinement drifted
        angle = best_angle;
        d = best.defect;
    }
    if (angle < 0.0) angle += std::numbers::pi;
    if (angle >= std::numbers::pi) angle -= std::numbers::pi;
    return AxisReport{angle, {std::cos(angle), std::sin(angle)}, d};
}

} // namespace vxgs
