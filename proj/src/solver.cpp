#include "vxgs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace vxgs {

namespace {

// splitmix64: tiny deterministic generator, stable across platforms
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    double uniform() { // in [0, 1)
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    }

  private:
    std::uint64_t state_;
};

double pow_int(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

// Solve (-laplacian + v_inf) z = b with the grid's Dirichlet stencil.
class ShiftedInverse {
  public:
    ShiftedInverse(std::shared_ptr<const Grid> grid, double v_inf)
        : grid_(std::move(grid)), v_inf_(v_inf) {
        if (grid_->kind() != GridKind::cartesian2d) assemble_tridiagonal();
    }

    Field solve(const Field& b) const {
        if (grid_->kind() == GridKind::cartesian2d) return solve_cg(b);
        return solve_tridiagonal(b);
    }

  private:
    std::shared_ptr<const Grid> grid_;
    double v_inf_;
    std::vector<double> sub_, dia_, sup_;

    void assemble_tridiagonal() {
        std::size_t n = grid_->size();
        double h = grid_->spacing();
        double h2 = h * h;
        sub_.assign(n, 0.0);
        sup_.assign(n, 0.0);
        dia_.assign(n, 0.0);
        if (grid_->kind() == GridKind::line1d) {
            for (std::size_t i = 0; i < n; ++i) {
                dia_[i] = 2.0 / h2 + v_inf_;
                if (i > 0) sub_[i] = -1.0 / h2;
                if (i + 1 < n) sup_[i] = -1.0 / h2;
            }
        } else {
            int N = grid_->dim();
            double omega = grid_->sphere_factor();
            for (std::size_t i = 0; i < n; ++i) {
                double al = (i > 0) ? pow_int(static_cast<double>(i) * h, N - 1) : 0.0;
                double ar = pow_int(static_cast<double>(i + 1) * h, N - 1);
                double vt = grid_->weight(i) / (omega * h);
                dia_[i] = (al + ar) / (h2 * vt) + v_inf_;
                if (i > 0) sub_[i] = -al / (h2 * vt);
                if (i + 1 < n) sup_[i] = -ar / (h2 * vt);
            }
        }
    }

    Field solve_tridiagonal(const Field& b) const {
        std::size_t n = b.size();
        std::vector<double> cp(n), dp(n);
        cp[0] = sup_[0] / dia_[0];
        dp[0] = b[0] / dia_[0];
        for (std::size_t i = 1; i < n; ++i) {
            double m = dia_[i] - sub_[i] * cp[i - 1];
            cp[i] = sup_[i] / m;
            dp[i] = (b[i] - sub_[i] * dp[i - 1]) / m;
        }
        Field x(b.grid_ptr());
        x[n - 1] = dp[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
        return x;
    }

    Field apply(const Field& z) const {
        Field out = laplacian(z);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = -out[i] + v_inf_ * z[i];
        return out;
    }

    Field solve_cg(const Field& b) const {
        // plain conjugate gradient on the symmetric stencil
        Field x(b.grid_ptr());
        Field r = b;
        Field p = r;
        auto dot = [](const Field& a, const Field& c) {
            double s = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * c[i];
            return s;
        };
        double rs = dot(r, r);
        double b0 = std::sqrt(dot(b, b));
        if (b0 == 0.0) return x;
        for (int it = 0; it < 600; ++it) {
            Field ap = apply(p);
            double alpha = rs / dot(p, ap);
            for (std::size_t i = 0; i < x.size(); ++i) {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            double rs2 = dot(r, r);
            if (std::sqrt(rs2) <= 1e-11 * b0) break;
            double beta = rs2 / rs;
            for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * p[i];
            rs = rs2;
        }
        return x;
    }
};

Field initial_guess(const ProblemSpec& spec, const SolveOptions& opts) {
    if (opts.init_profile == InitProfile::user) {
        if (!opts.init_field) throw invalid_parameter("user init profile requires init_field");
        if (opts.init_field->grid_ptr() != spec.grid)
            throw grid_mismatch("init field lives on a different grid");
        if (opts.init_field->is_zero()) throw invalid_parameter("init field must be nonzero");
        return *opts.init_field;
    }
    Field u(spec.grid);
    for (std::size_t i = 0; i < u.size(); ++i) {
        double r = spec.grid->radius(i);
        u[i] = (opts.init_profile == InitProfile::gaussian) ? std::exp(-r * r) : 1.0 / std::cosh(r);
    }
    Rng rng(opts.rng_seed);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] *= 1.0 + 0.01 * (2.0 * rng.uniform() - 1.0);
    return u;
}

} // namespace

void SolveOptions::validate() const {
    if (max_iter < 0) throw invalid_parameter("max_iter must be nonnegative");
    if (!(tol_grad > 0.0) || !(tol_residual > 0.0))
        throw invalid_parameter("tolerances must be positive");
    if (!(step_init > 0.0)) throw invalid_parameter("step_init must be positive");
    if (!(armijo_shrink > 0.0 && armijo_shrink < 1.0))
        throw invalid_parameter("armijo_shrink must lie in (0,1)");
    if (!(armijo_slope > 0.0 && armijo_slope < 1.0))
        throw invalid_parameter("armijo_slope must lie in (0,1)");
}

GroundState solve_ground_state(const ProblemSpec& spec, const SolveOptions& opts) {
    opts.validate();
    const auto& p = spec.p;

    Field u = project_to_constraint(initial_guess(spec, opts), p);
    ShiftedInverse precond(spec.grid, spec.V.v_inf);

    double ju = energy(u, spec);
    std::vector<double> energy_hist{ju};
    std::vector<double> defect_hist{std::abs(luxemburg_norm(u, p) - 1.0)};

    double tau = std::min(opts.step_init, 0.5);
    int accepted = 0;
    double res = 0.0, rel = 0.0;
    bool converged = false;

    for (int it = 0;; ++it) {
        Field g = energy_gradient(u, spec);
        Field gi = constraint_gradient(u, p);
        double gin = inner(gi, gi);
        double proj = inner(g, gi) / gin;
        Field gtan(u.grid_ptr());
        for (std::size_t i = 0; i < u.size(); ++i) gtan[i] = g[i] - proj * gi[i];
        double gnorm = norm_l2(g);
        rel = norm_l2(gtan) / std::max(gnorm, 1e-300);

        // Euler-Lagrange residual field at the current multiplier estimate
        double r = rho(u, p);
        Field nl(u.grid_ptr());
        for (std::size_t i = 0; i < u.size(); ++i) {
            double a = std::abs(u[i]);
            nl[i] = (a == 0.0) ? 0.0 : ju * std::pow(a, p.samples[i] - 2.0) * u[i] / r;
        }
        Field resf(u.grid_ptr());
        for (std::size_t i = 0; i < u.size(); ++i) resf[i] = 0.5 * g[i] - nl[i];
        double den = 0.5 * gnorm + norm_l2(nl);
        res = (den == 0.0) ? 0.0 : norm_l2(resf) / den;

        if (rel <= opts.tol_grad && res <= opts.tol_residual) {
            converged = true;
            break;
        }
        if (it >= opts.max_iter) break;

        Field z = precond.solve(resf);
        Field d(u.grid_ptr());
        for (std::size_t i = 0; i < u.size(); ++i) d[i] = -2.0 * z[i];

        // slope of energy(project(u + t d)) at t = 0; the projection removes
        // the normal component <gi,d> u
        double slope = inner(g, d) - inner(gi, d) * inner(g, u);
        if (slope >= 0.0) {
            d = gtan;
            for (std::size_t i = 0; i < d.size(); ++i) d[i] = -d[i];
            slope = -inner(gtan, gtan);
        }

        tau = std::min(tau / opts.armijo_shrink, std::min(opts.step_init, 0.5));
        bool stepped = false;
        Field cand(u.grid_ptr());
        double jc = 0.0;
        for (int back = 0; back < 60; ++back) {
            for (std::size_t i = 0; i < u.size(); ++i) cand[i] = u[i] + tau * d[i];
            if (cand.is_zero()) {
                tau *= opts.armijo_shrink;
                continue;
            }
            cand = project_to_constraint(cand, p);
            jc = energy(cand, spec);
            if (jc <= ju + opts.armijo_slope * tau * slope) {
                stepped = true;
                break;
            }
            tau *= opts.armijo_shrink;
        }
        if (!stepped) break; // line search exhausted at floating-point resolution

        u = cand;
        ju = jc;
        ++accepted;
        energy_hist.push_back(ju);
        defect_hist.push_back(std::abs(luxemburg_norm(u, p) - 1.0));
    }

    // sign normalization: the modulus of a minimizer is a minimizer
    double mn = u[0], mx = u[0];
    for (double v : u.values()) {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    if (-mn > mx) {
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = -u[i];
    }

    double lambda = energy(u, spec);
    GroundState gs{std::move(u), lambda,    accepted, res, 0.0, converged,
                   std::move(energy_hist), std::move(defect_hist)};
    gs.constraint_defect = std::abs(luxemburg_norm(gs.w, p) - 1.0);
    gs.residual = euler_lagrange_residual(gs.w, lambda, spec);
    gs.converged = converged && gs.residual <= opts.tol_residual && gs.constraint_defect <= 1e-9;
    return gs;
}

GroundState solve_limit_problem(double p_inf, double v_inf, std::shared_ptr<const Grid> grid,
                                const SolveOptions& opts) {
    if (!grid) throw invalid_parameter("limit problem requires a grid");
    if (!(v_inf > 0.0)) throw invalid_parameter("limit potential must be positive");
    Field pf(grid), vf(grid);
    for (std::size_t i = 0; i < grid->size(); ++i) {
        pf[i] = p_inf;
        vf[i] = v_inf;
    }
    auto spec = ProblemSpec::make(grid, Exponent::make(std::move(pf), p_inf),
                                  Potential::make(std::move(vf), v_inf));
    return solve_ground_state(spec, opts);
}

namespace {

struct OdeState {
    double w, v;
};

} // namespace

double shooting_oracle(double p_inf, double v_inf, int dim) {
    if (dim < 1 || dim > 3) throw invalid_parameter("shooting oracle supports dim in {1,2,3}");
    if (!(v_inf > 0.0)) throw invalid_parameter("limit potential must be positive");
    if (!(p_inf > 2.0) || !(p_inf < two_star(dim)))
        throw invalid_parameter("limit exponent must lie in (2, 2*)");

    const double q = p_inf;
    const double h = 1e-3;
    const double r_max = 40.0 / std::sqrt(std::min(1.0, v_inf));

    auto rhs = [&](double r, OdeState y) {
        double damp = (dim > 1 && r > 0.0) ? -(dim - 1) / r * y.v : 0.0;
        double a = std::abs(y.w);
        double nl = (a == 0.0) ? 0.0 : std::pow(a, q - 2.0) * y.w;
        return OdeState{y.v, damp + v_inf * y.w - nl};
    };

    // integrate from the series start near r=0; record the trajectory
    auto integrate = [&](double s, std::vector<double>* tr, std::vector<double>* tw,
                         std::vector<double>* tv) {
        double wpp0 = (v_inf * s - std::pow(s, q - 1.0)) / dim;
        double r0 = 1e-6;
        OdeState y{s + 0.5 * wpp0 * r0 * r0, wpp0 * r0};
        double r = r0;
        if (tr) {
            tr->push_back(0.0);
            tw->push_back(s);
            tv->push_back(0.0);
        }
        int outcome = 0; // +1 crossed zero, -1 turned upward
        while (r < r_max) {
            OdeState k1 = rhs(r, y);
            OdeState k2 = rhs(r + 0.5 * h, {y.w + 0.5 * h * k1.w, y.v + 0.5 * h * k1.v});
            OdeState k3 = rhs(r + 0.5 * h, {y.w + 0.5 * h * k2.w, y.v + 0.5 * h * k2.v});
            OdeState k4 = rhs(r + h, {y.w + h * k3.w, y.v + h * k3.v});
            y.w += h / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w);
            y.v += h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
            r += h;
            if (y.w <= 0.0) {
                outcome = +1;
                break;
            }
            if (y.v > 0.0) {
                outcome = -1;
                break;
            }
            if (tr) {
                tr->push_back(r);
                tw->push_back(y.w);
                tv->push_back(y.v);
            }
        }
        if (outcome == 0) outcome = -1; // fully decayed without event: undershoot side
        return outcome;
    };

    double s_lo = 0.1, s_hi = 1.0;
    int guard = 0;
    while (integrate(s_hi, nullptr, nullptr, nullptr) < 0) {
        s_hi *= 2.0;
        if (++guard > 200) throw numeric_failure("shooting bracket expansion failed");
    }
    while (integrate(s_lo, nullptr, nullptr, nullptr) > 0) {
        s_lo *= 0.5;
        if (++guard > 400) throw numeric_failure("shooting bracket expansion failed");
    }
    for (int it = 0; it < 300; ++it) {
        double mid = 0.5 * (s_lo + s_hi);
        if (mid <= s_lo || mid >= s_hi) break;
        if (integrate(mid, nullptr, nullptr, nullptr) > 0)
            s_hi = mid;
        else
            s_lo = mid;
        if (s_hi - s_lo <= 1e-14 * s_hi) break;
    }
    double s = 0.5 * (s_lo + s_hi);

    std::vector<double> tr, tw, tv;
    integrate(s, &tr, &tw, &tv);
    if (tr.size() < 10) throw numeric_failure("shooting trajectory degenerate");

    // trapezoid quadrature of the profile with the surface measure
    double omega = (dim == 1) ? 2.0 : (dim == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi);
    auto trapz = [&](auto f) {
        double s2 = 0.0;
        for (std::size_t i = 0; i + 1 < tr.size(); ++i)
            s2 += 0.5 * (f(i) + f(i + 1)) * (tr[i + 1] - tr[i]);
        return s2;
    };
    auto meas = [&](std::size_t i) { return omega * pow_int(tr[i], dim - 1); };
    double jval = trapz([&](std::size_t i) { return (tv[i] * tv[i] + v_inf * tw[i] * tw[i]) * meas(i); });
    double rho_val = trapz([&](std::size_t i) { return std::pow(std::abs(tw[i]), q) * meas(i); });
    if (!(rho_val > 0.0)) throw numeric_failure("shooting profile has no mass");
    double norm = std::pow(rho_val / q, 1.0 / q);
    return jval / (norm * norm);
}

} // namespace vxgs
