#include "vxgs/energy.hpp"

#include <cmath>

namespace vxgs {

ProblemSpec ProblemSpec::make(std::shared_ptr<const Grid> grid, Exponent p, Potential V) {
    if (!grid) throw invalid_parameter("problem requires a grid");
    if (p.samples.grid_ptr() != grid || V.samples.grid_ptr() != grid)
        throw grid_mismatch("exponent and potential must live on the problem grid");
    return ProblemSpec{std::move(grid), std::move(p), std::move(V)};
}

double energy(const Field& u, const ProblemSpec& spec) {
    require_same_grid(u, spec.V.samples);
    double quad = dirichlet_form(u, u);
    const auto& w = u.grid().weights();
    double c = 0.0, s = 0.0; // compensated
    for (std::size_t i = 0; i < w.size(); ++i) {
        double x = w[i] * spec.V.samples[i] * u[i] * u[i] - c;
        double t = s + x;
        c = (t - s) - x;
        s = t;
    }
    return quad + s;
}

double energy_limit(const Field& u, double v_inf) {
    if (!(v_inf > 0.0)) throw invalid_parameter("limit potential must be positive");
    return dirichlet_form(u, u) + v_inf * inner(u, u);
}

Field energy_gradient(const Field& u, const ProblemSpec& spec) {
    require_same_grid(u, spec.V.samples);
    Field g = laplacian(u);
    for (std::size_t i = 0; i < g.size(); ++i)
        g[i] = 2.0 * (-g[i] + spec.V.samples[i] * u[i]);
    return g;
}

Field constraint_gradient(const Field& u, const Exponent& p) {
    require_same_grid(u, p.samples);
    if (u.is_zero()) throw undefined_gradient("Luxemburg norm gradient is undefined at zero");
    double I = luxemburg_norm(u, p);
    Field scaled(u.grid_ptr());
    for (std::size_t i = 0; i < u.size(); ++i) scaled[i] = u[i] / I;
    double den = rho(scaled, p);
    Field g(u.grid_ptr());
    for (std::size_t i = 0; i < u.size(); ++i) {
        double a = std::abs(scaled[i]);
        g[i] = (a == 0.0) ? 0.0 : std::pow(a, p.samples[i] - 2.0) * scaled[i] / den;
    }
    return g;
}

Field project_to_constraint(const Field& u, const Exponent& p) {
    if (u.is_zero()) throw invalid_parameter("cannot project the zero field onto the manifold");
    double I = luxemburg_norm(u, p);
    Field out(u.grid_ptr());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] / I;
    return out;
}

double euler_lagrange_residual(const Field& u, double lambda, const ProblemSpec& spec) {
    require_same_grid(u, spec.V.samples);
    if (u.is_zero()) throw invalid_parameter("residual undefined for the zero field");
    double r = rho(u, spec.p);
    Field lin = laplacian(u);
    Field nonlin(u.grid_ptr());
    for (std::size_t i = 0; i < u.size(); ++i) {
        lin[i] = -lin[i] + spec.V.samples[i] * u[i];
        double a = std::abs(u[i]);
        nonlin[i] = (a == 0.0) ? 0.0 : lambda * std::pow(a, spec.p.samples[i] - 2.0) * u[i] / r;
    }
    Field diff(u.grid_ptr());
    for (std::size_t i = 0; i < u.size(); ++i) diff[i] = lin[i] - nonlin[i];
    double den = norm_l2(lin) + norm_l2(nonlin);
    if (den == 0.0) return 0.0;
    return norm_l2(diff) / den;
}

} // namespace vxgs
