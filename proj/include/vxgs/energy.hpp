#pragma once

#include "vxgs/varexp.hpp"

namespace vxgs {

/// The full problem data: grid, variable exponent, potential.
struct ProblemSpec {
    std::shared_ptr<const Grid> grid;
    Exponent p;
    Potential V;

    static ProblemSpec make(std::shared_ptr<const Grid> grid, Exponent p, Potential V);
};

/// Energy: discrete Dirichlet form of u plus quadrature of V u^2.
double energy(const Field& u, const ProblemSpec& spec);

/// Energy with the constant limit potential.
double energy_limit(const Field& u, double v_inf);

/// Weighted-inner-product representer of the energy's first variation,
/// 2(-laplacian(u) + V u).
Field energy_gradient(const Field& u, const ProblemSpec& spec);

/// Representer of the Luxemburg norm's first variation,
/// |u/I|^{p-2}(u/I) / rho(u/I) with I the Luxemburg norm of u.
Field constraint_gradient(const Field& u, const Exponent& p);

/// u scaled onto the constraint manifold {I(u) = 1}.
Field project_to_constraint(const Field& u, const Exponent& p);

/// Relative Euler-Lagrange residual:
/// || -lap u + V u - lambda |u|^{p-2} u / rho(u) ||_w divided by
/// (|| -lap u + V u ||_w + || lambda |u|^{p-2} u / rho(u) ||_w).
double euler_lagrange_residual(const Field& u, double lambda, const ProblemSpec& spec);

} // namespace vxgs
