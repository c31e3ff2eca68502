#pragma once

#include "vxgs/grid.hpp"

namespace vxgs {

/// Critical Sobolev exponent 2N/(N-2) for N >= 3, +infinity below.
double two_star(int dim);

/// Variable exponent p(.) with its extremes and limit at infinity.
/// Valid exponents satisfy 2 < p_minus <= p(x) <= p_plus < 2*.
struct Exponent {
    Field samples;
    double p_minus;
    double p_plus;
    double p_inf;

    /// Validates the bounds and the tail closeness |p - p_inf| <= tail_tol
    /// on nodes with |x| >= 0.9 * truncation radius.
    static Exponent make(Field samples, double p_inf, double tail_tol = 0.05);
};

/// Bounded potential V(.) with positive limit at infinity.
struct Potential {
    Field samples;
    double v_inf;

    static Potential make(Field samples, double v_inf, double tail_tol = 0.05);
};

/// Modular: quadrature of |u|^{p(x)}.
double rho(const Field& u, const Exponent& p);

/// Quadrature of |u/gamma|^{p(x)} / p(x); strictly decreasing in gamma.
double weighted_modular(const Field& u, const Exponent& p, double gamma);

/// The modified Luxemburg norm: the gamma at which the weighted modular
/// equals one, found by bracketed bisection (absolute tolerance 1e-12 on
/// gamma, plus one Newton refinement inside the bracket). Returns 0 for the
/// zero field.
double luxemburg_norm(const Field& u, const Exponent& p);

/// max(||u||^{p_minus - 1}, ||u||^{p_plus - 1}) with the Luxemburg norm.
double sigma(const Field& u, const Exponent& p);

/// Constant-exponent modular, quadrature of |u|^{p_inf}.
double rho_inf(const Field& u, double p_inf);

/// Constant-exponent norm (rho_inf/p_inf)^{1/p_inf}.
double norm_inf(const Field& u, double p_inf);

} // namespace vxgs
