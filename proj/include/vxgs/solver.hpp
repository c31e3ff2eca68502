#pragma once

#include <cstdint>
#include <optional>

#include "vxgs/energy.hpp"

namespace vxgs {

enum class InitProfile { gaussian, soliton_guess, user };

struct SolveOptions {
    int max_iter = 2000;
    double tol_grad = 1e-5;      // relative norm of the tangential energy gradient
    double tol_residual = 1e-6;  // target Euler-Lagrange residual
    double step_init = 0.5;
    double armijo_shrink = 0.5;
    double armijo_slope = 1e-4;
    InitProfile init_profile = InitProfile::gaussian;
    std::optional<Field> init_field; // required when init_profile == user
    std::uint64_t rng_seed = 0;

    void validate() const;
};

struct GroundState {
    Field w;
    double lambda;            // energy of w, the multiplier of the critical point
    int iterations;           // accepted descent steps
    double residual;          // relative Euler-Lagrange residual at w
    double constraint_defect; // |I(w) - 1|
    bool converged;
    std::vector<double> energy_history; // energy at the initial point and after each accepted step
    std::vector<double> defect_history; // |I - 1| at the same points
};

/// Minimize the energy over the Luxemburg-norm constraint manifold by damped
/// preconditioned descent: the step direction is the (-lap + V_inf)-solve of
/// the Euler-Lagrange residual, the step is accepted by Armijo backtracking
/// on energy-after-projection, and every iterate is projected back onto the
/// manifold. Non-convergence is reported in the result, never thrown.
GroundState solve_ground_state(const ProblemSpec& spec, const SolveOptions& opts);

/// The autonomous problem p = p_inf, V = v_inf on the given grid.
GroundState solve_limit_problem(double p_inf, double v_inf, std::shared_ptr<const Grid> grid,
                                const SolveOptions& opts);

/// Independent value of the limit ground-state level: solves the radial ODE
/// -w'' - (dim-1)/r w' + v_inf w = w^{p_inf-1} by amplitude shooting with a
/// classical 4th-order stepper and returns the energy of the normalized
/// profile.
double shooting_oracle(double p_inf, double v_inf, int dim);

} // namespace vxgs
