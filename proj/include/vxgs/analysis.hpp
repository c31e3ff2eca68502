#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vxgs/expr.hpp"
#include "vxgs/solver.hpp"

namespace vxgs {

/// Radially nondecreasing decay profile psi for trial fields exp(-psi(|x|)).
struct TrialSpec {
    Expr psi;
    double R; // radius beyond which the decay condition is imposed
    double a; // strength of the exponent depression

    /// Checks psi is nondecreasing beyond R on the grid nodes and that
    /// exp(-psi(|x|)) has finite discrete H1 energy.
    void validate(const Grid& g) const;
};

/// Outcome of the existence-criterion comparison.
struct CriterionReport {
    double lambda1_upper = 0.0; // best energy over the trial battery
    double lambda_solver = 0.0; // the solver's converged value (part of the battery)
    double lambda1_inf = 0.0;   // limit-problem level on the same grid
    double threshold = 0.0;     // (p_minus / p_inf)^{2/p_inf} * lambda1_inf
    double margin = 0.0;        // threshold - lambda1_upper
    bool strict = false;        // lambda1_upper < threshold (up to a 1e-8 relative tie band)
    bool authoritative = false; // both solves converged
    std::vector<std::pair<std::string, double>> trials; // labeled battery values
};

/// The threshold value (p_minus / p_inf)^{2/p_inf} * lambda1_inf.
double threshold(double p_minus, double p_inf, double lambda1_inf);

/// Solve the problem and its limit problem, assemble the trial battery
/// (solver output, translated limit minimizer, exp(-psi) trials) and compare
/// the best upper bound against the threshold.
CriterionReport check_criterion(const ProblemSpec& spec, const SolveOptions& opts);

/// Energy of the normalized trial field exp(-psi(|x|)):
/// J(g) / I(g)^2, an upper bound for the ground-state level.
double trial_upper_bound(const TrialSpec& trial, const ProblemSpec& spec);

/// Lower bound for the modular of the trial field:
/// e^a * integral over |x| > R of exp(-p_inf psi(|x|)).
double rho_lower_bound(const TrialSpec& trial, double p_inf, const Grid& grid);

struct MinAScanOptions {
    double a0 = 0.25;    // scan floor
    double a_max = 64.0; // scan ceiling
    double p_floor = 2.1; // clamp keeping the exponent above 2
};

struct MinAResult {
    bool found;
    double a; // smallest scanned/refined strength with a strict criterion
    CriterionReport report; // criterion report at that strength
    std::vector<std::pair<double, bool>> probes; // (a, strict) in evaluation order
};

/// Scan the family p_a(x) = clamp(p_inf - a / psi(|x|)) over a geometric
/// ladder {a0 * 2^k}, find the smallest a whose criterion is strict, and
/// refine it by bisection to two digits.
MinAResult find_min_a(const Expr& psi, double R, double p_inf, const Potential& V,
                      const std::shared_ptr<const Grid>& grid, const SolveOptions& opts,
                      const MinAScanOptions& scan);

/// Exponent family member used by find_min_a (exposed for tests and the CLI):
/// p(x) = max(p_floor, min(p_inf, p_inf - a / psi(|x|))), with the clamp floor
/// applied wherever psi is nonpositive.
Exponent depressed_exponent(const Expr& psi, double a, double p_inf, double p_floor,
                            const std::shared_ptr<const Grid>& grid);

struct TranslationRow {
    std::vector<double> shift;
    double shift_norm;
    double rho_val;    // modular of the shifted field
    double lux_val;    // Luxemburg norm of the shifted field
    double energy_val; // energy of the shifted field
};

struct TranslationTable {
    std::vector<TranslationRow> rows;
    double rho_limit;    // constant-exponent modular of the unshifted field
    double lux_limit;    // constant-exponent norm of the unshifted field
    double energy_limit; // energy with the limit potential
};

/// Evaluate the modular, norm and energy along a family of translates and
/// report them next to their autonomous limits.
TranslationTable translation_experiment(const Field& u, const Exponent& p, const Potential& V,
                                        const std::vector<std::vector<double>>& shifts);

struct AxisReport {
    double angle;               // polar angle of the best axis in [0, pi)
    std::array<double, 2> axis; // unit vector along the best axis
    double defect;              // relative L2 asymmetry about that axis
};

/// Relative L2 defect between w and its reflection average across the line
/// through the origin with the given direction. Axes aligned with the grid
/// (multiples of 45 degrees) are reflected exactly by index permutation;
/// other axes use bilinear interpolation on the inscribed disk.
double axial_defect(const Field& w, const std::array<double, 2>& axis);

/// Find the axis minimizing the reflection defect. With an empty candidate
/// list, scans 64 directions and refines the best by golden-section search.
AxisReport axial_symmetry_defect(const Field& w,
                                 const std::vector<std::array<double, 2>>& candidate_axes);

} // namespace vxgs
