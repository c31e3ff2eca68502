#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "vxgs/analysis.hpp"

namespace vxgs {

/// Configuration or schema problem; maps to exit code 2.
struct config_error : error {
    using error::error;
};

enum class Task {
    solve,
    solve_limit,
    check_criterion,
    trial_bound,
    find_min_a,
    translate_experiment,
    symmetry_defect,
    verify_lemmas,
};

Task task_from_string(std::string_view s);
std::string_view to_string(Task t);

/// A fully validated run description loaded from a JSON config file.
struct RunConfig {
    Task task;

    // grid block
    int dim = 1;
    GridKind kind = GridKind::line1d;
    double r_dom = 20.0;
    double h = 0.01;

    // exponent block
    std::string p_expr = "4";
    double p_inf = 4.0;
    std::optional<double> clamp_floor; // applied pointwise to the sampled exponent
    double tail_tol = 0.05;

    // potential block
    std::string v_expr = "1";
    double v_inf = 1.0;

    SolveOptions solver;

    // trial block (trial-bound, find-min-a)
    std::string psi_expr = "r";
    double trial_r = 1.0;
    double trial_a = 0.0;

    MinAScanOptions scan;

    // translate-experiment block: offsets, one entry per shift
    std::vector<std::vector<double>> shifts;

    // symmetry-defect block: candidate axes (empty = scan)
    std::vector<std::array<double, 2>> axes;

    // verify-lemmas block
    int lemma_fields = 200; // random fields per family

    std::string out_dir = "out";
    bool quiet = false;
};

/// Parse and validate a config file; every error names the offending key.
RunConfig load_config(const std::filesystem::path& path);

/// Execute the configured task, writing the profile/summary CSV files and a
/// plain-text report into the output directory.
/// Exit status: 0 success, 2 validation failure, 3 solver non-convergence,
/// 4 oracle or criterion failure.
int run(const RunConfig& config);

} // namespace vxgs
