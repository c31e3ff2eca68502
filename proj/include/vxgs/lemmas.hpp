#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vxgs/varexp.hpp"

namespace vxgs {

struct LemmaCheck {
    std::string name;
    bool pass;
    double worst; // worst normalized violation (negative when comfortably inside)
};

/// Quantitative checks of the norm estimates on seeded random fields:
///   modular-vs-norm sandwich, unit modular at the norm, the two sigma
///   estimates, their constant-exponent specializations, and the three
///   translation limits (the latter only on translatable grids).
/// fields_per_family random fields are drawn for each built-in exponent
/// family around p_inf; inequality checks use a 1e-9 relative slack.
std::vector<LemmaCheck> verify_lemmas(const std::shared_ptr<const Grid>& grid, double p_inf,
                                      int fields_per_family, std::uint64_t seed);

/// Seeded random bump-sum field (shared by the lemma battery and the tests).
Field random_bump_field(const std::shared_ptr<const Grid>& grid, std::uint64_t seed);

/// The built-in exponent families around p_inf used by the battery.
std::vector<Exponent> lemma_exponent_families(const std::shared_ptr<const Grid>& grid,
                                              double p_inf);

} // namespace vxgs
