#pragma once

#include <cstddef>
#include <set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "asnf/derivation.hpp"
#include "asnf/grammar.hpp"

namespace asnf {

/// Splits `d` around the segment μ = d.start[lo, hi) into a derivation of
/// the part left of μ and one of the part right of it. Throws
/// SEGMENT_REWRITTEN when some step touches μ.
std::pair<Derivation, Derivation> factorize_derivation(const Derivation& d, std::size_t lo, std::size_t hi);

/// Reorders `d` so that all TERMINAL steps form a suffix, by swapping a
/// TERMINAL step with the non-TERMINAL step after it until none is left.
/// Throws SHAPE_VIOLATION when `g` has a rule that is neither α→β over
/// nonterminals nor A→a.
Derivation postpone_terminals(const Grammar& g, const Derivation& d);

struct PhaseReport {
  /// Steps [0, i) are phase 1, [i, j) phase 2, [j, end) phase 3.
  std::size_t i = 0;
  std::size_t j = 0;
  std::set<RuleKind> phase1_kinds;
  std::set<RuleKind> phase2_kinds;
  std::set<RuleKind> phase3_kinds;
  std::vector<std::size_t> length_profile;
};

nlohmann::json phase_report_to_json(const PhaseReport& r);

/// Grow, then shrink, then terminal rewriting. `g` must be in Strong-Savitch
/// or Strong-GEN-ASNF form; throws FORM_VIOLATION otherwise or when the
/// derivation cannot be phased, and CAP_EXCEEDED if the swap loop runs past
/// 10·steps² swaps.
std::pair<Derivation, PhaseReport> grow_shrink_reorder(const Grammar& g, const Derivation& d);

/// Shortens the swap cap; exposed for tests only.
void set_swap_cap_factor_for_testing(std::size_t factor);

}  // namespace asnf
