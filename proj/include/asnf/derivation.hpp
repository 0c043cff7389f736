#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "asnf/grammar.hpp"

namespace asnf {

using SententialForm = Sequence;

/// One rewrite: `production.lhs` occurs at `position` in the form before the
/// step and is spliced out for `production.rhs`.
struct DerivationStep {
  std::size_t position;
  Production production;

  friend bool operator==(const DerivationStep&, const DerivationStep&) = default;
};

struct Derivation {
  SententialForm start;
  std::vector<DerivationStep> steps;

  friend bool operator==(const Derivation&, const Derivation&) = default;
};

struct DerivationCheck {
  bool valid = false;
  std::optional<std::size_t> failed_step;
  std::string message;
  SententialForm final_form;
};

/// Applies a single step, throwing InvalidDerivation when the lhs does not
/// occur at the given position.
SententialForm apply_step(const SententialForm& form, const DerivationStep& step);

/// Replays `d` and checks that every production belongs to `g`.
DerivationCheck validate_derivation(const Grammar& g, const Derivation& d);

/// Replays without a grammar; throws InvalidDerivation on mismatch.
SententialForm replay(const Derivation& d);

/// Form length before the first step and after every step.
std::vector<std::size_t> length_profile(const Derivation& d);

/// Rewrites a context-free derivation into leftmost order (display helper).
Derivation leftmost(const Derivation& d);

nlohmann::json derivation_to_json(const Grammar& g, const Derivation& d);
Derivation derivation_from_json(const nlohmann::json& j, const Grammar& g);

// Occurrence tracking. Every symbol occurrence that ever appears in a
// derivation gets an id; a step consumes a contiguous run of ids and creates
// new ones. Reordering and lifting work on this form and re-serialize, which
// recomputes positions.

using OccId = std::uint32_t;

struct TrackedStep {
  Production production;
  std::vector<OccId> consumed;
  std::vector<OccId> created;
};

struct TrackedDerivation {
  std::vector<OccId> start_ids;
  std::vector<TrackedStep> steps;
  std::vector<SymbolId> occurrence_symbol;

  OccId new_occurrence(SymbolId s) {
    occurrence_symbol.push_back(s);
    return static_cast<OccId>(occurrence_symbol.size() - 1);
  }
  SententialForm start_form() const;
};

TrackedDerivation track(const Derivation& d);

/// Re-serializes the steps in their current order. Each step's consumed
/// ids must be adjacent, in order, in the frontier at that point.
Derivation untrack(const TrackedDerivation& t);

}  // namespace asnf
