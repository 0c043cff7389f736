#pragma once

#include <optional>
#include <set>
#include <string_view>
#include <utility>

#include <json.hpp>

#include "asnf/grammar.hpp"
#include "asnf/search.hpp"

namespace asnf {

enum class EquivStatus { EquivalentUpToBound, Counterexample, Inconclusive };

std::string_view equiv_status_name(EquivStatus s);

struct EquivVerdict {
  EquivStatus status = EquivStatus::Inconclusive;
  std::size_t bound = 0;
  std::optional<Word> witness;
  /// Whether each side's enumeration is complete up to `bound`.
  std::pair<bool, bool> conclusive_sides{false, false};
  /// Per side, the largest length up to which the enumeration is complete.
  std::pair<long, long> conclusive_upto{-1, -1};
  std::pair<std::size_t, std::size_t> word_counts{0, 0};
};

/// Compares the languages of g1 and g2 on words of length <= max_len. A
/// counterexample is reported only for a length both sides are complete on;
/// the shortest, then lexicographically least, differing word is chosen.
/// Throws ALPHABET_MISMATCH when the terminal names differ.
EquivVerdict bounded_equiv(const Grammar& g1, const Grammar& g2, std::size_t max_len, const SearchBudget& budget);

nlohmann::json equiv_to_json(const EquivVerdict& v);

struct FiniteLanguageReport {
  /// Every production has |lhs| + |rhs| <= 2.
  bool shape_ok = false;
  std::set<Word, ShortLex> language;
  /// Every word has length <= 1.
  bool all_short = false;
  /// Exploration finished inside the budget.
  bool terminated = false;
  std::size_t forms_visited = 0;
};

/// For grammars with |lhs| + |rhs| <= 2 everywhere no rule lengthens a form,
/// so every reachable form has length <= 1 and the exploration is finite.
FiniteLanguageReport minimality_check(const Grammar& g, const SearchBudget& budget);

nlohmann::json minimality_to_json(const FiniteLanguageReport& r);

}  // namespace asnf
