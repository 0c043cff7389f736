#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "asnf/grammar.hpp"

namespace asnf {

/// Reads the line-oriented grammar format:
///
///   # comment
///   @start S
///   @nonterminals A B        (optional, overrides inference)
///   @terminals x y           (optional, overrides inference)
///   @eps-free                (optional annotation)
///   A B -> C | x A | @eps
///
/// Undeclared symbols are nonterminals when their first character is an
/// uppercase letter and terminals otherwise. The start symbol is always a
/// nonterminal.
Grammar parse_grammar(std::string_view text);

/// Canonical text form; parse_grammar(serialize_grammar(g)) == g.
std::string serialize_grammar(const Grammar& g);

nlohmann::json grammar_to_json(const Grammar& g);

}  // namespace asnf
