#pragma once

#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "asnf/grammar.hpp"
#include "asnf/grammar_io.hpp"
#include "asnf/search.hpp"

namespace test {

inline asnf::Grammar gr(std::string_view text) { return asnf::parse_grammar(text); }

inline asnf::Grammar corpus(const std::string& name) {
  std::ifstream in(std::string(ASNF_CORPUS_DIR) + "/" + name + ".gr");
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return asnf::parse_grammar(ss.str());
}

inline asnf::Word word(std::string_view text) {
  std::istringstream is{std::string(text)};
  asnf::Word w;
  for (std::string t; is >> t;) w.push_back(t);
  return w;
}

inline asnf::Production prod(const asnf::Grammar& g, std::string_view lhs, std::string_view rhs) {
  return asnf::Production{g.parse_sequence(lhs), g.parse_sequence(rhs)};
}

inline asnf::SearchBudget budget() { return asnf::SearchBudget{}; }

/// Derivation of `w` in `g`; fails the test when none is found.
inline asnf::Derivation derive(const asnf::Grammar& g, std::string_view w) {
  auto m = asnf::membership(g, word(w), budget());
  REQUIRE(m.verdict == asnf::Verdict::Yes);
  REQUIRE(m.derivation.has_value());
  return *m.derivation;
}

}  // namespace test
