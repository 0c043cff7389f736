#pragma once

// Seeded random grammars with |lhs| + |rhs| <= 2 on every rule, plus an
// independent oracle for their (finite) language.

#include <cctype>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace test {

struct SmallGrammar {
  std::string text;
  /// Words written as strings; "" is the empty word.
  std::set<std::string> language;
};

inline SmallGrammar random_small_grammar(std::mt19937& rng) {
  const std::vector<std::string> nts = {"S", "A", "B", "C"};
  const std::vector<std::string> ts = {"a", "b"};
  auto pick = [&](const std::vector<std::string>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
  };

  struct Rule {
    std::string lhs, rhs;
  };
  std::vector<Rule> rules;
  std::size_t n = std::uniform_int_distribution<std::size_t>(1, 7)(rng);
  for (std::size_t k = 0; k < n; ++k) {
    switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
      case 0: rules.push_back({pick(nts), "@eps"}); break;
      case 1: rules.push_back({pick(nts), pick(nts)}); break;
      case 2: rules.push_back({pick(nts), pick(ts)}); break;
      default: rules.push_back({pick(nts) + " " + pick(nts), "@eps"}); break;
    }
  }

  SmallGrammar out;
  out.text = "@start S\n@nonterminals S A B C\n@terminals a b\n";
  for (const Rule& r : rules) out.text += r.lhs + " -> " + r.rhs + "\n";

  // Forms never grow past one symbol, so two-symbol left sides never fire.
  std::set<std::string> reach = {"S"};
  for (bool grew = true; grew;) {
    grew = false;
    for (const Rule& r : rules)
      if (reach.count(r.lhs) && r.rhs.size() == 1 && std::isupper(static_cast<unsigned char>(r.rhs[0])))
        grew = reach.insert(r.rhs).second || grew;
  }
  for (const Rule& r : rules) {
    if (!reach.count(r.lhs)) continue;
    if (r.rhs == "@eps") out.language.insert("");
    else if (std::islower(static_cast<unsigned char>(r.rhs[0]))) out.language.insert(r.rhs);
  }
  return out;
}

}  // namespace test
