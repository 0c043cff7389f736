#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "asnf/derivation.hpp"
#include "asnf/grammar.hpp"

namespace asnf {

struct SearchBudget {
  std::size_t max_form_length = 24;
  std::size_t max_steps = 10000;
  std::size_t max_visited = 200000;

  /// Defaults multiplied by ASNF_BUDGET_SCALE when that variable is set.
  static SearchBudget from_environment();
  SearchBudget scaled(double factor) const;
};

inline constexpr std::size_t kDefaultMaxLen = 6;

/// A terminal word by symbol name, so words of different grammars compare.
using Word = std::vector<std::string>;

/// Shorter words first, then lexicographic by name.
struct ShortLex {
  bool operator()(const Word& a, const Word& b) const;
};

std::string format_word(const Word& w);

/// Integer symbol weights such that no production lowers the total weight
/// of a form and every terminal weighs at most one. The total weight of a
/// form is therefore a lower bound on the length of any word it derives.
struct WeightPotential {
  std::vector<std::size_t> weight;
  std::size_t of(const Sequence& form) const;
};

/// `cap` is the starting weight of nonterminals; weights only decrease from
/// there until every production is satisfied.
WeightPotential compute_potential(const Grammar& g, std::size_t cap);

struct EnumerationResult {
  std::set<Word, ShortLex> words;
  /// True when every word of length <= max_len has been found.
  bool conclusive = false;
  /// Largest length up to which the result is complete; -1 when nothing is.
  long conclusive_upto = -1;
  std::size_t visited = 0;
  /// "table" or "search".
  std::string method;
};

/// Exact for context-free grammars (language table); breadth-first search
/// over sentential forms otherwise.
EnumerationResult bounded_enumerate(const Grammar& g, std::size_t max_len, const SearchBudget& budget);

/// Breadth-first search over sentential forms from the start symbol, for any
/// grammar.
EnumerationResult search_enumerate(const Grammar& g, std::size_t max_len, const SearchBudget& budget);

enum class Verdict { Yes, No, Unknown };

std::string_view verdict_name(Verdict v);

struct MembershipResult {
  Verdict verdict = Verdict::Unknown;
  std::optional<Derivation> derivation;
  /// "cyk" or "search".
  std::string method;
};

/// REN/SS/TERMINAL rules only, apart from an ε-exemption pair.
bool is_asnf_cfg(const Grammar& g);

/// Every word of length <= max_len each nonterminal of a context-free grammar
/// derives, with one back-pointer per entry. Entries are added in rounds, so
/// an entry's children always predate it and derivation extraction is
/// well-founded even with ε-rules and renaming cycles.
class CfgTable {
 public:
  /// Throws NOT_CONTEXT_FREE.
  CfgTable(const Grammar& g, std::size_t max_len);
  bool derives(SymbolId a, const Sequence& word) const;
  std::set<Word, ShortLex> language() const;
  /// Leftmost derivation from the start symbol.
  Derivation derivation(const Sequence& word) const;

 private:
  struct Entry {
    std::size_t production;
    std::vector<std::size_t> splits;
  };
  const Grammar& g_;
  std::size_t max_len_;
  std::vector<std::map<Sequence, Entry>> words_;
};

/// CYK when `is_asnf_cfg(g)`, the language table for other context-free
/// grammars, bounded search otherwise.
MembershipResult membership(const Grammar& g, const Sequence& word, const SearchBudget& budget);
MembershipResult cyk_membership(const Grammar& g, const Sequence& word);
MembershipResult table_membership(const Grammar& g, const Sequence& word);
MembershipResult search_membership(const Grammar& g, const Sequence& word, const SearchBudget& budget);

/// Resolves names against `g`. Unknown names make the word underivable
/// (verdict No); nonterminal names raise WORD_HAS_NONTERMINAL.
MembershipResult membership(const Grammar& g, const Word& word, const SearchBudget& budget);

}  // namespace asnf
