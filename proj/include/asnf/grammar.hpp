#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "asnf/error.hpp"

namespace asnf {

using SymbolId = std::uint32_t;

enum class SymbolKind : std::uint8_t { Terminal, NonTerminal };

struct Symbol {
  SymbolId id;
  SymbolKind kind;
  std::string name;
};

/// A string over N ∪ T. The empty sequence is ε.
using Sequence = std::vector<SymbolId>;

struct Production {
  Sequence lhs;
  Sequence rhs;

  friend bool operator==(const Production&, const Production&) = default;
  friend auto operator<=>(const Production&, const Production&) = default;
};

struct SequenceHash {
  std::size_t operator()(const Sequence& s) const noexcept;
};

struct ProductionHash {
  std::size_t operator()(const Production& p) const noexcept;
};

enum class GrammarClass { REG, CFG, CSG, GG };

enum class RuleKind { REN, SS, TERMINAL, RSS, ANNIHILATE2, EPSILON, OTHER };

std::string_view grammar_class_name(GrammarClass c);
std::string_view rule_kind_name(RuleKind k);

/// A generative grammar (N, T, S, R).
///
/// Symbols are interned once and never renumbered, so a grammar derived from
/// another one by adding symbols keeps every existing SymbolId valid. The
/// transforms and derivation lifting rely on this.
class Grammar {
 public:
  Grammar() = default;

  /// Registers a symbol, or returns the existing id when the name is already
  /// registered with the same kind. Throws KindConflict otherwise.
  SymbolId add_symbol(std::string_view name, SymbolKind kind);
  SymbolId add_terminal(std::string_view name) { return add_symbol(name, SymbolKind::Terminal); }
  SymbolId add_nonterminal(std::string_view name) {
    return add_symbol(name, SymbolKind::NonTerminal);
  }

  std::optional<SymbolId> find(std::string_view name) const;
  SymbolId require(std::string_view name) const;

  const Symbol& symbol(SymbolId id) const { return symbols_.at(id); }
  const std::string& name(SymbolId id) const { return symbols_.at(id).name; }
  bool is_terminal(SymbolId id) const { return symbols_.at(id).kind == SymbolKind::Terminal; }
  bool is_nonterminal(SymbolId id) const { return !is_terminal(id); }
  std::size_t symbol_count() const { return symbols_.size(); }
  std::span<const Symbol> symbols() const { return symbols_; }

  /// Ids in registration order.
  std::vector<SymbolId> nonterminals() const;
  std::vector<SymbolId> terminals() const;

  bool has_start() const { return start_.has_value(); }
  SymbolId start() const;
  void set_start(SymbolId id);

  const std::vector<Production>& productions() const { return productions_; }
  /// Appends a production after checking the well-formedness invariants.
  void add_production(Production p);
  void set_productions(std::vector<Production> ps);
  bool contains(const Production& p) const;

  /// `@eps-free` annotation: the author asserts ε ∉ L(G).
  bool eps_free_annotated() const { return eps_free_; }
  void set_eps_free_annotated(bool v) { eps_free_ = v; }

  std::string format(const Sequence& s) const;
  std::string format(const Production& p) const;
  Sequence parse_sequence(std::string_view text) const;

  std::vector<std::string> names(const Sequence& s) const;

  /// Structural equality: same symbol tables by name and kind, same start,
  /// same production list (order included) and annotation.
  friend bool operator==(const Grammar& a, const Grammar& b);

 private:
  void check_production(const Production& p) const;

  std::vector<Symbol> symbols_;
  std::unordered_map<std::string, SymbolId> by_name_;
  std::optional<SymbolId> start_;
  std::vector<Production> productions_;
  bool eps_free_ = false;
};

bool is_valid_symbol_name(std::string_view name);

RuleKind classify_production(const Production& p, const Grammar& g);
GrammarClass classify_grammar(const Grammar& g);

bool is_context_free(const Grammar& g);
/// True when no production shortens a sentential form.
bool is_noncontracting(const Grammar& g);
/// Non-contracting apart from S→ε with S in no right-hand side. That rule can
/// only fire on the form "S", so every other form still never shrinks.
bool is_noncontracting_but_start_eps(const Grammar& g);
bool has_terminal_in_lhs(const Grammar& g);

/// A→A productions: legal, but dropped by graph construction and transforms.
std::vector<Production> lint_self_renamings(const Grammar& g);

}  // namespace asnf
