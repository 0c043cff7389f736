#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "asnf/grammar.hpp"

namespace asnf {

/// How uses of the productions replaced in one stage are carried over to the
/// output grammar by lift_derivation.
enum class LiftKind {
  /// Each use of `removed` becomes the replacement's macro steps, applied at
  /// offsets relative to the original position. Stage finalizers (proxy
  /// terminal rules X_a→a) run once at the end of the derivation.
  Local,
  /// Uses of self renamings A→A are dropped.
  DropIdentity,
  /// CFG nullable-symbol elimination; lifted through the derivation tree.
  NullableElimination,
  /// Renaming chains A→…→B are folded into the rule that consumes B.
  UnitClosure,
  /// An erasure is replaced by absorbing the erased marker into a neighbour.
  NeighborErase,
  /// A fresh start symbol S'→S is prepended.
  NewStart,
  /// Set-semantics merging of duplicate productions; nothing to lift.
  Merge,
};

std::string_view lift_kind_name(LiftKind k);

struct MacroStep {
  std::size_t offset;
  Production production;
};

struct Replacement {
  std::optional<Production> removed;
  std::vector<Production> added;
  std::size_t stage = 0;
  std::vector<MacroStep> macro;
};

struct FreshSymbol {
  SymbolId id;
  std::string name;
  std::string origin;
  std::vector<std::string> sources;
};

struct TraceStage {
  std::string name;
  LiftKind kind = LiftKind::Local;
  std::vector<Production> finalizers;
  /// NeighborErase, Weak-GEN-ASNF variant: the E→ε rule whose uses are
  /// folded into the renaming that created E.
  std::optional<Production> deferred_eraser;
};

struct TransformTrace {
  std::string transform_id;
  std::vector<FreshSymbol> fresh_symbols;
  std::vector<Replacement> replacements;
  std::vector<TraceStage> stages;
  /// Output start symbol when the transform changed it.
  std::optional<SymbolId> start;
  /// S0→ε added by the ε-Construction.
  std::optional<Production> epsilon_rule;

  /// Concatenates `later` (which must have been produced on this trace's
  /// output) onto this trace.
  void append(const TransformTrace& later);
};

struct TransformResult {
  Grammar grammar;
  TransformTrace trace;
};

/// Applies one replacement to a production list: `removed` is swapped in
/// place for the `added` productions that are not already present; without
/// `removed` the new productions are appended.
void apply_replacement(std::vector<Production>& productions, const Replacement& r);

/// Re-executes the trace against its input grammar.
Grammar replay_trace(const Grammar& input, const TransformTrace& trace);

nlohmann::json trace_to_json(const TransformTrace& t, const Grammar& output);
/// Symbols are resolved by name against the transform's output grammar.
TransformTrace trace_from_json(const nlohmann::json& j, const Grammar& output);

/// Records replacements and fresh symbols while a transform edits a grammar.
class GrammarEditor {
 public:
  GrammarEditor(Grammar g, std::string transform_id);

  /// Symbols are current; productions are synced on access.
  const Grammar& grammar() const;
  /// Symbol table only; productions may lag behind until grammar() is called.
  const Grammar& symbols() const { return grammar_; }
  const std::vector<Production>& productions() const { return productions_; }
  bool contains(const Production& p) const { return present_.count(p) != 0; }

  std::size_t begin_stage(std::string name, LiftKind kind);
  TraceStage& stage() { return trace_.stages.back(); }

  /// Fresh nonterminal named `<origin>_<sources...>_<n>`.
  SymbolId fresh(const std::string& origin, const std::vector<SymbolId>& sources = {});

  void replace(const Production& removed, std::vector<Production> added,
               std::vector<MacroStep> macro = {});
  void add(std::vector<Production> added);
  void set_start(SymbolId s);
  void set_epsilon_rule(const Production& p) { trace_.epsilon_rule = p; }

  TransformResult finish() &&;

 private:
  void apply(Replacement r);

  mutable Grammar grammar_;
  mutable bool dirty_ = false;
  std::vector<Production> productions_;
  std::unordered_map<Production, std::size_t, ProductionHash> present_;
  TransformTrace trace_;
  std::size_t counter_ = 0;
};

}  // namespace asnf
