#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "asnf/grammar.hpp"
#include "asnf/search.hpp"
#include "asnf/trace.hpp"
#include "asnf/validate.hpp"

namespace asnf {

struct TransformOptions {
  /// Collapse singleton X_ζ / Y_ζ renamings after the uniqueness pass.
  bool minimize_renamings = false;
  /// Used to decide ε ∈ L(G) for grammars that are not context-free.
  SearchBudget budget = SearchBudget::from_environment();
};

/// A core edits the grammar held by the editor, appending stages.
using TransformCore = std::function<void(GrammarEditor&)>;

/// Decides ε ∈ L(g): exactly for CFGs and for grammars that are
/// non-contracting apart from S→ε; otherwise trusts `@eps-free`, then falls
/// back to bounded search. Throws NON_CFG_EPSILON_UNDECIDED when the search
/// is inconclusive.
bool epsilon_in_language(const Grammar& g, const SearchBudget& budget);

/// Runs `core` on a grammar for L(g)\{ε} and, when ε ∈ L(g), wraps the result
/// with a fresh start S₀ and the rules S₀→ε, S₀→S′. The core must not derive
/// ε from an ε-free language.
TransformResult epsilon_construction(const Grammar& g, const std::string& transform_id,
                                     const TransformCore& core, const SearchBudget& budget);

TransformResult to_weak_cfg_asnf(const Grammar& g, const TransformOptions& opts = {});
TransformResult to_gknf(const Grammar& g, const TransformOptions& opts = {});
TransformResult to_weak_gen_asnf(const Grammar& g, const TransformOptions& opts = {});

/// Uniqueness by factoring: fresh start S′→S, every A→ζ through X_ζ, every
/// ζ→B through Y_ζ. With `keep_annihilators`, AB→ε rules pass through.
TransformResult enforce_strong_uniqueness(const Grammar& g, const TransformOptions& opts = {},
                                          bool keep_annihilators = false);

enum class Flavor { Cfg, Gen };
TransformResult to_strong_asnf(const Grammar& g, Flavor flavor, const TransformOptions& opts = {});

TransformResult to_savitch(const Grammar& g, const TransformOptions& opts = {});
TransformResult to_strong_savitch(const Grammar& g, const TransformOptions& opts = {});

/// Rewrites every AB→ε of a Strong-Savitch grammar into AB→X_AB, X_AB→E and
/// adds the rules that let the marker E be absorbed by any neighbour.
TransformResult savitch_to_strong_gen_asnf(const Grammar& g);

enum class TransformTarget {
  WeakCfgAsnf,
  Gknf,
  WeakGenAsnf,
  StrongCfgAsnf,
  StrongGenAsnf,
  Savitch,
  StrongSavitch,
  /// to_strong_savitch followed by savitch_to_strong_gen_asnf.
  GrowShrink,
};

std::string_view target_name(TransformTarget t);
std::optional<TransformTarget> parse_target(std::string_view name);
/// The normal form the target's output must satisfy.
FormId target_form(TransformTarget t);

TransformResult run_transform(const Grammar& g, TransformTarget target, const TransformOptions& opts = {});

}  // namespace asnf
