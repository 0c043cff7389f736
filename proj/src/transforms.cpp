#include "asnf/transforms.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace asnf {

namespace {

using Productions = std::vector<Production>;

bool is_ren(const Grammar& g, const Production& p) {
  return p.lhs.size() == 1 && p.rhs.size() == 1 && g.is_nonterminal(p.lhs[0]) &&
         g.is_nonterminal(p.rhs[0]);
}

/// Nonterminals that occur in some right-hand side, in registration order.
/// Only these can ever stand next to another symbol in a sentential form.
std::vector<SymbolId> rhs_nonterminals(const Grammar& g, const Productions& ps) {
  std::vector<bool> seen(g.symbol_count(), false);
  for (const auto& p : ps)
    for (SymbolId s : p.rhs) seen[s] = true;
  std::vector<SymbolId> out;
  for (SymbolId s : g.nonterminals())
    if (seen[s]) out.push_back(s);
  return out;
}

void stage_drop_identity(GrammarEditor& ed) {
  ed.begin_stage("drop-identity", LiftKind::DropIdentity);
  Productions snapshot = ed.productions();
  for (const auto& p : snapshot)
    if (p.lhs == p.rhs) ed.replace(p, {});
}

std::vector<bool> nullable_symbols(const Grammar& g, const Productions& ps) {
  std::vector<bool> nullable(g.symbol_count(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& p : ps) {
      if (p.lhs.size() != 1 || nullable[p.lhs[0]]) continue;
      if (std::all_of(p.rhs.begin(), p.rhs.end(), [&](SymbolId s) { return nullable[s]; })) {
        nullable[p.lhs[0]] = true;
        changed = true;
      }
    }
  }
  return nullable;
}

void stage_nullable_elimination(GrammarEditor& ed) {
  ed.begin_stage("nullable-elimination", LiftKind::NullableElimination);
  Productions snapshot = ed.productions();
  auto nullable = nullable_symbols(ed.symbols(), snapshot);
  for (const auto& p : snapshot) {
    if (p.rhs.empty()) {
      ed.replace(p, {});
      continue;
    }
    std::vector<std::size_t> optional;
    for (std::size_t i = 0; i < p.rhs.size(); ++i)
      if (nullable[p.rhs[i]]) optional.push_back(i);
    if (optional.empty()) continue;
    if (optional.size() > 16)
      throw Error(ErrorCode::BadInput, "too many nullable symbols in one production");
    Productions variants;
    for (std::size_t mask = 0; mask < (std::size_t{1} << optional.size()); ++mask) {
      Sequence rhs;
      std::size_t k = 0;
      for (std::size_t i = 0; i < p.rhs.size(); ++i) {
        if (k < optional.size() && optional[k] == i) {
          bool drop = (mask >> k) & 1;
          ++k;
          if (drop) continue;
        }
        rhs.push_back(p.rhs[i]);
      }
      if (rhs.empty() || rhs == p.lhs) continue;
      Production v{p.lhs, std::move(rhs)};
      if (std::find(variants.begin(), variants.end(), v) == variants.end()) variants.push_back(std::move(v));
    }
    if (variants.size() == 1 && variants[0] == p) continue;
    ed.replace(p, std::move(variants));
  }
}

/// Replaces terminals by proxies X_a with X_a→a. In CFG mode only rules with
/// a right-hand side of length ≥ 2 are touched. In GKNF mode every terminal
/// in a rule with |lhs|+|rhs| > 2 is proxied, and so is every occurrence of a
/// terminal that appears in some left-hand side.
void stage_terminal_proxy(GrammarEditor& ed, bool gknf) {
  ed.begin_stage("terminal-proxy", LiftKind::Local);
  Productions snapshot = ed.productions();
  const Grammar& g = ed.symbols();
  std::set<SymbolId> lhs_terminals;
  if (gknf)
    for (const auto& p : snapshot)
      for (SymbolId s : p.lhs)
        if (g.is_terminal(s)) lhs_terminals.insert(s);

  std::map<SymbolId, SymbolId> proxy;
  auto proxy_of = [&](SymbolId a) {
    auto it = proxy.find(a);
    if (it != proxy.end()) return it->second;
    SymbolId x = ed.fresh(gknf ? "X" : "T", {a});
    Production fin{{x}, {a}};
    ed.add({fin});
    ed.stage().finalizers.push_back(fin);
    proxy.emplace(a, x);
    return x;
  };

  for (const auto& p : snapshot) {
    bool long_rule = gknf ? p.lhs.size() + p.rhs.size() > 2 : p.rhs.size() >= 2;
    auto needs = [&](SymbolId s) {
      return ed.symbols().is_terminal(s) && (long_rule || lhs_terminals.count(s) != 0);
    };
    Production q = p;
    bool changed = false;
    for (auto* side : {&q.lhs, &q.rhs})
      for (SymbolId& s : *side)
        if (needs(s)) {
          s = proxy_of(s);
          changed = true;
        }
    if (changed) ed.replace(p, {q}, {MacroStep{0, q}});
  }
}

/// head → c₀ … c_{k-1} as a right-branching chain of binary rules; the macro
/// steps are appended with offsets starting at `offset`.
void binary_chain(GrammarEditor& ed, const Sequence& head, const Sequence& c, SymbolId name_source,
                  std::size_t offset, Productions& added, std::vector<MacroStep>& macro) {
  Sequence lhs = head;
  for (std::size_t i = 0; i + 2 < c.size(); ++i) {
    SymbolId y = ed.fresh("Y", {name_source});
    Production step{lhs, {c[i], y}};
    added.push_back(step);
    macro.push_back(MacroStep{offset + i, step});
    lhs = {y};
  }
  Production last{lhs, {c[c.size() - 2], c[c.size() - 1]}};
  added.push_back(last);
  macro.push_back(MacroStep{offset + c.size() - 2, last});
}

void stage_binarize(GrammarEditor& ed) {
  ed.begin_stage("binarize", LiftKind::Local);
  Productions snapshot = ed.productions();
  for (const auto& p : snapshot) {
    if (p.lhs.size() != 1 || p.rhs.size() <= 2) continue;
    Productions added;
    std::vector<MacroStep> macro;
    binary_chain(ed, p.lhs, p.rhs, p.lhs[0], 0, added, macro);
    ed.replace(p, std::move(added), std::move(macro));
  }
}

struct SharedEraser {
  std::optional<SymbolId> e0;
  SymbolId get(GrammarEditor& ed) {
    if (!e0) e0 = ed.fresh("E0");
    return *e0;
  }
};

void stage_renaming_to_eraser(GrammarEditor& ed, SharedEraser& eraser) {
  ed.begin_stage("renaming-eraser", LiftKind::Local);
  Productions snapshot = ed.productions();
  for (const auto& p : snapshot) {
    if (!is_ren(ed.symbols(), p)) continue;
    SymbolId e0 = eraser.get(ed);
    Production grow{p.lhs, {p.rhs[0], e0}};
    Production erase{{e0}, {}};
    ed.replace(p, {grow, erase}, {MacroStep{0, grow}, MacroStep{1, erase}});
  }
}

/// A₁…A_m → B₁…B_n with m ≥ 2, right-padded with E₀ up to n′ ≥ m, compiled
/// to A₁A₂→B₁D₁, D_iA_{i+2}→B_{i+1}D_{i+1}, D_{m−1}→B_m…B_{n′}.
void stage_kuroda_chain(GrammarEditor& ed, SharedEraser& eraser) {
  ed.begin_stage("kuroda-chain", LiftKind::Local);
  Productions snapshot = ed.productions();
  for (const auto& p : snapshot) {
    const std::size_t m = p.lhs.size();
    if (m < 2) continue;
    const std::size_t n = p.rhs.size();
    const std::size_t np = std::max(n, m);
    Sequence b = p.rhs;
    Production erase;
    if (np > n) {
      SymbolId e0 = eraser.get(ed);
      b.resize(np, e0);
      erase = Production{{e0}, {}};
    }
    Productions added;
    std::vector<MacroStep> macro;
    if (m == 2 && np == 2) {
      if (np == n) continue;
      Production q{p.lhs, b};
      added.push_back(q);
      macro.push_back(MacroStep{0, q});
    } else {
      SymbolId d = ed.fresh("D", p.lhs);
      Production first{{p.lhs[0], p.lhs[1]}, {b[0], d}};
      added.push_back(first);
      macro.push_back(MacroStep{0, first});
      SymbolId cur = d;
      bool open = true;
      for (std::size_t i = 1; i + 2 <= m; ++i) {
        Production step;
        if (i == m - 2 && np == m) {
          step = Production{{cur, p.lhs[i + 1]}, {b[i], b[i + 1]}};
          open = false;
        } else {
          SymbolId next = ed.fresh("D", p.lhs);
          step = Production{{cur, p.lhs[i + 1]}, {b[i], next}};
          cur = next;
        }
        added.push_back(step);
        macro.push_back(MacroStep{i, step});
      }
      if (open) {
        Sequence tail(b.begin() + static_cast<std::ptrdiff_t>(m - 1), b.end());
        binary_chain(ed, {cur}, tail, cur, m - 1, added, macro);
      }
    }
    for (std::size_t k = n; k < np; ++k) {
      added.push_back(erase);
      macro.push_back(MacroStep{n, erase});
    }
    ed.replace(p, std::move(added), std::move(macro));
  }
}

void stage_kuroda_split(GrammarEditor& ed) {
  ed.begin_stage("kuroda-split", LiftKind::Local);
  Productions snapshot = ed.productions();
  for (const auto& p : snapshot) {
    if (p.lhs.size() != 2 || p.rhs.size() != 2) continue;
    Sequence both = p.lhs;
    both.insert(both.end(), p.rhs.begin(), p.rhs.end());
    SymbolId x = ed.fresh("X", both);
    Production up{p.lhs, {x}};
    Production down{{x}, p.rhs};
    ed.replace(p, {up, down}, {MacroStep{0, up}, MacroStep{0, down}});
  }
}

/// Routes every A→ε through A→X_{A,E}, X_{A,E}→E onto one shared E→ε.
/// Returns E when some ε-rule existed.
std::optional<SymbolId> stage_route_epsilon(GrammarEditor& ed) {
  ed.begin_stage("route-epsilon", LiftKind::Local);
  Productions snapshot = ed.productions();
  std::optional<SymbolId> e;
  for (const auto& p : snapshot) {
    if (!(p.lhs.size() == 1 && p.rhs.empty())) continue;
    if (!e) e = ed.fresh("E");
    SymbolId x = ed.fresh("X", {p.lhs[0], *e});
    Production link{p.lhs, {x}};
    Production to_e{{x}, {*e}};
    Production erase{{*e}, {}};
    ed.replace(p, {link, to_e, erase}, {MacroStep{0, link}, MacroStep{0, to_e}, MacroStep{0, erase}});
  }
  return e;
}

/// Drops A_i→E and E→ε; instead each A_i can be absorbed by a neighbour X:
/// XA_i→X and A_iX→X.
void stage_absorb_erasers(GrammarEditor& ed, std::optional<SymbolId> e) {
  ed.begin_stage("neighbor-erase", LiftKind::NeighborErase);
  if (!e) return;
  Production eraser{{*e}, {}};
  ed.stage().deferred_eraser = eraser;
  Productions snapshot = ed.productions();
  std::vector<Production> links;
  for (const auto& p : snapshot)
    if (p.lhs.size() == 1 && p.rhs == Sequence{*e}) links.push_back(p);
  std::vector<SymbolId> domain;
  for (SymbolId x : rhs_nonterminals(ed.symbols(), snapshot))
    if (x != *e) domain.push_back(x);
  Productions added;
  for (const auto& link : links) {
    SymbolId a = link.lhs[0];
    for (SymbolId x : domain) {
      added.push_back(Production{{x, a}, {x}});
      added.push_back(Production{{a, x}, {x}});
    }
  }
  ed.add(std::move(added));
  for (const auto& link : links) ed.replace(link, {});
  if (ed.contains(eraser)) ed.replace(eraser, {});
}

struct UniquenessSymbols {
  std::vector<std::pair<SymbolId, Sequence>> x;  // X_ζ with its ζ
  std::vector<std::pair<SymbolId, Sequence>> y;  // Y_ζ with its ζ
};

UniquenessSymbols factor_for_uniqueness(GrammarEditor& ed, bool keep_annihilators) {
  const Grammar& g = ed.symbols();
  auto exempt = find_epsilon_exemption(ed.grammar());
  auto is_exempt = [&](const Production& p) {
    return exempt && (p == exempt->first || p == exempt->second);
  };

  Productions snapshot = ed.productions();
  std::vector<Sequence> rhs_order, lhs_order;
  std::map<Sequence, Productions> by_rhs, by_lhs;
  for (const auto& p : snapshot) {
    if (is_exempt(p) || is_ren(g, p)) continue;
    RuleKind k = classify_production(p, g);
    if (keep_annihilators && k == RuleKind::ANNIHILATE2) continue;
    bool single_lhs = p.lhs.size() == 1 && g.is_nonterminal(p.lhs[0]);
    if (single_lhs && !p.rhs.empty()) {
      if (!by_rhs.count(p.rhs)) rhs_order.push_back(p.rhs);
      by_rhs[p.rhs].push_back(p);
    } else if (!single_lhs && p.rhs.size() == 1 && g.is_nonterminal(p.rhs[0])) {
      if (!by_lhs.count(p.lhs)) lhs_order.push_back(p.lhs);
      by_lhs[p.lhs].push_back(p);
    } else {
      throw Error(ErrorCode::ShapeViolation,
                  "'" + g.format(p) + "' is neither A -> B, A -> zeta nor zeta -> B");
    }
  }

  UniquenessSymbols made;
  if (!exempt) {
    ed.begin_stage("new-start", LiftKind::NewStart);
    SymbolId s = g.start();
    SymbolId s2 = ed.fresh("Start", {s});
    ed.add({Production{{s2}, {s}}});
    ed.set_start(s2);
  }

  ed.begin_stage("factor-rhs", LiftKind::Local);
  for (const auto& zeta : rhs_order) {
    SymbolId x = ed.fresh("X", zeta);
    made.x.emplace_back(x, zeta);
    Production down{{x}, zeta};
    for (const auto& p : by_rhs[zeta]) {
      Production link{p.lhs, {x}};
      ed.replace(p, {link, down}, {MacroStep{0, link}, MacroStep{0, down}});
    }
  }

  ed.begin_stage("factor-lhs", LiftKind::Local);
  for (const auto& zeta : lhs_order) {
    SymbolId y = ed.fresh("Y", zeta);
    made.y.emplace_back(y, zeta);
    Production up{zeta, {y}};
    for (const auto& p : by_lhs[zeta]) {
      Production out{{y}, p.rhs};
      ed.replace(p, {up, out}, {MacroStep{0, up}, MacroStep{0, out}});
    }
  }
  return made;
}

std::size_t count_if_productions(const GrammarEditor& ed, const std::function<bool(const Production&)>& f) {
  return static_cast<std::size_t>(std::count_if(ed.productions().begin(), ed.productions().end(), f));
}

/// Collapses X_ζ or Y_ζ when a single renaming goes through it and the
/// collapsed rule stays strongly unique.
void stage_minimize_renamings(GrammarEditor& ed, const UniquenessSymbols& made) {
  ed.begin_stage("minimize-renamings", LiftKind::UnitClosure);
  for (const auto& [x, zeta] : made.x) {
    std::vector<Production> users;
    for (const auto& p : ed.productions())
      if (p.rhs == Sequence{x}) users.push_back(p);
    if (users.size() != 1 || users[0].lhs.size() != 1) continue;
    SymbolId a = users[0].lhs[0];
    if (count_if_productions(ed, [&](const Production& p) { return p.lhs == Sequence{a}; }) != 1) continue;
    if (count_if_productions(ed, [&](const Production& p) { return p.rhs == zeta; }) != 1) continue;
    ed.replace(Production{{x}, zeta}, {Production{{a}, zeta}});
    ed.replace(users[0], {});
  }
  for (const auto& [y, zeta] : made.y) {
    std::vector<Production> outs;
    for (const auto& p : ed.productions())
      if (p.lhs == Sequence{y}) outs.push_back(p);
    if (outs.size() != 1) continue;
    Sequence b = outs[0].rhs;
    if (count_if_productions(ed, [&](const Production& p) { return p.rhs == b; }) != 1) continue;
    ed.replace(Production{zeta, {y}}, {Production{zeta, b}});
    ed.replace(outs[0], {});
  }
}

void core_uniqueness(GrammarEditor& ed, const TransformOptions& opts, bool keep_annihilators) {
  auto made = factor_for_uniqueness(ed, keep_annihilators);
  if (opts.minimize_renamings) stage_minimize_renamings(ed, made);
}

/// Every non-renaming rule is copied over all combinations of renaming
/// predecessors of its left-hand side symbols; then the renamings go.
void stage_unit_closure(GrammarEditor& ed) {
  ed.begin_stage("unit-closure", LiftKind::UnitClosure);
  const Grammar& g = ed.symbols();
  Productions snapshot = ed.productions();
  std::vector<std::vector<SymbolId>> into(g.symbol_count());
  for (const auto& p : snapshot)
    if (is_ren(g, p) && p.lhs != p.rhs) into[p.rhs[0]].push_back(p.lhs[0]);

  std::vector<std::vector<SymbolId>> preds(g.symbol_count());
  auto predecessors = [&](SymbolId b) -> const std::vector<SymbolId>& {
    auto& out = preds[b];
    if (!out.empty()) return out;
    std::vector<bool> seen(g.symbol_count(), false);
    out.push_back(b);
    seen[b] = true;
    for (std::size_t i = 0; i < out.size(); ++i)
      for (SymbolId a : into[out[i]])
        if (!seen[a]) {
          seen[a] = true;
          out.push_back(a);
        }
    return out;
  };

  Productions added;
  for (const auto& p : snapshot) {
    if (is_ren(g, p)) continue;
    std::vector<const std::vector<SymbolId>*> choices;
    for (SymbolId s : p.lhs) choices.push_back(&predecessors(s));
    std::size_t total = 1;
    for (const auto* c : choices) total *= c->size();
    // Mixed-radix count over the choices, skipping the all-identity tuple.
    for (std::size_t code = 1; code < total; ++code) {
      Production q{Sequence(p.lhs.size()), p.rhs};
      std::size_t rest = code;
      for (std::size_t i = p.lhs.size(); i-- > 0;) {
        q.lhs[i] = (*choices[i])[rest % choices[i]->size()];
        rest /= choices[i]->size();
      }
      added.push_back(std::move(q));
    }
  }
  ed.add(std::move(added));
  for (const auto& p : snapshot)
    if (is_ren(g, p)) ed.replace(p, {});
}

void stage_annihilators(GrammarEditor& ed) {
  ed.begin_stage("annihilators", LiftKind::Local);
  Productions snapshot = ed.productions();
  for (const auto& p : snapshot) {
    if (classify_production(p, ed.symbols()) != RuleKind::RSS) continue;
    SymbolId a = p.lhs[0], b = p.lhs[1], c = p.rhs[0];
    SymbolId bar = ed.fresh("Bar", {b});
    Production grow{{a}, {c, bar}};
    Production cancel{{bar, b}, {}};
    ed.replace(p, {grow, cancel}, {MacroStep{0, grow}, MacroStep{1, cancel}});
  }
}

void stage_merge_duplicates(GrammarEditor& ed) {
  ed.begin_stage("merge-duplicates", LiftKind::Merge);
  Productions snapshot = ed.productions();
  std::unordered_set<Production, ProductionHash> seen;
  for (const auto& p : snapshot)
    if (!seen.insert(p).second) ed.replace(p, {});
}

void core_weak_cfg(GrammarEditor& ed) {
  stage_drop_identity(ed);
  stage_nullable_elimination(ed);
  stage_terminal_proxy(ed, false);
  stage_binarize(ed);
}

void core_gknf(GrammarEditor& ed) {
  SharedEraser eraser;
  stage_drop_identity(ed);
  stage_terminal_proxy(ed, true);
  stage_renaming_to_eraser(ed, eraser);
  stage_kuroda_chain(ed, eraser);
  stage_binarize(ed);
}

void core_weak_gen(GrammarEditor& ed) {
  core_gknf(ed);
  stage_kuroda_split(ed);
  auto e = stage_route_epsilon(ed);
  stage_absorb_erasers(ed, e);
}

/// Runs the weak-form core unless the grammar already has that form.
void core_weak_cfg_if_needed(GrammarEditor& ed) {
  if (validate_normal_form(ed.grammar(), FormId::WeakCfgAsnf).ok) stage_drop_identity(ed);
  else core_weak_cfg(ed);
}

void core_weak_gen_if_needed(GrammarEditor& ed) {
  if (validate_normal_form(ed.grammar(), FormId::WeakGenAsnf).ok) stage_drop_identity(ed);
  else core_weak_gen(ed);
}

void core_savitch(GrammarEditor& ed) {
  core_weak_gen_if_needed(ed);
  stage_unit_closure(ed);
  stage_annihilators(ed);
}

TransformResult unchanged(const Grammar& g, const std::string& id) {
  TransformResult r{g, {}};
  r.trace.transform_id = id;
  return r;
}

void require_context_free(const Grammar& g) {
  if (!is_context_free(g))
    throw Error(ErrorCode::NotContextFree, "some left-hand side is not a single nonterminal");
}

}  // namespace

bool epsilon_in_language(const Grammar& g, const SearchBudget& budget) {
  SymbolId s = g.start();
  if (is_context_free(g)) return nullable_symbols(g, g.productions())[s];

  if (is_noncontracting_but_start_eps(g)) return g.contains(Production{{s}, {}});
  if (g.eps_free_annotated()) return false;

  auto r = bounded_enumerate(g, 0, budget);
  if (r.words.count(Word{})) return true;
  if (r.conclusive) return false;
  throw Error(ErrorCode::NonCfgEpsilonUndecided,
              "could not decide whether the empty word is derivable within the search budget; "
              "raise ASNF_BUDGET_SCALE or annotate the grammar with @eps-free");
}

TransformResult epsilon_construction(const Grammar& g, const std::string& transform_id,
                                     const TransformCore& core, const SearchBudget& budget) {
  GrammarEditor ed(g, transform_id);
  if (!epsilon_in_language(g, budget)) {
    core(ed);
    return std::move(ed).finish();
  }
  if (is_context_free(g)) {
    stage_drop_identity(ed);
    stage_nullable_elimination(ed);
  } else if (auto pair = find_epsilon_exemption(g)) {
    // An existing wrapper is taken apart and rebuilt around the new core.
    ed.begin_stage("unwrap-epsilon", LiftKind::Local);
    ed.replace(pair->first, {});
  }
  core(ed);
  ed.begin_stage("epsilon-wrapper", LiftKind::NewStart);
  SymbolId inner = ed.symbols().start();
  SymbolId s0 = ed.fresh("S0");
  Production eps{{s0}, {}};
  ed.add({eps, Production{{s0}, {inner}}});
  ed.set_start(s0);
  ed.set_epsilon_rule(eps);
  return std::move(ed).finish();
}

TransformResult to_weak_cfg_asnf(const Grammar& g, const TransformOptions& opts) {
  require_context_free(g);
  if (validate_normal_form(g, FormId::WeakCfgAsnf).ok) return unchanged(g, "weak-cfg-asnf");
  return epsilon_construction(g, "weak-cfg-asnf", core_weak_cfg, opts.budget);
}

TransformResult to_gknf(const Grammar& g, const TransformOptions&) {
  if (validate_normal_form(g, FormId::Gknf).ok) return unchanged(g, "gknf");
  // ε-rules are part of the GKNF shape set, so no wrapper is needed.
  GrammarEditor ed(g, "gknf");
  core_gknf(ed);
  return std::move(ed).finish();
}

TransformResult to_weak_gen_asnf(const Grammar& g, const TransformOptions& opts) {
  if (validate_normal_form(g, FormId::WeakGenAsnf).ok) return unchanged(g, "weak-gen-asnf");
  return epsilon_construction(g, "weak-gen-asnf", core_weak_gen, opts.budget);
}

TransformResult enforce_strong_uniqueness(const Grammar& g, const TransformOptions& opts,
                                          bool keep_annihilators) {
  GrammarEditor ed(g, "strong-uniqueness");
  core_uniqueness(ed, opts, keep_annihilators);
  return std::move(ed).finish();
}

TransformResult to_strong_asnf(const Grammar& g, Flavor flavor, const TransformOptions& opts) {
  if (flavor == Flavor::Cfg) {
    require_context_free(g);
    if (validate_normal_form(g, FormId::StrongCfgAsnf).ok) return unchanged(g, "strong-cfg-asnf");
    return epsilon_construction(
        g, "strong-cfg-asnf",
        [&](GrammarEditor& ed) {
          core_weak_cfg_if_needed(ed);
          core_uniqueness(ed, opts, false);
        },
        opts.budget);
  }
  if (validate_normal_form(g, FormId::StrongGenAsnf).ok) return unchanged(g, "strong-gen-asnf");
  return epsilon_construction(
      g, "strong-gen-asnf",
      [&](GrammarEditor& ed) {
        core_weak_gen_if_needed(ed);
        core_uniqueness(ed, opts, false);
      },
      opts.budget);
}

TransformResult to_savitch(const Grammar& g, const TransformOptions& opts) {
  if (validate_normal_form(g, FormId::Savitch).ok) return unchanged(g, "savitch");
  return epsilon_construction(g, "savitch", core_savitch, opts.budget);
}

TransformResult to_strong_savitch(const Grammar& g, const TransformOptions& opts) {
  if (validate_normal_form(g, FormId::StrongSavitch).ok) return unchanged(g, "strong-savitch");
  return epsilon_construction(
      g, "strong-savitch",
      [&](GrammarEditor& ed) {
        if (!validate_normal_form(ed.grammar(), FormId::Savitch).ok) core_savitch(ed);
        stage_merge_duplicates(ed);
        core_uniqueness(ed, opts, true);
      },
      opts.budget);
}

TransformResult savitch_to_strong_gen_asnf(const Grammar& g) {
  if (!validate_normal_form(g, FormId::StrongSavitch).ok)
    throw Error(ErrorCode::InputNotStrongSavitch, "input grammar is not in Strong-Savitch form");
  const std::string id = "savitch-to-strong-gen-asnf";
  std::vector<Production> annihilators;
  for (const auto& p : g.productions())
    if (classify_production(p, g) == RuleKind::ANNIHILATE2) annihilators.push_back(p);
  if (annihilators.empty()) return unchanged(g, id);

  GrammarEditor ed(g, id);
  std::vector<SymbolId> domain = rhs_nonterminals(g, g.productions());
  ed.begin_stage("annihilation-markers", LiftKind::NeighborErase);
  SymbolId e = ed.fresh("E");
  for (const auto& p : annihilators) {
    SymbolId x = ed.fresh("X", p.lhs);
    Production shrink{p.lhs, {x}};
    Production mark{{x}, {e}};
    ed.replace(p, {shrink, mark}, {MacroStep{0, shrink}, MacroStep{0, mark}});
  }
  Productions family;
  for (SymbolId x : domain) {
    SymbolId xe = ed.fresh("X", {x, e});
    family.push_back(Production{{x, e}, {xe}});
    family.push_back(Production{{xe}, {x}});
    SymbolId ex = ed.fresh("X", {e, x});
    family.push_back(Production{{e, x}, {ex}});
    family.push_back(Production{{ex}, {x}});
  }
  SymbolId ee = ed.fresh("X", {e, e});
  family.push_back(Production{{e, e}, {ee}});
  family.push_back(Production{{ee}, {e}});
  ed.add(std::move(family));
  return std::move(ed).finish();
}

std::string_view target_name(TransformTarget t) {
  switch (t) {
    case TransformTarget::WeakCfgAsnf: return "weak-cfg-asnf";
    case TransformTarget::Gknf: return "gknf";
    case TransformTarget::WeakGenAsnf: return "weak-gen-asnf";
    case TransformTarget::StrongCfgAsnf: return "strong-cfg-asnf";
    case TransformTarget::StrongGenAsnf: return "strong-gen-asnf";
    case TransformTarget::Savitch: return "savitch";
    case TransformTarget::StrongSavitch: return "strong-savitch";
    case TransformTarget::GrowShrink: return "grow-shrink";
  }
  return "unknown";
}

std::optional<TransformTarget> parse_target(std::string_view name) {
  for (auto t : {TransformTarget::WeakCfgAsnf, TransformTarget::Gknf, TransformTarget::WeakGenAsnf,
                 TransformTarget::StrongCfgAsnf, TransformTarget::StrongGenAsnf, TransformTarget::Savitch,
                 TransformTarget::StrongSavitch, TransformTarget::GrowShrink})
    if (target_name(t) == name) return t;
  return std::nullopt;
}

FormId target_form(TransformTarget t) {
  switch (t) {
    case TransformTarget::WeakCfgAsnf: return FormId::WeakCfgAsnf;
    case TransformTarget::Gknf: return FormId::Gknf;
    case TransformTarget::WeakGenAsnf: return FormId::WeakGenAsnf;
    case TransformTarget::StrongCfgAsnf: return FormId::StrongCfgAsnf;
    case TransformTarget::StrongGenAsnf: return FormId::StrongGenAsnf;
    case TransformTarget::Savitch: return FormId::Savitch;
    case TransformTarget::StrongSavitch: return FormId::StrongSavitch;
    case TransformTarget::GrowShrink: return FormId::StrongGenAsnf;
  }
  return FormId::WeakGenAsnf;
}

TransformResult run_transform(const Grammar& g, TransformTarget target, const TransformOptions& opts) {
  switch (target) {
    case TransformTarget::WeakCfgAsnf: return to_weak_cfg_asnf(g, opts);
    case TransformTarget::Gknf: return to_gknf(g, opts);
    case TransformTarget::WeakGenAsnf: return to_weak_gen_asnf(g, opts);
    case TransformTarget::StrongCfgAsnf: return to_strong_asnf(g, Flavor::Cfg, opts);
    case TransformTarget::StrongGenAsnf: return to_strong_asnf(g, Flavor::Gen, opts);
    case TransformTarget::Savitch: return to_savitch(g, opts);
    case TransformTarget::StrongSavitch: return to_strong_savitch(g, opts);
    case TransformTarget::GrowShrink: {
      TransformResult first = to_strong_savitch(g, opts);
      TransformResult second = savitch_to_strong_gen_asnf(first.grammar);
      first.trace.append(second.trace);
      first.trace.transform_id = "grow-shrink";
      return TransformResult{std::move(second.grammar), std::move(first.trace)};
    }
  }
  throw Error(ErrorCode::BadInput, "unknown transform target");
}

}  // namespace asnf
