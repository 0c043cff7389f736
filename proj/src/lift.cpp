#include "asnf/lift.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "asnf/reorder.hpp"
#include "frontier_builder.hpp"

namespace asnf {

namespace {

using ProductionSet = std::unordered_set<Production, ProductionHash>;
using MacroIndex = std::unordered_map<Production, const std::vector<MacroStep>*, ProductionHash>;

[[noreturn]] void mismatch(const std::string& stage, const std::string& what) {
  throw Error(ErrorCode::TraceMismatch, "stage '" + stage + "': " + what);
}

bool is_renaming(const Grammar& g, const Production& p) {
  return p.lhs.size() == 1 && p.rhs.size() == 1 && g.is_nonterminal(p.lhs[0]) && g.is_nonterminal(p.rhs[0]);
}

/// Follows aliases left behind when a step is dropped.
struct Aliases {
  std::unordered_map<OccId, OccId> to;
  OccId operator()(OccId o) const {
    for (auto it = to.find(o); it != to.end() && it->second != o; it = to.find(o)) o = it->second;
    return o;
  }
  std::vector<OccId> operator()(std::vector<OccId> os) const {
    for (OccId& o : os) o = (*this)(o);
    return os;
  }
};

/// Expands one step into the stage's macro at the position of its first
/// consumed occurrence.
void expand_macro(detail::FrontierBuilder& b, const TrackedStep& s, const std::vector<OccId>& consumed,
                  const std::vector<MacroStep>& macro, Aliases& alias) {
  std::size_t idx = b.index_of(consumed.front());
  for (const auto& m : macro) b.apply_at(idx + m.offset, m.production);
  for (std::size_t k = 0; k < s.created.size(); ++k) alias.to[s.created[k]] = b.frontier().at(idx + k);
}

TrackedDerivation lift_local(const TraceStage& stage, const MacroIndex& macros, const TrackedDerivation& t) {
  detail::FrontierBuilder b(t, ErrorCode::TraceMismatch);
  Aliases alias;
  for (const auto& s : t.steps) {
    auto consumed = alias(s.consumed);
    if (auto m = macros.find(s.production); m != macros.end()) {
      expand_macro(b, s, consumed, *m->second, alias);
    } else {
      b.push(TrackedStep{s.production, consumed, alias(s.created)});
    }
  }
  if (!stage.finalizers.empty()) {
    for (OccId o : std::vector<OccId>(b.frontier())) {
      SymbolId sym = b.symbol(o);
      for (const auto& f : stage.finalizers)
        if (f.lhs.size() == 1 && f.lhs[0] == sym) {
          b.apply_at(b.index_of(o), f);
          break;
        }
    }
  }
  return std::move(b.out());
}

TrackedDerivation lift_drop_identity(const ProductionSet& next, const TrackedDerivation& t) {
  detail::FrontierBuilder b(t, ErrorCode::TraceMismatch);
  Aliases alias;
  for (const auto& s : t.steps) {
    auto consumed = alias(s.consumed);
    if (s.production.lhs == s.production.rhs && !next.count(s.production)) {
      for (std::size_t k = 0; k < s.created.size(); ++k) alias.to[s.created[k]] = consumed[k];
      continue;
    }
    b.push(TrackedStep{s.production, consumed, alias(s.created)});
  }
  return std::move(b.out());
}

TrackedDerivation lift_nullable(const TraceStage& stage, const TrackedDerivation& t) {
  std::vector<bool> null(t.occurrence_symbol.size(), false);
  std::vector<bool> expanded(t.occurrence_symbol.size(), false);
  for (auto it = t.steps.rbegin(); it != t.steps.rend(); ++it) {
    if (it->consumed.size() != 1) mismatch(stage.name, "derivation is not context-free");
    expanded[it->consumed[0]] = true;
    null[it->consumed[0]] =
        std::all_of(it->created.begin(), it->created.end(), [&](OccId o) { return null[o]; });
  }
  for (OccId o : t.start_ids)
    if (null[o]) mismatch(stage.name, "start occurrence derives the empty word");

  detail::FrontierBuilder b(t, ErrorCode::TraceMismatch);
  Aliases alias;
  for (const auto& s : t.steps) {
    OccId c = alias(s.consumed[0]);
    if (null[s.consumed[0]]) continue;
    std::vector<OccId> kept;
    for (OccId o : s.created)
      if (!null[o]) kept.push_back(o);
    Production p{s.production.lhs, {}};
    for (OccId o : kept) p.rhs.push_back(t.occurrence_symbol[o]);
    if (p.rhs == p.lhs) {
      alias.to[kept[0]] = c;
      continue;
    }
    b.push(TrackedStep{std::move(p), {c}, alias(std::move(kept))});
  }
  return std::move(b.out());
}

TrackedDerivation lift_unit_closure(const Grammar& gk, const ProductionSet& next, TrackedDerivation t) {
  const std::size_t n = t.steps.size();
  std::unordered_map<OccId, std::size_t> producer, consumer;
  for (std::size_t i = 0; i < n; ++i) {
    for (OccId o : t.steps[i].consumed) consumer[o] = i;
    for (OccId o : t.steps[i].created) producer[o] = i;
  }
  std::vector<bool> dropped(n, false);
  for (std::size_t i = n; i-- > 0;) {
    const TrackedStep& s = t.steps[i];
    if (!is_renaming(gk, s.production) || next.count(s.production)) continue;
    OccId from = s.consumed[0], to = s.created[0];
    if (auto c = consumer.find(to); c != consumer.end()) {
      TrackedStep& later = t.steps[c->second];
      auto pos = std::find(later.consumed.begin(), later.consumed.end(), to) - later.consumed.begin();
      Production cand = later.production;
      cand.lhs[static_cast<std::size_t>(pos)] = t.occurrence_symbol[from];
      if (next.count(cand)) {
        later.production = std::move(cand);
        later.consumed[static_cast<std::size_t>(pos)] = from;
        std::size_t at = c->second;
        consumer.erase(c);
        consumer[from] = at;
        dropped[i] = true;
        continue;
      }
    }
    if (auto p = producer.find(from); p != producer.end()) {
      TrackedStep& earlier = t.steps[p->second];
      auto pos = std::find(earlier.created.begin(), earlier.created.end(), from) - earlier.created.begin();
      Production cand = earlier.production;
      cand.rhs[static_cast<std::size_t>(pos)] = t.occurrence_symbol[to];
      if (next.count(cand)) {
        earlier.production = std::move(cand);
        earlier.created[static_cast<std::size_t>(pos)] = to;
        producer[to] = p->second;
        dropped[i] = true;
        continue;
      }
    }
    mismatch("unit-closure", "cannot fold renaming " + gk.format(s.production));
  }
  TrackedDerivation out;
  out.start_ids = t.start_ids;
  out.occurrence_symbol = std::move(t.occurrence_symbol);
  for (std::size_t i = 0; i < n; ++i)
    if (!dropped[i]) out.steps.push_back(std::move(t.steps[i]));
  return out;
}

TrackedDerivation lift_neighbor_erase(const TraceStage& stage, const Grammar& gk, const Grammar& next_g,
                                      const ProductionSet& next, const MacroIndex& macros,
                                      const TrackedDerivation& t0) {
  TrackedDerivation t = track(postpone_terminals(gk, untrack(t0)));
  detail::NeighborRules rules(next_g, next_g.productions());
  detail::FrontierBuilder b(t, ErrorCode::TraceMismatch);
  Aliases alias;
  std::unordered_set<OccId> vanished;
  const auto& eraser = stage.deferred_eraser;
  auto absorb = [&](OccId m) {
    if (!b.absorb(m, rules))
      mismatch(stage.name, "no neighbour absorbs '" + next_g.name(b.symbol(m)) + "'");
  };
  for (const auto& s : t.steps) {
    if (eraser && s.production == *eraser && vanished.count(s.consumed[0])) continue;
    auto consumed = alias(s.consumed);
    if (eraser && !next.count(s.production) && s.production.lhs.size() == 1 &&
        s.production.rhs == eraser->lhs) {
      absorb(consumed[0]);
      vanished.insert(s.created[0]);
      continue;
    }
    if (auto m = macros.find(s.production); m != macros.end()) {
      std::size_t idx = b.index_of(consumed.front());
      std::vector<OccId> created;
      for (const auto& step : *m->second) created = b.apply_at(idx + step.offset, step.production);
      if (created.size() != 1) mismatch(stage.name, "marker macro must end in a single symbol");
      absorb(created[0]);
      continue;
    }
    b.push(TrackedStep{s.production, consumed, alias(s.created)});
  }
  return std::move(b.out());
}

TrackedDerivation lift_new_start(const TraceStage& stage, const std::vector<Production>& added,
                                 const TrackedDerivation& t) {
  if (t.start_ids.size() != 1) mismatch(stage.name, "derivation does not start from a single symbol");
  SymbolId old = t.occurrence_symbol[t.start_ids[0]];
  const Production* link = nullptr;
  for (const auto& p : added)
    if (p.lhs.size() == 1 && p.rhs == Sequence{old}) link = &p;
  if (!link) mismatch(stage.name, "no rule leads to the old start symbol");
  TrackedDerivation out = t;
  OccId s0 = out.new_occurrence(link->lhs[0]);
  out.start_ids = {s0};
  out.steps.insert(out.steps.begin(), TrackedStep{*link, {s0}, t.start_ids});
  return out;
}

}  // namespace

Derivation lift_derivation(const TransformTrace& trace, const Grammar& input, const Derivation& d) {
  auto check = validate_derivation(input, d);
  if (!check.valid)
    throw Error(ErrorCode::InvalidDerivation,
                "step " + std::to_string(check.failed_step.value_or(0)) + ": " + check.message);
  const Grammar output = replay_trace(input, trace);

  if (check.final_form.empty() && trace.epsilon_rule) {
    const Production& e = *trace.epsilon_rule;
    return Derivation{e.lhs, {DerivationStep{0, e}}};
  }

  Grammar gk = input;
  for (const auto& f : trace.fresh_symbols) gk.add_nonterminal(f.name);
  gk.set_productions(input.productions());

  std::vector<std::vector<const Replacement*>> by_stage(trace.stages.size());
  for (const auto& r : trace.replacements) {
    if (r.stage >= trace.stages.size()) throw Error(ErrorCode::TraceMismatch, "stage index out of range");
    by_stage[r.stage].push_back(&r);
  }

  TrackedDerivation t = track(d);
  std::vector<Production> productions = input.productions();
  for (std::size_t k = 0; k < trace.stages.size(); ++k) {
    const TraceStage& stage = trace.stages[k];
    for (const Replacement* r : by_stage[k]) apply_replacement(productions, *r);
    Grammar next_g = gk;
    next_g.set_productions(productions);
    ProductionSet next(productions.begin(), productions.end());
    MacroIndex macros;
    std::vector<Production> added;
    for (const Replacement* r : by_stage[k]) {
      if (r->removed && !r->macro.empty()) macros[*r->removed] = &r->macro;
      if (!r->removed) added.insert(added.end(), r->added.begin(), r->added.end());
    }

    switch (stage.kind) {
      case LiftKind::Local: t = lift_local(stage, macros, t); break;
      case LiftKind::DropIdentity: t = lift_drop_identity(next, t); break;
      case LiftKind::NullableElimination: t = lift_nullable(stage, t); break;
      case LiftKind::UnitClosure: t = lift_unit_closure(gk, next, std::move(t)); break;
      case LiftKind::NeighborErase: t = lift_neighbor_erase(stage, gk, next_g, next, macros, t); break;
      case LiftKind::NewStart: t = lift_new_start(stage, added, t); break;
      case LiftKind::Merge: break;
    }
    gk = std::move(next_g);
  }

  Derivation result = untrack(t);
  auto out_check = validate_derivation(output, result);
  if (!out_check.valid)
    throw Error(ErrorCode::TraceMismatch, "lifted derivation fails at step " +
                                              std::to_string(out_check.failed_step.value_or(0)) + ": " +
                                              out_check.message);
  if (out_check.final_form != check.final_form)
    throw Error(ErrorCode::TraceMismatch, "lifted derivation derives a different form");
  return result;
}

Grammar register_fresh_symbols(const Grammar& input, const nlohmann::json& trace_json) {
  Grammar g = input;
  try {
    for (const auto& f : trace_json.at("fresh_symbols")) g.add_nonterminal(f.at("name").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadInput, std::string("malformed trace: ") + e.what());
  }
  return g;
}

}  // namespace asnf
