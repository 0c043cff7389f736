#include "asnf/trace.hpp"

#include <algorithm>

namespace asnf {

std::string_view lift_kind_name(LiftKind k) {
  switch (k) {
    case LiftKind::Local: return "local";
    case LiftKind::DropIdentity: return "drop-identity";
    case LiftKind::NullableElimination: return "nullable-elimination";
    case LiftKind::UnitClosure: return "unit-closure";
    case LiftKind::NeighborErase: return "neighbor-erase";
    case LiftKind::NewStart: return "new-start";
    case LiftKind::Merge: return "merge";
  }
  return "local";
}

namespace {

LiftKind parse_lift_kind(const std::string& s) {
  for (LiftKind k : {LiftKind::Local, LiftKind::DropIdentity, LiftKind::NullableElimination,
                     LiftKind::UnitClosure, LiftKind::NeighborErase, LiftKind::NewStart,
                     LiftKind::Merge})
    if (lift_kind_name(k) == s) return k;
  throw Error(ErrorCode::BadInput, "unknown lift kind '" + s + "'");
}

nlohmann::json production_json(const Production& p, const Grammar& g) {
  return {{"lhs", g.names(p.lhs)}, {"rhs", g.names(p.rhs)}};
}

Sequence sequence_from_json(const nlohmann::json& j, const Grammar& g) {
  Sequence s;
  for (const auto& name : j) s.push_back(g.require(name.get<std::string>()));
  return s;
}

Production production_from_json(const nlohmann::json& j, const Grammar& g) {
  return Production{sequence_from_json(j.at("lhs"), g), sequence_from_json(j.at("rhs"), g)};
}

}  // namespace

void TransformTrace::append(const TransformTrace& later) {
  std::size_t offset = stages.size();
  fresh_symbols.insert(fresh_symbols.end(), later.fresh_symbols.begin(), later.fresh_symbols.end());
  stages.insert(stages.end(), later.stages.begin(), later.stages.end());
  for (auto r : later.replacements) {
    r.stage += offset;
    replacements.push_back(std::move(r));
  }
  if (later.start) start = later.start;
  if (later.epsilon_rule) epsilon_rule = later.epsilon_rule;
}

void apply_replacement(std::vector<Production>& productions, const Replacement& r) {
  std::vector<Production> fresh;
  for (const auto& p : r.added) {
    if (std::find(fresh.begin(), fresh.end(), p) != fresh.end()) continue;
    if (r.removed && p == *r.removed) {
      fresh.push_back(p);
      continue;
    }
    if (std::find(productions.begin(), productions.end(), p) != productions.end()) continue;
    fresh.push_back(p);
  }
  if (!r.removed) {
    productions.insert(productions.end(), fresh.begin(), fresh.end());
    return;
  }
  auto it = std::find(productions.begin(), productions.end(), *r.removed);
  if (it == productions.end())
    throw Error(ErrorCode::TraceMismatch, "replacement removes a production that is not present");
  it = productions.erase(it);
  productions.insert(it, fresh.begin(), fresh.end());
}

Grammar replay_trace(const Grammar& input, const TransformTrace& trace) {
  Grammar g = input;
  // Fresh symbols are registered in trace order; ids must line up with the
  // ones recorded by the transform.
  std::vector<Production> productions = g.productions();
  for (const auto& f : trace.fresh_symbols) {
    if (f.id != g.symbol_count())
      throw Error(ErrorCode::TraceMismatch, "fresh symbol ids do not follow the input grammar");
    g.add_nonterminal(f.name);
  }
  for (const auto& r : trace.replacements) apply_replacement(productions, r);
  if (trace.start) g.set_start(*trace.start);
  g.set_productions(std::move(productions));
  return g;
}

nlohmann::json trace_to_json(const TransformTrace& t, const Grammar& output) {
  nlohmann::json fresh = nlohmann::json::array();
  for (const auto& f : t.fresh_symbols)
    fresh.push_back({{"name", output.name(f.id)}, {"origin", f.origin}, {"sources", f.sources}});

  nlohmann::json replacements = nlohmann::json::array();
  for (const auto& r : t.replacements) {
    nlohmann::json added = nlohmann::json::array();
    for (const auto& p : r.added) added.push_back(production_json(p, output));
    nlohmann::json macro = nlohmann::json::array();
    for (const auto& m : r.macro) {
      auto step = production_json(m.production, output);
      step["offset"] = m.offset;
      macro.push_back(std::move(step));
    }
    replacements.push_back(
        {{"removed", r.removed ? production_json(*r.removed, output) : nlohmann::json(nullptr)},
         {"added", std::move(added)},
         {"stage", r.stage},
         {"macro", std::move(macro)}});
  }

  nlohmann::json stages = nlohmann::json::array();
  for (const auto& s : t.stages) {
    nlohmann::json finalizers = nlohmann::json::array();
    for (const auto& p : s.finalizers) finalizers.push_back(production_json(p, output));
    stages.push_back({{"name", s.name},
                      {"kind", std::string(lift_kind_name(s.kind))},
                      {"finalizers", std::move(finalizers)},
                      {"deferred_eraser", s.deferred_eraser
                                              ? production_json(*s.deferred_eraser, output)
                                              : nlohmann::json(nullptr)}});
  }

  return {{"transform_id", t.transform_id},
          {"fresh_symbols", std::move(fresh)},
          {"replacements", std::move(replacements)},
          {"stages", std::move(stages)},
          {"start", t.start ? nlohmann::json(output.name(*t.start)) : nlohmann::json(nullptr)},
          {"epsilon_rule", t.epsilon_rule ? production_json(*t.epsilon_rule, output)
                                          : nlohmann::json(nullptr)}};
}

TransformTrace trace_from_json(const nlohmann::json& j, const Grammar& output) {
  TransformTrace t;
  t.transform_id = j.at("transform_id").get<std::string>();
  for (const auto& f : j.at("fresh_symbols"))
    t.fresh_symbols.push_back(FreshSymbol{output.require(f.at("name").get<std::string>()),
                                          f.at("name").get<std::string>(), f.at("origin").get<std::string>(),
                                          f.at("sources").get<std::vector<std::string>>()});
  for (const auto& s : j.at("stages")) {
    TraceStage stage;
    stage.name = s.at("name").get<std::string>();
    stage.kind = parse_lift_kind(s.at("kind").get<std::string>());
    for (const auto& p : s.at("finalizers")) stage.finalizers.push_back(production_from_json(p, output));
    if (!s.at("deferred_eraser").is_null())
      stage.deferred_eraser = production_from_json(s.at("deferred_eraser"), output);
    t.stages.push_back(std::move(stage));
  }
  for (const auto& r : j.at("replacements")) {
    Replacement rep;
    if (!r.at("removed").is_null()) rep.removed = production_from_json(r.at("removed"), output);
    for (const auto& p : r.at("added")) rep.added.push_back(production_from_json(p, output));
    rep.stage = r.at("stage").get<std::size_t>();
    if (rep.stage >= t.stages.size()) throw Error(ErrorCode::BadInput, "stage index out of range");
    for (const auto& m : r.at("macro"))
      rep.macro.push_back(MacroStep{m.at("offset").get<std::size_t>(), production_from_json(m, output)});
    t.replacements.push_back(std::move(rep));
  }
  if (!j.at("start").is_null()) t.start = output.require(j.at("start").get<std::string>());
  if (!j.at("epsilon_rule").is_null()) t.epsilon_rule = production_from_json(j.at("epsilon_rule"), output);
  return t;
}

GrammarEditor::GrammarEditor(Grammar g, std::string transform_id)
    : grammar_(std::move(g)), productions_(grammar_.productions()) {
  trace_.transform_id = std::move(transform_id);
  for (const auto& p : productions_) ++present_[p];
}

const Grammar& GrammarEditor::grammar() const {
  if (dirty_) {
    grammar_.set_productions(productions_);
    dirty_ = false;
  }
  return grammar_;
}

std::size_t GrammarEditor::begin_stage(std::string name, LiftKind kind) {
  trace_.stages.push_back(TraceStage{std::move(name), kind, {}, std::nullopt});
  return trace_.stages.size() - 1;
}

SymbolId GrammarEditor::fresh(const std::string& origin, const std::vector<SymbolId>& sources) {
  std::string label;
  std::vector<std::string> source_names;
  for (SymbolId s : sources) {
    label += grammar_.name(s);
    source_names.push_back(grammar_.name(s));
  }
  std::string name;
  do {
    name = origin + "_" + (label.empty() ? "" : label + "_") + std::to_string(++counter_);
  } while (grammar_.find(name) || !is_valid_symbol_name(name));
  SymbolId id = grammar_.add_nonterminal(name);
  trace_.fresh_symbols.push_back(FreshSymbol{id, name, origin, std::move(source_names)});
  return id;
}

void GrammarEditor::apply(Replacement r) {
  if (trace_.stages.empty()) begin_stage("edit", LiftKind::Local);
  r.stage = trace_.stages.size() - 1;
  // Same semantics as apply_replacement, with a presence index.
  std::vector<Production> fresh;
  for (const auto& p : r.added) {
    if (std::find(fresh.begin(), fresh.end(), p) != fresh.end()) continue;
    if (!(r.removed && p == *r.removed) && present_.count(p)) continue;
    fresh.push_back(p);
  }
  std::vector<Production>::iterator at = productions_.end();
  if (r.removed) {
    at = std::find(productions_.begin(), productions_.end(), *r.removed);
    if (at == productions_.end())
      throw Error(ErrorCode::TraceMismatch, "replacement removes a production that is not present");
    if (--present_[*r.removed] == 0) present_.erase(*r.removed);
    at = productions_.erase(at);
  }
  for (const auto& p : fresh) ++present_[p];
  productions_.insert(at, fresh.begin(), fresh.end());
  dirty_ = true;
  trace_.replacements.push_back(std::move(r));
}

void GrammarEditor::replace(const Production& removed, std::vector<Production> added,
                            std::vector<MacroStep> macro) {
  apply(Replacement{removed, std::move(added), 0, std::move(macro)});
}

void GrammarEditor::add(std::vector<Production> added) {
  apply(Replacement{std::nullopt, std::move(added), 0, {}});
}

void GrammarEditor::set_start(SymbolId s) {
  grammar_.set_start(s);
  trace_.start = s;
}

TransformResult GrammarEditor::finish() && {
  grammar();
  return TransformResult{std::move(grammar_), std::move(trace_)};
}

}  // namespace asnf
