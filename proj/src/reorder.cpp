#include "asnf/reorder.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <unordered_map>

#include "asnf/validate.hpp"
#include "frontier_builder.hpp"

namespace asnf {

namespace {

std::size_t g_cap_factor = 10;

void check_cap(std::size_t swaps, std::size_t steps) {
  if (swaps > g_cap_factor * steps * steps)
    throw Error(ErrorCode::CapExceeded, "swap loop ran past " + std::to_string(g_cap_factor) +
                                            " x steps^2 swaps (" + std::to_string(swaps) + ")");
}

}  // namespace

void set_swap_cap_factor_for_testing(std::size_t factor) { g_cap_factor = factor; }

std::pair<Derivation, Derivation> factorize_derivation(const Derivation& d, std::size_t lo, std::size_t hi) {
  if (lo > hi || hi > d.start.size()) throw Error(ErrorCode::BadInput, "segment out of range");
  TrackedDerivation t = track(d);
  enum Side : char { Left, Middle, Right };
  std::vector<Side> side(t.occurrence_symbol.size(), Left);
  for (std::size_t k = 0; k < t.start_ids.size(); ++k)
    side[t.start_ids[k]] = k < lo ? Left : (k < hi ? Middle : Right);

  TrackedDerivation left, right;
  left.occurrence_symbol = right.occurrence_symbol = t.occurrence_symbol;
  left.start_ids.assign(t.start_ids.begin(), t.start_ids.begin() + static_cast<std::ptrdiff_t>(lo));
  right.start_ids.assign(t.start_ids.begin() + static_cast<std::ptrdiff_t>(hi), t.start_ids.end());
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto& s = t.steps[i];
    Side first = side[s.consumed.front()];
    bool mixed = std::any_of(s.consumed.begin(), s.consumed.end(), [&](OccId o) { return side[o] != first; });
    if (first == Middle || mixed)
      throw Error(ErrorCode::SegmentRewritten, "step " + std::to_string(i) + " rewrites the middle segment");
    for (OccId o : s.created) side[o] = first;
    (first == Left ? left : right).steps.push_back(s);
  }
  return {untrack(left), untrack(right)};
}

namespace {

void require_terminal_free_structure(const Grammar& g) {
  for (const auto& p : g.productions()) {
    bool all_nt = std::all_of(p.lhs.begin(), p.lhs.end(), [&](SymbolId s) { return g.is_nonterminal(s); }) &&
                  std::all_of(p.rhs.begin(), p.rhs.end(), [&](SymbolId s) { return g.is_nonterminal(s); });
    if (!all_nt && classify_production(p, g) != RuleKind::TERMINAL)
      throw Error(ErrorCode::ShapeViolation,
                  "'" + g.format(p) + "' is neither a rule over nonterminals nor A -> a");
  }
}

/// Bubbles steps for which `late` holds past the steps after them, always
/// swapping the first offending adjacent pair.
void bubble_first(TrackedDerivation& t, const std::function<bool(const TrackedStep&)>& late,
                  const std::function<bool(const TrackedStep&)>& early) {
  std::size_t swaps = 0;
  const std::size_t n = t.steps.size();
  while (true) {
    std::size_t i = 0;
    while (i + 1 < n && !(late(t.steps[i]) && early(t.steps[i + 1]))) ++i;
    if (i + 1 >= n) return;
    std::swap(t.steps[i], t.steps[i + 1]);
    check_cap(++swaps, n);
  }
}

/// Same, but always swaps the last offending pair (scan from the end).
void bubble_last(TrackedDerivation& t, const std::function<bool(const TrackedStep&)>& late,
                 const std::function<bool(const TrackedStep&)>& early) {
  std::size_t swaps = 0;
  const std::size_t n = t.steps.size();
  while (true) {
    std::size_t i = n;
    while (i >= 2 && !(late(t.steps[i - 2]) && early(t.steps[i - 1]))) --i;
    if (i < 2) return;
    std::swap(t.steps[i - 2], t.steps[i - 1]);
    check_cap(++swaps, n);
  }
}

}  // namespace

Derivation postpone_terminals(const Grammar& g, const Derivation& d) {
  require_terminal_free_structure(g);
  TrackedDerivation t = track(d);
  auto terminal = [&](const TrackedStep& s) { return classify_production(s.production, g) == RuleKind::TERMINAL; };
  bubble_first(t, terminal, [&](const TrackedStep& s) { return !terminal(s); });
  return untrack(t);
}

nlohmann::json phase_report_to_json(const PhaseReport& r) {
  auto kinds = [](const std::set<RuleKind>& ks) {
    nlohmann::json out = nlohmann::json::array();
    for (RuleKind k : ks) out.push_back(std::string(rule_kind_name(k)));
    return out;
  };
  return {{"boundaries", {r.i, r.j}},
          {"length_profile", r.length_profile},
          {"phase1_kinds", kinds(r.phase1_kinds)},
          {"phase2_kinds", kinds(r.phase2_kinds)},
          {"phase3_kinds", kinds(r.phase3_kinds)}};
}

namespace {

PhaseReport make_report(const Grammar& g, const Derivation& d, std::size_t i, std::size_t j) {
  PhaseReport r;
  r.i = i;
  r.j = j;
  for (std::size_t k = 0; k < d.steps.size(); ++k) {
    RuleKind kind = classify_production(d.steps[k].production, g);
    (k < i ? r.phase1_kinds : k < j ? r.phase2_kinds : r.phase3_kinds).insert(kind);
  }
  r.length_profile = length_profile(d);
  return r;
}

bool is_grow(RuleKind k) { return k == RuleKind::REN || k == RuleKind::SS; }

std::pair<Derivation, PhaseReport> reorder_savitch(const Grammar& g, const Derivation& d) {
  TrackedDerivation t = track(d);
  auto kind = [&](const TrackedStep& s) { return classify_production(s.production, g); };
  auto shrink = [&](const TrackedStep& s) {
    RuleKind k = kind(s);
    return k == RuleKind::ANNIHILATE2 || k == RuleKind::EPSILON;
  };
  bubble_last(t, shrink, [&](const TrackedStep& s) { return is_grow(kind(s)); });
  Derivation out = untrack(t);
  std::size_t i = 0;
  while (i < t.steps.size() && is_grow(kind(t.steps[i]))) ++i;
  std::size_t j = i;
  while (j < t.steps.size() && shrink(t.steps[j])) ++j;
  return {out, make_report(g, out, i, j)};
}

/// Strong-GEN-ASNF: erasures run as X M → Y, Y → X ("pass-throughs"). They
/// are taken out, the grow steps are hoisted, and each erased marker is
/// re-absorbed right after the shrink step that produced it.
std::pair<Derivation, PhaseReport> reorder_gen(const Grammar& g, const Derivation& d) {
  TrackedDerivation t = track(d);
  const std::size_t n = t.steps.size();
  auto kind = [&](std::size_t i) { return classify_production(t.steps[i].production, g); };

  std::unordered_map<OccId, std::size_t> consumer;
  for (std::size_t i = 0; i < n; ++i)
    for (OccId o : t.steps[i].consumed) consumer[o] = i;

  std::vector<bool> removed(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (kind(i) != RuleKind::RSS) continue;
    OccId y = t.steps[i].created[0];
    auto c = consumer.find(y);
    if (c == consumer.end() || kind(c->second) != RuleKind::REN) continue;
    OccId z = t.steps[c->second].created[0];
    OccId u = t.steps[i].consumed[0], v = t.steps[i].consumed[1];
    SymbolId sz = t.occurrence_symbol[z];
    OccId keep;
    if (t.occurrence_symbol[u] == sz) keep = u;
    else if (t.occurrence_symbol[v] == sz) keep = v;
    else continue;
    removed[i] = removed[c->second] = true;
    consumer.erase(u);
    consumer.erase(v);
    if (auto k = consumer.find(z); k != consumer.end()) {
      std::size_t later = k->second;
      consumer.erase(k);
      for (OccId& o : t.steps[later].consumed)
        if (o == z) o = keep;
      consumer[keep] = later;
    }
  }

  std::vector<int> made_in(t.occurrence_symbol.size(), 0);
  std::vector<int> phase(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (removed[i]) continue;
    RuleKind k = kind(i);
    bool after_shrink = std::any_of(t.steps[i].consumed.begin(), t.steps[i].consumed.end(),
                                    [&](OccId o) { return made_in[o] == 2; });
    if (k == RuleKind::TERMINAL) phase[i] = 3;
    else if (k == RuleKind::RSS || k == RuleKind::EPSILON) phase[i] = 2;
    else if (k == RuleKind::REN) phase[i] = after_shrink ? 2 : 1;
    else if (after_shrink)
      throw Error(ErrorCode::FormViolation, "step " + std::to_string(i) + " (" +
                                                g.format(t.steps[i].production) +
                                                ") grows a symbol produced by a shrink step");
    else phase[i] = 1;
    for (OccId o : t.steps[i].created) made_in[o] = phase[i];
  }

  std::vector<bool> live_consumed(t.occurrence_symbol.size(), false);
  for (std::size_t i = 0; i < n; ++i)
    if (!removed[i])
      for (OccId o : t.steps[i].consumed) live_consumed[o] = true;
  auto pending = [&](OccId o) { return !live_consumed[o] && g.is_nonterminal(t.occurrence_symbol[o]); };

  detail::NeighborRules rules(g, g.productions());
  detail::FrontierBuilder b(t, ErrorCode::FormViolation);
  auto push = [&](const TrackedStep& s) { b.push(s); };
  auto absorb = [&](OccId m) {
    if (!b.absorb(m, rules))
      throw Error(ErrorCode::FormViolation,
                  "no rule absorbs '" + g.name(b.symbol(m)) + "' into a neighbour");
  };

  std::size_t i_end = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (!removed[i] && phase[i] == 1) push(t.steps[i]);
  i_end = b.out().steps.size();
  std::vector<bool> grown(t.occurrence_symbol.size(), false);
  for (OccId o : t.start_ids) grown[o] = true;
  for (std::size_t i = 0; i < n; ++i)
    if (!removed[i] && phase[i] == 1)
      for (OccId o : t.steps[i].created) grown[o] = true;
  for (OccId o : std::vector<OccId>(b.frontier()))
    if (grown[o] && pending(o)) absorb(o);

  std::vector<bool> emitted(n, false);
  std::function<void(std::size_t)> emit_chain = [&](std::size_t i) {
    emitted[i] = true;
    push(t.steps[i]);
    for (OccId o : t.steps[i].created) {
      if (pending(o)) {
        absorb(o);
        continue;
      }
      auto c = consumer.find(o);
      if (c != consumer.end() && !removed[c->second] && !emitted[c->second] && phase[c->second] == 2 &&
          kind(c->second) == RuleKind::REN)
        emit_chain(c->second);
    }
  };
  for (std::size_t i = 0; i < n; ++i)
    if (!removed[i] && phase[i] == 2 && !emitted[i]) emit_chain(i);
  std::size_t j_end = b.out().steps.size();

  for (std::size_t i = 0; i < n; ++i)
    if (!removed[i] && phase[i] == 3) push(t.steps[i]);

  Derivation result = untrack(b.out());
  return {result, make_report(g, result, i_end, j_end)};
}

}  // namespace

std::pair<Derivation, PhaseReport> grow_shrink_reorder(const Grammar& g, const Derivation& d) {
  bool savitch = validate_normal_form(g, FormId::StrongSavitch).ok;
  if (!savitch && !validate_normal_form(g, FormId::StrongGenAsnf).ok)
    throw Error(ErrorCode::FormViolation, "grammar is neither Strong-Savitch nor Strong-GEN-ASNF");
  auto check = validate_derivation(g, d);
  if (!check.valid)
    throw Error(ErrorCode::InvalidDerivation,
                "step " + std::to_string(check.failed_step.value_or(0)) + ": " + check.message);
  Derivation postponed = postpone_terminals(g, d);
  auto result = savitch ? reorder_savitch(g, postponed) : reorder_gen(g, postponed);
  if (replay(result.first) != check.final_form)
    throw Error(ErrorCode::FormViolation, "reordering changed the derived word");
  return result;
}

}  // namespace asnf
