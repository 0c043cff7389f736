#include "asnf/derivation.hpp"

#include <algorithm>
#include <unordered_map>

namespace asnf {

SententialForm apply_step(const SententialForm& form, const DerivationStep& step) {
  const auto& lhs = step.production.lhs;
  if (step.position > form.size() || form.size() - step.position < lhs.size())
    throw Error(ErrorCode::InvalidDerivation,
                "position " + std::to_string(step.position) + " is past the end of a form of length " +
                    std::to_string(form.size()));
  if (!std::equal(lhs.begin(), lhs.end(), form.begin() + static_cast<std::ptrdiff_t>(step.position)))
    throw Error(ErrorCode::InvalidDerivation,
                "left-hand side does not occur at position " + std::to_string(step.position));
  SententialForm out;
  out.reserve(form.size() - lhs.size() + step.production.rhs.size());
  out.insert(out.end(), form.begin(), form.begin() + static_cast<std::ptrdiff_t>(step.position));
  out.insert(out.end(), step.production.rhs.begin(), step.production.rhs.end());
  out.insert(out.end(), form.begin() + static_cast<std::ptrdiff_t>(step.position + lhs.size()), form.end());
  return out;
}

DerivationCheck validate_derivation(const Grammar& g, const Derivation& d) {
  DerivationCheck check;
  SententialForm form = d.start;
  for (SymbolId s : form) {
    if (s >= g.symbol_count()) {
      check.failed_step = 0;
      check.message = "start form uses an unregistered symbol";
      return check;
    }
  }
  for (std::size_t i = 0; i < d.steps.size(); ++i) {
    const auto& step = d.steps[i];
    if (!g.contains(step.production)) {
      check.failed_step = i;
      check.message = "production is not in the grammar";
      check.final_form = form;
      return check;
    }
    const auto& lhs = step.production.lhs;
    if (step.position > form.size() || form.size() - step.position < lhs.size() ||
        !std::equal(lhs.begin(), lhs.end(), form.begin() + static_cast<std::ptrdiff_t>(step.position))) {
      check.failed_step = i;
      std::size_t end = std::min(form.size(), step.position + lhs.size());
      Sequence window;
      if (step.position < form.size())
        window.assign(form.begin() + static_cast<std::ptrdiff_t>(step.position),
                      form.begin() + static_cast<std::ptrdiff_t>(end));
      check.message = "expected " + g.format(lhs) + " at position " + std::to_string(step.position) +
                      ", found " + (window.empty() ? std::string("end of form") : g.format(window));
      check.final_form = form;
      return check;
    }
    form = apply_step(form, step);
  }
  check.valid = true;
  check.final_form = std::move(form);
  return check;
}

SententialForm replay(const Derivation& d) {
  SententialForm form = d.start;
  for (const auto& step : d.steps) form = apply_step(form, step);
  return form;
}

std::vector<std::size_t> length_profile(const Derivation& d) {
  std::vector<std::size_t> profile{d.start.size()};
  SententialForm form = d.start;
  for (const auto& step : d.steps) {
    form = apply_step(form, step);
    profile.push_back(form.size());
  }
  return profile;
}

SententialForm TrackedDerivation::start_form() const {
  SententialForm form;
  for (OccId id : start_ids) form.push_back(occurrence_symbol.at(id));
  return form;
}

TrackedDerivation track(const Derivation& d) {
  TrackedDerivation t;
  std::vector<OccId> frontier;
  for (SymbolId s : d.start) frontier.push_back(t.new_occurrence(s));
  t.start_ids = frontier;
  for (const auto& step : d.steps) {
    const auto& p = step.production;
    if (step.position > frontier.size() || frontier.size() - step.position < p.lhs.size())
      throw Error(ErrorCode::InvalidDerivation, "step position out of range");
    auto first = frontier.begin() + static_cast<std::ptrdiff_t>(step.position);
    auto last = first + static_cast<std::ptrdiff_t>(p.lhs.size());
    TrackedStep ts{p, std::vector<OccId>(first, last), {}};
    for (std::size_t k = 0; k < p.lhs.size(); ++k)
      if (t.occurrence_symbol[ts.consumed[k]] != p.lhs[k])
        throw Error(ErrorCode::InvalidDerivation, "left-hand side does not match the form");
    for (SymbolId s : p.rhs) ts.created.push_back(t.new_occurrence(s));
    auto at = frontier.erase(first, last);
    frontier.insert(at, ts.created.begin(), ts.created.end());
    t.steps.push_back(std::move(ts));
  }
  return t;
}

Derivation untrack(const TrackedDerivation& t) {
  Derivation d;
  d.start = t.start_form();
  std::vector<OccId> frontier = t.start_ids;
  for (const auto& ts : t.steps) {
    if (ts.consumed.empty()) throw Error(ErrorCode::InvalidDerivation, "step consumes nothing");
    auto first = std::find(frontier.begin(), frontier.end(), ts.consumed.front());
    if (first == frontier.end())
      throw Error(ErrorCode::InvalidDerivation, "step consumes an occurrence that is not present");
    std::size_t pos = static_cast<std::size_t>(first - frontier.begin());
    if (frontier.size() - pos < ts.consumed.size() ||
        !std::equal(ts.consumed.begin(), ts.consumed.end(), first))
      throw Error(ErrorCode::InvalidDerivation, "consumed occurrences are not adjacent");
    d.steps.push_back(DerivationStep{pos, ts.production});
    auto at = frontier.erase(first, first + static_cast<std::ptrdiff_t>(ts.consumed.size()));
    frontier.insert(at, ts.created.begin(), ts.created.end());
  }
  return d;
}

Derivation leftmost(const Derivation& d) {
  TrackedDerivation t = track(d);
  std::unordered_map<OccId, std::size_t> consumer;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    if (t.steps[i].consumed.size() != 1)
      throw Error(ErrorCode::InvalidDerivation, "leftmost order needs a context-free derivation");
    consumer[t.steps[i].consumed[0]] = i;
  }
  TrackedDerivation out;
  out.start_ids = t.start_ids;
  out.occurrence_symbol = t.occurrence_symbol;
  std::vector<OccId> stack(t.start_ids.rbegin(), t.start_ids.rend());
  while (!stack.empty()) {
    OccId o = stack.back();
    stack.pop_back();
    auto it = consumer.find(o);
    if (it == consumer.end()) continue;
    const auto& step = t.steps[it->second];
    out.steps.push_back(step);
    stack.insert(stack.end(), step.created.rbegin(), step.created.rend());
  }
  return untrack(out);
}

namespace {

Sequence names_to_sequence(const nlohmann::json& j, const Grammar& g) {
  Sequence s;
  for (const auto& n : j) s.push_back(g.require(n.get<std::string>()));
  return s;
}

}  // namespace

nlohmann::json derivation_to_json(const Grammar& g, const Derivation& d) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : d.steps)
    steps.push_back({{"pos", s.position},
                     {"lhs", g.names(s.production.lhs)},
                     {"rhs", g.names(s.production.rhs)}});
  return {{"start", g.names(d.start)}, {"steps", std::move(steps)}, {"word", g.names(replay(d))}};
}

Derivation derivation_from_json(const nlohmann::json& j, const Grammar& g) {
  Derivation d;
  try {
    d.start = names_to_sequence(j.at("start"), g);
    for (const auto& s : j.at("steps"))
      d.steps.push_back(DerivationStep{
          s.at("pos").get<std::size_t>(),
          Production{names_to_sequence(s.at("lhs"), g), names_to_sequence(s.at("rhs"), g)}});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadInput, std::string("malformed derivation JSON: ") + e.what());
  }
  return d;
}

}  // namespace asnf
