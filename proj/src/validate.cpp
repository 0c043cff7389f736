#include "asnf/validate.hpp"

#include <algorithm>
#include <unordered_map>

namespace asnf {

std::string_view form_name(FormId form) {
  switch (form) {
    case FormId::WeakCfgAsnf: return "weak-cfg-asnf";
    case FormId::WeakGenAsnf: return "weak-gen-asnf";
    case FormId::StrongCfgAsnf: return "strong-cfg-asnf";
    case FormId::StrongGenAsnf: return "strong-gen-asnf";
    case FormId::Gknf: return "gknf";
    case FormId::Savitch: return "savitch";
    case FormId::StrongSavitch: return "strong-savitch";
  }
  return "unknown";
}

std::optional<FormId> parse_form(std::string_view name) {
  for (FormId f : {FormId::WeakCfgAsnf, FormId::WeakGenAsnf, FormId::StrongCfgAsnf,
                   FormId::StrongGenAsnf, FormId::Gknf, FormId::Savitch, FormId::StrongSavitch})
    if (form_name(f) == name) return f;
  return std::nullopt;
}

std::optional<std::pair<Production, Production>> find_epsilon_exemption(const Grammar& g) {
  SymbolId s = g.start();
  std::optional<Production> eps;
  std::optional<Production> wrap;
  for (const auto& p : g.productions()) {
    if (std::find(p.rhs.begin(), p.rhs.end(), s) != p.rhs.end()) return std::nullopt;
    if (p.lhs != Sequence{s}) continue;
    if (p.rhs.empty() && !eps) {
      eps = p;
    } else if (p.rhs.size() == 1 && g.is_nonterminal(p.rhs[0]) && !wrap) {
      wrap = p;
    } else {
      return std::nullopt;
    }
  }
  if (eps && wrap) return std::make_pair(*eps, *wrap);
  return std::nullopt;
}

namespace {

bool is_kuroda_pair(const Production& p, const Grammar& g) {
  return p.lhs.size() == 2 && p.rhs.size() == 2 &&
         std::all_of(p.lhs.begin(), p.lhs.end(), [&](SymbolId id) { return g.is_nonterminal(id); }) &&
         std::all_of(p.rhs.begin(), p.rhs.end(), [&](SymbolId id) { return g.is_nonterminal(id); });
}

bool shape_allowed(FormId form, RuleKind kind, const Production& p, const Grammar& g) {
  switch (form) {
    case FormId::WeakCfgAsnf:
    case FormId::StrongCfgAsnf:
      return kind == RuleKind::REN || kind == RuleKind::SS || kind == RuleKind::TERMINAL;
    case FormId::WeakGenAsnf:
    case FormId::StrongGenAsnf:
      return kind == RuleKind::REN || kind == RuleKind::SS || kind == RuleKind::TERMINAL ||
             kind == RuleKind::RSS;
    case FormId::Gknf:
      return kind == RuleKind::EPSILON || kind == RuleKind::SS || kind == RuleKind::TERMINAL ||
             is_kuroda_pair(p, g);
    case FormId::Savitch:
      return kind == RuleKind::ANNIHILATE2 || kind == RuleKind::SS || kind == RuleKind::TERMINAL;
    case FormId::StrongSavitch:
      return kind == RuleKind::ANNIHILATE2 || kind == RuleKind::SS ||
             kind == RuleKind::TERMINAL || kind == RuleKind::REN;
  }
  return false;
}

bool is_strong(FormId form) {
  return form == FormId::StrongCfgAsnf || form == FormId::StrongGenAsnf ||
         form == FormId::StrongSavitch;
}

}  // namespace

ValidationReport validate_normal_form(const Grammar& g, FormId form) {
  ValidationReport report{form, true, {}, find_epsilon_exemption(g)};

  auto exempt = [&](const Production& p) {
    return report.epsilon_exempt &&
           (p == report.epsilon_exempt->first || p == report.epsilon_exempt->second);
  };

  std::unordered_map<Sequence, std::size_t, SequenceHash> lhs_count;
  std::unordered_map<Sequence, std::size_t, SequenceHash> rhs_count;
  for (const auto& p : g.productions()) {
    if (exempt(p)) continue;
    ++lhs_count[p.lhs];
    ++rhs_count[p.rhs];
  }

  for (const auto& p : g.productions()) {
    if (exempt(p)) continue;
    RuleKind kind = classify_production(p, g);
    if (!shape_allowed(form, kind, p, g)) {
      report.violations.push_back(
          {p, "rule shape " + std::string(rule_kind_name(kind)) + " not allowed in " +
                  std::string(form_name(form))});
      continue;
    }
    if (!is_strong(form)) continue;

    bool check_both = kind == RuleKind::SS || kind == RuleKind::TERMINAL ||
                      (kind == RuleKind::RSS && form == FormId::StrongGenAsnf);
    bool check_lhs = check_both || (kind == RuleKind::ANNIHILATE2 && form == FormId::StrongSavitch);
    if (check_lhs && lhs_count[p.lhs] > 1)
      report.violations.push_back(
          {p, "strong-uniqueness: " + std::to_string(lhs_count[p.lhs]) +
                  " productions share left-hand side " + g.format(p.lhs)});
    if (check_both && rhs_count[p.rhs] > 1)
      report.violations.push_back(
          {p, "strong-uniqueness: " + std::to_string(rhs_count[p.rhs]) +
                  " productions share right-hand side " + g.format(p.rhs)});
  }
  report.ok = report.violations.empty();
  return report;
}

nlohmann::json report_to_json(const ValidationReport& r, const Grammar& g) {
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& v : r.violations)
    violations.push_back({{"rule", g.format(v.production)}, {"reason", v.reason}});
  nlohmann::json exempt = nullptr;
  if (r.epsilon_exempt)
    exempt = {g.format(r.epsilon_exempt->first), g.format(r.epsilon_exempt->second)};
  return {{"form", std::string(form_name(r.form))},
          {"ok", r.ok},
          {"violations", std::move(violations)},
          {"epsilon_exempt", std::move(exempt)}};
}

}  // namespace asnf
