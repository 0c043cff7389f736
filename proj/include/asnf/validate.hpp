#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "asnf/grammar.hpp"

namespace asnf {

enum class FormId {
  WeakCfgAsnf,
  WeakGenAsnf,
  StrongCfgAsnf,
  StrongGenAsnf,
  Gknf,
  Savitch,
  StrongSavitch,
};

std::string_view form_name(FormId form);
/// Accepts the CLI spellings (weak-cfg-asnf, gknf, strong-savitch, ...).
std::optional<FormId> parse_form(std::string_view name);

struct Violation {
  Production production;
  std::string reason;
};

struct ValidationReport {
  FormId form;
  bool ok = true;
  std::vector<Violation> violations;
  /// {S→ε, S→S'} when the grammar carries the ε-Construction wrapper.
  std::optional<std::pair<Production, Production>> epsilon_exempt;
};

/// Finds the wrapper pair S→ε, S→S' where S is the start symbol, has no other
/// productions, and appears in no right-hand side.
std::optional<std::pair<Production, Production>> find_epsilon_exemption(const Grammar& g);

/// Checks the production shapes of `form`, plus strong-uniqueness for the
/// strong forms. All violations are collected.
ValidationReport validate_normal_form(const Grammar& g, FormId form);

nlohmann::json report_to_json(const ValidationReport& r, const Grammar& g);

}  // namespace asnf
