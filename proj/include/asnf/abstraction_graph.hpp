#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "asnf/grammar.hpp"

namespace asnf {

using Edge = std::pair<SymbolId, SymbolId>;

/// A node with either its out-edges (ABS) or its in-edges (RABS).
struct Neighborhood {
  SymbolId center;
  std::vector<Edge> edges;
};

/// One node per nonterminal, one edge A→B per renaming rule with A ≠ B.
/// Edges are kept sorted by source name, then target name.
class AbstractionsGraph {
 public:
  const std::vector<SymbolId>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  /// Set when the source grammar is in none of the ASNF forms.
  const std::optional<std::string>& warning() const { return warning_; }
  const std::string& name(SymbolId s) const { return names_.at(s); }

  /// Throws UNKNOWN_NODE for symbols that are not nodes.
  Neighborhood abstraction_at(SymbolId a) const;
  Neighborhood reverse_abstraction_at(SymbolId a) const;

  std::string to_dot() const;
  nlohmann::json to_json() const;

 private:
  friend AbstractionsGraph build_abstractions_graph(const Grammar& g);
  void require(SymbolId a) const;

  std::vector<SymbolId> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::string> names_;
  std::vector<bool> is_node_;
  std::optional<std::string> warning_;
};

AbstractionsGraph build_abstractions_graph(const Grammar& g);

}  // namespace asnf
