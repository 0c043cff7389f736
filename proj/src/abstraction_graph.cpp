#include "asnf/abstraction_graph.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

#include "asnf/validate.hpp"

namespace asnf {

AbstractionsGraph build_abstractions_graph(const Grammar& g) {
  AbstractionsGraph ag;
  ag.nodes_ = g.nonterminals();
  ag.is_node_.assign(g.symbol_count(), false);
  for (SymbolId s : ag.nodes_) ag.is_node_[s] = true;
  for (const auto& sym : g.symbols()) ag.names_.push_back(sym.name);

  std::set<Edge> seen;
  for (const auto& p : g.productions())
    if (classify_production(p, g) == RuleKind::REN && p.lhs[0] != p.rhs[0]) seen.insert({p.lhs[0], p.rhs[0]});
  ag.edges_.assign(seen.begin(), seen.end());
  std::sort(ag.edges_.begin(), ag.edges_.end(), [&](const Edge& a, const Edge& b) {
    return std::tie(ag.names_[a.first], ag.names_[a.second]) < std::tie(ag.names_[b.first], ag.names_[b.second]);
  });

  bool asnf = false;
  for (FormId f : {FormId::WeakCfgAsnf, FormId::WeakGenAsnf, FormId::Savitch, FormId::Gknf})
    asnf = asnf || validate_normal_form(g, f).ok;
  if (!asnf) ag.warning_ = "grammar is not in any ASNF form; graph uses its renaming rules only";
  return ag;
}

void AbstractionsGraph::require(SymbolId a) const {
  if (a >= is_node_.size() || !is_node_[a])
    throw Error(ErrorCode::UnknownNode, "symbol is not a node of the abstractions graph");
}

Neighborhood AbstractionsGraph::abstraction_at(SymbolId a) const {
  require(a);
  Neighborhood n{a, {}};
  for (const Edge& e : edges_)
    if (e.first == a) n.edges.push_back(e);
  return n;
}

Neighborhood AbstractionsGraph::reverse_abstraction_at(SymbolId a) const {
  require(a);
  Neighborhood n{a, {}};
  for (const Edge& e : edges_)
    if (e.second == a) n.edges.push_back(e);
  return n;
}

std::string AbstractionsGraph::to_dot() const {
  std::ostringstream os;
  os << "digraph AG {\n";
  for (SymbolId s : nodes_) os << "  \"" << names_[s] << "\";\n";
  for (const Edge& e : edges_) os << "  \"" << names_[e.first] << "\" -> \"" << names_[e.second] << "\";\n";
  os << "}\n";
  return os.str();
}

nlohmann::json AbstractionsGraph::to_json() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (SymbolId s : nodes_) nodes.push_back(names_[s]);
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : edges_) edges.push_back({names_[e.first], names_[e.second]});
  nlohmann::json j = {{"nodes", nodes}, {"edges", edges}};
  j["warning"] = warning_ ? nlohmann::json(*warning_) : nlohmann::json(nullptr);
  return j;
}

}  // namespace asnf
