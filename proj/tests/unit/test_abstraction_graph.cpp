#include "asnf/abstraction_graph.hpp"

#include <regex>

#include "asnf/transforms.hpp"
#include "asnf/validate.hpp"
#include "helpers.hpp"

using namespace asnf;
using test::gr;

namespace {

std::vector<std::pair<std::string, std::string>> named(const AbstractionsGraph& ag, const std::vector<Edge>& es) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const Edge& e : es) out.emplace_back(ag.name(e.first), ag.name(e.second));
  return out;
}

using Named = std::vector<std::pair<std::string, std::string>>;

}  // namespace

TEST_CASE("one edge per renaming") {
  Grammar g = gr("@start S\nS -> A\nA -> B | C\nD -> C\nB -> b\nC -> c\nA B -> D");
  AbstractionsGraph ag = build_abstractions_graph(g);
  CHECK(named(ag, ag.edges()) == Named{{"A", "B"}, {"A", "C"}, {"D", "C"}, {"S", "A"}});
  CHECK(ag.nodes().size() == g.nonterminals().size());
}

TEST_CASE("self renamings give no edge") {
  Grammar g = gr("@start A\nA -> A | a");
  AbstractionsGraph ag = build_abstractions_graph(g);
  CHECK(ag.edges().empty());
  CHECK(ag.nodes().size() == 1);
}

TEST_CASE("abstractions and reverse abstractions") {
  Grammar g = gr("@start S\nS -> A\nA -> B | C\nD -> C\nB -> b\nC -> c\nD -> d");
  AbstractionsGraph ag = build_abstractions_graph(g);
  CHECK(named(ag, ag.abstraction_at(g.require("A")).edges) == Named{{"A", "B"}, {"A", "C"}});
  CHECK(named(ag, ag.reverse_abstraction_at(g.require("C")).edges) == Named{{"A", "C"}, {"D", "C"}});
  CHECK(ag.abstraction_at(g.require("B")).edges.empty());
  CHECK(ag.reverse_abstraction_at(g.require("S")).edges.empty());
}

TEST_CASE("terminals and foreign ids are unknown nodes") {
  Grammar g = gr("@start S\nS -> a");
  AbstractionsGraph ag = build_abstractions_graph(g);
  for (SymbolId bad : {g.require("a"), SymbolId{99}}) {
    try {
      ag.abstraction_at(bad);
      FAIL("expected UNKNOWN_NODE");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnknownNode);
    }
  }
}

TEST_CASE("DOT output parses back to the same graph") {
  for (const char* name : {"anbn", "expr", "copy", "random2"}) {
    CAPTURE(name);
    Grammar g = run_transform(test::corpus(name), TransformTarget::StrongGenAsnf).grammar;
    AbstractionsGraph ag = build_abstractions_graph(g);
    std::string dot = ag.to_dot();

    std::set<std::string> nodes;
    Named edges;
    std::regex node_re(R"re(^\s*"([^"]+)";$)re"), edge_re(R"re(^\s*"([^"]+)" -> "([^"]+)";$)re");
    std::istringstream in(dot);
    for (std::string line; std::getline(in, line);) {
      std::smatch m;
      if (std::regex_match(line, m, edge_re)) edges.emplace_back(m[1], m[2]);
      else if (std::regex_match(line, m, node_re)) nodes.insert(m[1]);
    }
    std::set<std::string> want_nodes;
    for (SymbolId s : ag.nodes()) want_nodes.insert(ag.name(s));
    CHECK(nodes == want_nodes);
    CHECK(edges == named(ag, ag.edges()));
    CHECK(dot == build_abstractions_graph(g).to_dot());
  }
}

TEST_CASE("edge count equals renamings minus self loops") {
  for (const char* name : {"anbn", "dyck1", "random1", "random4"}) {
    CAPTURE(name);
    Grammar g = to_strong_asnf(test::corpus(name), Flavor::Cfg).grammar;
    std::size_t ren = 0;
    for (const auto& p : g.productions())
      if (classify_production(p, g) == RuleKind::REN && p.lhs[0] != p.rhs[0]) ++ren;
    CHECK(build_abstractions_graph(g).edges().size() == ren);
  }
}

TEST_CASE("warning for grammars outside the normal forms") {
  CHECK(build_abstractions_graph(test::corpus("anbn")).warning().has_value());
  CHECK_FALSE(build_abstractions_graph(to_strong_asnf(test::corpus("anbn"), Flavor::Cfg).grammar).warning());
  auto j = build_abstractions_graph(gr("@start S\nS -> A\nA -> a")).to_json();
  CHECK(j["edges"] == nlohmann::json::parse(R"([["S","A"]])"));
}
