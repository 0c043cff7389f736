#include "asnf/reorder.hpp"

#include "asnf/abstraction_graph.hpp"
#include "asnf/lift.hpp"
#include "asnf/transforms.hpp"
#include "asnf/validate.hpp"
#include "helpers.hpp"

using namespace asnf;
using test::gr;
using test::prod;

namespace {

DerivationStep step(const Grammar& g, std::size_t pos, const char* l, const char* r) {
  return DerivationStep{pos, prod(g, l, r)};
}

bool non_decreasing(const std::vector<std::size_t>& v, std::size_t from, std::size_t to) {
  for (std::size_t k = from; k + 1 <= to && k + 1 < v.size(); ++k)
    if (v[k + 1] < v[k]) return false;
  return true;
}

bool non_increasing(const std::vector<std::size_t>& v, std::size_t from, std::size_t to) {
  for (std::size_t k = from; k + 1 <= to && k + 1 < v.size(); ++k)
    if (v[k + 1] > v[k]) return false;
  return true;
}

/// Strong-Savitch grammar where a shrink can happen before a later grow.
Grammar savitch_host() {
  return gr("@start S\nS -> P Q\nP -> A B\nQ -> C D\nA B -> @eps\nC -> c\nD -> d");
}

}  // namespace

TEST_CASE("factorization with nothing on the right") {
  Grammar g = gr("@start S\nS -> A B C\nA -> a\nB -> b\nC -> c");
  Derivation d{g.parse_sequence("A B C"), {step(g, 0, "A", "a")}};
  auto [left, right] = factorize_derivation(d, 1, 2);
  CHECK(left.steps.size() == 1);
  CHECK(right.steps.empty());
  CHECK(right.start == g.parse_sequence("C"));
}

TEST_CASE("factorization splits interleaved steps around the middle") {
  Grammar g = gr("@start S\nX -> A B\nY -> C D\nA -> a\nD -> d");
  Derivation d{g.parse_sequence("X A B Y"),
               {step(g, 0, "X", "A B"), step(g, 4, "Y", "C D"), step(g, 0, "A", "a"), step(g, 5, "D", "d")}};
  REQUIRE(validate_derivation(g, d).valid);
  auto [left, right] = factorize_derivation(d, 1, 3);
  CHECK(left.steps.size() + right.steps.size() == d.steps.size());
  CHECK(validate_derivation(g, left).valid);
  CHECK(validate_derivation(g, right).valid);
  Sequence joined = replay(left);
  Sequence mid = g.parse_sequence("A B");
  joined.insert(joined.end(), mid.begin(), mid.end());
  Sequence r = replay(right);
  joined.insert(joined.end(), r.begin(), r.end());
  CHECK(joined == replay(d));
}

TEST_CASE("factorization refuses to touch the middle") {
  Grammar g = gr("@start S\nA -> a");
  Derivation d{g.parse_sequence("A A A"), {step(g, 1, "A", "a")}};
  try {
    factorize_derivation(d, 1, 2);
    FAIL("expected SEGMENT_REWRITTEN");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SegmentRewritten);
  }
}

TEST_CASE("terminal steps move behind the later structure steps") {
  Grammar g = gr("@start S\nS -> A B\nA -> a\nB -> C D\nC -> c\nD -> d");
  Derivation d{{g.start()},
               {step(g, 0, "S", "A B"), step(g, 0, "A", "a"), step(g, 1, "B", "C D"), step(g, 1, "C", "c"),
                step(g, 2, "D", "d")}};
  REQUIRE(validate_derivation(g, d).valid);
  Derivation p = postpone_terminals(g, d);
  CHECK(validate_derivation(g, p).valid);
  CHECK(replay(p) == replay(d));
  CHECK(classify_production(p.steps[0].production, g) == RuleKind::SS);
  CHECK(classify_production(p.steps[1].production, g) == RuleKind::SS);
  for (std::size_t k = 2; k < p.steps.size(); ++k) CHECK(classify_production(p.steps[k].production, g) == RuleKind::TERMINAL);
}

TEST_CASE("already ordered derivations come back unchanged") {
  Grammar g = gr("@start S\nS -> A B\nA -> a\nB -> b");
  Derivation d{{g.start()}, {step(g, 0, "S", "A B"), step(g, 0, "A", "a"), step(g, 1, "B", "b")}};
  CHECK(postpone_terminals(g, d) == d);
}

TEST_CASE("aabb in weak CFG ASNF ends in four terminal steps") {
  Grammar g = to_weak_cfg_asnf(test::corpus("anbn")).grammar;
  Derivation p = postpone_terminals(g, test::derive(g, "a a b b"));
  std::size_t suffix = 0;
  for (auto it = p.steps.rbegin(); it != p.steps.rend(); ++it, ++suffix)
    if (classify_production(it->production, g) != RuleKind::TERMINAL) break;
  CHECK(suffix == 4);
  for (std::size_t k = 0; k + suffix < p.steps.size(); ++k)
    CHECK(classify_production(p.steps[k].production, g) != RuleKind::TERMINAL);
}

TEST_CASE("postponing needs terminal-free structure rules") {
  Grammar g = test::corpus("anbn");
  CHECK_THROWS_AS(postpone_terminals(g, test::derive(g, "a b")), Error);
}

TEST_CASE("Savitch: grow steps are hoisted before annihilations") {
  Grammar g = savitch_host();
  REQUIRE(validate_normal_form(g, FormId::StrongSavitch).ok);
  Derivation d{{g.start()},
               {step(g, 0, "S", "P Q"), step(g, 0, "P", "A B"), step(g, 0, "A B", "@eps"), step(g, 0, "Q", "C D"),
                step(g, 0, "C", "c"), step(g, 1, "D", "d")}};
  REQUIRE(validate_derivation(g, d).valid);
  auto [r, report] = grow_shrink_reorder(g, d);
  CHECK(validate_derivation(g, r).valid);
  CHECK(replay(r) == replay(d));
  CHECK(report.i == 3);
  CHECK(report.j == 4);
  CHECK(report.phase1_kinds == std::set<RuleKind>{RuleKind::SS});
  CHECK(report.phase2_kinds == std::set<RuleKind>{RuleKind::ANNIHILATE2});
  CHECK(report.phase3_kinds == std::set<RuleKind>{RuleKind::TERMINAL});
  CHECK(non_decreasing(report.length_profile, 0, report.i));
  CHECK(non_increasing(report.length_profile, report.i, report.j));
}

TEST_CASE("already phased derivation is unchanged") {
  Grammar g = savitch_host();
  Derivation d{{g.start()},
               {step(g, 0, "S", "P Q"), step(g, 0, "P", "A B"), step(g, 2, "Q", "C D"), step(g, 0, "A B", "@eps"),
                step(g, 0, "C", "c"), step(g, 1, "D", "d")}};
  CHECK(grow_shrink_reorder(g, d).first == d);
}

TEST_CASE("Strong-GEN-ASNF phase two uses RSS and reverse abstractions") {
  Grammar in = test::corpus("anbncn");
  auto r = run_transform(in, TransformTarget::GrowShrink);
  Derivation d = lift_derivation(r.trace, in, test::derive(in, "a a b b c c"));
  auto [out, report] = grow_shrink_reorder(r.grammar, d);
  CHECK(validate_derivation(r.grammar, out).valid);
  CHECK(replay(out) == replay(d));
  for (RuleKind k : report.phase1_kinds) CHECK((k == RuleKind::REN || k == RuleKind::SS));
  for (RuleKind k : report.phase2_kinds) CHECK((k == RuleKind::REN || k == RuleKind::RSS));
  CHECK(report.phase3_kinds == std::set<RuleKind>{RuleKind::TERMINAL});
  CHECK(non_decreasing(report.length_profile, 0, report.i));
  CHECK(non_increasing(report.length_profile, report.i, report.j));

  AbstractionsGraph ag = build_abstractions_graph(r.grammar);
  for (std::size_t k = report.i; k < report.j; ++k) {
    const Production& p = out.steps[k].production;
    if (classify_production(p, r.grammar) != RuleKind::REN) continue;
    auto in_edges = ag.reverse_abstraction_at(p.rhs[0]).edges;
    CHECK(std::find(in_edges.begin(), in_edges.end(), Edge{p.lhs[0], p.rhs[0]}) != in_edges.end());
  }
}

TEST_CASE("grow-shrink needs a strong Savitch or strong GEN grammar") {
  Grammar g = test::corpus("anbn");
  try {
    grow_shrink_reorder(g, test::derive(g, "a b"));
    FAIL("expected FORM_VIOLATION");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FormViolation);
  }
}

TEST_CASE("the swap cap fires when set below the needed swaps") {
  Grammar g = savitch_host();
  Derivation d{{g.start()},
               {step(g, 0, "S", "P Q"), step(g, 0, "P", "A B"), step(g, 0, "A B", "@eps"), step(g, 0, "Q", "C D"),
                step(g, 0, "C", "c"), step(g, 1, "D", "d")}};
  set_swap_cap_factor_for_testing(0);
  try {
    grow_shrink_reorder(g, d);
    FAIL("expected CAP_EXCEEDED");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CapExceeded);
  }
  set_swap_cap_factor_for_testing(10);
  CHECK_NOTHROW(grow_shrink_reorder(g, d));
}

TEST_CASE("phase report JSON") {
  Grammar g = savitch_host();
  Derivation d{{g.start()},
               {step(g, 0, "S", "P Q"), step(g, 0, "P", "A B"), step(g, 0, "A B", "@eps"), step(g, 0, "Q", "C D"),
                step(g, 0, "C", "c"), step(g, 1, "D", "d")}};
  auto j = phase_report_to_json(grow_shrink_reorder(g, d).second);
  CHECK(j["boundaries"] == nlohmann::json({3, 4}));
  CHECK(j["length_profile"].size() == 7);
}
