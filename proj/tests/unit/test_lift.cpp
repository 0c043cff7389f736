#include "asnf/lift.hpp"

#include "asnf/transforms.hpp"
#include "helpers.hpp"

using namespace asnf;
using test::gr;

namespace {

void check_lift(const Grammar& in, const TransformResult& r, const Derivation& d) {
  Derivation lifted = lift_derivation(r.trace, in, d);
  auto c = validate_derivation(r.grammar, lifted);
  CHECK(c.valid);
  CHECK(c.final_form == replay(d));
}

}  // namespace

TEST_CASE("AB -> CD lifts to two steps through the split symbol") {
  Grammar g = gr("@start S\nS -> A B\nA B -> C D\nA -> a\nB -> b\nC -> c\nD -> d");
  auto r = to_weak_gen_asnf(g);
  Derivation d{g.parse_sequence("A B"), {DerivationStep{0, test::prod(g, "A B", "C D")}}};
  Derivation lifted = lift_derivation(r.trace, g, d);
  CHECK(lifted.steps.size() == 2);
  CHECK(validate_derivation(r.grammar, lifted).valid);
  CHECK(replay(lifted) == g.parse_sequence("C D"));
}

TEST_CASE("derivations over shared rules lift unchanged") {
  Grammar g = gr("@start S\nS -> A B | A\nA -> a\nB -> b\nA B -> C\nC -> c");
  auto r = to_weak_gen_asnf(g);
  Derivation d{g.parse_sequence("A B"), {DerivationStep{0, test::prod(g, "A", "a")}}};
  CHECK(lift_derivation(r.trace, g, d) == d);
}

TEST_CASE("a^n b^n lifted through strong ASNF") {
  Grammar g = test::corpus("anbn");
  auto r = to_strong_asnf(g, Flavor::Cfg);
  check_lift(g, r, test::derive(g, "a a a b b b"));
}

TEST_CASE("every corpus grammar lifts through every transform") {
  struct Case {
    const char* grammar;
    const char* word;
  };
  for (Case c : {Case{"dyck1", "l l r r l r"}, Case{"palindromes", "a b b a"}, Case{"expr", "l x p x r m x"},
                 Case{"anbncn", "a a b b c c"}, Case{"copy", "a b a b"}, Case{"random1", "b a"},
                 Case{"random3", "a b b a"}, Case{"random5", "b a b"}}) {
    CAPTURE(c.grammar);
    Grammar g = test::corpus(c.grammar);
    auto m = membership(g, test::word(c.word), test::budget());
    REQUIRE(m.verdict == Verdict::Yes);
    for (TransformTarget t : {TransformTarget::WeakCfgAsnf, TransformTarget::Gknf, TransformTarget::WeakGenAsnf,
                              TransformTarget::StrongCfgAsnf, TransformTarget::StrongGenAsnf,
                              TransformTarget::Savitch, TransformTarget::StrongSavitch,
                              TransformTarget::GrowShrink}) {
      if (!is_context_free(g) && (t == TransformTarget::WeakCfgAsnf || t == TransformTarget::StrongCfgAsnf))
        continue;
      CAPTURE(target_name(t));
      check_lift(g, run_transform(g, t), *m.derivation);
    }
  }
}

TEST_CASE("the empty word lifts to the wrapper rule") {
  Grammar g = test::corpus("dyck1");
  auto r = to_strong_asnf(g, Flavor::Cfg);
  Derivation eps = test::derive(g, "");
  Derivation lifted = lift_derivation(r.trace, g, eps);
  CHECK(lifted.steps.size() == 1);
  CHECK(validate_derivation(r.grammar, lifted).valid);
  CHECK(replay(lifted).empty());
}

TEST_CASE("minimized renamings lift too") {
  Grammar g = test::corpus("expr");
  TransformOptions opts;
  opts.minimize_renamings = true;
  check_lift(g, to_strong_asnf(g, Flavor::Cfg, opts), test::derive(g, "x m l x p x r"));
}

TEST_CASE("trace and derivation mismatches are reported") {
  Grammar g = test::corpus("anbn");
  auto r = to_strong_asnf(g, Flavor::Cfg);
  Derivation bad{{g.start()}, {DerivationStep{0, Production{{g.start()}, {g.require("a")}}}}};
  try {
    lift_derivation(r.trace, g, bad);
    FAIL("expected INVALID_DERIVATION");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidDerivation);
  }
  Grammar other = test::corpus("expr");
  CHECK_THROWS_AS(lift_derivation(r.trace, other, test::derive(other, "x")), Error);
}

TEST_CASE("fresh names from trace JSON resolve against the input") {
  Grammar g = test::corpus("copy");
  auto r = run_transform(g, TransformTarget::StrongGenAsnf);
  auto j = trace_to_json(r.trace, r.grammar);
  TransformTrace back = trace_from_json(j, register_fresh_symbols(g, j));
  Derivation d = test::derive(g, "b a b a");
  CHECK(lift_derivation(back, g, d) == lift_derivation(r.trace, g, d));
}
