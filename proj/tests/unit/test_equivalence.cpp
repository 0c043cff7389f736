#include "asnf/equivalence.hpp"

#include "../small_grammars.hpp"
#include "asnf/transforms.hpp"
#include "helpers.hpp"

using namespace asnf;
using test::gr;

TEST_CASE("a^n b^n matches its strong ASNF up to length 8") {
  Grammar g = test::corpus("anbn");
  Grammar h = to_strong_asnf(g, Flavor::Cfg).grammar;
  EquivVerdict v = bounded_equiv(g, h, 8, test::budget());
  CHECK(v.status == EquivStatus::EquivalentUpToBound);
  CHECK(v.word_counts == std::pair<std::size_t, std::size_t>{4, 4});
}

TEST_CASE("the shortest differing word is the witness") {
  Grammar g1 = gr("@start S\nS -> a b");
  Grammar g2 = gr("@start S\nS -> a b | a a b b");
  EquivVerdict v = bounded_equiv(g1, g2, 4, test::budget());
  REQUIRE(v.status == EquivStatus::Counterexample);
  CHECK(format_word(*v.witness) == "a a b b");
  CHECK(bounded_equiv(g1, g2, 3, test::budget()).status == EquivStatus::EquivalentUpToBound);
}

TEST_CASE("tiny budgets give inconclusive verdicts") {
  Grammar g = test::corpus("anbncn");
  SearchBudget tiny{4, 50, 50};
  EquivVerdict v = bounded_equiv(g, g, 6, tiny);
  CHECK(v.status == EquivStatus::Inconclusive);
  CHECK_FALSE(v.witness);
}

TEST_CASE("equivalence is symmetric") {
  Grammar g1 = test::corpus("palindromes");
  Grammar g2 = gr("@start S\nS -> a S a | b S b | a | b");
  EquivVerdict a = bounded_equiv(g1, g2, 5, test::budget());
  EquivVerdict b = bounded_equiv(g2, g1, 5, test::budget());
  CHECK(a.status == EquivStatus::Counterexample);
  CHECK(a.status == b.status);
  CHECK(a.witness == b.witness);
  CHECK(a.witness->empty());
}

TEST_CASE("different alphabets are rejected") {
  try {
    bounded_equiv(gr("@start S\nS -> a"), gr("@start S\nS -> b"), 2, test::budget());
    FAIL("expected ALPHABET_MISMATCH");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AlphabetMismatch);
  }
}

TEST_CASE("verdict JSON") {
  auto j = equiv_to_json(bounded_equiv(gr("@start S\nS -> a"), gr("@start S\nS -> a a"), 2, test::budget()));
  CHECK(j["status"] == "Counterexample");
  CHECK(j["witness"] == "a");
}

TEST_CASE("minimal grammars: renaming and terminal rules") {
  FiniteLanguageReport r = minimality_check(gr("@start S\nS -> a | B\nB -> b"), test::budget());
  CHECK(r.shape_ok);
  CHECK(r.terminated);
  CHECK(r.all_short);
  CHECK(r.language == std::set<Word, ShortLex>{{"a"}, {"b"}});
}

TEST_CASE("minimal grammars: the empty word") {
  FiniteLanguageReport r = minimality_check(gr("@start S\nS -> @eps"), test::budget());
  CHECK(r.language == std::set<Word, ShortLex>{Word{}});
  CHECK(r.all_short);
}

TEST_CASE("longer rules are outside the minimal shape") {
  CHECK_FALSE(minimality_check(test::corpus("anbn"), test::budget()).shape_ok);
}

TEST_CASE("1000 random minimal grammars have languages of short words") {
  std::mt19937 rng(2024);
  for (int k = 0; k < 1000; ++k) {
    test::SmallGrammar sg = test::random_small_grammar(rng);
    CAPTURE(sg.text);
    FiniteLanguageReport r = minimality_check(gr(sg.text), test::budget());
    REQUIRE(r.shape_ok);
    REQUIRE(r.terminated);
    REQUIRE(r.all_short);
    std::set<std::string> got;
    for (const Word& w : r.language) got.insert(w.empty() ? "" : format_word(w));
    REQUIRE(got == sg.language);
  }
}

TEST_CASE("strong ASNF of a^n b^n agrees with a direct generator") {
  std::set<Word, ShortLex> want;
  for (std::size_t n = 1; 2 * n <= 8; ++n) {
    Word w(n, "a");
    w.insert(w.end(), n, "b");
    want.insert(w);
  }
  Grammar h = to_strong_asnf(test::corpus("anbn"), Flavor::Cfg).grammar;
  EnumerationResult e = bounded_enumerate(h, 8, test::budget());
  CHECK(e.conclusive);
  CHECK(e.words == want);
}
