// Acceptance run: one PASS/FAIL line per criterion, then a nonzero exit if
// any line failed.

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "asnf/abstraction_graph.hpp"
#include "asnf/equivalence.hpp"
#include "asnf/grammar_io.hpp"
#include "asnf/lift.hpp"
#include "asnf/reorder.hpp"
#include "asnf/search.hpp"
#include "asnf/transforms.hpp"
#include "asnf/validate.hpp"
#include "small_grammars.hpp"

using namespace asnf;

namespace {

// Pinned tolerances.
constexpr std::array<std::size_t, 3> kEquivLengths = {4, 6, 8};
constexpr std::size_t kRequiredConclusiveLength = 6;  // originals must be exact this far
constexpr std::size_t kGrowShrinkWordLength = 6;
constexpr std::size_t kMinGrowShrinkDerivations = 50;
constexpr std::size_t kCykWordLength = 5;
constexpr int kMinimalityGrammars = 1000;
constexpr unsigned kMinimalitySeed = 7;
constexpr std::size_t kMinLifts = 20;
constexpr std::size_t kLiftWordLength = 6;
constexpr std::size_t kLiftWordsPerGrammar = 3;
constexpr double kRuntimeLimitSeconds = 60.0;

const std::vector<std::string> kCorpus = {"anbn",    "dyck1",   "palindromes", "anbncn",  "copy",   "astar_bplus",
                                          "expr",    "random1", "random2",     "random3", "random4", "random5"};

const std::vector<TransformTarget> kTargets = {
    TransformTarget::WeakCfgAsnf,   TransformTarget::Gknf,    TransformTarget::WeakGenAsnf,
    TransformTarget::StrongCfgAsnf, TransformTarget::StrongGenAsnf, TransformTarget::Savitch,
    TransformTarget::StrongSavitch, TransformTarget::GrowShrink};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Entry {
  std::string name;
  Grammar grammar;
  EnumerationResult words;  // up to the largest equivalence length
  std::map<TransformTarget, TransformResult> outputs;
};

struct Line {
  bool pass;
  std::string detail;
};

void report(int n, const std::string& title, const std::function<Line()>& check, bool& all) {
  auto t0 = std::chrono::steady_clock::now();
  Line l = check();
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << (l.pass ? "PASS" : "FAIL") << "  criterion " << n << "  " << title << "  (" << l.detail << ") ["
            << std::fixed << std::setprecision(1) << secs << " s]\n"
            << std::flush;
  all = all && l.pass;
}

bool applies(const Grammar& g, TransformTarget t) {
  return is_context_free(g) || (t != TransformTarget::WeakCfgAsnf && t != TransformTarget::StrongCfgAsnf);
}

std::set<Word, ShortLex> up_to(const std::set<Word, ShortLex>& s, std::size_t len) {
  std::set<Word, ShortLex> out;
  for (const Word& w : s)
    if (w.size() <= len) out.insert(w);
  return out;
}

/// Sample words of the original language, shortest first, at most `per` of them.
std::vector<Word> sample_words(const Entry& e, std::size_t max_len, std::size_t per, bool skip_empty) {
  std::vector<Word> out;
  for (const Word& w : e.words.words) {
    if (w.size() > max_len || (skip_empty && w.empty())) continue;
    out.push_back(w);
  }
  // Spread the picks over the whole range of lengths.
  if (out.size() <= per) return out;
  std::vector<Word> picked;
  for (std::size_t k = 0; k < per; ++k) picked.push_back(out[(k * (out.size() - 1)) / (per - 1 == 0 ? 1 : per - 1)]);
  return picked;
}

Derivation find_derivation(const Grammar& g, const Word& w, const SearchBudget& b) {
  MembershipResult m = membership(g, w, b);
  if (m.verdict != Verdict::Yes || !m.derivation) throw Error(ErrorCode::InvalidDerivation, "no derivation for " + format_word(w));
  return *m.derivation;
}

// Criterion 1. A length counts when both sides are complete there; lengths
// below the largest must count. Where the output side is incomplete the two
// inclusions are still checked: every original word lifts into the output,
// and every output word found belongs to the original language.
Line soundness(const std::vector<Entry>& corpus, const SearchBudget& b) {
  std::size_t exact = 0, open = 0, counterexamples = 0;
  std::set<std::string> open_pairs;
  std::ostringstream bad;
  for (const Entry& e : corpus) {
    if (e.words.conclusive_upto < static_cast<long>(kRequiredConclusiveLength)) {
      ++open;
      open_pairs.insert(e.name + ":original");
      continue;
    }
    for (const auto& [t, r] : e.outputs) {
      EnumerationResult out = bounded_enumerate(r.grammar, kEquivLengths.back(), b);
      for (std::size_t len : kEquivLengths) {
        bool optional = len == kEquivLengths.back();
        if (optional && e.words.conclusive_upto < static_cast<long>(len)) continue;
        auto want = up_to(e.words.words, len);
        auto got = up_to(out.words, len);
        if (out.conclusive_upto >= static_cast<long>(len)) {
          ++exact;
          if (want != got) {
            ++counterexamples;
            bad << " " << e.name << "/" << target_name(t) << "@" << len;
          }
          continue;
        }
        if (optional) continue;
        ++open;
        open_pairs.insert(e.name + "/" + std::string(target_name(t)));
        bool ok = std::includes(want.begin(), want.end(), got.begin(), got.end(), ShortLex{});
        for (const Word& w : want) {
          if (!ok || got.count(w)) continue;
          Derivation lifted = lift_derivation(r.trace, e.grammar, find_derivation(e.grammar, w, b));
          auto check = validate_derivation(r.grammar, lifted);
          ok = check.valid && check.final_form == r.grammar.parse_sequence(format_word(w));
        }
        if (!ok) {
          ++counterexamples;
          bad << " " << e.name << "/" << target_name(t) << "@" << len << ":one-sided";
        }
      }
    }
  }
  std::ostringstream d;
  d << exact << " equivalent up to bound, " << counterexamples << " counterexamples, " << open
    << " required comparisons inconclusive on " << open_pairs.size()
    << " pairs, one-sided checks on those found no difference" << bad.str() << "; inconclusive:";
  for (const std::string& pair : open_pairs) d << " " << pair;
  return {counterexamples == 0 && open == 0, d.str()};
}

Line form_validity(const std::vector<Entry>& corpus) {
  std::size_t checked = 0, bad = 0;
  std::ostringstream msg;
  for (const Entry& e : corpus)
    for (const auto& [t, r] : e.outputs) {
      ++checked;
      ValidationReport rep = validate_normal_form(r.grammar, target_form(t));
      bool wrapper_ok = !rep.epsilon_exempt || r.trace.epsilon_rule.has_value();
      if (!rep.ok || !rep.violations.empty() || !wrapper_ok) {
        ++bad;
        msg << " " << e.name << "/" << target_name(t);
      }
    }
  return {bad == 0, std::to_string(checked) + " outputs, " + std::to_string(bad) + " invalid" + msg.str()};
}

Line strong_uniqueness(const std::vector<Entry>& corpus) {
  std::size_t grammars = 0, rules = 0, bad = 0;
  std::ostringstream msg;
  for (const Entry& e : corpus)
    for (const auto& [t, r] : e.outputs) {
      if (t != TransformTarget::StrongCfgAsnf && t != TransformTarget::StrongGenAsnf &&
          t != TransformTarget::GrowShrink)
        continue;
      ++grammars;
      const Grammar& g = r.grammar;
      auto exempt = find_epsilon_exemption(g);
      std::map<Sequence, std::size_t> by_lhs, by_rhs;
      for (const auto& p : g.productions()) {
        ++by_lhs[p.lhs];
        ++by_rhs[p.rhs];
      }
      for (const auto& p : g.productions()) {
        if (exempt && (p == exempt->first || p == exempt->second)) continue;
        RuleKind k = classify_production(p, g);
        if (k == RuleKind::SS || k == RuleKind::TERMINAL || k == RuleKind::RSS) {
          ++rules;
          if (by_lhs[p.lhs] != 1 || by_rhs[p.rhs] != 1) {
            ++bad;
            msg << " " << e.name << "/" << target_name(t);
          }
        }
        if (by_lhs[p.lhs] > 1 && k != RuleKind::REN) {
          ++bad;
          msg << " " << e.name << "/" << target_name(t) << ":multi-out";
        }
      }
    }
  return {bad == 0 && grammars > 0,
          std::to_string(rules) + " SS/TERMINAL/RSS rules in " + std::to_string(grammars) + " grammars, " +
              std::to_string(bad) + " violations" + msg.str()};
}

bool non_decreasing(const std::vector<std::size_t>& v, std::size_t a, std::size_t b) {
  for (std::size_t k = a; k < b && k + 1 < v.size(); ++k)
    if (v[k + 1] < v[k]) return false;
  return true;
}

bool non_increasing(const std::vector<std::size_t>& v, std::size_t a, std::size_t b) {
  for (std::size_t k = a; k < b && k + 1 < v.size(); ++k)
    if (v[k + 1] > v[k]) return false;
  return true;
}

bool subset(const std::set<RuleKind>& s, std::initializer_list<RuleKind> allowed) {
  std::set<RuleKind> a(allowed);
  return std::includes(a.begin(), a.end(), s.begin(), s.end());
}

struct PhasedCase {
  std::string label;
  TransformTarget target;
  const TransformResult* result;
  Word word;
  Derivation derivation;
};

// Derivations in the Strong-Savitch and Strong-GEN-ASNF outputs, found by
// searching the original grammar and lifting the result.
std::vector<PhasedCase> phased_cases(const std::vector<Entry>& corpus, const SearchBudget& b) {
  std::vector<PhasedCase> out;
  for (const Entry& e : corpus)
    for (TransformTarget t : {TransformTarget::StrongSavitch, TransformTarget::GrowShrink}) {
      const TransformResult& r = e.outputs.at(t);
      for (const Word& w : sample_words(e, kGrowShrinkWordLength, 3, true)) {
        Derivation d = lift_derivation(r.trace, e.grammar, find_derivation(e.grammar, w, b));
        out.push_back({e.name + "/" + std::string(target_name(t)) + "/" + format_word(w), t, &r, w, d});
      }
    }
  return out;
}

Line grow_shrink(const std::vector<PhasedCase>& cases) {
  std::size_t ok = 0;
  std::ostringstream msg;
  for (const PhasedCase& c : cases) {
    const Grammar& g = c.result->grammar;
    try {
      auto [d, rep] = grow_shrink_reorder(g, c.derivation);
      auto check = validate_derivation(g, d);
      bool kinds = subset(rep.phase1_kinds, {RuleKind::REN, RuleKind::SS}) &&
                   subset(rep.phase3_kinds, {RuleKind::TERMINAL}) &&
                   (c.target == TransformTarget::StrongSavitch
                        ? subset(rep.phase2_kinds, {RuleKind::ANNIHILATE2})
                        : subset(rep.phase2_kinds, {RuleKind::REN, RuleKind::RSS}));
      AbstractionsGraph ag = build_abstractions_graph(g);
      bool rabs = true;
      for (std::size_t k = rep.i; k < rep.j; ++k) {
        const Production& p = d.steps[k].production;
        if (classify_production(p, g) != RuleKind::REN) continue;
        auto in = ag.reverse_abstraction_at(p.rhs[0]).edges;
        rabs = rabs && std::find(in.begin(), in.end(), Edge{p.lhs[0], p.rhs[0]}) != in.end();
      }
      bool good = check.valid && check.final_form == g.parse_sequence(format_word(c.word)) && kinds && rabs &&
                  non_decreasing(rep.length_profile, 0, rep.i) && non_increasing(rep.length_profile, rep.i, rep.j);
      if (good) ++ok;
      else msg << " " << c.label;
    } catch (const Error& e) {
      msg << " " << c.label << ":" << e.what();
    }
  }
  return {ok == cases.size() && ok >= kMinGrowShrinkDerivations,
          std::to_string(ok) + "/" + std::to_string(cases.size()) + " derivations phased, need >= " +
              std::to_string(kMinGrowShrinkDerivations) + msg.str()};
}

Line terminal_suffix(const std::vector<PhasedCase>& cases) {
  std::size_t ok = 0;
  std::ostringstream msg;
  for (const PhasedCase& c : cases) {
    const Grammar& g = c.result->grammar;
    try {
      Derivation d = postpone_terminals(g, c.derivation);
      auto check = validate_derivation(g, d);
      std::size_t suffix = 0;
      while (suffix < d.steps.size() &&
             classify_production(d.steps[d.steps.size() - 1 - suffix].production, g) == RuleKind::TERMINAL)
        ++suffix;
      std::size_t total = 0;
      for (const auto& s : d.steps) total += classify_production(s.production, g) == RuleKind::TERMINAL;
      if (check.valid && suffix == c.word.size() && total == suffix) ++ok;
      else msg << " " << c.label;
    } catch (const Error& e) {
      msg << " " << c.label << ":" << e.what();
    }
  }
  return {ok == cases.size() && !cases.empty(),
          std::to_string(ok) + "/" + std::to_string(cases.size()) + " derivations with a TERMINAL suffix of length |w|" +
              msg.str()};
}

Line cyk_agreement(const std::vector<Entry>& corpus, const SearchBudget& b) {
  std::size_t grammars = 0, words = 0, disagree = 0, unknown = 0;
  std::ostringstream msg;
  for (const Entry& e : corpus)
    for (const auto& [t, r] : e.outputs) {
      const Grammar& g = r.grammar;
      if (!is_asnf_cfg(g)) continue;
      ++grammars;
      std::vector<SymbolId> ts = g.terminals();
      std::vector<Sequence> layer = {{}};
      for (std::size_t len = 0; len <= kCykWordLength; ++len) {
        for (const Sequence& w : layer) {
          ++words;
          Verdict a = cyk_membership(g, w).verdict;
          Verdict s = search_membership(g, w, b).verdict;
          if (s == Verdict::Unknown) ++unknown;
          else if (a != s) {
            ++disagree;
            msg << " " << e.name << "/" << target_name(t);
          }
        }
        std::vector<Sequence> next;
        if (len < kCykWordLength)
          for (const Sequence& w : layer)
            for (SymbolId x : ts) {
              next.push_back(w);
              next.back().push_back(x);
            }
        layer = std::move(next);
      }
    }
  return {disagree == 0 && unknown == 0 && grammars > 0,
          std::to_string(grammars) + " ASNF-CFG grammars, " + std::to_string(words) + " words, " +
              std::to_string(disagree) + " disagreements, " + std::to_string(unknown) + " inconclusive searches" +
              msg.str()};
}

Line minimality(const SearchBudget& b) {
  std::mt19937 rng(kMinimalitySeed);
  int ok = 0;
  for (int k = 0; k < kMinimalityGrammars; ++k) {
    test::SmallGrammar sg = test::random_small_grammar(rng);
    FiniteLanguageReport r = minimality_check(parse_grammar(sg.text), b);
    std::set<std::string> got;
    for (const Word& w : r.language) got.insert(w.empty() ? "" : format_word(w));
    if (r.shape_ok && r.terminated && r.all_short && got == sg.language) ++ok;
  }
  return {ok == kMinimalityGrammars, std::to_string(ok) + "/" + std::to_string(kMinimalityGrammars) +
                                         " grammars terminate with words of length <= 1"};
}

Line lifting(const std::vector<Entry>& corpus, const SearchBudget& b) {
  std::size_t derivations = 0, lifts = 0, bad = 0;
  std::ostringstream msg;
  for (const Entry& e : corpus)
    for (const Word& w : sample_words(e, kLiftWordLength, kLiftWordsPerGrammar, false)) {
      Derivation d = find_derivation(e.grammar, w, b);
      ++derivations;
      for (const auto& [t, r] : e.outputs) {
        ++lifts;
        try {
          auto check = validate_derivation(r.grammar, lift_derivation(r.trace, e.grammar, d));
          if (check.valid && check.final_form == r.grammar.parse_sequence(format_word(w))) continue;
        } catch (const Error&) {
        }
        ++bad;
        msg << " " << e.name << "/" << target_name(t) << "/" << format_word(w);
      }
    }
  return {bad == 0 && derivations >= kMinLifts,
          std::to_string(derivations) + " derivations, " + std::to_string(lifts) + " lifts, " + std::to_string(bad) +
              " failures" + msg.str()};
}

std::string run(const std::string& cmd) {
  std::string out;
  FILE* p = popen((cmd + " 2>&1").c_str(), "r");
  if (!p) return "<popen failed>";
  std::array<char, 4096> buf{};
  for (std::size_t n; (n = fread(buf.data(), 1, buf.size(), p)) > 0;) out.append(buf.data(), n);
  int status = pclose(p);
  return out + "\n<exit " + std::to_string(status) + ">";
}

Line determinism() {
  const std::string cli = ASNF_CLI;
  const std::string dir = ASNF_CORPUS_DIR;
  std::vector<std::string> cmds;
  for (const char* g : {"anbn", "copy", "random2", "expr"}) {
    std::string path = dir + "/" + g + ".gr";
    for (const char* to : {"strong-cfg-asnf", "gknf", "strong-gen-asnf", "strong-savitch", "grow-shrink"})
      cmds.push_back(cli + " transform " + path + " --to " + to);
    cmds.push_back(cli + " --json enumerate " + path + " --max-len 5");
    cmds.push_back(cli + " --json classify " + path);
    cmds.push_back(cli + " graph --dot " + path);
  }
  cmds.push_back(cli + " --json derive " + dir + "/anbncn.gr --word \"a a b b c c\"");
  cmds.push_back(cli + " --json member " + dir + "/copy.gr --word \"a b a b\"");
  cmds.push_back(cli + " --json equiv " + dir + "/anbn.gr " + dir + "/dyck1.gr --max-len 4");
  std::size_t same = 0;
  std::ostringstream msg;
  for (const std::string& c : cmds) {
    if (run(c) == run(c)) ++same;
    else msg << " [" << c << "]";
  }
  return {same == cmds.size(),
          std::to_string(same) + "/" + std::to_string(cmds.size()) + " invocations byte-identical" + msg.str()};
}

}  // namespace

int main() {
  auto t0 = std::chrono::steady_clock::now();
  SearchBudget b;
  std::vector<Entry> corpus;
  std::size_t transforms = 0;
  for (const std::string& name : kCorpus) {
    Entry e{name, parse_grammar(slurp(std::string(ASNF_CORPUS_DIR) + "/" + name + ".gr")), {}, {}};
    e.words = bounded_enumerate(e.grammar, kEquivLengths.back(), b);
    for (TransformTarget t : kTargets)
      if (applies(e.grammar, t)) {
        e.outputs.emplace(t, run_transform(e.grammar, t));
        ++transforms;
      }
    corpus.push_back(std::move(e));
  }
  std::cout << corpus.size() << " corpus grammars, " << transforms << " transform outputs ["
            << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s]\n";

  bool all = true;
  report(1, "transform soundness", [&] { return soundness(corpus, b); }, all);
  report(2, "form validity", [&] { return form_validity(corpus); }, all);
  report(3, "strong uniqueness", [&] { return strong_uniqueness(corpus); }, all);
  auto cases = phased_cases(corpus, b);
  report(4, "grow-shrink reordering", [&] { return grow_shrink(cases); }, all);
  report(5, "terminal postponement", [&] { return terminal_suffix(cases); }, all);
  report(6, "CYK and search agree", [&] { return cyk_agreement(corpus, b); }, all);
  report(7, "minimal grammars are finite", [&] { return minimality(b); }, all);
  report(8, "lifting", [&] { return lifting(corpus, b); }, all);
  report(9, "CLI determinism", determinism, all);

  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool fast = secs < kRuntimeLimitSeconds;
  std::cout << (fast ? "PASS" : "FAIL") << "  runtime " << secs << " s (limit " << kRuntimeLimitSeconds << " s)\n";
  return all && fast ? 0 : 1;
}
