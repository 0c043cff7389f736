#include "asnf/equivalence.hpp"

#include <algorithm>
#include <deque>
#include <iterator>

namespace asnf {

namespace {

std::set<std::string> terminal_names(const Grammar& g) {
  std::set<std::string> out;
  for (SymbolId t : g.terminals()) out.insert(g.name(t));
  return out;
}

nlohmann::json words_json(const std::set<Word, ShortLex>& ws) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& w : ws) out.push_back(format_word(w));
  return out;
}

}  // namespace

std::string_view equiv_status_name(EquivStatus s) {
  switch (s) {
    case EquivStatus::EquivalentUpToBound: return "EquivalentUpToBound";
    case EquivStatus::Counterexample: return "Counterexample";
    case EquivStatus::Inconclusive: return "Inconclusive";
  }
  return "?";
}

EquivVerdict bounded_equiv(const Grammar& g1, const Grammar& g2, std::size_t max_len, const SearchBudget& budget) {
  if (terminal_names(g1) != terminal_names(g2))
    throw Error(ErrorCode::AlphabetMismatch, "the grammars have different terminal alphabets");
  EnumerationResult a = bounded_enumerate(g1, max_len, budget);
  EnumerationResult b = bounded_enumerate(g2, max_len, budget);

  EquivVerdict v;
  v.bound = max_len;
  v.conclusive_upto = {a.conclusive_upto, b.conclusive_upto};
  v.conclusive_sides = {a.conclusive, b.conclusive};
  v.word_counts = {a.words.size(), b.words.size()};

  long both = std::min(a.conclusive_upto, b.conclusive_upto);
  std::set<Word, ShortLex> diff;
  std::set_symmetric_difference(a.words.begin(), a.words.end(), b.words.begin(), b.words.end(),
                                std::inserter(diff, diff.end()), ShortLex{});
  for (const auto& w : diff) {
    if (static_cast<long>(w.size()) > both) break;
    v.status = EquivStatus::Counterexample;
    v.witness = w;
    return v;
  }
  v.status = a.conclusive && b.conclusive ? EquivStatus::EquivalentUpToBound : EquivStatus::Inconclusive;
  return v;
}

nlohmann::json equiv_to_json(const EquivVerdict& v) {
  return {{"status", equiv_status_name(v.status)},
          {"bound", v.bound},
          {"witness", v.witness ? nlohmann::json(format_word(*v.witness)) : nlohmann::json(nullptr)},
          {"conclusive_sides", {v.conclusive_sides.first, v.conclusive_sides.second}},
          {"conclusive_upto", {v.conclusive_upto.first, v.conclusive_upto.second}},
          {"word_counts", {v.word_counts.first, v.word_counts.second}}};
}

FiniteLanguageReport minimality_check(const Grammar& g, const SearchBudget& budget) {
  FiniteLanguageReport r;
  r.shape_ok = std::all_of(g.productions().begin(), g.productions().end(),
                           [](const Production& p) { return p.lhs.size() + p.rhs.size() <= 2; });
  if (!r.shape_ok) return r;

  std::set<Sequence> seen{{g.start()}};
  std::deque<Sequence> queue{{g.start()}};
  while (!queue.empty()) {
    if (seen.size() > budget.max_visited) {
      r.forms_visited = seen.size();
      return r;
    }
    Sequence form = std::move(queue.front());
    queue.pop_front();
    if (std::all_of(form.begin(), form.end(), [&](SymbolId s) { return g.is_terminal(s); }))
      r.language.insert(g.names(form));
    for (const auto& p : g.productions()) {
      if (p.lhs.size() > form.size()) continue;
      for (std::size_t i = 0; i + p.lhs.size() <= form.size(); ++i) {
        if (!std::equal(p.lhs.begin(), p.lhs.end(), form.begin() + static_cast<std::ptrdiff_t>(i))) continue;
        Sequence next(form.begin(), form.begin() + static_cast<std::ptrdiff_t>(i));
        next.insert(next.end(), p.rhs.begin(), p.rhs.end());
        next.insert(next.end(), form.begin() + static_cast<std::ptrdiff_t>(i + p.lhs.size()), form.end());
        if (seen.insert(next).second) queue.push_back(std::move(next));
      }
    }
  }
  r.terminated = true;
  r.forms_visited = seen.size();
  r.all_short = std::all_of(r.language.begin(), r.language.end(), [](const Word& w) { return w.size() <= 1; });
  return r;
}

nlohmann::json minimality_to_json(const FiniteLanguageReport& r) {
  return {{"shape_ok", r.shape_ok},
          {"terminated", r.terminated},
          {"all_short", r.all_short},
          {"forms_visited", r.forms_visited},
          {"language", words_json(r.language)}};
}

}  // namespace asnf
