#include "asnf/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "asnf/validate.hpp"

namespace asnf {

SearchBudget SearchBudget::from_environment() {
  SearchBudget b;
  if (const char* env = std::getenv("ASNF_BUDGET_SCALE")) {
    char* end = nullptr;
    double f = std::strtod(env, &end);
    if (end != env && *end == '\0' && f > 0 && std::isfinite(f)) return b.scaled(f);
  }
  return b;
}

SearchBudget SearchBudget::scaled(double factor) const {
  auto scale = [&](std::size_t v) {
    double r = std::round(static_cast<double>(v) * factor);
    return r < 1 ? std::size_t{1} : static_cast<std::size_t>(r);
  };
  return SearchBudget{scale(max_form_length), scale(max_steps), scale(max_visited)};
}

bool ShortLex::operator()(const Word& a, const Word& b) const {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

std::string format_word(const Word& w) {
  if (w.empty()) return "@eps";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += w[i];
  }
  return out;
}

std::size_t WeightPotential::of(const Sequence& form) const {
  std::size_t total = 0;
  for (SymbolId s : form) total += weight[s];
  return total;
}

WeightPotential compute_potential(const Grammar& g, std::size_t cap) {
  WeightPotential phi;
  phi.weight.resize(g.symbol_count());
  for (const auto& s : g.symbols()) phi.weight[s.id] = s.kind == SymbolKind::Terminal ? 1 : cap;

  // Net occurrence count per production, so that reducing a symbol that sits
  // on both sides is never mistaken for progress.
  std::vector<std::vector<std::pair<SymbolId, long>>> net;
  for (const auto& p : g.productions()) {
    std::unordered_map<SymbolId, long> count;
    for (SymbolId s : p.lhs) ++count[s];
    for (SymbolId s : p.rhs) --count[s];
    std::vector<std::pair<SymbolId, long>> positive;
    for (SymbolId s : p.lhs)
      if (count[s] > 0 && std::none_of(positive.begin(), positive.end(),
                                       [&](const auto& e) { return e.first == s; }))
        positive.emplace_back(s, count[s]);
    net.push_back(std::move(positive));
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < g.productions().size(); ++i) {
      const auto& p = g.productions()[i];
      std::size_t l = phi.of(p.lhs);
      std::size_t r = phi.of(p.rhs);
      while (l > r) {
        auto& cand = net[i];
        auto heaviest = std::max_element(cand.begin(), cand.end(), [&](const auto& a, const auto& b) {
          return phi.weight[a.first] < phi.weight[b.first];
        });
        // Positive-net symbols always exist while l > r, and their weights
        // cannot all be zero then.
        std::size_t& w = phi.weight[heaviest->first];
        std::size_t excess = l - r;
        std::size_t per = static_cast<std::size_t>(heaviest->second);
        std::size_t d = std::min(w, (excess + per - 1) / per);
        w -= d;
        changed = true;
        l = phi.of(p.lhs);
        r = phi.of(p.rhs);
      }
    }
  }
  return phi;
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

namespace {

constexpr std::uint32_t kNoParent = std::numeric_limits<std::uint32_t>::max();

struct Node {
  std::uint32_t parent;
  std::uint32_t position;
  std::uint32_t production;
  std::uint32_t depth;
};

/// Breadth-first exploration shared by enumeration and membership.
class FormSearch {
 public:
  FormSearch(const Grammar& g, std::size_t bound, const SearchBudget& budget)
      : g_(g), bound_(bound), budget_(budget), phi_(compute_potential(g, bound + 1)),
        noncontracting_(is_noncontracting_but_start_eps(g)), leftmost_(is_context_free(g)),
        index_(0, IndexHash{&forms_}, IndexEq{&forms_}) {
    by_first_.resize(g.symbol_count());
    for (std::size_t i = 0; i < g.productions().size(); ++i)
      by_first_[g.productions()[i].lhs.front()].push_back(i);
  }

  std::function<bool(const Sequence&)> extra_prune;

  /// Runs until the frontier is exhausted, a budget runs out, or `visit`
  /// returns true for a form (then that node index is returned).
  std::optional<std::uint32_t> run(const std::function<bool(const Sequence&)>& visit) {
    Sequence start{g_.start()};
    if (!admit(start, Node{kNoParent, 0, 0, 0})) return std::nullopt;
    if (visit(forms_[0])) return 0;
    std::size_t head = 0;
    while (head < forms_.size()) {
      std::uint32_t cur = static_cast<std::uint32_t>(head++);
      if (nodes_[cur].depth >= budget_.max_steps) {
        note_budget(forms_[cur]);
        continue;
      }
      const Sequence form = forms_[cur];
      // Context-free grammars need leftmost derivations only.
      std::size_t first_nt = 0;
      while (leftmost_ && first_nt < form.size() && g_.is_terminal(form[first_nt])) ++first_nt;
      for (std::size_t pos = leftmost_ ? first_nt : 0; pos < form.size() && (!leftmost_ || pos == first_nt);
           ++pos) {
        for (std::size_t pi : by_first_[form[pos]]) {
          const auto& p = g_.productions()[pi];
          if (form.size() - pos < p.lhs.size() ||
              !std::equal(p.lhs.begin(), p.lhs.end(), form.begin() + static_cast<std::ptrdiff_t>(pos)))
            continue;
          Sequence next;
          next.reserve(form.size() - p.lhs.size() + p.rhs.size());
          next.insert(next.end(), form.begin(), form.begin() + static_cast<std::ptrdiff_t>(pos));
          next.insert(next.end(), p.rhs.begin(), p.rhs.end());
          next.insert(next.end(), form.begin() + static_cast<std::ptrdiff_t>(pos + p.lhs.size()),
                      form.end());
          Node node{cur, static_cast<std::uint32_t>(pos), static_cast<std::uint32_t>(pi),
                    nodes_[cur].depth + 1};
          if (exhausted_) {
            if (!sound_prune(next)) note_budget(next);
            continue;
          }
          if (!admit(std::move(next), node)) continue;
          if (visit(forms_.back())) return static_cast<std::uint32_t>(forms_.size() - 1);
        }
      }
      if (exhausted_) {
        for (std::size_t rest = head; rest < forms_.size(); ++rest) note_budget(forms_[rest]);
        break;
      }
    }
    return std::nullopt;
  }

  Derivation derivation_to(std::uint32_t idx) const {
    std::vector<DerivationStep> steps;
    for (std::uint32_t i = idx; nodes_[i].parent != kNoParent; i = nodes_[i].parent)
      steps.push_back(DerivationStep{nodes_[i].position, g_.productions()[nodes_[i].production]});
    std::reverse(steps.begin(), steps.end());
    return Derivation{Sequence{g_.start()}, std::move(steps)};
  }

  /// Smallest potential among forms dropped for budget reasons.
  std::size_t min_budget_phi() const { return min_budget_phi_; }
  std::size_t visited() const { return forms_.size(); }

 private:
  struct IndexHash {
    const std::vector<Sequence>* forms;
    std::size_t operator()(std::uint32_t i) const { return SequenceHash{}((*forms)[i]); }
  };
  struct IndexEq {
    const std::vector<Sequence>* forms;
    bool operator()(std::uint32_t a, std::uint32_t b) const { return (*forms)[a] == (*forms)[b]; }
  };

  bool sound_prune(const Sequence& form) const {
    if (phi_.of(form) > bound_) return true;
    // The lone start symbol may still have S→ε ahead of it.
    if (noncontracting_ && form.size() > bound_ && !(form.size() == 1 && form[0] == g_.start())) return true;
    return extra_prune && extra_prune(form);
  }

  void note_budget(const Sequence& form) { min_budget_phi_ = std::min(min_budget_phi_, phi_.of(form)); }

  bool admit(Sequence form, const Node& node) {
    if (sound_prune(form)) return false;
    if (form.size() > budget_.max_form_length) {
      note_budget(form);
      return false;
    }
    forms_.push_back(std::move(form));
    nodes_.push_back(node);
    auto idx = static_cast<std::uint32_t>(forms_.size() - 1);
    if (!index_.insert(idx).second) {
      forms_.pop_back();
      nodes_.pop_back();
      return false;
    }
    if (forms_.size() >= budget_.max_visited) exhausted_ = true;
    return true;
  }

  const Grammar& g_;
  std::size_t bound_;
  SearchBudget budget_;
  WeightPotential phi_;
  bool noncontracting_;
  bool leftmost_;
  std::vector<std::vector<std::size_t>> by_first_;
  std::vector<Sequence> forms_;
  std::vector<Node> nodes_;
  std::unordered_set<std::uint32_t, IndexHash, IndexEq> index_;
  std::size_t min_budget_phi_ = std::numeric_limits<std::size_t>::max();
  bool exhausted_ = false;
};

bool all_terminal(const Grammar& g, const Sequence& form) {
  return std::all_of(form.begin(), form.end(), [&](SymbolId s) { return g.is_terminal(s); });
}

long conclusive_bound(std::size_t max_len, std::size_t min_budget_phi) {
  if (min_budget_phi == std::numeric_limits<std::size_t>::max()) return static_cast<long>(max_len);
  return std::min(static_cast<long>(max_len), static_cast<long>(min_budget_phi) - 1);
}

}  // namespace


bool is_asnf_cfg(const Grammar& g) {
  auto exempt = find_epsilon_exemption(g);
  for (const auto& p : g.productions()) {
    if (exempt && p == exempt->first) continue;
    RuleKind k = classify_production(p, g);
    if (k != RuleKind::REN && k != RuleKind::SS && k != RuleKind::TERMINAL) return false;
  }
  return true;
}

namespace {

void require_terminal_word(const Grammar& g, const Sequence& word) {
  for (SymbolId s : word)
    if (g.is_nonterminal(s))
      throw Error(ErrorCode::WordHasNonterminal, "'" + g.name(s) + "' is a nonterminal");
}

struct Back {
  enum class Kind { Terminal, Unit, Binary } kind;
  std::size_t production;
  std::size_t split = 0;
};

}  // namespace

MembershipResult cyk_membership(const Grammar& g, const Sequence& word) {
  require_terminal_word(g, word);
  MembershipResult result;
  result.method = "cyk";
  const auto& ps = g.productions();
  SymbolId start = g.start();

  if (word.empty()) {
    Production eps{{start}, {}};
    if (g.contains(eps)) {
      result.verdict = Verdict::Yes;
      result.derivation = Derivation{{start}, {DerivationStep{0, eps}}};
    } else {
      result.verdict = Verdict::No;
    }
    return result;
  }

  std::vector<std::vector<std::size_t>> unit_into(g.symbol_count());
  std::vector<std::size_t> binary;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    RuleKind k = classify_production(ps[i], g);
    if (k == RuleKind::REN) unit_into[ps[i].rhs[0]].push_back(i);
    if (k == RuleKind::SS) binary.push_back(i);
  }

  const std::size_t n = word.size();
  // cell(i, len) covers word[i, i+len); entries keep insertion order.
  struct Cell {
    std::vector<SymbolId> order;
    std::unordered_map<SymbolId, Back> back;
    bool has(SymbolId s) const { return back.count(s) != 0; }
    void add(SymbolId s, Back b) {
      if (back.emplace(s, b).second) order.push_back(s);
    }
  };
  std::vector<Cell> chart(n * (n + 1));
  auto cell = [&](std::size_t i, std::size_t len) -> Cell& { return chart[i * (n + 1) + len]; };

  for (std::size_t len = 1; len <= n; ++len) {
    for (std::size_t i = 0; i + len <= n; ++i) {
      Cell& c = cell(i, len);
      if (len == 1) {
        for (std::size_t pi = 0; pi < ps.size(); ++pi)
          if (ps[pi].lhs.size() == 1 && ps[pi].rhs == Sequence{word[i]})
            c.add(ps[pi].lhs[0], Back{Back::Kind::Terminal, pi});
      } else {
        for (std::size_t k = 1; k < len; ++k) {
          const Cell& left = cell(i, k);
          const Cell& right = cell(i + k, len - k);
          if (left.order.empty() || right.order.empty()) continue;
          for (std::size_t pi : binary)
            if (left.has(ps[pi].rhs[0]) && right.has(ps[pi].rhs[1]))
              c.add(ps[pi].lhs[0], Back{Back::Kind::Binary, pi, k});
        }
      }
      for (std::size_t idx = 0; idx < c.order.size(); ++idx) {
        SymbolId target = c.order[idx];
        for (std::size_t pi : unit_into[target]) c.add(ps[pi].lhs[0], Back{Back::Kind::Unit, pi});
      }
    }
  }

  if (!cell(0, n).has(start)) {
    result.verdict = Verdict::No;
    return result;
  }

  Derivation d{{start}, {}};
  std::function<void(std::size_t, std::size_t, SymbolId)> emit = [&](std::size_t i, std::size_t len,
                                                                      SymbolId a) {
    const Back& b = cell(i, len).back.at(a);
    const Production& p = ps[b.production];
    d.steps.push_back(DerivationStep{i, p});
    switch (b.kind) {
      case Back::Kind::Terminal: break;
      case Back::Kind::Unit: emit(i, len, p.rhs[0]); break;
      case Back::Kind::Binary:
        emit(i, b.split, p.rhs[0]);
        emit(i + b.split, len - b.split, p.rhs[1]);
        break;
    }
  };
  emit(0, n, start);
  result.verdict = Verdict::Yes;
  result.derivation = std::move(d);
  return result;
}

MembershipResult search_membership(const Grammar& g, const Sequence& word, const SearchBudget& budget) {
  require_terminal_word(g, word);
  MembershipResult result;
  result.method = "search";
  FormSearch search(g, word.size(), budget);

  if (!has_terminal_in_lhs(g)) {
    // Terminals are never rewritten, so their order, the leading run and the
    // trailing run are all fixed once produced.
    search.extra_prune = [&g, &word](const Sequence& form) {
      std::size_t lead = 0;
      while (lead < form.size() && g.is_terminal(form[lead])) ++lead;
      if (lead > word.size() || !std::equal(form.begin(), form.begin() + static_cast<std::ptrdiff_t>(lead), word.begin()))
        return true;
      std::size_t trail = 0;
      while (trail < form.size() - lead && g.is_terminal(form[form.size() - 1 - trail])) ++trail;
      if (trail > word.size() ||
          !std::equal(form.end() - static_cast<std::ptrdiff_t>(trail), form.end(),
                      word.end() - static_cast<std::ptrdiff_t>(trail)))
        return true;
      std::size_t k = 0;
      for (SymbolId s : form)
        if (g.is_terminal(s)) {
          while (k < word.size() && word[k] != s) ++k;
          if (k == word.size()) return true;
          ++k;
        }
      return false;
    };
  }

  auto hit = search.run([&](const Sequence& form) { return form == word; });
  if (hit) {
    result.verdict = Verdict::Yes;
    result.derivation = search.derivation_to(*hit);
  } else if (conclusive_bound(word.size(), search.min_budget_phi()) >= static_cast<long>(word.size())) {
    result.verdict = Verdict::No;
  } else {
    result.verdict = Verdict::Unknown;
  }
  return result;
}

EnumerationResult search_enumerate(const Grammar& g, std::size_t max_len, const SearchBudget& budget) {
  FormSearch search(g, max_len, budget);
  EnumerationResult result;
  result.method = "search";
  search.run([&](const Sequence& form) {
    if (form.size() <= max_len && all_terminal(g, form)) result.words.insert(g.names(form));
    return false;
  });
  result.visited = search.visited();
  result.conclusive_upto = conclusive_bound(max_len, search.min_budget_phi());
  result.conclusive = result.conclusive_upto == static_cast<long>(max_len);
  return result;
}

CfgTable::CfgTable(const Grammar& g, std::size_t max_len)
    : g_(g), max_len_(max_len), words_(g.symbol_count()) {
  if (!is_context_free(g)) throw Error(ErrorCode::NotContextFree, "language table needs a context-free grammar");
  // Shortest word length per symbol, for pruning.
  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max() / 4;
  std::vector<std::size_t> shortest(g.symbol_count(), kInf);
  for (SymbolId t : g.terminals()) shortest[t] = 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions()) {
      std::size_t sum = 0;
      for (SymbolId x : p.rhs) sum = std::min(kInf, sum + shortest[x]);
      if (sum < shortest[p.lhs[0]]) {
        shortest[p.lhs[0]] = sum;
        changed = true;
      }
    }
  }

  // Semi-naive rounds: a combination is tried once, in the round after its
  // newest child appeared. by_round[x][r] holds x's round-r words by length.
  std::vector<std::vector<std::vector<const Sequence*>>> by_round(g.symbol_count());
  const auto& ps = g.productions();
  std::vector<std::map<Sequence, Entry>> pending(g.symbol_count());
  Sequence current;
  std::vector<std::size_t> splits;
  std::size_t round = 0;

  // Child i of the rhs draws from rounds [0, hi_i]; the pivot draws from
  // round - 1 only, the children before it from rounds < round - 1.
  std::function<void(std::size_t, std::size_t, std::size_t, std::size_t)> combine =
      [&](std::size_t pi, std::size_t i, std::size_t rest, std::size_t pivot) {
        const Production& p = ps[pi];
        if (i == p.rhs.size()) {
          SymbolId a = p.lhs[0];
          if (!words_[a].count(current) && !pending[a].count(current)) pending[a].emplace(current, Entry{pi, splits});
          return;
        }
        SymbolId x = p.rhs[i];
        std::size_t after = rest - std::min(rest, shortest[x]);
        if (g.is_terminal(x)) {
          if (current.size() + 1 + after > max_len_) return;
          current.push_back(x);
          splits.push_back(1);
          combine(pi, i + 1, after, pivot);
          current.pop_back();
          splits.pop_back();
          return;
        }
        std::size_t lo = i == pivot ? round - 1 : 0;
        std::size_t hi = i < pivot ? round - 1 : round;  // exclusive
        for (std::size_t r = lo; r < hi && r < by_round[x].size(); ++r)
          for (const Sequence* w : by_round[x][r]) {
            if (current.size() + w->size() + after > max_len_) break;
            current.insert(current.end(), w->begin(), w->end());
            splits.push_back(w->size());
            combine(pi, i + 1, after, pivot);
            current.resize(current.size() - w->size());
            splits.pop_back();
          }
      };

  for (bool grew = true; grew; ++round) {
    for (std::size_t pi = 0; pi < ps.size(); ++pi) {
      std::size_t need = 0;
      bool all_terminal = true;
      for (SymbolId x : ps[pi].rhs) {
        need = std::min(kInf, need + shortest[x]);
        all_terminal = all_terminal && g.is_terminal(x);
      }
      if (need > max_len_) continue;
      if (round == 0) {
        if (all_terminal) combine(pi, 0, need, ps[pi].rhs.size());
        continue;
      }
      for (std::size_t pivot = 0; pivot < ps[pi].rhs.size(); ++pivot)
        if (g.is_nonterminal(ps[pi].rhs[pivot])) combine(pi, 0, need, pivot);
    }
    grew = false;
    for (SymbolId a = 0; a < g.symbol_count(); ++a) {
      if (pending[a].empty()) continue;
      grew = true;
      by_round[a].resize(round + 1);
      auto& bucket = by_round[a][round];
      for (auto& [w, e] : pending[a]) bucket.push_back(&words_[a].emplace(w, std::move(e)).first->first);
      std::stable_sort(bucket.begin(), bucket.end(),
                       [](const Sequence* x, const Sequence* y) { return x->size() < y->size(); });
      pending[a].clear();
    }
  }
}

bool CfgTable::derives(SymbolId a, const Sequence& word) const {
  if (g_.is_terminal(a)) return word == Sequence{a};
  return words_.at(a).count(word) != 0;
}

std::set<Word, ShortLex> CfgTable::language() const {
  std::set<Word, ShortLex> out;
  for (const auto& [w, entry] : words_.at(g_.start())) out.insert(g_.names(w));
  return out;
}

Derivation CfgTable::derivation(const Sequence& word) const {
  if (!derives(g_.start(), word)) throw Error(ErrorCode::InvalidDerivation, "word is not in the table");
  Derivation d{{g_.start()}, {}};
  // Leftmost order: expanding A at `pos`, then each child left to right.
  std::function<void(SymbolId, std::size_t, std::size_t, std::size_t)> expand =
      [&](SymbolId a, std::size_t pos, std::size_t from, std::size_t len) {
        if (g_.is_terminal(a)) return;
        Sequence w(word.begin() + static_cast<std::ptrdiff_t>(from),
                   word.begin() + static_cast<std::ptrdiff_t>(from + len));
        const Entry& e = words_.at(a).at(w);
        const Production& p = g_.productions()[e.production];
        d.steps.push_back(DerivationStep{pos, p});
        std::size_t offset = 0;
        for (std::size_t i = 0; i < p.rhs.size(); ++i) {
          expand(p.rhs[i], pos + offset, from + offset, e.splits[i]);
          offset += e.splits[i];
        }
      };
  expand(g_.start(), 0, 0, word.size());
  return d;
}

MembershipResult table_membership(const Grammar& g, const Sequence& word) {
  require_terminal_word(g, word);
  CfgTable table(g, word.size());
  MembershipResult r;
  r.method = "table";
  r.verdict = table.derives(g.start(), word) ? Verdict::Yes : Verdict::No;
  if (r.verdict == Verdict::Yes) r.derivation = table.derivation(word);
  return r;
}

EnumerationResult bounded_enumerate(const Grammar& g, std::size_t max_len, const SearchBudget& budget) {
  if (!is_context_free(g)) return search_enumerate(g, max_len, budget);
  CfgTable table(g, max_len);
  EnumerationResult result;
  result.method = "table";
  result.words = table.language();
  result.conclusive = true;
  result.conclusive_upto = static_cast<long>(max_len);
  return result;
}

MembershipResult membership(const Grammar& g, const Sequence& word, const SearchBudget& budget) {
  if (is_asnf_cfg(g)) return cyk_membership(g, word);
  if (is_context_free(g)) return table_membership(g, word);
  return search_membership(g, word, budget);
}

MembershipResult membership(const Grammar& g, const Word& word, const SearchBudget& budget) {
  Sequence seq;
  for (const auto& name : word) {
    auto id = g.find(name);
    if (!id) {
      MembershipResult r;
      r.verdict = Verdict::No;
      r.method = "alphabet";
      return r;
    }
    seq.push_back(*id);
  }
  return membership(g, seq, budget);
}

}  // namespace asnf
