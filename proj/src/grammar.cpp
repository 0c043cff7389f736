#include "asnf/grammar.hpp"

#include <algorithm>
#include <sstream>

namespace asnf {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return "SYNTAX_ERROR";
    case ErrorCode::UndeclaredStart: return "UNDECLARED_START";
    case ErrorCode::LhsWithoutNonterminal: return "LHS_WITHOUT_NONTERMINAL";
    case ErrorCode::KindConflict: return "KIND_CONFLICT";
    case ErrorCode::UnknownSymbol: return "UNKNOWN_SYMBOL";
    case ErrorCode::NotContextFree: return "NOT_CONTEXT_FREE";
    case ErrorCode::NonCfgEpsilonUndecided: return "NON_CFG_EPSILON_UNDECIDED";
    case ErrorCode::ShapeViolation: return "SHAPE_VIOLATION";
    case ErrorCode::InputNotStrongSavitch: return "INPUT_NOT_STRONG_SAVITCH";
    case ErrorCode::WordHasNonterminal: return "WORD_HAS_NONTERMINAL";
    case ErrorCode::SegmentRewritten: return "SEGMENT_REWRITTEN";
    case ErrorCode::FormViolation: return "FORM_VIOLATION";
    case ErrorCode::CapExceeded: return "CAP_EXCEEDED";
    case ErrorCode::TraceMismatch: return "TRACE_MISMATCH";
    case ErrorCode::InvalidDerivation: return "INVALID_DERIVATION";
    case ErrorCode::UnknownNode: return "UNKNOWN_NODE";
    case ErrorCode::AlphabetMismatch: return "ALPHABET_MISMATCH";
    case ErrorCode::BadInput: return "BAD_INPUT";
  }
  return "UNKNOWN";
}

std::size_t SequenceHash::operator()(const Sequence& s) const noexcept {
  // FNV-1a over the ids.
  std::size_t h = 1469598103934665603ull;
  for (SymbolId id : s) {
    h ^= id + 0x9e3779b9u;
    h *= 1099511628211ull;
  }
  return h ^ s.size();
}

std::size_t ProductionHash::operator()(const Production& p) const noexcept {
  SequenceHash h;
  return h(p.lhs) * 31 + h(p.rhs) + 0x51ed27;
}

std::string_view grammar_class_name(GrammarClass c) {
  switch (c) {
    case GrammarClass::REG: return "REG";
    case GrammarClass::CFG: return "CFG";
    case GrammarClass::CSG: return "CSG";
    case GrammarClass::GG: return "GG";
  }
  return "GG";
}

std::string_view rule_kind_name(RuleKind k) {
  switch (k) {
    case RuleKind::REN: return "REN";
    case RuleKind::SS: return "SS";
    case RuleKind::TERMINAL: return "TERMINAL";
    case RuleKind::RSS: return "RSS";
    case RuleKind::ANNIHILATE2: return "ANNIHILATE2";
    case RuleKind::EPSILON: return "EPSILON";
    case RuleKind::OTHER: return "OTHER";
  }
  return "OTHER";
}

bool is_valid_symbol_name(std::string_view name) {
  if (name.empty() || name == "->" || name == "|" || name.front() == '@' || name.front() == '#')
    return false;
  return std::none_of(name.begin(), name.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
  });
}

SymbolId Grammar::add_symbol(std::string_view name, SymbolKind kind) {
  if (!is_valid_symbol_name(name))
    throw Error(ErrorCode::BadInput, "invalid symbol name '" + std::string(name) + "'");
  if (auto it = by_name_.find(std::string(name)); it != by_name_.end()) {
    if (symbols_[it->second].kind != kind)
      throw Error(ErrorCode::KindConflict,
                  "symbol '" + std::string(name) + "' is both terminal and nonterminal");
    return it->second;
  }
  auto id = static_cast<SymbolId>(symbols_.size());
  symbols_.push_back(Symbol{id, kind, std::string(name)});
  by_name_.emplace(std::string(name), id);
  return id;
}

std::optional<SymbolId> Grammar::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

SymbolId Grammar::require(std::string_view name) const {
  auto id = find(name);
  if (!id) throw Error(ErrorCode::UnknownSymbol, "unknown symbol '" + std::string(name) + "'");
  return *id;
}

std::vector<SymbolId> Grammar::nonterminals() const {
  std::vector<SymbolId> out;
  for (const auto& s : symbols_)
    if (s.kind == SymbolKind::NonTerminal) out.push_back(s.id);
  return out;
}

std::vector<SymbolId> Grammar::terminals() const {
  std::vector<SymbolId> out;
  for (const auto& s : symbols_)
    if (s.kind == SymbolKind::Terminal) out.push_back(s.id);
  return out;
}

SymbolId Grammar::start() const {
  if (!start_) throw Error(ErrorCode::UndeclaredStart, "grammar has no start symbol");
  return *start_;
}

void Grammar::set_start(SymbolId id) {
  if (id >= symbols_.size() || !is_nonterminal(id))
    throw Error(ErrorCode::UndeclaredStart, "start symbol must be a registered nonterminal");
  start_ = id;
}

void Grammar::check_production(const Production& p) const {
  if (p.lhs.empty()) throw Error(ErrorCode::LhsWithoutNonterminal, "empty left-hand side");
  for (SymbolId id : p.lhs)
    if (id >= symbols_.size()) throw Error(ErrorCode::UnknownSymbol, "unregistered symbol id");
  for (SymbolId id : p.rhs)
    if (id >= symbols_.size()) throw Error(ErrorCode::UnknownSymbol, "unregistered symbol id");
  if (std::none_of(p.lhs.begin(), p.lhs.end(), [&](SymbolId id) { return is_nonterminal(id); }))
    throw Error(ErrorCode::LhsWithoutNonterminal,
                "left-hand side of '" + format(p) + "' has no nonterminal");
}

void Grammar::add_production(Production p) {
  check_production(p);
  productions_.push_back(std::move(p));
}

void Grammar::set_productions(std::vector<Production> ps) {
  for (const auto& p : ps) check_production(p);
  productions_ = std::move(ps);
}

bool Grammar::contains(const Production& p) const {
  return std::find(productions_.begin(), productions_.end(), p) != productions_.end();
}

std::string Grammar::format(const Sequence& s) const {
  if (s.empty()) return "@eps";
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ' ';
    out += name(s[i]);
  }
  return out;
}

std::string Grammar::format(const Production& p) const {
  return format(p.lhs) + " -> " + format(p.rhs);
}

Sequence Grammar::parse_sequence(std::string_view text) const {
  Sequence out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    if (tok == "@eps") continue;
    out.push_back(require(tok));
  }
  return out;
}

std::vector<std::string> Grammar::names(const Sequence& s) const {
  std::vector<std::string> out;
  out.reserve(s.size());
  for (SymbolId id : s) out.push_back(name(id));
  return out;
}

bool operator==(const Grammar& a, const Grammar& b) {
  if (a.symbols_.size() != b.symbols_.size() || a.eps_free_ != b.eps_free_) return false;
  for (const auto& s : a.symbols_) {
    auto other = b.find(s.name);
    if (!other || b.symbol(*other).kind != s.kind) return false;
  }
  if (a.start_.has_value() != b.start_.has_value()) return false;
  if (a.start_ && a.name(*a.start_) != b.name(*b.start_)) return false;
  if (a.productions_.size() != b.productions_.size()) return false;
  for (std::size_t i = 0; i < a.productions_.size(); ++i) {
    const auto& p = a.productions_[i];
    const auto& q = b.productions_[i];
    if (a.names(p.lhs) != b.names(q.lhs) || a.names(p.rhs) != b.names(q.rhs)) return false;
  }
  return true;
}

RuleKind classify_production(const Production& p, const Grammar& g) {
  const auto& l = p.lhs;
  const auto& r = p.rhs;
  auto nt = [&](SymbolId id) { return g.is_nonterminal(id); };
  if (l.size() == 1 && nt(l[0])) {
    if (r.empty()) return RuleKind::EPSILON;
    if (r.size() == 1) return nt(r[0]) ? RuleKind::REN : RuleKind::TERMINAL;
    if (r.size() == 2 && nt(r[0]) && nt(r[1])) return RuleKind::SS;
    return RuleKind::OTHER;
  }
  if (l.size() == 2 && nt(l[0]) && nt(l[1])) {
    if (r.empty()) return RuleKind::ANNIHILATE2;
    if (r.size() == 1 && nt(r[0])) return RuleKind::RSS;
  }
  return RuleKind::OTHER;
}

bool is_context_free(const Grammar& g) {
  return std::all_of(g.productions().begin(), g.productions().end(), [&](const Production& p) {
    return p.lhs.size() == 1 && g.is_nonterminal(p.lhs[0]);
  });
}

bool is_noncontracting(const Grammar& g) {
  return std::all_of(g.productions().begin(), g.productions().end(),
                     [](const Production& p) { return p.rhs.size() >= p.lhs.size(); });
}

bool is_noncontracting_but_start_eps(const Grammar& g) {
  SymbolId s = g.start();
  Production start_eps{{s}, {}};
  bool s_in_rhs = false;
  for (const auto& p : g.productions())
    if (std::find(p.rhs.begin(), p.rhs.end(), s) != p.rhs.end()) s_in_rhs = true;
  return std::all_of(g.productions().begin(), g.productions().end(), [&](const Production& p) {
    return p.rhs.size() >= p.lhs.size() || (p == start_eps && !s_in_rhs);
  });
}

bool has_terminal_in_lhs(const Grammar& g) {
  for (const auto& p : g.productions())
    for (SymbolId id : p.lhs)
      if (g.is_terminal(id)) return true;
  return false;
}

namespace {

bool is_regular_rule(const Production& p, const Grammar& g) {
  if (p.lhs.size() != 1 || !g.is_nonterminal(p.lhs[0])) return false;
  // r ∈ T* ∪ T*N: every symbol but possibly the last is a terminal.
  for (std::size_t i = 0; i + 1 < p.rhs.size(); ++i)
    if (g.is_nonterminal(p.rhs[i])) return false;
  return true;
}

bool matches_context_sensitive(const Production& p, const Grammar& g) {
  const auto& l = p.lhs;
  const auto& r = p.rhs;
  for (std::size_t k = 0; k < l.size(); ++k) {
    if (!g.is_nonterminal(l[k])) continue;
    std::size_t alpha = k;
    std::size_t beta = l.size() - k - 1;
    if (r.size() < alpha + beta + 1) continue;
    if (!std::equal(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(alpha), r.begin())) continue;
    if (!std::equal(l.end() - static_cast<std::ptrdiff_t>(beta), l.end(),
                    r.end() - static_cast<std::ptrdiff_t>(beta)))
      continue;
    return true;
  }
  return false;
}

}  // namespace

GrammarClass classify_grammar(const Grammar& g) {
  const auto& ps = g.productions();
  if (std::all_of(ps.begin(), ps.end(), [&](const Production& p) { return is_regular_rule(p, g); }))
    return GrammarClass::REG;
  if (is_context_free(g)) return GrammarClass::CFG;

  bool start_in_rhs = false;
  if (g.has_start())
    for (const auto& p : ps)
      if (std::find(p.rhs.begin(), p.rhs.end(), g.start()) != p.rhs.end()) start_in_rhs = true;
  bool csg = std::all_of(ps.begin(), ps.end(), [&](const Production& p) {
    if (matches_context_sensitive(p, g)) return true;
    // ε-Amendment.
    return g.has_start() && !start_in_rhs && p.lhs == Sequence{g.start()} && p.rhs.empty();
  });
  return csg ? GrammarClass::CSG : GrammarClass::GG;
}

std::vector<Production> lint_self_renamings(const Grammar& g) {
  std::vector<Production> out;
  for (const auto& p : g.productions())
    if (p.lhs.size() == 1 && p.rhs == p.lhs) out.push_back(p);
  return out;
}

}  // namespace asnf
