#include "asnf/grammar_io.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>

namespace asnf {
namespace {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

struct Line {
  std::size_t number;
  std::vector<Token> tokens;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    std::size_t begin = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    out.push_back(Token{std::string(line.substr(begin, i - begin)), begin + 1});
  }
  return out;
}

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view raw = text.substr(pos, end - pos);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    auto tokens = tokenize(raw);
    if (!tokens.empty() && tokens.front().text.front() != '#')
      lines.push_back(Line{number, std::move(tokens)});
    pos = end + 1;
  }
  return lines;
}

SymbolKind inferred_kind(const std::string& name) {
  return std::isupper(static_cast<unsigned char>(name.front())) ? SymbolKind::NonTerminal
                                                                 : SymbolKind::Terminal;
}

void check_name(const Line& line, const Token& tok) {
  if (!is_valid_symbol_name(tok.text))
    throw ParseError(ErrorCode::SyntaxError, line.number, tok.column,
                     "invalid symbol '" + tok.text + "'");
}

}  // namespace

Grammar parse_grammar(std::string_view text) {
  auto lines = split_lines(text);

  std::optional<std::pair<std::string, const Line*>> start;
  std::map<std::string, SymbolKind> declared;
  std::vector<std::string> declaration_order;
  std::vector<const Line*> rules;
  bool eps_free = false;

  for (const auto& line : lines) {
    const auto& head = line.tokens.front();
    if (head.text == "@start") {
      if (start)
        throw ParseError(ErrorCode::SyntaxError, line.number, head.column,
                         "@start given more than once");
      if (line.tokens.size() != 2)
        throw ParseError(ErrorCode::SyntaxError, line.number, head.column,
                         "@start takes exactly one symbol");
      check_name(line, line.tokens[1]);
      start = std::make_pair(line.tokens[1].text, &line);
    } else if (head.text == "@terminals" || head.text == "@nonterminals") {
      SymbolKind kind = head.text == "@terminals" ? SymbolKind::Terminal : SymbolKind::NonTerminal;
      for (std::size_t i = 1; i < line.tokens.size(); ++i) {
        const auto& tok = line.tokens[i];
        check_name(line, tok);
        auto [it, inserted] = declared.emplace(tok.text, kind);
        if (!inserted && it->second != kind)
          throw ParseError(ErrorCode::KindConflict, line.number, tok.column,
                           "'" + tok.text + "' declared both terminal and nonterminal");
        if (inserted) declaration_order.push_back(tok.text);
      }
    } else if (head.text == "@eps-free") {
      if (line.tokens.size() != 1)
        throw ParseError(ErrorCode::SyntaxError, line.number, line.tokens[1].column,
                         "@eps-free takes no arguments");
      eps_free = true;
    } else if (head.text.front() == '@' && head.text != "@eps") {
      throw ParseError(ErrorCode::SyntaxError, line.number, head.column,
                       "unknown directive '" + head.text + "'");
    } else {
      rules.push_back(&line);
    }
  }

  if (!start) throw ParseError(ErrorCode::UndeclaredStart, 1, 1, "missing @start line");
  if (auto it = declared.find(start->first);
      it != declared.end() && it->second == SymbolKind::Terminal)
    throw ParseError(ErrorCode::UndeclaredStart, start->second->number,
                     start->second->tokens[1].column,
                     "start symbol '" + start->first + "' is declared as a terminal");

  auto kind_of = [&](const std::string& name) {
    if (name == start->first) return SymbolKind::NonTerminal;
    if (auto it = declared.find(name); it != declared.end()) return it->second;
    return inferred_kind(name);
  };

  Grammar g;
  g.set_eps_free_annotated(eps_free);
  g.set_start(g.add_nonterminal(start->first));
  for (const auto& name : declaration_order) g.add_symbol(name, kind_of(name));

  for (const Line* line : rules) {
    const auto& toks = line->tokens;
    auto arrow = std::find_if(toks.begin(), toks.end(), [](const Token& t) { return t.text == "->"; });
    if (arrow == toks.end())
      throw ParseError(ErrorCode::SyntaxError, line->number, toks.front().column,
                       "expected '->' in rule");
    if (arrow == toks.begin())
      throw ParseError(ErrorCode::SyntaxError, line->number, arrow->column,
                       "rule has an empty left-hand side");

    Sequence lhs;
    for (auto it = toks.begin(); it != arrow; ++it) {
      if (it->text == "|" || it->text == "@eps")
        throw ParseError(ErrorCode::SyntaxError, line->number, it->column,
                         "unexpected '" + it->text + "' in left-hand side");
      check_name(*line, *it);
      lhs.push_back(g.add_symbol(it->text, kind_of(it->text)));
    }
    if (std::none_of(lhs.begin(), lhs.end(), [&](SymbolId id) { return g.is_nonterminal(id); }))
      throw ParseError(ErrorCode::LhsWithoutNonterminal, line->number, toks.front().column,
                       "left-hand side contains no nonterminal");

    // Alternatives separated by '|'.
    std::vector<std::vector<const Token*>> alternatives(1);
    std::size_t last_column = arrow->column;
    for (auto it = arrow + 1; it != toks.end(); ++it) {
      if (it->text == "->")
        throw ParseError(ErrorCode::SyntaxError, line->number, it->column, "second '->' in rule");
      if (it->text == "|") {
        if (alternatives.back().empty())
          throw ParseError(ErrorCode::SyntaxError, line->number, it->column,
                           "empty alternative (use @eps)");
        alternatives.emplace_back();
      } else {
        alternatives.back().push_back(&*it);
      }
      last_column = it->column;
    }
    if (alternatives.back().empty())
      throw ParseError(ErrorCode::SyntaxError, line->number, last_column,
                       "empty alternative (use @eps)");

    for (const auto& alt : alternatives) {
      Sequence rhs;
      bool eps = false;
      for (const Token* tok : alt) {
        if (tok->text == "@eps") {
          if (alt.size() != 1)
            throw ParseError(ErrorCode::SyntaxError, line->number, tok->column,
                             "@eps must stand alone in an alternative");
          eps = true;
          continue;
        }
        check_name(*line, *tok);
        rhs.push_back(g.add_symbol(tok->text, kind_of(tok->text)));
      }
      if (eps) rhs.clear();
      g.add_production(Production{lhs, std::move(rhs)});
    }
  }
  return g;
}

std::string serialize_grammar(const Grammar& g) {
  auto sorted_names = [&](const std::vector<SymbolId>& ids) {
    std::vector<std::string> names;
    for (SymbolId id : ids) names.push_back(g.name(id));
    std::sort(names.begin(), names.end());
    return names;
  };

  std::string out = "@start " + g.name(g.start()) + "\n";
  for (auto [directive, ids] : {std::pair{"@nonterminals", g.nonterminals()},
                                std::pair{"@terminals", g.terminals()}}) {
    auto names = sorted_names(ids);
    if (names.empty()) continue;
    out += directive;
    for (const auto& n : names) out += " " + n;
    out += "\n";
  }
  if (g.eps_free_annotated()) out += "@eps-free\n";
  for (const auto& p : g.productions()) out += g.format(p) + "\n";
  return out;
}

nlohmann::json grammar_to_json(const Grammar& g) {
  auto sorted_names = [&](const std::vector<SymbolId>& ids) {
    std::vector<std::string> names;
    for (SymbolId id : ids) names.push_back(g.name(id));
    std::sort(names.begin(), names.end());
    return names;
  };
  nlohmann::json productions = nlohmann::json::array();
  for (const auto& p : g.productions())
    productions.push_back({{"lhs", g.names(p.lhs)}, {"rhs", g.names(p.rhs)}});
  return {{"nonterminals", sorted_names(g.nonterminals())},
          {"terminals", sorted_names(g.terminals())},
          {"start", g.name(g.start())},
          {"productions", std::move(productions)}};
}

}  // namespace asnf
