// Command-line front end. One subcommand per library operation.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "asnf/abstraction_graph.hpp"
#include "asnf/derivation.hpp"
#include "asnf/equivalence.hpp"
#include "asnf/grammar_io.hpp"
#include "asnf/lift.hpp"
#include "asnf/reorder.hpp"
#include "asnf/search.hpp"
#include "asnf/transforms.hpp"
#include "asnf/validate.hpp"

using namespace asnf;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitParse = 65;
constexpr int kExitIo = 66;
constexpr int kExitOperation = 70;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw IoError("cannot write " + path);
}

Grammar load_grammar(const std::string& path) { return parse_grammar(read_file(path)); }

json load_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadInput, path + ": " + e.what());
  }
}

/// Output goes to `-o` when given, else stdout.
void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) std::cout << text;
  else write_file(out_path, text);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

Word split_word(const std::string& text) {
  std::istringstream is(text);
  Word w;
  for (std::string tok; is >> tok;)
    if (tok != "@eps") w.push_back(tok);
  return w;
}

std::string format_derivation(const Grammar& g, const Derivation& d) {
  std::ostringstream os;
  SententialForm form = d.start;
  os << "  " << (form.empty() ? "@eps" : g.format(form)) << "\n";
  for (const auto& s : d.steps) {
    form = apply_step(form, s);
    os << "  => " << (form.empty() ? "@eps" : g.format(form)) << "    [" << s.position << ": "
       << g.format(s.production) << "]\n";
  }
  return os.str();
}

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::SyntaxError:
    case ErrorCode::UndeclaredStart:
    case ErrorCode::LhsWithoutNonterminal:
    case ErrorCode::KindConflict:
    case ErrorCode::UnknownSymbol:
    case ErrorCode::BadInput:
      return kExitParse;
    default:
      return kExitOperation;
  }
}

int verdict_exit(Verdict v) { return v == Verdict::Yes ? 0 : v == Verdict::No ? 1 : 2; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grammar normal forms, derivation rewriting and bounded equivalence"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "JSON output");

  SearchBudget budget = SearchBudget::from_environment();
  app.add_option("--max-form-length", budget.max_form_length, "Search: longest sentential form kept");
  app.add_option("--max-steps", budget.max_steps, "Search: deepest derivation explored");
  app.add_option("--max-visited", budget.max_visited, "Search: most forms visited");

  std::string grammar_path, second_path, third_path, out_path, word_text, form_text, target_text, trace_path;
  std::string mode = "grow-shrink", node;
  std::size_t max_len = kDefaultMaxLen;
  bool minimize = false, dot = false, rabs = false;

  auto* parse = app.add_subcommand("parse", "Parse and print the canonical grammar");
  parse->add_option("grammar", grammar_path)->required();

  auto* classify = app.add_subcommand("classify", "Chomsky class and rule kinds");
  classify->add_option("grammar", grammar_path)->required();

  auto* validate = app.add_subcommand("validate", "Check a normal form");
  validate->add_option("grammar", grammar_path)->required();
  validate->add_option("--form", form_text)->required();

  auto* transform = app.add_subcommand("transform", "Convert to a normal form");
  transform->add_option("grammar", grammar_path)->required();
  transform->add_option("--to", target_text)->required();
  transform->add_option("-o,--output", out_path);
  transform->add_option("--emit-trace", trace_path);
  transform->add_flag("--minimize-renamings", minimize);

  auto* derive = app.add_subcommand("derive", "Find a derivation of a word");
  derive->add_option("grammar", grammar_path)->required();
  derive->add_option("--word", word_text)->required();
  derive->add_option("-o,--output", out_path);

  auto* member = app.add_subcommand("member", "Membership verdict for a word");
  member->add_option("grammar", grammar_path)->required();
  member->add_option("--word", word_text)->required();

  auto* enumerate = app.add_subcommand("enumerate", "Words up to a length");
  enumerate->add_option("grammar", grammar_path)->required();
  enumerate->add_option("--max-len", max_len);

  auto* reorder = app.add_subcommand("reorder", "Reorder a derivation");
  reorder->add_option("grammar", grammar_path)->required();
  reorder->add_option("derivation", second_path)->required();
  reorder->add_option("--mode", mode)->check(CLI::IsMember({"terminals", "grow-shrink"}));
  reorder->add_option("-o,--output", out_path);

  auto* lift = app.add_subcommand("lift", "Carry a derivation through a transform trace");
  lift->add_option("grammar", grammar_path, "Transform input")->required();
  lift->add_option("trace", second_path)->required();
  lift->add_option("derivation", third_path)->required();
  lift->add_option("-o,--output", out_path);

  auto* equiv = app.add_subcommand("equiv", "Bounded language equivalence");
  equiv->add_option("grammar", grammar_path)->required();
  equiv->add_option("other", second_path)->required();
  equiv->add_option("--max-len", max_len);

  auto* graph = app.add_subcommand("graph", "Abstractions graph");
  graph->add_option("grammar", grammar_path)->required();
  graph->add_flag("--dot", dot);
  graph->add_option("--node", node, "Print ABS (or RABS with --reverse) of this node");
  graph->add_flag("--reverse", rabs);

  auto* minimality = app.add_subcommand("minimality", "Finite-language check for |lhs|+|rhs| <= 2");
  minimality->add_option("grammar", grammar_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*parse) {
      Grammar g = load_grammar(grammar_path);
      std::cout << (as_json ? dump(grammar_to_json(g)) : serialize_grammar(g));
      return 0;
    }

    if (*classify) {
      Grammar g = load_grammar(grammar_path);
      GrammarClass c = classify_grammar(g);
      json rules = json::array();
      for (const auto& p : g.productions())
        rules.push_back({{"rule", g.format(p)}, {"kind", rule_kind_name(classify_production(p, g))}});
      if (as_json) {
        std::cout << dump({{"class", grammar_class_name(c)}, {"rules", rules}});
      } else {
        std::cout << "class: " << grammar_class_name(c) << "\n";
        for (const auto& r : rules)
          std::cout << "  " << r["kind"].get<std::string>() << "\t" << r["rule"].get<std::string>() << "\n";
      }
      return 0;
    }

    if (*validate) {
      Grammar g = load_grammar(grammar_path);
      auto form = parse_form(form_text);
      if (!form) throw Error(ErrorCode::BadInput, "unknown form '" + form_text + "'");
      ValidationReport r = validate_normal_form(g, *form);
      if (as_json) {
        std::cout << dump(report_to_json(r, g));
      } else {
        std::cout << form_name(r.form) << ": " << (r.ok ? "ok" : "violations") << "\n";
        if (r.epsilon_exempt) std::cout << "  exempt: " << g.format(r.epsilon_exempt->first) << ", "
                                        << g.format(r.epsilon_exempt->second) << "\n";
        for (const auto& v : r.violations) std::cout << "  " << g.format(v.production) << ": " << v.reason << "\n";
      }
      return r.ok ? 0 : 1;
    }

    if (*transform) {
      Grammar g = load_grammar(grammar_path);
      auto target = parse_target(target_text);
      if (!target) throw Error(ErrorCode::BadInput, "unknown target '" + target_text + "'");
      TransformOptions opts;
      opts.minimize_renamings = minimize;
      opts.budget = budget;
      TransformResult r = run_transform(g, *target, opts);
      if (!trace_path.empty()) write_file(trace_path, dump(trace_to_json(r.trace, r.grammar)));
      emit(out_path, as_json ? dump(grammar_to_json(r.grammar)) : serialize_grammar(r.grammar));
      return 0;
    }

    if (*derive || *member) {
      Grammar g = load_grammar(grammar_path);
      MembershipResult m = membership(g, split_word(word_text), budget);
      if (*member) {
        if (as_json) std::cout << dump({{"verdict", verdict_name(m.verdict)}, {"method", m.method}});
        else std::cout << verdict_name(m.verdict) << " (" << m.method << ")\n";
        return verdict_exit(m.verdict);
      }
      if (!m.derivation) {
        std::cerr << "no derivation found: " << verdict_name(m.verdict) << " (" << m.method << ")\n";
        return verdict_exit(m.verdict);
      }
      emit(out_path, as_json || !out_path.empty() ? dump(derivation_to_json(g, *m.derivation))
                                                  : format_derivation(g, *m.derivation));
      return 0;
    }

    if (*enumerate) {
      Grammar g = load_grammar(grammar_path);
      EnumerationResult r = bounded_enumerate(g, max_len, budget);
      json words = json::array();
      for (const auto& w : r.words) words.push_back(format_word(w));
      if (as_json) {
        std::cout << dump({{"max_len", max_len},
                           {"conclusive", r.conclusive},
                           {"conclusive_upto", r.conclusive_upto},
                           {"words", words}});
      } else {
        for (const auto& w : r.words) std::cout << format_word(w) << "\n";
        std::cout << "# " << r.words.size() << " words, "
                  << (r.conclusive ? "complete" : "complete up to length " + std::to_string(r.conclusive_upto))
                  << "\n";
      }
      return 0;
    }

    if (*reorder) {
      Grammar g = load_grammar(grammar_path);
      Derivation d = derivation_from_json(load_json(second_path), g);
      json out;
      if (mode == "terminals") {
        out = {{"derivation", derivation_to_json(g, postpone_terminals(g, d))}};
      } else {
        auto [r, report] = grow_shrink_reorder(g, d);
        out = {{"derivation", derivation_to_json(g, r)}, {"phases", phase_report_to_json(report)}};
      }
      emit(out_path, dump(out));
      return 0;
    }

    if (*lift) {
      Grammar input = load_grammar(grammar_path);
      json tj = load_json(second_path);
      TransformTrace trace;
      try {
        trace = trace_from_json(tj, register_fresh_symbols(input, tj));
      } catch (const json::exception& e) {
        throw Error(ErrorCode::BadInput, std::string("malformed trace: ") + e.what());
      }
      Derivation d = derivation_from_json(load_json(third_path), input);
      Derivation lifted = lift_derivation(trace, input, d);
      Grammar output = replay_trace(input, trace);
      emit(out_path, dump(derivation_to_json(output, lifted)));
      return 0;
    }

    if (*equiv) {
      Grammar a = load_grammar(grammar_path);
      Grammar b = load_grammar(second_path);
      EquivVerdict v = bounded_equiv(a, b, max_len, budget);
      if (as_json) {
        std::cout << dump(equiv_to_json(v));
      } else {
        std::cout << equiv_status_name(v.status) << " (max length " << v.bound << ")\n";
        if (v.witness) std::cout << "  witness: " << format_word(*v.witness) << "\n";
        std::cout << "  complete up to: " << v.conclusive_upto.first << ", " << v.conclusive_upto.second << "\n";
      }
      return v.status == EquivStatus::EquivalentUpToBound ? 0 : v.status == EquivStatus::Counterexample ? 1 : 2;
    }

    if (*graph) {
      Grammar g = load_grammar(grammar_path);
      AbstractionsGraph ag = build_abstractions_graph(g);
      if (ag.warning()) std::cerr << "warning: " << *ag.warning() << "\n";
      if (!node.empty()) {
        auto id = g.find(node);
        if (!id) throw Error(ErrorCode::UnknownNode, "no symbol named '" + node + "'");
        Neighborhood n = rabs ? ag.reverse_abstraction_at(*id) : ag.abstraction_at(*id);
        json edges = json::array();
        for (const auto& e : n.edges) edges.push_back({ag.name(e.first), ag.name(e.second)});
        if (as_json) {
          std::cout << dump({{"center", ag.name(n.center)}, {"edges", edges}});
        } else {
          std::cout << (rabs ? "RABS(" : "ABS(") << ag.name(n.center) << "):";
          for (const auto& e : n.edges) std::cout << " " << ag.name(e.first) << "->" << ag.name(e.second);
          std::cout << "\n";
        }
        return 0;
      }
      if (dot) {
        std::cout << ag.to_dot();
      } else if (as_json) {
        std::cout << dump(ag.to_json());
      } else {
        for (const auto& e : ag.edges()) std::cout << ag.name(e.first) << " -> " << ag.name(e.second) << "\n";
      }
      return 0;
    }

    if (*minimality) {
      Grammar g = load_grammar(grammar_path);
      FiniteLanguageReport r = minimality_check(g, budget);
      if (as_json) {
        std::cout << dump(minimality_to_json(r));
      } else {
        std::cout << "shape_ok: " << r.shape_ok << "\nterminated: " << r.terminated << "\nall_short: " << r.all_short
                  << "\nlanguage:";
        for (const auto& w : r.language) std::cout << " " << format_word(w);
        std::cout << "\n";
      }
      return r.shape_ok && r.terminated && r.all_short ? 0 : 1;
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOperation;
  }
  return kExitUsage;
}
