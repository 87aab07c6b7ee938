#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "fog/game.hpp"
#include "fog/grammar.hpp"
#include "fog/judgment.hpp"
#include "fog/repro.hpp"
#include "fog/strategy.hpp"

namespace {

using nlohmann::ordered_json;

// Exit codes: 0 = success/accepted, 1 = checked and rejected, 2 = usage or
// parse error.
constexpr int kOk = 0;
constexpr int kRejected = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void print_diagnostics(const std::string& path,
                       const std::vector<fog::Diagnostic>& diags) {
  for (const fog::Diagnostic& d : diags) {
    std::cerr << path << ":" << d.line << ":" << d.column << ": " << d.message
              << "\n";
  }
}

fog::Grammar load_grammar(const std::string& path) {
  fog::GrammarParseResult result = fog::parse_grammar(read_file(path));
  if (!result.ok()) {
    print_diagnostics(path, result.diagnostics);
    throw UsageError("grammar '" + path + "' did not parse");
  }
  return std::move(*result.grammar);
}

fog::Term load_term(const fog::Grammar& g, const std::string& text) {
  fog::TermParseResult result = fog::parse_term(g, text);
  if (!result.ok()) {
    print_diagnostics("<term>", result.diagnostics);
    throw UsageError("term '" + text + "' did not parse");
  }
  return std::move(*result.term);
}

// A strategy argument is either a .strat file or `@identity`, the built-in
// identity strategy materialized at --depth.
fog::PlaySet load_strategy(const fog::Grammar& g, const std::string& arg,
                           const fog::TermPair& pair, int depth) {
  if (arg == "@identity") {
    fog::IntensionalStrategy id = fog::identity_strategy(g, pair.left);
    id.base = pair;
    return fog::materialize(g, id, depth);
  }
  fog::PlaySetParseResult result = fog::parse_playset(g, read_file(arg));
  if (!result.ok()) {
    print_diagnostics(arg, result.diagnostics);
    throw UsageError("strategy '" + arg + "' did not parse");
  }
  return std::move(*result.set);
}

int cmd_validate(const std::string& path, bool json) {
  fog::GrammarParseResult result = fog::parse_grammar(read_file(path));
  if (!result.ok()) {
    if (json) {
      ordered_json doc;
      doc["ok"] = false;
      auto list = ordered_json::array();
      for (const fog::Diagnostic& d : result.diagnostics) {
        list.push_back({{"line", d.line}, {"column", d.column}, {"message", d.message}});
      }
      doc["diagnostics"] = std::move(list);
      std::cout << doc.dump(2) << "\n";
    } else {
      print_diagnostics(path, result.diagnostics);
    }
    return kUsage;
  }
  const fog::Grammar& g = *result.grammar;
  if (json) {
    ordered_json doc;
    doc["ok"] = true;
    doc["nonterminals"] = g.nonterminals().size();
    doc["actions"] = g.actions().size();
    doc["labels"] = g.tlabels().size();
    doc["rules"] = g.rules().size();
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << path << ": ok (" << g.nonterminals().size() << " nonterminals, "
              << g.actions().size() << " actions, " << g.tlabels().size()
              << " labels, " << g.rules().size() << " rules)\n";
  }
  return kOk;
}

int cmd_eqlevel(const std::string& grammar_path, const std::string& left_text,
                const std::string& right_text, std::size_t budget, bool json) {
  fog::Grammar g = load_grammar(grammar_path);
  fog::TermPair pair{load_term(g, left_text), load_term(g, right_text)};
  fog::EqLevel level = fog::eq_level(g, pair, budget);
  if (json) {
    ordered_json doc;
    doc["left"] = fog::term_to_string(g, pair.left);
    doc["right"] = fog::term_to_string(g, pair.right);
    doc["budget"] = budget;
    ordered_json lv;
    switch (level.kind()) {
      case fog::EqLevel::Kind::exact:
        lv = {{"kind", "exact"}, {"n", level.n()}};
        break;
      case fog::EqLevel::Kind::infinite:
        lv = {{"kind", "infinite"}};
        break;
      case fog::EqLevel::Kind::at_least:
        lv = {{"kind", "at_least"}, {"n", level.n()}};
        break;
    }
    doc["level"] = std::move(lv);
    doc["text"] = level.to_string();
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << level.to_string() << "\n";
  }
  return kOk;
}

int cmd_check_strategy(const std::string& grammar_path, const std::string& left_text,
                       const std::string& right_text, const std::string& strategy_arg,
                       const std::string& mode, int depth, bool json) {
  fog::Grammar g = load_grammar(grammar_path);
  fog::TermPair pair{load_term(g, left_text), load_term(g, right_text)};
  fog::PlaySet s = load_strategy(g, strategy_arg, pair, depth);

  fog::StrategyVerdict verdict;
  if (mode == "dq") {
    verdict = fog::check_dq(g, pair, s);
  } else if (mode == "d") {
    verdict = fog::check_d(g, pair, s);
  } else if (mode == "winning") {
    verdict = fog::check_winning(g, pair, s);
  } else if (mode == "prefix") {
    verdict = fog::check_finite_prefix(g, pair, s);
  } else {
    throw UsageError("unknown mode '" + mode + "' (expected dq|d|winning|prefix)");
  }

  if (json) {
    ordered_json doc = fog::verdict_to_json(g, verdict);
    doc["mode"] = mode;
    if (verdict.prefix_depth >= 0) doc["n"] = verdict.prefix_depth;
    std::cout << doc.dump(2) << "\n";
  } else if (verdict.accepted) {
    std::cout << "accepted";
    if (verdict.prefix_depth >= 0) std::cout << ", n=" << verdict.prefix_depth;
    std::cout << "\n";
  } else {
    std::cout << "rejected: " << fog::condition_name(verdict.violated);
    if (verdict.witness) {
      std::string play = fog::play_to_string(g, *verdict.witness);
      std::cout << " at play '" << (play.empty() ? "eps" : play) << "'";
    }
    std::cout << "\n";
  }
  return verdict.accepted ? kOk : kRejected;
}

int cmd_repro(std::size_t budget, const std::string& k_range, bool json) {
  int k_min = 1;
  int k_max = 6;
  if (!k_range.empty()) {
    auto dots = k_range.find("..");
    try {
      if (dots == std::string::npos) {
        k_min = k_max = std::stoi(k_range);
      } else {
        k_min = std::stoi(k_range.substr(0, dots));
        k_max = std::stoi(k_range.substr(dots + 2));
      }
    } catch (const std::exception&) {
      throw UsageError("bad --k-range '" + k_range + "' (expected K or K..K)");
    }
  }
  std::vector<fog::ClaimResult> claims = fog::run_repro(budget, k_min, k_max);
  if (json) {
    std::cout << fog::repro_report(claims).dump(2) << "\n";
  } else {
    for (const fog::ClaimResult& c : claims) {
      std::cout << (c.pass ? "PASS" : "FAIL") << " " << c.id << ": " << c.description
                << " (expected " << c.expected << ", computed " << c.computed << ")";
      if (c.witness) std::cout << " [witness: " << *c.witness << "]";
      std::cout << "\n";
    }
    std::cout << (fog::all_pass(claims) ? "all claims pass" : "some claims FAILED")
              << "\n";
  }
  return fog::all_pass(claims) ? kOk : kRejected;
}

int cmd_gen_family(int k, const std::string& out_path, bool json) {
  std::string text = fog::family_grammar_text(k);  // throws Error when k < 1
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + out_path + "'");
  out << text;
  out.close();
  fog::Grammar g = fog::family_grammar(k);
  if (json) {
    ordered_json doc;
    doc["k"] = k;
    doc["path"] = out_path;
    doc["rules"] = g.rules().size();
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "wrote " << out_path << " (" << g.rules().size() << " rules)\n";
  }
  return kOk;
}

void print_position(const fog::Grammar& g, const fog::TermPair& pair) {
  std::cout << "position: " << fog::term_to_string(g, pair.left) << "  |  "
            << fog::term_to_string(g, pair.right) << "\n";
  auto show_side = [&](const char* name, const fog::Term& t) {
    std::cout << "  " << name << ":";
    if (t.is_bot()) {
      std::cout << " (no moves)";
    } else {
      for (int r : fog::enabled_rules(g, t)) {
        std::cout << " " << fog::rule_to_string(g, r) << "["
                  << g.actions()[static_cast<std::size_t>(fog::act(g, r))].name
                  << "]->" << fog::term_to_string(g, fog::apply_rule(g, t, r));
      }
    }
    std::cout << "\n";
  };
  show_side("left ", pair.left);
  show_side("right", pair.right);
}

int cmd_play(const std::string& grammar_path, const std::string& left_text,
             const std::string& right_text, const std::string& strategy_arg,
             int depth) {
  fog::Grammar g = load_grammar(grammar_path);
  fog::TermPair pair{load_term(g, left_text), load_term(g, right_text)};

  std::optional<fog::PlaySet> strategy;
  if (!strategy_arg.empty()) {
    strategy = load_strategy(g, strategy_arg, pair, depth);
    fog::StrategyVerdict verdict = fog::check_dq(g, pair, *strategy);
    if (!verdict.accepted) {
      std::cout << "strategy rejected: " << fog::condition_name(verdict.violated);
      if (verdict.witness) {
        std::cout << " at play '" << fog::play_to_string(g, *verdict.witness) << "'";
      }
      std::cout << "\n";
      return kRejected;
    }
  }

  std::cout << "You attack; the machine defends"
            << (strategy ? " from the given strategy" : "") << ".\n"
            << "Commands: left <rule>, right <rule>, quit.\n";
  fog::Play history;
  int rounds = 0;
  while (true) {
    print_position(g, pair);
    bool left_dead = pair.left.is_bot();
    bool right_dead = pair.right.is_bot();
    if (left_dead && right_dead) {
      std::cout << "No attacker move possible; Defender survived " << rounds
                << " round" << (rounds == 1 ? "" : "s") << ".\n";
      return kOk;
    }
    std::cout << "attack> " << std::flush;
    std::string line;
    if (!std::getline(std::cin, line)) {
      std::cout << "\nsession ended after " << rounds << " round"
                << (rounds == 1 ? "" : "s") << ".\n";
      return kOk;
    }
    std::istringstream in(line);
    std::string side, rule_id;
    in >> side >> rule_id;
    if (side.empty()) continue;
    if (side == "quit" || side == "q") {
      std::cout << "you quit after " << rounds << " round" << (rounds == 1 ? "" : "s")
                << ".\n";
      return kOk;
    }
    bool on_left;
    if (side == "left" || side == "l") {
      on_left = true;
    } else if (side == "right" || side == "r") {
      on_left = false;
    } else {
      std::cout << "unknown command '" << side << "'; use left/right/quit.\n";
      continue;
    }
    int rule = g.rule_index(rule_id);
    const fog::Term& attacked = on_left ? pair.left : pair.right;
    if (rule < 0 || attacked.is_bot() ||
        g.rules()[static_cast<std::size_t>(rule)].head != attacked.head()) {
      std::cout << "rule '" << rule_id << "' is not enabled on the "
                << (on_left ? "left" : "right") << " term.\n";
      continue;
    }

    // Defender: first matching response in the strategy (rule-index order),
    // or the first same-action rule on the other side.
    int reply = -1;
    if (strategy) {
      for (const fog::MovePair& mv : strategy->moves_after(history)) {
        int attack_part = on_left ? mv.first : mv.second;
        int reply_part = on_left ? mv.second : mv.first;
        const fog::Term& other = on_left ? pair.right : pair.left;
        if (attack_part != rule || other.is_bot()) continue;
        if (g.rules()[static_cast<std::size_t>(reply_part)].head != other.head()) continue;
        if (fog::act(g, reply_part) != fog::act(g, rule)) continue;
        reply = reply_part;
        break;
      }
    } else {
      const fog::Term& other = on_left ? pair.right : pair.left;
      if (!other.is_bot()) {
        for (int r : fog::enabled_rules(g, other)) {
          if (fog::act(g, r) == fog::act(g, rule)) {
            reply = r;
            break;
          }
        }
      }
    }
    if (reply < 0) {
      std::cout << "Defender is stuck; Attacker wins in round " << (rounds + 1)
                << ".\n";
      return kOk;
    }
    fog::MovePair move = on_left ? fog::MovePair{rule, reply}
                                 : fog::MovePair{reply, rule};
    pair = fog::TermPair{fog::apply_rule(g, pair.left, move.first),
                         fog::apply_rule(g, pair.right, move.second)};
    if (strategy) history.push_back(move);
    ++rounds;
    std::cout << "Defender answers " << fog::rule_to_string(g, reply) << ".\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bisimulation games on first-order grammars"};
  app.require_subcommand(1);

  std::string grammar_path, left_text, right_text, strategy_arg, out_path;
  std::string mode = "dq";
  std::string k_range;
  std::size_t budget = 100000;
  int depth = 16;
  int k = 1;
  bool json = false;

  auto* validate = app.add_subcommand("validate", "Parse and validate a grammar file");
  validate->add_option("grammar", grammar_path, "grammar file (.fog)")->required();
  validate->add_flag("--json", json, "JSON output");

  auto* eqlevel =
      app.add_subcommand("eqlevel", "Equivalence level of a pair of terms");
  eqlevel->add_option("grammar", grammar_path, "grammar file (.fog)")->required();
  eqlevel->add_option("left", left_text, "left term")->required();
  eqlevel->add_option("right", right_text, "right term")->required();
  eqlevel->add_option("--budget", budget, "state-space cap (default 100000)");
  eqlevel->add_flag("--json", json, "JSON output");

  auto* check =
      app.add_subcommand("check-strategy", "Check a defender strategy file");
  check->add_option("grammar", grammar_path, "grammar file (.fog)")->required();
  check->add_option("left", left_text, "left term")->required();
  check->add_option("right", right_text, "right term")->required();
  check->add_option("strategy", strategy_arg, "strategy file (.strat) or @identity")
      ->required();
  check->add_option("--mode", mode, "dq|d|winning|prefix (default dq)");
  check->add_option("--depth", depth, "materialization depth for @identity");
  check->add_flag("--json", json, "JSON output");

  auto* repro = app.add_subcommand(
      "repro", "Re-run the bundled counterexample claim suite");
  repro->add_option("--budget", budget, "state-space cap (default 100000)");
  repro->add_option("--k-range", k_range, "family depths, e.g. 1..6");
  repro->add_flag("--json", json, "JSON output");

  auto* gen = app.add_subcommand("gen-family", "Write a depth-k variant grammar");
  gen->add_option("k", k, "chain depth (k >= 1)")->required();
  gen->add_option("out", out_path, "output path")->required();
  gen->add_flag("--json", json, "JSON output");

  auto* play = app.add_subcommand("play", "Play attacker against the machine");
  play->add_option("grammar", grammar_path, "grammar file (.fog)")->required();
  play->add_option("left", left_text, "left term")->required();
  play->add_option("right", right_text, "right term")->required();
  play->add_option("strategy", strategy_arg, "strategy file (.strat) or @identity");
  play->add_option("--depth", depth, "materialization depth for @identity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*validate) return cmd_validate(grammar_path, json);
    if (*eqlevel) return cmd_eqlevel(grammar_path, left_text, right_text, budget, json);
    if (*check) {
      return cmd_check_strategy(grammar_path, left_text, right_text, strategy_arg,
                                mode, depth, json);
    }
    if (*repro) return cmd_repro(budget, k_range, json);
    if (*gen) return cmd_gen_family(k, out_path, json);
    if (*play) return cmd_play(grammar_path, left_text, right_text, strategy_arg, depth);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const fog::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
