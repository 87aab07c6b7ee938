#include "fog/judgment.hpp"

#include <algorithm>

namespace fog {

Basis Basis::of(std::vector<TermPair> pairs) {
  Basis b;
  for (TermPair& p : pairs) {
    if (!b.contains(p)) b.pairs.push_back(std::move(p));
  }
  return b;
}

bool Basis::contains(const TermPair& p) const {
  return std::find(pairs.begin(), pairs.end(), p) != pairs.end();
}

JudgmentVerdict check_judgment(const Grammar& g, const Judgment& j) {
  JudgmentVerdict verdict;
  auto& failures = verdict.failures;
  if (j.form < 1 || j.form > 3) {
    failures.push_back("unknown-form");
    return verdict;
  }

  StrategyVerdict prefix = check_finite_prefix(g, j.pair, j.strategy);
  if (!prefix.accepted) failures.push_back("S-not-finite-prefix");

  if (j.form >= 2) {
    if (!j.alpha) {
      failures.push_back("alpha-missing");
    } else if (!j.strategy.contains(*j.alpha)) {
      failures.push_back("alpha-not-in-S");
    }
  }
  if (j.form == 2) {
    if (!j.pair1) failures.push_back("pair1-missing");
    if (!j.strategy1) failures.push_back("strategy1-missing");
    if (j.alpha && j.strategy.contains(*j.alpha)) {
      if (j.strategy1 && !(j.strategy.residual(*j.alpha) == *j.strategy1)) {
        failures.push_back("residual-mismatch");
      }
      if (j.pair1 && !(next_pair(g, j.pair, *j.alpha) == *j.pair1)) {
        failures.push_back("pair1-mismatch");
      }
    }
    if (j.pair1 && j.strategy1 &&
        !check_finite_prefix(g, *j.pair1, *j.strategy1).accepted) {
      failures.push_back("S1-not-finite-prefix");
    }
  }
  verdict.valid = failures.empty();
  return verdict;
}

SystemParams::SystemParams(TermPair t0, PlaySet s0, Basis basis)
    : t0_(std::move(t0)), s0_(std::move(s0)), basis_(std::move(basis)) {}

SystemParams SystemParams::create(const Grammar& g, TermPair t0, PlaySet s0,
                                  Basis basis) {
  StrategyVerdict verdict = check_finite_prefix(g, t0, s0);
  if (!verdict.accepted) {
    throw Error(std::string("system strategy is not a finite strategy prefix (") +
                std::string(condition_name(verdict.violated)) + ")");
  }
  return SystemParams(std::move(t0), std::move(s0), std::move(basis));
}

bool check_axiom(const SystemParams& params, const Judgment& j) {
  return j.form == 1 && j.m == 0 && j.pair == params.t0() && j.strategy == params.s0();
}

namespace {

nlohmann::ordered_json playset_lines(const Grammar& g, const PlaySet& s) {
  auto lines = nlohmann::ordered_json::array();
  for (const Play& p : s.maximal_plays()) {
    if (p.empty()) continue;
    lines.push_back(play_to_string(g, p));
  }
  return lines;
}

std::optional<PlaySet> playset_from_lines(const Grammar& g, const nlohmann::json& lines,
                                          std::vector<Diagnostic>& diags,
                                          const std::string& field) {
  if (!lines.is_array()) {
    diags.push_back({0, 0, field + " must be an array of play lines"});
    return std::nullopt;
  }
  std::string text;
  for (const auto& line : lines) {
    if (!line.is_string()) {
      diags.push_back({0, 0, field + " must contain strings"});
      return std::nullopt;
    }
    text += line.get<std::string>();
    text += '\n';
  }
  PlaySetParseResult parsed = parse_playset(g, text);
  if (!parsed.ok()) {
    for (Diagnostic& d : parsed.diagnostics) {
      d.message = field + ": " + d.message;
      diags.push_back(std::move(d));
    }
    return std::nullopt;
  }
  return std::move(parsed.set);
}

std::optional<Play> play_from_string(const Grammar& g, const std::string& text,
                                     std::vector<Diagnostic>& diags,
                                     const std::string& field) {
  PlaySetParseResult parsed = parse_playset(g, text);
  if (!parsed.ok()) {
    for (Diagnostic& d : parsed.diagnostics) {
      d.message = field + ": " + d.message;
      diags.push_back(std::move(d));
    }
    return std::nullopt;
  }
  // The closure of a single line is a chain; the play is its longest member.
  std::vector<Play> plays = parsed.set->plays();
  return plays.back();
}

}  // namespace

nlohmann::ordered_json judgment_to_json(const Grammar& g, const Judgment& j) {
  nlohmann::ordered_json doc;
  doc["form"] = j.form;
  doc["m"] = j.m;
  doc["pair"] = {term_to_string(g, j.pair.left), term_to_string(g, j.pair.right)};
  doc["strategy"] = playset_lines(g, j.strategy);
  if (j.alpha) doc["alpha"] = play_to_string(g, *j.alpha);
  if (j.pair1) {
    doc["pair1"] = {term_to_string(g, j.pair1->left), term_to_string(g, j.pair1->right)};
  }
  if (j.strategy1) doc["strategy1"] = playset_lines(g, *j.strategy1);
  return doc;
}

JudgmentParseResult judgment_from_json(const Grammar& g, const nlohmann::json& doc) {
  JudgmentParseResult result;
  auto& diags = result.diagnostics;
  if (!doc.is_object()) {
    diags.push_back({0, 0, "judgment must be a JSON object"});
    return result;
  }
  Judgment j;
  if (!doc.contains("form") || !doc["form"].is_number_integer()) {
    diags.push_back({0, 0, "missing integer field 'form'"});
    return result;
  }
  j.form = doc["form"].get<int>();
  if (j.form < 1 || j.form > 3) {
    diags.push_back({0, 0, "'form' must be 1, 2 or 3"});
    return result;
  }
  j.m = doc.value("m", 0u);

  auto parse_pair = [&](const nlohmann::json& value,
                        const std::string& field) -> std::optional<TermPair> {
    if (!value.is_array() || value.size() != 2 || !value[0].is_string() ||
        !value[1].is_string()) {
      diags.push_back({0, 0, field + " must be [term, term]"});
      return std::nullopt;
    }
    TermParseResult left = parse_term(g, value[0].get<std::string>());
    TermParseResult right = parse_term(g, value[1].get<std::string>());
    if (!left.ok() || !right.ok()) {
      for (auto* r : {&left, &right}) {
        for (Diagnostic& d : r->diagnostics) {
          d.message = field + ": " + d.message;
          diags.push_back(std::move(d));
        }
      }
      return std::nullopt;
    }
    return TermPair{std::move(*left.term), std::move(*right.term)};
  };

  if (!doc.contains("pair")) {
    diags.push_back({0, 0, "missing field 'pair'"});
    return result;
  }
  auto pair = parse_pair(doc["pair"], "pair");
  if (!pair) return result;
  j.pair = std::move(*pair);

  if (!doc.contains("strategy")) {
    diags.push_back({0, 0, "missing field 'strategy'"});
    return result;
  }
  auto strategy = playset_from_lines(g, doc["strategy"], diags, "strategy");
  if (!strategy) return result;
  j.strategy = std::move(*strategy);

  if (j.form >= 2) {
    if (!doc.contains("alpha") || !doc["alpha"].is_string()) {
      diags.push_back({0, 0, "forms 2 and 3 need a string field 'alpha'"});
      return result;
    }
    auto alpha = play_from_string(g, doc["alpha"].get<std::string>(), diags, "alpha");
    if (!alpha) return result;
    j.alpha = std::move(*alpha);
  }
  if (j.form == 2) {
    if (!doc.contains("pair1") || !doc.contains("strategy1")) {
      diags.push_back({0, 0, "form 2 needs fields 'pair1' and 'strategy1'"});
      return result;
    }
    auto pair1 = parse_pair(doc["pair1"], "pair1");
    if (!pair1) return result;
    j.pair1 = std::move(*pair1);
    auto strategy1 = playset_from_lines(g, doc["strategy1"], diags, "strategy1");
    if (!strategy1) return result;
    j.strategy1 = std::move(*strategy1);
  }
  result.judgment = std::move(j);
  return result;
}

}  // namespace fog
