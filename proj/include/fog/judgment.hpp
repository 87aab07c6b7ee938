#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fog/game.hpp"
#include "fog/grammar.hpp"
#include "fog/strategy.hpp"
#include "fog/term.hpp"

namespace fog {

// A finite set of term pairs usable as axioms of the basis rule.
struct Basis {
  std::vector<TermPair> pairs;

  static Basis of(std::vector<TermPair> pairs);  // deduplicates
  bool contains(const TermPair& p) const;
};

// The three judgment forms:
//   form 1:  m |== (T,T',S)
//   form 2:  m |== (T,T',S) ~> alpha |== (T1,T1',S1)
//   form 3:  m |== (T,T',S) ~> alpha |== SUCC
struct Judgment {
  int form = 1;
  unsigned m = 0;
  TermPair pair;
  PlaySet strategy;
  std::optional<Play> alpha;           // forms 2 and 3
  std::optional<TermPair> pair1;       // form 2
  std::optional<PlaySet> strategy1;    // form 2
};

struct JudgmentVerdict {
  bool valid = false;
  // Failed side conditions by name, e.g. "S-not-finite-prefix",
  // "alpha-not-in-S", "residual-mismatch", "pair1-mismatch".
  std::vector<std::string> failures;
};

// Well-formedness of a judgment. Form 1 requires S to be a finite strategy
// prefix w.r.t. the pair. Form 2 additionally requires alpha in S, S1 equal
// to the residual of S at alpha, the successor pair to match, and (T1,T1',S1)
// to be well-formed in the form-1 sense. Form 3 requires alpha in S.
JudgmentVerdict check_judgment(const Grammar& g, const Judgment& j);

// Parameters of one deduction system instance: a root pair, a root strategy
// prefix, and a basis. Construction validates that s0 is a finite strategy
// prefix w.r.t. t0 and throws Error otherwise.
class SystemParams {
 public:
  static SystemParams create(const Grammar& g, TermPair t0, PlaySet s0, Basis basis);

  const TermPair& t0() const { return t0_; }
  const PlaySet& s0() const { return s0_; }
  const Basis& basis() const { return basis_; }

 private:
  SystemParams(TermPair t0, PlaySet s0, Basis basis);
  TermPair t0_;
  PlaySet s0_;
  Basis basis_;
};

// The single axiom of a system: 0 |== (T0,T0',S0).
bool check_axiom(const SystemParams& params, const Judgment& j);

// JSON schema: {form: 1|2|3, m, pair: [term,term], strategy: [play lines],
// alpha?, pair1?, strategy1?}. Terms and plays use the textual formats.
nlohmann::ordered_json judgment_to_json(const Grammar& g, const Judgment& j);

struct JudgmentParseResult {
  std::optional<Judgment> judgment;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return judgment.has_value(); }
};
JudgmentParseResult judgment_from_json(const Grammar& g, const nlohmann::json& doc);

}  // namespace fog
