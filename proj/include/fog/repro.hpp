#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fog/exec.hpp"
#include "fog/game.hpp"
#include "fog/grammar.hpp"
#include "fog/judgment.hpp"
#include "fog/strategy.hpp"

namespace fog {

// The bundled ten-nonterminal, fourteen-rule counterexample grammar: a pair
// (A(bot), B(bot)) of equivalence level exactly 3 for which a formally valid
// strategy-prefix certificate exists.
Grammar counterexample_grammar();
const std::string& counterexample_grammar_text();

// The depth-k variant: the D/E rules are replaced by chains D -> D1 -> ... ->
// Dk -> v and E -> E1 -> ... -> Ek -> v (Ek also has the b-labelled exit),
// which raises the equivalence level of (A(bot), B(bot)) to 3+k. k >= 1.
Grammar family_grammar(int k);
std::string family_grammar_text(int k);

// The strategies used by the bundled certificate: the root strategy S, its
// residuals S1..S6, and the identity prefixes Id_{C,0}, Id_{C,1}, Id_{D,1},
// Id_{D,2}, Id_{E,1}, Id_{E,2}. Keys use these spellings.
std::map<std::string, PlaySet> counterexample_strategies(const Grammar& g);

// The unbounded identity strategy on (C(L1), C(L1)).
IntensionalStrategy identity_on_c(const Grammar& g);

// The basis {(C(L1),C(L1)), (D(L1),D(L1)), (E(L1),E(L1))}.
Basis counterexample_basis(const Grammar& g);

struct ClaimResult {
  std::string id;
  std::string description;
  std::string expected;
  std::string computed;
  bool pass = false;  // always expected == computed
  std::optional<std::string> witness;
};

// Evaluates the whole claim suite over the counterexample grammar and the
// depth-k family for k in [k_min, k_max]. Claims never short-circuit; the
// result is sorted by claim id and is identical across runs.
std::vector<ClaimResult> run_repro(std::size_t budget, int k_min = 1, int k_max = 6,
                                   Exec exec = Exec::parallel);

bool all_pass(const std::vector<ClaimResult>& claims);

// {claims: [{id, description, expected, computed, pass, witness?}],
//  all_pass: bool}
nlohmann::ordered_json repro_report(const std::vector<ClaimResult>& claims);

}  // namespace fog
