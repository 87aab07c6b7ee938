// Compares the serial reference kernels against the OpenMP ones on two
// workload shapes: a wide exploration (random branching grammar, few
// refinement rounds over many states) and a deep one (chain grammar, many
// cheap rounds). Both modes must produce identical results; timings differ.

#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"

#include "fog/game.hpp"
#include "fog/grammar.hpp"
#include "fog/refinement.hpp"
#include "fog/repro.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Best of three runs.
template <typename Fn>
double time_best(Fn&& fn) {
  double best = 0;
  for (int rep = 0; rep < 3; ++rep) {
    auto t0 = Clock::now();
    fn();
    double t = ms_since(t0);
    if (rep == 0 || t < best) best = t;
  }
  return best;
}

// A grammar whose terms grow under rewriting, so the reachable space fills
// any state cap: binary nonterminals with right-hand sides that nest one
// extra application.
std::string wide_grammar_text(int nonterminals, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> pick_nt(0, nonterminals - 1);
  std::uniform_int_distribution<int> pick_label(0, 2);
  std::ostringstream out;
  out << "actions a b c\nlabels x->a y->b z->c\nnt";
  for (int i = 0; i < nonterminals; ++i) out << " N" << i << ":2";
  out << "\n";
  const char* labels[3] = {"x", "y", "z"};
  int rule_id = 1;
  for (int i = 0; i < nonterminals; ++i) {
    for (int r = 0; r < 2; ++r) {
      out << "rule r" << rule_id++ << " N" << i << "(v1,v2) " << labels[pick_label(rng)]
          << " N" << pick_nt(rng) << "(N" << pick_nt(rng) << "(v1,v2),v"
          << (r % 2 ? 1 : 2) << ")\n";
    }
    out << "rule r" << rule_id++ << " N" << i << "(v1,v2) " << labels[pick_label(rng)]
        << " v1\n";
  }
  return out.str();
}

fog::Grammar parse(const std::string& text) {
  fog::GrammarParseResult result = fog::parse_grammar(text);
  if (!result.ok()) throw fog::Error("benchmark grammar failed to parse");
  return std::move(*result.grammar);
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-28s serial %9.1f ms   parallel %9.1f ms   speedup %.2fx\n", name,
              serial_ms, parallel_ms, parallel_ms > 0 ? serial_ms / parallel_ms : 0.0);
}

void bench_wide(int nonterminals, std::size_t states, unsigned seed) {
  fog::Grammar g = parse(wide_grammar_text(nonterminals, seed));
  fog::TermParseResult root = fog::parse_term(g, "N0(bot,bot)");
  fog::Term roots[1] = {*root.term};

  fog::Lts lts = fog::explore(g, roots, states);
  double explore_ms = time_best([&] { fog::explore(g, roots, states); });
  std::printf("wide: %zu states, complete depth %d, closed=%d (explored in %.1f ms)\n",
              lts.states.size(), lts.complete_depth, lts.closed ? 1 : 0, explore_ms);

  std::vector<int> blocks(lts.states.size(), 0);
  std::size_t rounds =
      std::max<std::size_t>(4, static_cast<std::size_t>(lts.complete_depth));
  std::vector<int> b1 = blocks;
  std::vector<int> b2 = blocks;
  double refine_serial = time_best([&] {
    b1 = blocks;
    for (std::size_t r = 0; r < rounds; ++r) b1 = fog::refine_round_serial(lts, b1);
  });
  double refine_parallel = time_best([&] {
    b2 = blocks;
    for (std::size_t r = 0; r < rounds; ++r) b2 = fog::refine_round_parallel(lts, b2);
  });
  if (b1 != b2) {
    std::printf("MISMATCH: refinement differs between modes\n");
    std::exit(1);
  }
  std::printf("  (%zu refinement rounds)\n", rounds);
  report("  refine", refine_serial, refine_parallel);
}

void bench_deep(int k, std::size_t budget) {
  fog::Grammar g = fog::family_grammar(k);
  fog::TermParseResult left = fog::parse_term(g, "A(bot)");
  fog::TermParseResult right = fog::parse_term(g, "B(bot)");
  fog::TermPair pair{*left.term, *right.term};

  fog::EqLevel serial = fog::eq_level(g, pair, budget, fog::Exec::serial);
  fog::EqLevel parallel = fog::eq_level(g, pair, budget, fog::Exec::parallel);
  if (!(serial == parallel)) {
    std::printf("MISMATCH: eq_level differs between modes\n");
    std::exit(1);
  }
  double serial_ms =
      time_best([&] { fog::eq_level(g, pair, budget, fog::Exec::serial); });
  double parallel_ms =
      time_best([&] { fog::eq_level(g, pair, budget, fog::Exec::parallel); });
  std::printf("deep: depth-%d variant, eq_level = %s\n", k, serial.to_string().c_str());
  report("  eq_level", serial_ms, parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP kernel benchmark"};
  std::size_t states = 200000;
  int nonterminals = 6;
  int k = 2500;
  unsigned seed = 1;
  app.add_option("--states", states, "state cap for the wide workload");
  app.add_option("--nts", nonterminals, "nonterminals in the wide workload");
  app.add_option("--k", k, "chain depth for the deep workload");
  app.add_option("--seed", seed, "random seed");
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled; both modes run serially\n");
#endif
  bench_wide(nonterminals, states, seed);
  bench_deep(k, states * 10);
  return 0;
}
