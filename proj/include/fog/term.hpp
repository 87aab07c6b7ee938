#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace fog {

// A ground term over a ranked alphabet of nonterminals plus the constant bot.
// Immutable; copies share structure. Equality is structural; every node
// caches its hash so mismatches are cheap.
class Term {
 public:
  Term() = default;  // bot
  static Term bot() { return Term(); }
  static Term app(int nonterminal, std::vector<Term> args);

  bool is_bot() const { return node_ == nullptr; }
  // Root nonterminal index, or -1 for bot.
  int head() const { return node_ ? node_->head : -1; }
  std::span<const Term> args() const {
    return node_ ? std::span<const Term>(node_->args) : std::span<const Term>();
  }
  std::size_t hash() const { return node_ ? node_->hash : 0x62f3a9b5u; }

  bool operator==(const Term& other) const;

 private:
  struct Node {
    int head;
    std::vector<Term> args;
    std::size_t hash;
  };
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

// A game position: the two terms compared by the bisimulation game.
struct TermPair {
  Term left;
  Term right;
  bool operator==(const TermPair&) const = default;
};

struct TermPairHash {
  std::size_t operator()(const TermPair& p) const {
    std::size_t h = p.left.hash();
    return h ^ (p.right.hash() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
  }
};

}  // namespace fog
