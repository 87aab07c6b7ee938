#include "fog/term.hpp"

namespace fog {

namespace {

std::size_t combine(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

}  // namespace

Term Term::app(int nonterminal, std::vector<Term> args) {
  std::size_t h = combine(0x1f0c6d8bu, static_cast<std::size_t>(nonterminal));
  for (const Term& a : args) h = combine(h, a.hash());
  auto node = std::make_shared<Node>(Node{nonterminal, std::move(args), h});
  return Term(std::move(node));
}

bool Term::operator==(const Term& other) const {
  if (node_ == other.node_) return true;
  if (!node_ || !other.node_) return false;
  if (node_->hash != other.node_->hash || node_->head != other.node_->head ||
      node_->args.size() != other.node_->args.size()) {
    return false;
  }
  for (std::size_t i = 0; i < node_->args.size(); ++i) {
    if (!(node_->args[i] == other.node_->args[i])) return false;
  }
  return true;
}

}  // namespace fog
