#pragma once

// Reference implementations used only by tests. None of them calls into
// the kernel's substitution, evaluator or pairing code.

#include "prtt/prir.hpp"
#include "prtt/term.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace oracle {

using prtt::Natural;
using prtt::Term;

// Substitution and shifting through a named representation with
// capture-avoiding renaming.
Term named_subst(const Term& t, std::size_t k, const Term& u);
Term named_shift(const Term& t, std::size_t cutoff, std::ptrdiff_t amount);

// Leftmost-outermost β/ι reduction to normal form, one contraction at a
// time. Refs are unfolded and lifts erased up front. Gives up (nullopt)
// after `fuel` contractions.
std::optional<Term> small_step_normalize(const Term& t, std::uint64_t fuel = 10'000'000);

// One contraction; nullopt when `t` is normal.
std::optional<Term> step(const Term& t);

// Direct recursive reading of the primitive recursion equations.
Natural eval_pr(const prtt::PRFun& f, const std::vector<Natural>& args);

// Cantor pairing by walking the diagonals, no closed formula.
std::pair<std::uint64_t, std::uint64_t> unpair_walk(std::uint64_t z);
std::uint64_t pair_walk(std::uint64_t a, std::uint64_t b);

// Explicit binary trees: code 0 is the leaf, code suc z the node whose
// subtrees are unpair_walk(z).
struct Tree {
  std::shared_ptr<const Tree> l, r;  // both null for the leaf
};
using TreePtr = std::shared_ptr<const Tree>;

TreePtr unrank(std::uint64_t code);
std::uint64_t rank(const TreePtr& t);
int compare(const TreePtr& a, const TreePtr& b);  // lexicographic, leaf smallest
bool is_cnf(const TreePtr& t);

}  // namespace oracle
