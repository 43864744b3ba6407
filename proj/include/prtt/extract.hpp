#pragma once

#include "prtt/diagnostics.hpp"
#include "prtt/prir.hpp"
#include "prtt/term.hpp"

#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace prtt {

// NotGroundType, NotLevelZero, NotFirstOrder.
class ExtractError : public Diagnostic {
 public:
  ExtractError(std::string kind, std::string message) : Diagnostic(std::move(kind), std::move(message)) {}
};

// Cantor pairing: pair(m, n) = (m + n)(m + n + 1)/2 + m.
Natural pair(const Natural& m, const Natural& n);
std::pair<Natural, Natural> unpair(const Natural& p);

// The same bijection as primitive recursive programs (arity 2, 1, 1).
PRFun pr_pair();
PRFun pr_unpair_fst();
PRFun pr_unpair_snd();

// Codes for the closed normal values of a level-0 type. Codes depend only
// on the shape of the type: Nat is the identity, Unit and identity proofs
// are 0, sums split into even and odd codes, Σ-types pair their components.
struct Encoding {
  Term ty;
  std::optional<Natural> card;  // empty: countably infinite
  std::function<Natural(const Term&)> enc;
  // Totalized: codes outside the image decode to a default inhabitant.
  std::function<Term(const Natural&)> dec;
  // Whether a code is the image of some value.
  std::function<bool(const Natural&)> valid;
};

Encoding encode_type(const Term& ty);

// Compiles a term of type Nat in the context of k Nat variables (Var k-1 is
// the first argument) into a PR program of arity k.
PRFun extract(std::size_t k, const Term& body);

// Arity k when `type` is Nat -> ... -> Nat with k arrows.
std::optional<std::size_t> function_arity(const Term& type);

// Like function_arity, but explains the failure: NotGroundType when the
// result is not Nat, NotFirstOrder when an argument is not Nat.
std::size_t extract_arity(const Term& type);

// `f` applied to Var k-1 .. Var 0.
Term applied_to_vars(const Term& f, std::size_t k);

struct Mismatch {
  std::vector<Natural> args;
  Natural expected;  // canonical_nat of the instantiated body
  Natural actual;    // eval_pr of the extracted program
};

struct DifferentialReport {
  std::size_t checked = 0;
  std::vector<Mismatch> mismatches;
};

DifferentialReport differential_test(std::size_t k, const Term& body,
                                     const std::vector<std::vector<Natural>>& grid,
                                     std::uint64_t pr_budget = kDefaultPrBudget);

DifferentialReport differential_test(const PRFun& program, std::size_t k, const Term& body,
                                     const std::vector<std::vector<Natural>>& grid,
                                     std::uint64_t pr_budget = kDefaultPrBudget);

// Closes a body over k Nat variables with numerals.
Term instantiate_nats(const Term& body, const std::vector<Natural>& args);

// All tuples of length k with entries in [0, bound].
std::vector<std::vector<Natural>> full_grid(std::size_t k, unsigned bound);

}  // namespace prtt
