#pragma once

#include "prtt/term.hpp"

#include <cstdint>
#include <random>

namespace prtt {

// Random well-typed terms for property tests. Types are drawn from the
// closed small types built from Nat, Unit, + and *; function types only
// appear as the type of a redex. Every eliminator shows up applied to
// both canonical and neutral scrutinees.
class TermGen {
 public:
  explicit TermGen(std::uint64_t seed) : rng_(seed) {}

  // A term of type Nat over `nat_vars` free Nat variables with at most
  // `max_size` nodes (term_size).
  Term nat_term(std::size_t max_size, std::size_t nat_vars = 0);

  // A closed term of a random small type; the type is stored in `type`.
  Term closed_term(std::size_t max_size, Term* type);

  // A random closed type of level 0 (no function types).
  Term small_type(std::size_t depth = 2);

  // Caps the type depth of ind motives, i.e. of recursion state. Extracted
  // programs decode tuple-valued state at every step, so deep state makes
  // them slow on larger inputs.
  void limit_state_depth(std::size_t depth) { max_state_depth_ = depth; }

  // Uniform draw from [0, n); n > 0.
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

 private:
  std::mt19937_64 rng_;
  std::size_t max_state_depth_ = SIZE_MAX;
};

}  // namespace prtt
