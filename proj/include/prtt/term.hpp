#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace prtt {

using Natural = boost::multiprecision::cpp_int;

inline constexpr unsigned kDefaultMaxLevel = 1;
inline constexpr unsigned kLevelLimit = 8;

// Universe index. Levels form a finite linear order 0 < 1 < ... < max.
struct Level {
  unsigned index = 0;

  constexpr Level() = default;
  constexpr explicit Level(unsigned i) : index(i) {}

  constexpr auto operator<=>(const Level&) const = default;

  constexpr Level succ() const { return Level{index + 1}; }
};

constexpr Level max(Level a, Level b) { return a < b ? b : a; }

// Level of a Π-type whose domain and codomain live at `a`.
constexpr Level pi_level(Level a) { return max(Level{1}, a); }

enum class Tag {
  Var,
  Lam,
  App,
  Pi,
  Sigma,
  Pair,
  Fst,
  Snd,
  Eq,
  Refl,
  EqInd,
  Empty,
  ExFalso,
  Unit,
  Star,
  UnitInd,
  Nat,
  Zero,
  Suc,
  NatInd,
  Sum,
  Inl,
  Inr,
  SumInd,
  Univ,
  Lift,
  Ref,
};

const char* tag_name(Tag tag);

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct Value;
using ValuePtr = std::shared_ptr<const Value>;

// A transparent top-level constant. `type` and `body` are closed terms.
struct Definition {
  std::string name;
  Term type;
  Term body;

  // Evaluated body, filled on first use.
  mutable std::once_flag evaluated;
  mutable ValuePtr value;
  mutable ValuePtr type_value;
};

using DefinitionPtr = std::shared_ptr<const Definition>;

// Nameless term. Children that sit under one extra binder: the body of
// Lam, and the codomain of Pi and Sigma. Eliminator motives and branches
// are ordinary function terms.
//
//   Lam(annot, body)            App(fn, arg)
//   Pi(dom, cod)                Sigma(fst, snd)
//   Pair(a, b)  Fst(p)  Snd(p)
//   Eq(ty, lhs, rhs)  Refl(a)   EqInd(motive, base, lhs, rhs, proof)
//   Empty  ExFalso(motive, scrut)
//   Unit  Star  UnitInd(motive, base, scrut)
//   Nat  Zero  Suc^count(n)     NatInd(motive, base, step, scrut)
//   Sum(l, r)  Inl(a)  Inr(b)   SumInd(motive, lcase, rcase, scrut)
//   Univ(level)  Lift(from, to, ty)  Ref(def)
struct TermNode {
  Tag tag = Tag::Zero;
  std::size_t index = 0;     // Var
  std::uint64_t count = 0;   // Suc: number of stacked successors, >= 1
  Level from;                // Univ level, Lift source
  Level to;                  // Lift target
  std::string name;          // binder hint for Lam/Pi/Sigma, printing only
  std::vector<Term> kids;
  DefinitionPtr def;         // Ref

  const Term& operator[](std::size_t i) const { return kids[i]; }
};

// Number of binders the i-th child of a node with `tag` sits under.
inline std::size_t binders_of(Tag tag, std::size_t i) {
  return (i == 1 && (tag == Tag::Lam || tag == Tag::Pi || tag == Tag::Sigma)) ? 1 : 0;
}

namespace mk {

Term var(std::size_t index);
Term lam(Term annot, Term body, std::string name = "x");
Term app(Term fn, Term arg);
Term apps(Term fn, const std::vector<Term>& args);
Term pi(Term dom, Term cod, std::string name = "x");
// Non-dependent function type; `cod` is given in the outer scope.
Term arrow(Term dom, Term cod);
Term sigma(Term fst, Term snd, std::string name = "x");
Term product(Term fst, Term snd);
Term pair(Term a, Term b);
Term fst(Term p);
Term snd(Term p);
Term eq(Term ty, Term lhs, Term rhs);
Term refl(Term a);
Term eq_ind(Term motive, Term base, Term lhs, Term rhs, Term proof);
Term empty();
Term ex_falso(Term motive, Term scrut);
Term unit();
Term star();
Term unit_ind(Term motive, Term base, Term scrut);
Term nat();
Term zero();
Term suc(Term n, std::uint64_t count = 1);
Term numeral(std::uint64_t n);
Term nat_ind(Term motive, Term base, Term step, Term scrut);
Term sum(Term l, Term r);
Term inl(Term a);
Term inr(Term b);
Term sum_ind(Term motive, Term lcase, Term rcase, Term scrut);
Term univ(Level level);
Term lift(Level from, Level to, Term ty);
Term ref(DefinitionPtr def);

// Rebuilds `t` with replaced children, keeping scalar fields.
Term with_kids(const TermNode& t, std::vector<Term> kids);

}  // namespace mk

// Shifts free indices >= cutoff by `amount`. Throws std::logic_error if an
// index would become negative.
Term shift(const Term& t, std::size_t cutoff, std::ptrdiff_t amount);

// Replaces Var k by `u` and closes the gap left by k. `u` is scoped outside
// variable k (its Var 0 is Var k+1 of t); it is shifted by k when inserted.
Term subst(const Term& t, std::size_t k, const Term& u);

// Instantiates the outermost binder of a body: subst(body, 0, arg).
inline Term instantiate(const Term& body, const Term& arg) { return subst(body, 0, arg); }

// Fuses identity and nested lifts and pushes lifts through Σ, Eq and Π
// (the latter only from levels above 0).
Term collapse_lifts(const Term& t);

// Drops every Lift node.
Term erase_lifts(const Term& t);

// α-equivalence: structural equality ignoring binder hints.
bool alpha_equal(const Term& a, const Term& b);

// True if Var `k` (as seen from the root of `t`) occurs in `t`.
bool mentions(const Term& t, std::size_t k);

// Node count; Suc^n counts as n nodes on top of its child.
std::size_t term_size(const Term& t);

// Numeral value if `t` is Suc^n(Zero).
std::optional<std::uint64_t> as_numeral(const Term& t);

// Inlines every Ref by its body.
Term unfold_refs(const Term& t);

}  // namespace prtt
