#pragma once

#include "prtt/context.hpp"
#include "prtt/term.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace prtt {

// Raised when an ill-typed value reaches an eliminator. Signals a kernel bug.
struct KernelError : std::logic_error {
  using std::logic_error::logic_error;
};

// Canonicity alarm: a closed Nat term did not normalize to a numeral.
struct NonCanonical : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultStepBudget = 1'000'000'000;

// Counts ι-steps (eliminator unfoldings) performed on this thread while the
// guard is alive. Guards nest; the innermost one is charged.
class StepBudget {
 public:
  explicit StepBudget(std::uint64_t limit = kDefaultStepBudget);
  ~StepBudget();
  StepBudget(const StepBudget&) = delete;
  StepBudget& operator=(const StepBudget&) = delete;

  std::uint64_t used() const { return used_; }
  std::uint64_t limit() const { return limit_; }

  static void charge(std::uint64_t steps = 1);

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
  StepBudget* outer_;
};

class Closure {
 public:
  using Fn = std::function<ValuePtr(const ValuePtr&)>;

  Closure() = default;
  explicit Closure(Fn fn, Term source = nullptr) : fn_(std::move(fn)), source_(std::move(source)) {}

  ValuePtr operator()(const ValuePtr& arg) const { return fn_(arg); }
  explicit operator bool() const { return static_cast<bool>(fn_); }

  // The body term when the closure came from syntax, else null.
  const Term& source() const { return source_; }

 private:
  Fn fn_;
  Term source_;
};

struct Neutral;
using NeutralPtr = std::shared_ptr<const Neutral>;

enum class VTag {
  Lam,
  Pi,
  Sigma,
  Pair,
  Sum,
  Inl,
  Inr,
  Nat,
  Num,  // Suc^count(base), base == nullptr means zero
  Unit,
  Star,
  Empty,
  Eq,
  Refl,
  Univ,
  Neutral,
};

struct Value {
  VTag tag = VTag::Star;
  // Pi/Sigma: a = domain. Pair/Sum: a, b. Inl/Inr/Refl: a.
  // Eq: a = type, b = lhs, c = rhs. Num: a = neutral base or null.
  ValuePtr a, b, c;
  Closure body;  // Lam body, Pi/Sigma codomain
  Natural count;
  Level level;
  std::string name;
  NeutralPtr neutral;
  ValuePtr type;  // type of a Neutral
};

enum class NTag { Var, App, Fst, Snd, NatInd, SumInd, UnitInd, EqInd, ExFalso };

// Elimination stuck on a variable. `head` is the stuck VNeutral value being
// eliminated (it carries its own type).
struct Neutral {
  NTag tag = NTag::Var;
  std::size_t level = 0;  // Var: de Bruijn level
  ValuePtr head;
  ValuePtr arg;      // App
  ValuePtr motive;   // eliminators
  ValuePtr base;     // NatInd/UnitInd/EqInd base, SumInd left case
  ValuePtr step;     // NatInd step, SumInd right case
  ValuePtr lhs, rhs; // EqInd endpoints
};

// Persistent environment; index 0 is the most recent entry.
class Env {
 public:
  Env() = default;

  Env push(ValuePtr v) const;
  const ValuePtr& lookup(std::size_t index) const;
  std::size_t size() const { return size_; }

 private:
  struct Node {
    ValuePtr value;
    std::shared_ptr<const Node> next;
  };
  std::shared_ptr<const Node> head_;
  std::size_t size_ = 0;
};

namespace val {

ValuePtr nat();
ValuePtr unit();
ValuePtr empty();
ValuePtr star();
ValuePtr zero();
ValuePtr num(Natural n);
ValuePtr univ(Level level);
ValuePtr pi(ValuePtr dom, Closure cod, std::string name = "x");
ValuePtr arrow(ValuePtr dom, ValuePtr cod);
ValuePtr sigma(ValuePtr fst, Closure snd, std::string name = "x");
ValuePtr sum(ValuePtr l, ValuePtr r);
ValuePtr eq(ValuePtr ty, ValuePtr lhs, ValuePtr rhs);
ValuePtr refl(ValuePtr a);
ValuePtr pair(ValuePtr a, ValuePtr b);
ValuePtr inl(ValuePtr a);
ValuePtr inr(ValuePtr b);
ValuePtr lam(Closure body, std::string name = "x");
ValuePtr suc(const ValuePtr& n);
// Fresh variable at de Bruijn level `level`.
ValuePtr fresh(std::size_t level, ValuePtr type);

}  // namespace val

ValuePtr eval(const Env& env, const Term& t);
ValuePtr apply(const ValuePtr& fn, const ValuePtr& arg);
ValuePtr vfst(const ValuePtr& p);
ValuePtr vsnd(const ValuePtr& p);
ValuePtr nat_ind(const ValuePtr& motive, const ValuePtr& base, const ValuePtr& step,
                 const ValuePtr& scrut);

// Value of a global constant, evaluated once.
const ValuePtr& definition_value(const Definition& def);
const ValuePtr& definition_type(const Definition& def);

// β-normal, η-long (at Π and Σ) term for `v : ty` under `depth` binders.
Term quote(const ValuePtr& v, std::size_t depth, const ValuePtr& ty);
Term quote_type(const ValuePtr& ty, std::size_t depth);

// Environment of fresh variables for a context.
Env context_env(const Context& ctx);

Term normalize(const Context& ctx, const Term& t, const Term& ty);
Term normalize_type(const Context& ctx, const Term& ty);

// Unique n with normalize(t) = Suc^n(Zero) for closed t : Nat.
Natural canonical_nat(const Term& t);

// If the value is Suc^n(Zero), its n.
std::optional<Natural> value_numeral(const ValuePtr& v);

}  // namespace prtt
