#pragma once

#include "prtt/context.hpp"
#include "prtt/diagnostics.hpp"
#include "prtt/nbe.hpp"
#include "prtt/term.hpp"

#include <optional>
#include <string>
#include <vector>

namespace prtt {

enum class ErrorKind {
  Mismatch,
  MotiveNotInU0,
  PiNotInU0,
  UnboundVariable,
  NotAFunction,
  NotAPair,
  LevelOverflow,
  EmptyImpossible,
};

const char* kind_name(ErrorKind kind);

class TypeError : public Diagnostic {
 public:
  TypeError(ErrorKind kind, std::string message, std::optional<Term> expected = std::nullopt,
            std::optional<Term> actual = std::nullopt, std::optional<Level> level = std::nullopt);

  ErrorKind error_kind() const { return error_kind_; }
  const std::optional<Term>& expected() const { return expected_; }
  const std::optional<Term>& actual() const { return actual_; }
  // Offending universe level for MotiveNotInU0 / PiNotInU0 / LevelOverflow.
  const std::optional<Level>& level() const { return level_; }

  nlohmann::json to_json() const override;

 private:
  ErrorKind error_kind_;
  std::optional<Term> expected_;
  std::optional<Term> actual_;
  std::optional<Level> level_;
};

struct CheckerOptions {
  unsigned max_level = kDefaultMaxLevel;
  // Restricts eliminator motives to U0. Only test code turns this off.
  bool motive_gate = true;
};

// A term with its type. `level` is the universe the type lives in; it is
// empty for types outside every universe (e.g. U1 when the top level is 1).
struct TypedTerm {
  Term term;
  Term type;
  std::optional<Level> level;
};

class Checker {
 public:
  explicit Checker(CheckerOptions options = {});

  const CheckerOptions& options() const { return options_; }

  TypedTerm infer(const Context& ctx, const Term& t) const;
  TypedTerm check(const Context& ctx, const Term& t, const Term& ty) const;

  // Checks that `ty` is a type. Returns its universe level, or nothing for a
  // type outside every universe.
  std::optional<Level> check_type(const Context& ctx, const Term& ty) const;

  // Rejects motives whose family does not land in U0.
  void check_elim_motive(const Context& ctx, const Term& motive) const;

  bool conv(const Context& ctx, const Term& a, const Term& b, const Term& ty) const;
  bool conv_types(const Context& ctx, const Term& a, const Term& b) const;

  // Checks a context telescope binding by binding.
  void check_context(const Context& ctx) const;

 private:
  struct Scope;

  ValuePtr infer_v(const Scope& s, const Term& t) const;
  void check_v(const Scope& s, const Term& t, const ValuePtr& ty) const;
  std::optional<Level> type_level(const Scope& s, const Term& t) const;
  // `shape` is a Π-telescope of `arity` domains; its codomain is ignored.
  void motive(const Scope& s, const Term& m, ValuePtr shape, std::size_t arity,
              const char* eliminator) const;
  std::optional<Level> value_level(const ValuePtr& ty, std::size_t depth) const;
  void require_type_eq(const Scope& s, const ValuePtr& expected, const ValuePtr& actual,
                       const Term& t) const;
  Level checked_level(Level l) const;

  CheckerOptions options_;
};

}  // namespace prtt
