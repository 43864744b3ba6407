#include "prtt/checker.hpp"

#include "prtt/printer.hpp"

namespace prtt {

const char* kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Mismatch: return "Mismatch";
    case ErrorKind::MotiveNotInU0: return "MotiveNotInU0";
    case ErrorKind::PiNotInU0: return "PiNotInU0";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::NotAFunction: return "NotAFunction";
    case ErrorKind::NotAPair: return "NotAPair";
    case ErrorKind::LevelOverflow: return "LevelOverflow";
    case ErrorKind::EmptyImpossible: return "EmptyImpossible";
  }
  return "?";
}

TypeError::TypeError(ErrorKind kind, std::string message, std::optional<Term> expected,
                     std::optional<Term> actual, std::optional<Level> level)
    : Diagnostic(kind_name(kind), std::move(message)),
      error_kind_(kind),
      expected_(std::move(expected)),
      actual_(std::move(actual)),
      level_(level) {}

nlohmann::json TypeError::to_json() const {
  nlohmann::json j = Diagnostic::to_json();
  if (expected_) j["expected"] = print_term(*expected_);
  if (actual_) j["actual"] = print_term(*actual_);
  if (level_) j["level"] = level_->index;
  return j;
}

struct Checker::Scope {
  Env env;
  std::vector<ValuePtr> types;  // indexed by de Bruijn level
  std::vector<std::string> names;

  std::size_t depth() const { return types.size(); }

  Scope bind(std::string name, ValuePtr type) const {
    Scope s = *this;
    ValuePtr x = val::fresh(depth(), type);
    s.env = env.push(std::move(x));
    s.types.push_back(std::move(type));
    s.names.push_back(std::move(name));
    return s;
  }

  ValuePtr eval(const Term& t) const { return prtt::eval(env, t); }
  Term quote_ty(const ValuePtr& v) const { return quote_type(v, depth()); }
  std::string show(const Term& t) const { return print_term(t, names); }
  std::string show_ty(const ValuePtr& v) const { return show(quote_ty(v)); }
};

namespace {

bool contains_pi(const Term& t) {
  if (t->tag == Tag::Pi) return true;
  if (t->tag == Tag::Eq) return contains_pi(t->kids[0]);
  for (const auto& k : t->kids) {
    if (contains_pi(k)) return true;
  }
  return false;
}

bool is_type_former(Tag tag) {
  switch (tag) {
    case Tag::Pi:
    case Tag::Sigma:
    case Tag::Sum:
    case Tag::Eq:
    case Tag::Nat:
    case Tag::Unit:
    case Tag::Empty:
    case Tag::Univ:
    case Tag::Lift:
      return true;
    default:
      return false;
  }
}

std::optional<Level> max_opt(std::optional<Level> a, std::optional<Level> b) {
  if (!a || !b) return std::nullopt;
  return max(*a, *b);
}

}  // namespace

Checker::Checker(CheckerOptions options) : options_(options) {
  if (options_.max_level < 1 || options_.max_level > kLevelLimit) {
    throw std::invalid_argument("top universe level must lie in [1, " +
                                std::to_string(kLevelLimit) + "]");
  }
}

Level Checker::checked_level(Level l) const {
  if (l.index > options_.max_level) {
    throw TypeError(ErrorKind::LevelOverflow,
                    "universe level " + std::to_string(l.index) + " exceeds the top level " +
                        std::to_string(options_.max_level),
                    std::nullopt, std::nullopt, l);
  }
  return l;
}

std::optional<Level> Checker::value_level(const ValuePtr& ty, std::size_t depth) const {
  switch (ty->tag) {
    case VTag::Nat:
    case VTag::Unit:
    case VTag::Empty:
      return Level{0};
    case VTag::Univ:
      if (ty->level.index + 1 > options_.max_level) return std::nullopt;
      return ty->level.succ();
    case VTag::Pi:
    case VTag::Sigma: {
      auto dom = value_level(ty->a, depth);
      auto cod = value_level(ty->body(val::fresh(depth, ty->a)), depth + 1);
      auto l = max_opt(dom, cod);
      if (l && ty->tag == VTag::Pi) return pi_level(*l);
      return l;
    }
    case VTag::Sum:
      return max_opt(value_level(ty->a, depth), value_level(ty->b, depth));
    case VTag::Eq:
      return value_level(ty->a, depth);
    case VTag::Neutral:
      if (ty->type && ty->type->tag == VTag::Univ) return ty->type->level;
      throw KernelError("neutral type without a universe");
    default:
      throw KernelError("level of a non-type value");
  }
}

void Checker::require_type_eq(const Scope& s, const ValuePtr& expected, const ValuePtr& actual,
                              const Term& t) const {
  if (expected->tag == VTag::Univ && actual->tag == VTag::Univ &&
      actual->level <= expected->level) {
    return;
  }
  Term e = s.quote_ty(expected);
  Term a = s.quote_ty(actual);
  if (alpha_equal(e, a)) return;
  throw TypeError(ErrorKind::Mismatch,
                  "type mismatch for " + s.show(t) + ": expected " + s.show(e) + ", got " +
                      s.show(a),
                  e, a);
}

std::optional<Level> Checker::type_level(const Scope& s, const Term& t) const {
  const TermNode& n = *t;
  switch (n.tag) {
    case Tag::Univ: {
      checked_level(n.from);
      if (n.from.index + 1 > options_.max_level) return std::nullopt;
      return n.from.succ();
    }
    case Tag::Pi:
    case Tag::Sigma: {
      auto dom = type_level(s, n[0]);
      auto cod = type_level(s.bind(n.name, s.eval(n[0])), n[1]);
      auto l = max_opt(dom, cod);
      if (l && n.tag == Tag::Pi) return pi_level(*l);
      return l;
    }
    case Tag::Sum:
      return max_opt(type_level(s, n[0]), type_level(s, n[1]));
    case Tag::Eq: {
      auto l = type_level(s, n[0]);
      if (!l) {
        throw TypeError(ErrorKind::LevelOverflow,
                        "identity type over " + s.show(n[0]) + ", which lies outside every universe");
      }
      ValuePtr carrier = s.eval(n[0]);
      check_v(s, n[1], carrier);
      check_v(s, n[2], carrier);
      return l;
    }
    case Tag::Nat:
    case Tag::Unit:
    case Tag::Empty:
      return Level{0};
    case Tag::Lift: {
      checked_level(n.to);
      auto l = type_level(s, n[0]);
      if (!l || *l > n.from) {
        throw TypeError(ErrorKind::Mismatch,
                        "lift from level " + std::to_string(n.from.index) + " applied to " +
                            s.show(n[0]) + ", which is not in U" + std::to_string(n.from.index),
                        mk::univ(n.from), std::nullopt, l);
      }
      return n.to;
    }
    default: {
      ValuePtr ty = infer_v(s, t);
      if (ty->tag != VTag::Univ) {
        Term actual = s.quote_ty(ty);
        throw TypeError(ErrorKind::Mismatch,
                        s.show(t) + " is not a type; it has type " + s.show(actual), std::nullopt,
                        actual);
      }
      return ty->level;
    }
  }
}

void Checker::motive(const Scope& s, const Term& m, ValuePtr shape, std::size_t arity,
                     const char* eliminator) const {
  Scope cur = s;
  Term body = m;
  std::size_t peeled = 0;
  while (peeled < arity && body->tag == Tag::Lam) {
    const TermNode& lam = *body;
    if (!type_level(cur, lam[0]).has_value()) {
      throw TypeError(ErrorKind::Mismatch, "motive binder type lies outside every universe");
    }
    ValuePtr annot = cur.eval(lam[0]);
    require_type_eq(cur, shape->a, annot, body);
    ValuePtr x = val::fresh(cur.depth(), annot);
    shape = shape->body(x);
    cur = cur.bind(lam.name, annot);
    body = lam[1];
    ++peeled;
  }

  std::optional<Level> level;
  if (peeled == arity) {
    level = type_level(cur, body);
  } else {
    ValuePtr ty = infer_v(cur, body);
    for (; peeled < arity; ++peeled) {
      if (ty->tag != VTag::Pi) {
        throw TypeError(ErrorKind::NotAFunction,
                        std::string("motive of ") + eliminator + " is not a type family: " +
                            cur.show(body));
      }
      require_type_eq(cur, shape->a, ty->a, body);
      ValuePtr x = val::fresh(cur.depth(), ty->a);
      shape = shape->body(x);
      ty = ty->body(x);
    }
    if (ty->tag != VTag::Univ) {
      throw TypeError(ErrorKind::Mismatch,
                      std::string("motive of ") + eliminator + " does not produce types");
    }
    level = ty->level;
  }

  if (options_.motive_gate && (!level || *level != Level{0})) {
    std::string where = level ? "U" + std::to_string(level->index) : "no universe";
    throw TypeError(ErrorKind::MotiveNotInU0,
                    std::string("motive of ") + eliminator + " must land in U0, but " +
                        s.show(m) + " lands in " + where,
                    mk::univ(Level{0}), level ? std::optional<Term>(mk::univ(*level)) : std::nullopt,
                    level);
  }
}

ValuePtr Checker::infer_v(const Scope& s, const Term& t) const {
  const TermNode& n = *t;
  switch (n.tag) {
    case Tag::Var:
      if (n.index >= s.depth()) {
        throw TypeError(ErrorKind::UnboundVariable,
                        "unbound variable index " + std::to_string(n.index));
      }
      return s.types[s.depth() - 1 - n.index];
    case Tag::Lam: {
      if (!type_level(s, n[0]).has_value()) {
        throw TypeError(ErrorKind::LevelOverflow,
                        "lambda binder type " + s.show(n[0]) + " lies outside every universe");
      }
      ValuePtr dom = s.eval(n[0]);
      Scope inner = s.bind(n.name, dom);
      Term cod = inner.quote_ty(infer_v(inner, n[1]));
      Env env = s.env;
      return val::pi(dom, Closure([env, cod](const ValuePtr& x) { return eval(env.push(x), cod); }),
                     n.name);
    }
    case Tag::App: {
      ValuePtr fty = infer_v(s, n[0]);
      if (fty->tag != VTag::Pi) {
        throw TypeError(ErrorKind::NotAFunction,
                        s.show(n[0]) + " is applied but has type " + s.show_ty(fty),
                        std::nullopt, s.quote_ty(fty));
      }
      check_v(s, n[1], fty->a);
      return fty->body(s.eval(n[1]));
    }
    case Tag::Pi:
    case Tag::Sigma:
    case Tag::Sum:
    case Tag::Eq:
    case Tag::Nat:
    case Tag::Unit:
    case Tag::Empty:
    case Tag::Univ:
    case Tag::Lift: {
      auto l = type_level(s, t);
      if (!l) {
        throw TypeError(ErrorKind::LevelOverflow,
                        s.show(t) + " lies outside every universe up to U" +
                            std::to_string(options_.max_level),
                        std::nullopt, std::nullopt, Level{options_.max_level + 1});
      }
      return val::univ(*l);
    }
    case Tag::Pair: {
      ValuePtr a = infer_v(s, n[0]);
      ValuePtr b = infer_v(s, n[1]);
      return val::sigma(a, Closure([b](const ValuePtr&) { return b; }), "_");
    }
    case Tag::Fst:
    case Tag::Snd: {
      ValuePtr pty = infer_v(s, n[0]);
      if (pty->tag != VTag::Sigma) {
        throw TypeError(ErrorKind::NotAPair,
                        s.show(n[0]) + " is projected but has type " + s.show_ty(pty),
                        std::nullopt, s.quote_ty(pty));
      }
      if (n.tag == Tag::Fst) return pty->a;
      return pty->body(vfst(s.eval(n[0])));
    }
    case Tag::Refl: {
      ValuePtr a = infer_v(s, n[0]);
      ValuePtr v = s.eval(n[0]);
      return val::eq(a, v, v);
    }
    case Tag::EqInd: {
      // J motive base lhs rhs proof
      ValuePtr pty = infer_v(s, n[4]);
      if (pty->tag != VTag::Eq) {
        throw TypeError(ErrorKind::Mismatch,
                        "J eliminates " + s.show(n[4]) + " of non-identity type " + s.show_ty(pty),
                        std::nullopt, s.quote_ty(pty));
      }
      ValuePtr carrier = pty->a;
      check_v(s, n[2], carrier);
      check_v(s, n[3], carrier);
      ValuePtr lhs = s.eval(n[2]);
      ValuePtr rhs = s.eval(n[3]);
      Term cq = s.quote_ty(carrier);
      if (!alpha_equal(quote(lhs, s.depth(), carrier), quote(pty->b, s.depth(), carrier)) ||
          !alpha_equal(quote(rhs, s.depth(), carrier), quote(pty->c, s.depth(), carrier))) {
        Term expected = mk::eq(cq, quote(lhs, s.depth(), carrier), quote(rhs, s.depth(), carrier));
        throw TypeError(ErrorKind::Mismatch,
                        "J endpoints do not match the proof's type " + s.show_ty(pty), expected,
                        s.quote_ty(pty));
      }
      ValuePtr shape = val::pi(
          carrier,
          Closure([carrier, lhs](const ValuePtr& b) {
            return val::arrow(val::eq(carrier, lhs, b), val::univ(Level{0}));
          }),
          "b");
      motive(s, n[0], shape, 2, "J");
      ValuePtr m = s.eval(n[0]);
      check_v(s, n[1], prtt::apply(prtt::apply(m, lhs), val::refl(lhs)));
      return prtt::apply(prtt::apply(m, rhs), s.eval(n[4]));
    }
    case Tag::ExFalso: {
      ValuePtr sty = infer_v(s, n[1]);
      if (sty->tag != VTag::Empty) {
        throw TypeError(ErrorKind::EmptyImpossible,
                        "exfalso needs a proof of Empty, but " + s.show(n[1]) + " has type " +
                            s.show_ty(sty),
                        mk::empty(), s.quote_ty(sty));
      }
      motive(s, n[0], val::arrow(val::empty(), val::univ(Level{0})), 1, "exfalso");
      return prtt::apply(s.eval(n[0]), s.eval(n[1]));
    }
    case Tag::Star:
      return val::unit();
    case Tag::UnitInd: {
      check_v(s, n[2], val::unit());
      motive(s, n[0], val::arrow(val::unit(), val::univ(Level{0})), 1, "unitind");
      ValuePtr m = s.eval(n[0]);
      check_v(s, n[1], prtt::apply(m, val::star()));
      return prtt::apply(m, s.eval(n[2]));
    }
    case Tag::Zero:
      return val::nat();
    case Tag::Suc:
      check_v(s, n[0], val::nat());
      return val::nat();
    case Tag::NatInd: {
      check_v(s, n[3], val::nat());
      motive(s, n[0], val::arrow(val::nat(), val::univ(Level{0})), 1, "ind");
      ValuePtr m = s.eval(n[0]);
      check_v(s, n[1], prtt::apply(m, val::zero()));
      ValuePtr step_ty = val::pi(
          val::nat(),
          Closure([m](const ValuePtr& k) {
            return val::arrow(prtt::apply(m, k), prtt::apply(m, val::suc(k)));
          }),
          "n");
      check_v(s, n[2], step_ty);
      return prtt::apply(m, s.eval(n[3]));
    }
    case Tag::Inl:
    case Tag::Inr:
      throw TypeError(ErrorKind::Mismatch,
                      "cannot infer the sum type of " + s.show(t) + "; annotate the definition");
    case Tag::SumInd: {
      ValuePtr sty;
      const Tag st = n[3]->tag;
      if ((st == Tag::Inl || st == Tag::Inr) && n[0]->tag == Tag::Lam) {
        // An injection has no inferable type; the motive's binder gives it.
        const Term& dom = (*n[0])[0];
        if (!type_level(s, dom).has_value()) {
          throw TypeError(ErrorKind::LevelOverflow,
                          "motive binder type " + s.show(dom) + " lies outside every universe");
        }
        sty = s.eval(dom);
        check_v(s, n[3], sty);
      } else {
        sty = infer_v(s, n[3]);
      }
      if (sty->tag != VTag::Sum) {
        throw TypeError(ErrorKind::Mismatch,
                        "case analysis on " + s.show(n[3]) + " of non-sum type " + s.show_ty(sty),
                        std::nullopt, s.quote_ty(sty));
      }
      motive(s, n[0], val::arrow(sty, val::univ(Level{0})), 1, "case");
      ValuePtr m = s.eval(n[0]);
      ValuePtr lty = val::pi(
          sty->a, Closure([m](const ValuePtr& a) { return prtt::apply(m, val::inl(a)); }), "a");
      ValuePtr rty = val::pi(
          sty->b, Closure([m](const ValuePtr& b) { return prtt::apply(m, val::inr(b)); }), "b");
      check_v(s, n[1], lty);
      check_v(s, n[2], rty);
      return prtt::apply(m, s.eval(n[3]));
    }
    case Tag::Ref:
      return definition_type(*n.def);
  }
  throw KernelError("unknown term tag");
}

void Checker::check_v(const Scope& s, const Term& t, const ValuePtr& ty) const {
  const TermNode& n = *t;
  switch (n.tag) {
    case Tag::Lam:
      if (ty->tag == VTag::Pi) {
        if (!type_level(s, n[0]).has_value()) {
          throw TypeError(ErrorKind::LevelOverflow,
                          "lambda binder type " + s.show(n[0]) + " lies outside every universe");
        }
        ValuePtr dom = s.eval(n[0]);
        require_type_eq(s, ty->a, dom, n[0]);
        ValuePtr x = val::fresh(s.depth(), dom);
        check_v(s.bind(n.name, dom), n[1], ty->body(x));
        return;
      }
      break;
    case Tag::Pair:
      if (ty->tag == VTag::Sigma) {
        check_v(s, n[0], ty->a);
        check_v(s, n[1], ty->body(s.eval(n[0])));
        return;
      }
      break;
    case Tag::Inl:
    case Tag::Inr:
      if (ty->tag == VTag::Sum) {
        check_v(s, n[0], n.tag == Tag::Inl ? ty->a : ty->b);
        return;
      }
      throw TypeError(ErrorKind::Mismatch,
                      s.show(t) + " is an injection but the expected type is " + s.show_ty(ty),
                      s.quote_ty(ty));
    case Tag::Refl:
      if (ty->tag == VTag::Eq) {
        check_v(s, n[0], ty->a);
        Term a = quote(s.eval(n[0]), s.depth(), ty->a);
        Term lhs = quote(ty->b, s.depth(), ty->a);
        Term rhs = quote(ty->c, s.depth(), ty->a);
        if (!alpha_equal(a, lhs) || !alpha_equal(a, rhs)) {
          Term expected = s.quote_ty(ty);
          Term actual = mk::eq(quote_type(ty->a, s.depth()), a, a);
          throw TypeError(ErrorKind::Mismatch,
                          "refl does not prove " + s.show(expected) + "; it proves " +
                              s.show(actual),
                          expected, actual);
        }
        return;
      }
      break;
    default:
      if (is_type_former(n.tag) && ty->tag == VTag::Univ) {
        auto l = type_level(s, t);
        if (l && *l <= ty->level) return;
        if (ty->level == Level{0} && contains_pi(t)) {
          throw TypeError(ErrorKind::PiNotInU0,
                          s.show(t) + " contains a function type and lives in U" +
                              (l ? std::to_string(l->index) : std::string("?")) + ", not U0",
                          mk::univ(Level{0}), l ? std::optional<Term>(mk::univ(*l)) : std::nullopt,
                          l);
        }
        throw TypeError(ErrorKind::Mismatch,
                        s.show(t) + " does not live in U" + std::to_string(ty->level.index),
                        mk::univ(ty->level),
                        l ? std::optional<Term>(mk::univ(*l)) : std::nullopt, l);
      }
      break;
  }
  require_type_eq(s, ty, infer_v(s, t), t);
}

namespace {

}  // namespace

void Checker::check_context(const Context& ctx) const {
  Scope s;
  for (const auto& b : ctx.bindings) {
    if (!type_level(s, b.type).has_value()) {
      throw TypeError(ErrorKind::LevelOverflow,
                      "context entry " + b.name + " has a type outside every universe");
    }
    s = s.bind(b.name, s.eval(b.type));
  }
}

TypedTerm Checker::infer(const Context& ctx, const Term& t) const {
  Scope s;
  for (const auto& b : ctx.bindings) s = s.bind(b.name, s.eval(b.type));
  ValuePtr ty = infer_v(s, t);
  return TypedTerm{t, s.quote_ty(ty), value_level(ty, s.depth())};
}

TypedTerm Checker::check(const Context& ctx, const Term& t, const Term& ty) const {
  Scope s;
  for (const auto& b : ctx.bindings) s = s.bind(b.name, s.eval(b.type));
  type_level(s, ty);
  ValuePtr tyv = s.eval(ty);
  check_v(s, t, tyv);
  return TypedTerm{t, ty, value_level(tyv, s.depth())};
}

std::optional<Level> Checker::check_type(const Context& ctx, const Term& ty) const {
  Scope s;
  for (const auto& b : ctx.bindings) s = s.bind(b.name, s.eval(b.type));
  return type_level(s, ty);
}

void Checker::check_elim_motive(const Context& ctx, const Term& m) const {
  Scope s;
  for (const auto& b : ctx.bindings) s = s.bind(b.name, s.eval(b.type));
  // Arity follows the motive's own telescope.
  std::size_t arity = 0;
  Scope cur = s;
  Term body = m;
  while (body->tag == Tag::Lam) {
    type_level(cur, body->kids[0]);
    cur = cur.bind(body->name, cur.eval(body->kids[0]));
    body = body->kids[1];
    ++arity;
  }
  std::optional<Level> level;
  if (arity > 0) {
    level = type_level(cur, body);
  } else {
    ValuePtr ty = infer_v(s, m);
    std::size_t depth = s.depth();
    while (ty->tag == VTag::Pi) {
      ty = ty->body(val::fresh(depth++, ty->a));
    }
    if (ty->tag != VTag::Univ) {
      throw TypeError(ErrorKind::NotAFunction, "motive " + s.show(m) + " is not a type family");
    }
    level = ty->level;
  }
  if (options_.motive_gate && (!level || *level != Level{0})) {
    throw TypeError(ErrorKind::MotiveNotInU0,
                    "motive " + s.show(m) + " lands in " +
                        (level ? "U" + std::to_string(level->index) : std::string("no universe")) +
                        ", not U0",
                    mk::univ(Level{0}), level ? std::optional<Term>(mk::univ(*level)) : std::nullopt,
                    level);
  }
}

bool Checker::conv(const Context& ctx, const Term& a, const Term& b, const Term& ty) const {
  Env env = context_env(ctx);
  ValuePtr tyv = eval(env, ty);
  return alpha_equal(quote(eval(env, a), ctx.size(), tyv), quote(eval(env, b), ctx.size(), tyv));
}

bool Checker::conv_types(const Context& ctx, const Term& a, const Term& b) const {
  Env env = context_env(ctx);
  return alpha_equal(quote_type(eval(env, a), ctx.size()), quote_type(eval(env, b), ctx.size()));
}

}  // namespace prtt
