#include "prtt/nbe.hpp"

#include <limits>

namespace prtt {

namespace {
thread_local StepBudget* g_budget = nullptr;
}  // namespace

StepBudget::StepBudget(std::uint64_t limit) : limit_(limit), outer_(g_budget) { g_budget = this; }

StepBudget::~StepBudget() { g_budget = outer_; }

void StepBudget::charge(std::uint64_t steps) {
  if (g_budget == nullptr) return;
  g_budget->used_ += steps;
  if (g_budget->used_ > g_budget->limit_) {
    throw BudgetExceeded("evaluation step budget of " + std::to_string(g_budget->limit_) +
                         " exhausted");
  }
}

Env Env::push(ValuePtr v) const {
  Env e;
  e.head_ = std::make_shared<const Node>(Node{std::move(v), head_});
  e.size_ = size_ + 1;
  return e;
}

const ValuePtr& Env::lookup(std::size_t index) const {
  const Node* n = head_.get();
  for (std::size_t i = 0; i < index && n != nullptr; ++i) n = n->next.get();
  if (n == nullptr) throw KernelError("unbound variable during evaluation");
  return n->value;
}

namespace val {
namespace {

std::shared_ptr<Value> make(VTag tag) {
  auto v = std::make_shared<Value>();
  v->tag = tag;
  return v;
}

const ValuePtr& cached(VTag tag) {
  static const ValuePtr nat_v = make(VTag::Nat);
  static const ValuePtr unit_v = make(VTag::Unit);
  static const ValuePtr empty_v = make(VTag::Empty);
  static const ValuePtr star_v = make(VTag::Star);
  static const ValuePtr zero_v = make(VTag::Num);
  switch (tag) {
    case VTag::Nat: return nat_v;
    case VTag::Unit: return unit_v;
    case VTag::Empty: return empty_v;
    case VTag::Star: return star_v;
    default: return zero_v;
  }
}

}  // namespace

ValuePtr nat() { return cached(VTag::Nat); }
ValuePtr unit() { return cached(VTag::Unit); }
ValuePtr empty() { return cached(VTag::Empty); }
ValuePtr star() { return cached(VTag::Star); }
ValuePtr zero() { return cached(VTag::Num); }

ValuePtr num(Natural n) {
  if (n == 0) return zero();
  auto v = make(VTag::Num);
  v->count = std::move(n);
  return v;
}

ValuePtr univ(Level level) {
  auto v = make(VTag::Univ);
  v->level = level;
  return v;
}

ValuePtr pi(ValuePtr dom, Closure cod, std::string name) {
  auto v = make(VTag::Pi);
  v->a = std::move(dom);
  v->body = std::move(cod);
  v->name = std::move(name);
  return v;
}

ValuePtr arrow(ValuePtr dom, ValuePtr cod) {
  return pi(std::move(dom), Closure([cod](const ValuePtr&) { return cod; }), "_");
}

ValuePtr sigma(ValuePtr fst, Closure snd, std::string name) {
  auto v = make(VTag::Sigma);
  v->a = std::move(fst);
  v->body = std::move(snd);
  v->name = std::move(name);
  return v;
}

ValuePtr sum(ValuePtr l, ValuePtr r) {
  auto v = make(VTag::Sum);
  v->a = std::move(l);
  v->b = std::move(r);
  return v;
}

ValuePtr eq(ValuePtr ty, ValuePtr lhs, ValuePtr rhs) {
  auto v = make(VTag::Eq);
  v->a = std::move(ty);
  v->b = std::move(lhs);
  v->c = std::move(rhs);
  return v;
}

ValuePtr refl(ValuePtr a) {
  auto v = make(VTag::Refl);
  v->a = std::move(a);
  return v;
}

ValuePtr pair(ValuePtr a, ValuePtr b) {
  auto v = make(VTag::Pair);
  v->a = std::move(a);
  v->b = std::move(b);
  return v;
}

ValuePtr inl(ValuePtr a) {
  auto v = make(VTag::Inl);
  v->a = std::move(a);
  return v;
}

ValuePtr inr(ValuePtr b) {
  auto v = make(VTag::Inr);
  v->a = std::move(b);
  return v;
}

ValuePtr lam(Closure body, std::string name) {
  auto v = make(VTag::Lam);
  v->body = std::move(body);
  v->name = std::move(name);
  return v;
}

ValuePtr suc(const ValuePtr& n) {
  auto v = make(VTag::Num);
  if (n->tag == VTag::Num) {
    v->count = n->count + 1;
    v->a = n->a;
  } else if (n->tag == VTag::Neutral) {
    v->count = 1;
    v->a = n;
  } else {
    throw KernelError("successor of a non-natural value");
  }
  return v;
}

ValuePtr fresh(std::size_t level, ValuePtr type) {
  auto n = std::make_shared<Neutral>();
  n->tag = NTag::Var;
  n->level = level;
  auto v = make(VTag::Neutral);
  v->neutral = std::move(n);
  v->type = std::move(type);
  return v;
}

}  // namespace val

namespace {

ValuePtr stuck(std::shared_ptr<Neutral> n, ValuePtr type) {
  auto v = std::make_shared<Value>();
  v->tag = VTag::Neutral;
  v->neutral = std::move(n);
  v->type = std::move(type);
  return v;
}

Closure closure(const Env& env, const Term& body) {
  return Closure([env, body](const ValuePtr& arg) { return eval(env.push(arg), body); }, body);
}

ValuePtr sum_ind(const ValuePtr& motive, const ValuePtr& lcase, const ValuePtr& rcase,
                 const ValuePtr& scrut) {
  switch (scrut->tag) {
    case VTag::Inl:
      StepBudget::charge();
      return prtt::apply(lcase, scrut->a);
    case VTag::Inr:
      StepBudget::charge();
      return prtt::apply(rcase, scrut->a);
    case VTag::Neutral: {
      auto n = std::make_shared<Neutral>();
      n->tag = NTag::SumInd;
      n->head = scrut;
      n->motive = motive;
      n->base = lcase;
      n->step = rcase;
      return stuck(std::move(n), prtt::apply(motive, scrut));
    }
    default:
      throw KernelError("case on a non-sum value");
  }
}

ValuePtr unit_ind(const ValuePtr& motive, const ValuePtr& base, const ValuePtr& scrut) {
  if (scrut->tag == VTag::Star) {
    StepBudget::charge();
    return base;
  }
  if (scrut->tag != VTag::Neutral) throw KernelError("unitind on a non-unit value");
  auto n = std::make_shared<Neutral>();
  n->tag = NTag::UnitInd;
  n->head = scrut;
  n->motive = motive;
  n->base = base;
  return stuck(std::move(n), prtt::apply(motive, scrut));
}

ValuePtr eq_ind(const ValuePtr& motive, const ValuePtr& base, const ValuePtr& lhs,
                const ValuePtr& rhs, const ValuePtr& proof) {
  if (proof->tag == VTag::Refl) {
    StepBudget::charge();
    return base;
  }
  if (proof->tag != VTag::Neutral) throw KernelError("J on a non-identity value");
  auto n = std::make_shared<Neutral>();
  n->tag = NTag::EqInd;
  n->head = proof;
  n->motive = motive;
  n->base = base;
  n->lhs = lhs;
  n->rhs = rhs;
  return stuck(std::move(n), prtt::apply(prtt::apply(motive, rhs), proof));
}

ValuePtr ex_falso(const ValuePtr& motive, const ValuePtr& scrut) {
  if (scrut->tag != VTag::Neutral) throw KernelError("exfalso on a non-neutral value");
  auto n = std::make_shared<Neutral>();
  n->tag = NTag::ExFalso;
  n->head = scrut;
  n->motive = motive;
  return stuck(std::move(n), prtt::apply(motive, scrut));
}

}  // namespace

const ValuePtr& definition_value(const Definition& def) {
  std::call_once(def.evaluated, [&] {
    def.type_value = eval(Env{}, def.type);
    def.value = eval(Env{}, def.body);
  });
  return def.value;
}

const ValuePtr& definition_type(const Definition& def) {
  definition_value(def);
  return def.type_value;
}

ValuePtr apply(const ValuePtr& fn, const ValuePtr& arg) {
  if (fn->tag == VTag::Lam) return fn->body(arg);
  if (fn->tag == VTag::Neutral && fn->type->tag == VTag::Pi) {
    auto n = std::make_shared<Neutral>();
    n->tag = NTag::App;
    n->head = fn;
    n->arg = arg;
    return stuck(std::move(n), fn->type->body(arg));
  }
  throw KernelError("application of a non-function value");
}

ValuePtr vfst(const ValuePtr& p) {
  if (p->tag == VTag::Pair) return p->a;
  if (p->tag == VTag::Neutral && p->type->tag == VTag::Sigma) {
    auto n = std::make_shared<Neutral>();
    n->tag = NTag::Fst;
    n->head = p;
    return stuck(std::move(n), p->type->a);
  }
  throw KernelError("first projection of a non-pair value");
}

ValuePtr vsnd(const ValuePtr& p) {
  if (p->tag == VTag::Pair) return p->b;
  if (p->tag == VTag::Neutral && p->type->tag == VTag::Sigma) {
    auto n = std::make_shared<Neutral>();
    n->tag = NTag::Snd;
    n->head = p;
    return stuck(std::move(n), p->type->body(vfst(p)));
  }
  throw KernelError("second projection of a non-pair value");
}

namespace {

// step = fun k acc => body with acc unused
bool ignores_accumulator(const Value& step) {
  if (step.tag != VTag::Lam) return false;
  const Term& src = step.body.source();
  return src != nullptr && src->tag == Tag::Lam && !mentions((*src)[1], 0);
}

}  // namespace

ValuePtr nat_ind(const ValuePtr& motive, const ValuePtr& base, const ValuePtr& step,
                 const ValuePtr& scrut) {
  ValuePtr acc;
  ValuePtr stem;  // neutral under the successors, if any
  Natural count;
  if (scrut->tag == VTag::Num) {
    count = scrut->count;
    stem = scrut->a;
  } else if (scrut->tag == VTag::Neutral) {
    stem = scrut;
  } else {
    throw KernelError("ind on a non-natural value");
  }
  if (stem == nullptr) {
    acc = base;
  } else {
    auto n = std::make_shared<Neutral>();
    n->tag = NTag::NatInd;
    n->head = stem;
    n->motive = motive;
    n->base = base;
    n->step = step;
    acc = stuck(std::move(n), prtt::apply(motive, stem));
  }
  ValuePtr pred = stem == nullptr ? val::zero() : stem;
  if (count > 0 && ignores_accumulator(*step)) {
    // Only the last step matters; its accumulator is never read.
    StepBudget::charge();
    ValuePtr last = pred;
    if (count > 1 || stem == nullptr) {
      auto v = std::make_shared<Value>();
      v->tag = VTag::Num;
      v->count = count - 1;
      v->a = stem;
      last = v;
    }
    return prtt::apply(prtt::apply(step, last), acc);
  }
  for (Natural i = 0; i < count; ++i) {
    StepBudget::charge();
    acc = prtt::apply(prtt::apply(step, pred), acc);
    pred = val::suc(pred);
  }
  return acc;
}

ValuePtr eval(const Env& env, const Term& t) {
  const TermNode& n = *t;
  switch (n.tag) {
    case Tag::Var:
      return env.lookup(n.index);
    case Tag::Lam:
      return val::lam(closure(env, n[1]), n.name);
    case Tag::App:
      return prtt::apply(eval(env, n[0]), eval(env, n[1]));
    case Tag::Pi:
      return val::pi(eval(env, n[0]), closure(env, n[1]), n.name);
    case Tag::Sigma:
      return val::sigma(eval(env, n[0]), closure(env, n[1]), n.name);
    case Tag::Pair:
      return val::pair(eval(env, n[0]), eval(env, n[1]));
    case Tag::Fst:
      return vfst(eval(env, n[0]));
    case Tag::Snd:
      return vsnd(eval(env, n[0]));
    case Tag::Eq:
      return val::eq(eval(env, n[0]), eval(env, n[1]), eval(env, n[2]));
    case Tag::Refl:
      return val::refl(eval(env, n[0]));
    case Tag::EqInd:
      return eq_ind(eval(env, n[0]), eval(env, n[1]), eval(env, n[2]), eval(env, n[3]),
                    eval(env, n[4]));
    case Tag::Empty:
      return val::empty();
    case Tag::ExFalso:
      return ex_falso(eval(env, n[0]), eval(env, n[1]));
    case Tag::Unit:
      return val::unit();
    case Tag::Star:
      return val::star();
    case Tag::UnitInd:
      return unit_ind(eval(env, n[0]), eval(env, n[1]), eval(env, n[2]));
    case Tag::Nat:
      return val::nat();
    case Tag::Zero:
      return val::zero();
    case Tag::Suc: {
      ValuePtr inner = eval(env, n[0]);
      auto v = std::make_shared<Value>();
      v->tag = VTag::Num;
      if (inner->tag == VTag::Num) {
        v->count = inner->count + n.count;
        v->a = inner->a;
      } else if (inner->tag == VTag::Neutral) {
        v->count = n.count;
        v->a = inner;
      } else {
        throw KernelError("successor of a non-natural value");
      }
      return v;
    }
    case Tag::NatInd:
      return nat_ind(eval(env, n[0]), eval(env, n[1]), eval(env, n[2]), eval(env, n[3]));
    case Tag::Sum:
      return val::sum(eval(env, n[0]), eval(env, n[1]));
    case Tag::Inl:
      return val::inl(eval(env, n[0]));
    case Tag::Inr:
      return val::inr(eval(env, n[0]));
    case Tag::SumInd:
      return sum_ind(eval(env, n[0]), eval(env, n[1]), eval(env, n[2]), eval(env, n[3]));
    case Tag::Univ:
      return val::univ(n.from);
    case Tag::Lift:
      // Elements of lift A are elements of A; the level lives in the checker.
      return eval(env, n[0]);
    case Tag::Ref:
      return definition_value(*n.def);
  }
  throw KernelError("unknown term tag");
}

namespace {

Term quote_neutral(const ValuePtr& v, std::size_t depth);

Term quote_suc(const ValuePtr& v, std::size_t depth) {
  if (v->count > std::numeric_limits<std::uint64_t>::max()) {
    throw std::overflow_error("numeral too large to quote");
  }
  Term base = v->a ? quote_neutral(v->a, depth) : mk::zero();
  return mk::suc(base, static_cast<std::uint64_t>(v->count));
}

Term quote_neutral(const ValuePtr& v, std::size_t depth) {
  if (v->tag != VTag::Neutral) throw KernelError("expected a neutral value");
  const Neutral& n = *v->neutral;
  switch (n.tag) {
    case NTag::Var:
      return mk::var(depth - n.level - 1);
    case NTag::App: {
      const ValuePtr& fty = n.head->type;
      return mk::app(quote_neutral(n.head, depth), quote(n.arg, depth, fty->a));
    }
    case NTag::Fst:
      return mk::fst(quote_neutral(n.head, depth));
    case NTag::Snd:
      return mk::snd(quote_neutral(n.head, depth));
    case NTag::NatInd: {
      ValuePtr motive = n.motive;
      ValuePtr motive_ty = val::arrow(val::nat(), val::univ(Level{0}));
      ValuePtr step_ty = val::pi(
          val::nat(),
          Closure([motive](const ValuePtr& k) {
            return val::arrow(prtt::apply(motive, k), prtt::apply(motive, val::suc(k)));
          }),
          "n");
      return mk::nat_ind(quote(motive, depth, motive_ty),
                         quote(n.base, depth, prtt::apply(motive, val::zero())),
                         quote(n.step, depth, step_ty), quote_neutral(n.head, depth));
    }
    case NTag::SumInd: {
      ValuePtr motive = n.motive;
      const ValuePtr& sty = n.head->type;
      ValuePtr motive_ty = val::arrow(sty, val::univ(Level{0}));
      ValuePtr lty = val::pi(
          sty->a, Closure([motive](const ValuePtr& a) { return prtt::apply(motive, val::inl(a)); }), "a");
      ValuePtr rty = val::pi(
          sty->b, Closure([motive](const ValuePtr& b) { return prtt::apply(motive, val::inr(b)); }), "b");
      return mk::sum_ind(quote(motive, depth, motive_ty), quote(n.base, depth, lty),
                         quote(n.step, depth, rty), quote_neutral(n.head, depth));
    }
    case NTag::UnitInd: {
      ValuePtr motive_ty = val::arrow(val::unit(), val::univ(Level{0}));
      return mk::unit_ind(quote(n.motive, depth, motive_ty),
                          quote(n.base, depth, prtt::apply(n.motive, val::star())),
                          quote_neutral(n.head, depth));
    }
    case NTag::EqInd: {
      const ValuePtr& ety = n.head->type;
      ValuePtr carrier = ety->a;
      ValuePtr lhs = n.lhs;
      ValuePtr motive_ty = val::pi(
          carrier,
          Closure([carrier, lhs](const ValuePtr& b) {
            return val::arrow(val::eq(carrier, lhs, b), val::univ(Level{0}));
          }),
          "b");
      return mk::eq_ind(quote(n.motive, depth, motive_ty),
                        quote(n.base, depth, prtt::apply(prtt::apply(n.motive, lhs), val::refl(lhs))),
                        quote(lhs, depth, carrier), quote(n.rhs, depth, carrier),
                        quote_neutral(n.head, depth));
    }
    case NTag::ExFalso: {
      ValuePtr motive_ty = val::arrow(val::empty(), val::univ(Level{0}));
      return mk::ex_falso(quote(n.motive, depth, motive_ty), quote_neutral(n.head, depth));
    }
  }
  throw KernelError("unknown neutral");
}

}  // namespace

Term quote(const ValuePtr& v, std::size_t depth, const ValuePtr& ty) {
  switch (ty->tag) {
    case VTag::Pi: {
      ValuePtr x = val::fresh(depth, ty->a);
      return mk::lam(quote_type(ty->a, depth), quote(prtt::apply(v, x), depth + 1, ty->body(x)),
                     v->tag == VTag::Lam ? v->name : ty->name);
    }
    case VTag::Sigma: {
      ValuePtr a = vfst(v);
      return mk::pair(quote(a, depth, ty->a), quote(vsnd(v), depth, ty->body(a)));
    }
    case VTag::Univ:
      return quote_type(v, depth);
    case VTag::Nat:
      if (v->tag == VTag::Num) return quote_suc(v, depth);
      return quote_neutral(v, depth);
    case VTag::Unit:
      if (v->tag == VTag::Star) return mk::star();
      return quote_neutral(v, depth);
    case VTag::Sum:
      if (v->tag == VTag::Inl) return mk::inl(quote(v->a, depth, ty->a));
      if (v->tag == VTag::Inr) return mk::inr(quote(v->a, depth, ty->b));
      return quote_neutral(v, depth);
    case VTag::Eq:
      if (v->tag == VTag::Refl) return mk::refl(quote(v->a, depth, ty->a));
      return quote_neutral(v, depth);
    case VTag::Empty:
    case VTag::Neutral:
      return quote_neutral(v, depth);
    default:
      throw KernelError("quotation at a non-type");
  }
}

Term quote_type(const ValuePtr& ty, std::size_t depth) {
  switch (ty->tag) {
    case VTag::Pi:
    case VTag::Sigma: {
      ValuePtr x = val::fresh(depth, ty->a);
      Term dom = quote_type(ty->a, depth);
      Term cod = quote_type(ty->body(x), depth + 1);
      return ty->tag == VTag::Pi ? mk::pi(dom, cod, ty->name) : mk::sigma(dom, cod, ty->name);
    }
    case VTag::Sum:
      return mk::sum(quote_type(ty->a, depth), quote_type(ty->b, depth));
    case VTag::Eq:
      return mk::eq(quote_type(ty->a, depth), quote(ty->b, depth, ty->a),
                    quote(ty->c, depth, ty->a));
    case VTag::Nat: return mk::nat();
    case VTag::Unit: return mk::unit();
    case VTag::Empty: return mk::empty();
    case VTag::Univ: return mk::univ(ty->level);
    case VTag::Neutral: return quote_neutral(ty, depth);
    default:
      throw KernelError("quotation of a non-type value as a type");
  }
}

Env context_env(const Context& ctx) {
  Env env;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    ValuePtr ty = eval(env, ctx.bindings[i].type);
    env = env.push(val::fresh(i, std::move(ty)));
  }
  return env;
}

Term normalize(const Context& ctx, const Term& t, const Term& ty) {
  Env env = context_env(ctx);
  return quote(eval(env, t), ctx.size(), eval(env, ty));
}

Term normalize_type(const Context& ctx, const Term& ty) {
  Env env = context_env(ctx);
  return quote_type(eval(env, ty), ctx.size());
}

std::optional<Natural> value_numeral(const ValuePtr& v) {
  if (v->tag == VTag::Num && v->a == nullptr) return v->count;
  return std::nullopt;
}

Natural canonical_nat(const Term& t) {
  ValuePtr v = eval(Env{}, t);
  if (auto n = value_numeral(v)) return *n;
  throw NonCanonical("closed term of type Nat did not reduce to a numeral");
}

}  // namespace prtt
