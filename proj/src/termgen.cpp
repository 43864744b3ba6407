#include "prtt/termgen.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <vector>

namespace prtt {

namespace {

struct Ty;
using TyPtr = std::shared_ptr<const Ty>;

enum class TK { Nat, Unit, Sum, Prod, Arrow };

struct Ty {
  TK k;
  TyPtr a, b;
};

TyPtr ty(TK k, TyPtr a = nullptr, TyPtr b = nullptr) {
  return std::make_shared<const Ty>(Ty{k, std::move(a), std::move(b)});
}

bool same(const TyPtr& x, const TyPtr& y) {
  if (x->k != y->k) return false;
  if (x->k == TK::Nat || x->k == TK::Unit) return true;
  return same(x->a, y->a) && same(x->b, y->b);
}

std::size_t depth_of(const TyPtr& t) {
  if (t->k == TK::Nat || t->k == TK::Unit) return 0;
  return 1 + std::max(depth_of(t->a), depth_of(t->b));
}

Term to_term(const TyPtr& t) {
  switch (t->k) {
    case TK::Nat: return mk::nat();
    case TK::Unit: return mk::unit();
    case TK::Sum: return mk::sum(to_term(t->a), to_term(t->b));
    case TK::Prod: return mk::product(to_term(t->a), to_term(t->b));
    case TK::Arrow: return mk::arrow(to_term(t->a), to_term(t->b));
  }
  throw std::logic_error("bad generated type");
}

// Whether the checker can synthesize a type for `t` without help.
bool inferable(const Term& t) {
  switch (t->tag) {
    case Tag::Inl:
    case Tag::Inr:
      return false;
    case Tag::Pair:
      return inferable((*t)[0]) && inferable((*t)[1]);
    case Tag::Lam:
      return inferable((*t)[1]);
    case Tag::App:
    case Tag::Fst:
    case Tag::Snd:
      return inferable((*t)[0]);
    default:
      return true;
  }
}

// (fun x : T => x) e
Term annotate(Term e, const TyPtr& t) {
  if (inferable(e)) return e;
  return mk::app(mk::lam(to_term(t), mk::var(0)), std::move(e));
}

class Gen {
 public:
  Gen(std::mt19937_64& rng, std::size_t state_depth) : rng_(rng), state_depth_(state_depth) {}

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  bool chance(unsigned percent) { return below(100) < percent; }

  TyPtr small(std::size_t depth) {
    std::size_t r = below(depth == 0 ? 2 : 8);
    if (r < 3 || depth == 0) return r % 4 == 1 ? ty(TK::Unit) : ty(TK::Nat);
    if (r < 6) return ty(TK::Prod, small(depth - 1), small(depth - 1));
    return ty(TK::Sum, small(depth - 1), small(depth - 1));
  }

  // ctx[i] is the type of Var i.
  Term gen(std::vector<TyPtr>& ctx, const TyPtr& t, std::size_t size) {
    if (size <= 2) return leaf(ctx, t);
    if (t->k == TK::Arrow) return intro(ctx, t, size);
    std::size_t r = below(100);
    if (r < 25) return intro(ctx, t, size);
    if (r < 30) return leaf(ctx, t);
    return elim(ctx, t, size);
  }

 private:
  Term var_of(const std::vector<TyPtr>& ctx, const TyPtr& t) {
    std::vector<std::size_t> hits;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      if (same(ctx[i], t)) hits.push_back(i);
    }
    if (hits.empty()) return nullptr;
    return mk::var(hits[below(hits.size())]);
  }

  Term leaf(std::vector<TyPtr>& ctx, const TyPtr& t) {
    if (chance(60)) {
      if (Term v = var_of(ctx, t)) return v;
    }
    switch (t->k) {
      case TK::Nat: return mk::numeral(below(3));
      case TK::Unit: return mk::star();
      case TK::Sum: return chance(50) ? mk::inl(leaf(ctx, t->a)) : mk::inr(leaf(ctx, t->b));
      case TK::Prod: return mk::pair(leaf(ctx, t->a), leaf(ctx, t->b));
      case TK::Arrow: {
        ctx.insert(ctx.begin(), t->a);
        Term body = leaf(ctx, t->b);
        ctx.erase(ctx.begin());
        return mk::lam(to_term(t->a), body);
      }
    }
    throw std::logic_error("bad generated type");
  }

  Term under(std::vector<TyPtr>& ctx, const std::vector<TyPtr>& binders, const TyPtr& t,
             std::size_t size) {
    for (const auto& b : binders) ctx.insert(ctx.begin(), b);
    Term body = gen(ctx, t, size);
    ctx.erase(ctx.begin(), ctx.begin() + static_cast<std::ptrdiff_t>(binders.size()));
    return body;
  }

  Term intro(std::vector<TyPtr>& ctx, const TyPtr& t, std::size_t size) {
    switch (t->k) {
      case TK::Nat: return mk::suc(gen(ctx, t, size - 1));
      case TK::Unit: return mk::star();
      case TK::Sum:
        return chance(50) ? mk::inl(gen(ctx, t->a, size - 1)) : mk::inr(gen(ctx, t->b, size - 1));
      case TK::Prod: {
        std::size_t l = 1 + below(size - 1);
        return mk::pair(gen(ctx, t->a, l), gen(ctx, t->b, size - l));
      }
      case TK::Arrow:
        return mk::lam(to_term(t->a), under(ctx, {t->a}, t->b, size - 1));
    }
    throw std::logic_error("bad generated type");
  }

  // Splits `size` into n nonempty parts.
  std::vector<std::size_t> split(std::size_t size, std::size_t n) {
    std::vector<std::size_t> parts(n, 1);
    std::size_t rest = size > n ? size - n : 0;
    while (rest-- > 0) ++parts[below(n)];
    return parts;
  }

  Term elim(std::vector<TyPtr>& ctx, const TyPtr& t, std::size_t size) {
    Term motive_body = to_term(t);
    std::size_t inner = size - 1;
    std::size_t kind = below(7);
    if (kind == 3 && depth_of(t) > state_depth_) kind = 0;
    switch (kind) {
      case 0: {  // beta redex
        TyPtr a = small(1);
        auto p = split(inner, 2);
        TyPtr f = ty(TK::Arrow, a, t);
        return mk::app(annotate(gen(ctx, f, p[0]), f), gen(ctx, a, p[1]));
      }
      case 1: {
        TyPtr b = small(1);
        TyPtr p = ty(TK::Prod, t, b);
        return mk::fst(annotate(gen(ctx, p, inner), p));
      }
      case 2: {
        TyPtr a = small(1);
        TyPtr p = ty(TK::Prod, a, t);
        return mk::snd(annotate(gen(ctx, p, inner), p));
      }
      case 3: {  // ind on a small scrutinee
        auto p = split(inner > 4 ? inner - 3 : inner, 3);
        std::size_t scrut_size = std::min<std::size_t>(p[2], 5);
        Term motive = mk::lam(mk::nat(), motive_body, "_");
        Term step = mk::lam(mk::nat(), mk::lam(motive_body, under(ctx, {ty(TK::Nat), t}, t, p[1]), "acc"), "k");
        return mk::nat_ind(motive, gen(ctx, t, p[0]), step, gen(ctx, ty(TK::Nat), scrut_size));
      }
      case 4: {
        TyPtr a = small(1), b = small(1);
        auto p = split(inner, 3);
        Term motive = mk::lam(to_term(ty(TK::Sum, a, b)), motive_body, "_");
        return mk::sum_ind(motive, mk::lam(to_term(a), under(ctx, {a}, t, p[0])),
                           mk::lam(to_term(b), under(ctx, {b}, t, p[1])),
                           annotate(gen(ctx, ty(TK::Sum, a, b), p[2]), ty(TK::Sum, a, b)));
      }
      case 5: {
        auto p = split(inner, 2);
        Term motive = mk::lam(mk::unit(), motive_body, "_");
        return mk::unit_ind(motive, gen(ctx, t, p[0]), gen(ctx, ty(TK::Unit), p[1]));
      }
      default: {  // J on refl
        auto p = split(inner, 2);
        Term x = gen(ctx, ty(TK::Nat), std::min<std::size_t>(p[1], 4));
        Term motive = mk::lam(
            mk::nat(), mk::lam(mk::eq(mk::nat(), shift(x, 0, 1), mk::var(0)), motive_body, "_"), "b");
        return mk::eq_ind(motive, gen(ctx, t, p[0]), x, x, mk::refl(x));
      }
    }
  }

  std::mt19937_64& rng_;
  std::size_t state_depth_;
};

}  // namespace

Term TermGen::nat_term(std::size_t max_size, std::size_t nat_vars) {
  Gen g(rng_, max_state_depth_);
  std::vector<TyPtr> ctx(nat_vars, ty(TK::Nat));
  for (;;) {
    Term t = g.gen(ctx, ty(TK::Nat), 1 + g.below(max_size));
    if (term_size(t) <= max_size) return t;
  }
}

Term TermGen::closed_term(std::size_t max_size, Term* type) {
  Gen g(rng_, max_state_depth_);
  std::vector<TyPtr> ctx;
  for (;;) {
    TyPtr t = g.chance(50) ? ty(TK::Nat) : g.small(2);
    Term e = g.gen(ctx, t, 1 + g.below(max_size));
    if (term_size(e) <= max_size) {
      if (type) *type = to_term(t);
      return e;
    }
  }
}

Term TermGen::small_type(std::size_t depth) {
  Gen g(rng_, max_state_depth_);
  return to_term(g.small(depth));
}

}  // namespace prtt
