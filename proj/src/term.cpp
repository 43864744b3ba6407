#include "prtt/term.hpp"

#include <utility>

namespace prtt {

const char* tag_name(Tag tag) {
  switch (tag) {
    case Tag::Var: return "Var";
    case Tag::Lam: return "Lam";
    case Tag::App: return "App";
    case Tag::Pi: return "Pi";
    case Tag::Sigma: return "Sigma";
    case Tag::Pair: return "Pair";
    case Tag::Fst: return "Fst";
    case Tag::Snd: return "Snd";
    case Tag::Eq: return "Eq";
    case Tag::Refl: return "Refl";
    case Tag::EqInd: return "EqInd";
    case Tag::Empty: return "Empty";
    case Tag::ExFalso: return "ExFalso";
    case Tag::Unit: return "Unit";
    case Tag::Star: return "Star";
    case Tag::UnitInd: return "UnitInd";
    case Tag::Nat: return "Nat";
    case Tag::Zero: return "Zero";
    case Tag::Suc: return "Suc";
    case Tag::NatInd: return "NatInd";
    case Tag::Sum: return "Sum";
    case Tag::Inl: return "Inl";
    case Tag::Inr: return "Inr";
    case Tag::SumInd: return "SumInd";
    case Tag::Univ: return "Univ";
    case Tag::Lift: return "Lift";
    case Tag::Ref: return "Ref";
  }
  return "?";
}

namespace mk {
namespace {

Term node(Tag tag, std::vector<Term> kids = {}) {
  auto n = std::make_shared<TermNode>();
  n->tag = tag;
  n->kids = std::move(kids);
  return n;
}

Term binder(Tag tag, Term a, Term b, std::string name) {
  auto n = std::make_shared<TermNode>();
  n->tag = tag;
  n->kids = {std::move(a), std::move(b)};
  n->name = std::move(name);
  return n;
}

}  // namespace

Term var(std::size_t index) {
  auto n = std::make_shared<TermNode>();
  n->tag = Tag::Var;
  n->index = index;
  return n;
}

Term lam(Term annot, Term body, std::string name) {
  return binder(Tag::Lam, std::move(annot), std::move(body), std::move(name));
}
Term app(Term fn, Term arg) { return node(Tag::App, {std::move(fn), std::move(arg)}); }
Term apps(Term fn, const std::vector<Term>& args) {
  for (const auto& a : args) fn = app(fn, a);
  return fn;
}
Term pi(Term dom, Term cod, std::string name) {
  return binder(Tag::Pi, std::move(dom), std::move(cod), std::move(name));
}
Term arrow(Term dom, Term cod) { return pi(std::move(dom), shift(cod, 0, 1), "_"); }
Term sigma(Term fst, Term snd, std::string name) {
  return binder(Tag::Sigma, std::move(fst), std::move(snd), std::move(name));
}
Term product(Term fst, Term snd) { return sigma(std::move(fst), shift(snd, 0, 1), "_"); }
Term pair(Term a, Term b) { return node(Tag::Pair, {std::move(a), std::move(b)}); }
Term fst(Term p) { return node(Tag::Fst, {std::move(p)}); }
Term snd(Term p) { return node(Tag::Snd, {std::move(p)}); }
Term eq(Term ty, Term lhs, Term rhs) {
  return node(Tag::Eq, {std::move(ty), std::move(lhs), std::move(rhs)});
}
Term refl(Term a) { return node(Tag::Refl, {std::move(a)}); }
Term eq_ind(Term motive, Term base, Term lhs, Term rhs, Term proof) {
  return node(Tag::EqInd, {std::move(motive), std::move(base), std::move(lhs), std::move(rhs),
                           std::move(proof)});
}
Term empty() { return node(Tag::Empty); }
Term ex_falso(Term motive, Term scrut) {
  return node(Tag::ExFalso, {std::move(motive), std::move(scrut)});
}
Term unit() { return node(Tag::Unit); }
Term star() { return node(Tag::Star); }
Term unit_ind(Term motive, Term base, Term scrut) {
  return node(Tag::UnitInd, {std::move(motive), std::move(base), std::move(scrut)});
}
Term nat() { return node(Tag::Nat); }
Term zero() { return node(Tag::Zero); }
Term suc(Term n, std::uint64_t count) {
  if (count == 0) return n;
  if (n->tag == Tag::Suc) {
    count += n->count;
    n = n->kids[0];
  }
  auto s = std::make_shared<TermNode>();
  s->tag = Tag::Suc;
  s->count = count;
  s->kids = {std::move(n)};
  return s;
}
Term numeral(std::uint64_t n) { return suc(zero(), n); }
Term nat_ind(Term motive, Term base, Term step, Term scrut) {
  return node(Tag::NatInd, {std::move(motive), std::move(base), std::move(step), std::move(scrut)});
}
Term sum(Term l, Term r) { return node(Tag::Sum, {std::move(l), std::move(r)}); }
Term inl(Term a) { return node(Tag::Inl, {std::move(a)}); }
Term inr(Term b) { return node(Tag::Inr, {std::move(b)}); }
Term sum_ind(Term motive, Term lcase, Term rcase, Term scrut) {
  return node(Tag::SumInd,
              {std::move(motive), std::move(lcase), std::move(rcase), std::move(scrut)});
}
Term univ(Level level) {
  auto n = std::make_shared<TermNode>();
  n->tag = Tag::Univ;
  n->from = level;
  return n;
}
Term lift(Level from, Level to, Term ty) {
  if (to < from) throw std::logic_error("lift target below source level");
  auto n = std::make_shared<TermNode>();
  n->tag = Tag::Lift;
  n->from = from;
  n->to = to;
  n->kids = {std::move(ty)};
  return n;
}
Term ref(DefinitionPtr def) {
  auto n = std::make_shared<TermNode>();
  n->tag = Tag::Ref;
  n->name = def->name;
  n->def = std::move(def);
  return n;
}

Term with_kids(const TermNode& t, std::vector<Term> kids) {
  if (t.tag == Tag::Suc) return suc(std::move(kids[0]), t.count);
  auto n = std::make_shared<TermNode>(t);
  n->kids = std::move(kids);
  return n;
}

}  // namespace mk

namespace {

// Generic bottom-up rebuild that tracks binder depth. `leaf` handles Var
// nodes and may return nullptr to keep the node unchanged.
template <class F>
Term map_vars(const Term& t, std::size_t depth, F& leaf) {
  if (t->tag == Tag::Var) {
    Term r = leaf(*t, depth);
    return r ? r : t;
  }
  if (t->kids.empty()) return t;
  std::vector<Term> kids;
  kids.reserve(t->kids.size());
  bool changed = false;
  for (std::size_t i = 0; i < t->kids.size(); ++i) {
    kids.push_back(map_vars(t->kids[i], depth + binders_of(t->tag, i), leaf));
    changed = changed || kids.back() != t->kids[i];
  }
  return changed ? mk::with_kids(*t, std::move(kids)) : t;
}

}  // namespace

Term shift(const Term& t, std::size_t cutoff, std::ptrdiff_t amount) {
  if (amount == 0) return t;
  auto leaf = [&](const TermNode& v, std::size_t depth) -> Term {
    if (v.index < cutoff + depth) return nullptr;
    auto shifted = static_cast<std::ptrdiff_t>(v.index) + amount;
    if (shifted < 0) throw std::logic_error("shift: negative de Bruijn index");
    return mk::var(static_cast<std::size_t>(shifted));
  };
  return map_vars(t, 0, leaf);
}

Term subst(const Term& t, std::size_t k, const Term& u) {
  auto leaf = [&](const TermNode& v, std::size_t depth) -> Term {
    std::size_t target = k + depth;
    if (v.index < target) return nullptr;
    if (v.index == target) return shift(u, 0, static_cast<std::ptrdiff_t>(target));
    return mk::var(v.index - 1);
  };
  return map_vars(t, 0, leaf);
}

namespace {

// `ty` is already collapsed.
Term lift_collapsed(Level from, Level to, const Term& ty) {
  if (from == to) return ty;
  switch (ty->tag) {
    case Tag::Lift:
      return lift_collapsed(ty->from, to, ty->kids[0]);
    case Tag::Sigma:
      return mk::sigma(lift_collapsed(from, to, ty->kids[0]), lift_collapsed(from, to, ty->kids[1]),
                       ty->name);
    case Tag::Eq:
      return mk::eq(lift_collapsed(from, to, ty->kids[0]), ty->kids[1], ty->kids[2]);
    case Tag::Pi:
      if (from.index > 0) {
        return mk::pi(lift_collapsed(from, to, ty->kids[0]), lift_collapsed(from, to, ty->kids[1]),
                      ty->name);
      }
      break;
    default:
      break;
  }
  return mk::lift(from, to, ty);
}

}  // namespace

Term collapse_lifts(const Term& t) {
  if (t->kids.empty()) return t;
  std::vector<Term> kids;
  kids.reserve(t->kids.size());
  for (const auto& k : t->kids) kids.push_back(collapse_lifts(k));
  if (t->tag == Tag::Lift) return lift_collapsed(t->from, t->to, kids[0]);
  return mk::with_kids(*t, std::move(kids));
}

Term erase_lifts(const Term& t) {
  if (t->tag == Tag::Lift) return erase_lifts(t->kids[0]);
  if (t->kids.empty()) return t;
  std::vector<Term> kids;
  kids.reserve(t->kids.size());
  for (const auto& k : t->kids) kids.push_back(erase_lifts(k));
  return mk::with_kids(*t, std::move(kids));
}

bool alpha_equal(const Term& a, const Term& b) {
  if (a == b) return true;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case Tag::Var:
      return a->index == b->index;
    case Tag::Suc:
      if (a->count != b->count) return false;
      break;
    case Tag::Univ:
      return a->from == b->from;
    case Tag::Lift:
      if (a->from != b->from || a->to != b->to) return false;
      break;
    case Tag::Ref:
      return a->def == b->def || a->def->name == b->def->name;
    default:
      break;
  }
  if (a->kids.size() != b->kids.size()) return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i) {
    if (!alpha_equal(a->kids[i], b->kids[i])) return false;
  }
  return true;
}

bool mentions(const Term& t, std::size_t k) {
  if (t->tag == Tag::Var) return t->index == k;
  for (std::size_t i = 0; i < t->kids.size(); ++i) {
    if (mentions(t->kids[i], k + binders_of(t->tag, i))) return true;
  }
  return false;
}

std::size_t term_size(const Term& t) {
  std::size_t n = t->tag == Tag::Suc ? t->count : 1;
  for (const auto& k : t->kids) n += term_size(k);
  return n;
}

std::optional<std::uint64_t> as_numeral(const Term& t) {
  if (t->tag == Tag::Zero) return 0;
  if (t->tag == Tag::Suc && t->kids[0]->tag == Tag::Zero) return t->count;
  return std::nullopt;
}

Term unfold_refs(const Term& t) {
  if (t->tag == Tag::Ref) return unfold_refs(t->def->body);
  if (t->kids.empty()) return t;
  std::vector<Term> kids;
  kids.reserve(t->kids.size());
  for (const auto& k : t->kids) kids.push_back(unfold_refs(k));
  return mk::with_kids(*t, std::move(kids));
}

}  // namespace prtt
