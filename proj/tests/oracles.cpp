#include "oracles.hpp"

#include "prtt/prir.hpp"

#include <map>
#include <stdexcept>
#include <string>

namespace oracle {

using namespace prtt;

// ---------------------------------------------------------------------------
// Named terms

namespace {

struct Named;
using NamedPtr = std::shared_ptr<Named>;

// A term node where Var carries a name and binders carry the bound name.
struct Named {
  Tag tag;
  std::string name;  // Var: referenced name; Lam/Pi/Sigma: bound name
  std::uint64_t count = 0;
  Level from, to;
  DefinitionPtr def;
  std::vector<NamedPtr> kids;
};

bool binds(Tag tag, std::size_t i) {
  return i == 1 && (tag == Tag::Lam || tag == Tag::Pi || tag == Tag::Sigma);
}

struct Namer {
  std::size_t fresh = 0;
  std::string next() { return "b" + std::to_string(fresh++); }
};

std::string free_name(std::size_t i) { return "f" + std::to_string(i); }

// `scope` lists bound names innermost last; free index i beyond the scope
// becomes free_name(free_of(i)).
template <class FreeName>
NamedPtr to_named(const Term& t, std::vector<std::string>& scope, Namer& namer,
                  const FreeName& free_of) {
  auto n = std::make_shared<Named>();
  n->tag = t->tag;
  n->count = t->count;
  n->from = t->from;
  n->to = t->to;
  n->def = t->def;
  if (t->tag == Tag::Var) {
    if (t->index < scope.size()) {
      n->name = scope[scope.size() - 1 - t->index];
    } else {
      n->name = free_of(t->index - scope.size());
    }
    return n;
  }
  std::string bound;
  if (t->tag == Tag::Lam || t->tag == Tag::Pi || t->tag == Tag::Sigma) bound = namer.next();
  n->name = bound;
  for (std::size_t i = 0; i < t->kids.size(); ++i) {
    if (binds(t->tag, i)) {
      scope.push_back(bound);
      n->kids.push_back(to_named(t->kids[i], scope, namer, free_of));
      scope.pop_back();
    } else {
      n->kids.push_back(to_named(t->kids[i], scope, namer, free_of));
    }
  }
  return n;
}

template <class FreeIndex>
Term from_named(const NamedPtr& n, std::vector<std::string>& scope, const FreeIndex& index_of) {
  if (n->tag == Tag::Var) {
    for (std::size_t i = scope.size(); i-- > 0;) {
      if (scope[i] == n->name) return mk::var(scope.size() - 1 - i);
    }
    return mk::var(scope.size() + index_of(n->name));
  }
  TermNode node;
  node.tag = n->tag;
  node.count = n->count;
  node.from = n->from;
  node.to = n->to;
  node.def = n->def;
  node.name = n->name.empty() ? "x" : n->name;
  std::vector<Term> kids;
  for (std::size_t i = 0; i < n->kids.size(); ++i) {
    if (binds(n->tag, i)) {
      scope.push_back(n->name);
      kids.push_back(from_named(n->kids[i], scope, index_of));
      scope.pop_back();
    } else {
      kids.push_back(from_named(n->kids[i], scope, index_of));
    }
  }
  return mk::with_kids(node, std::move(kids));
}

bool occurs_free(const NamedPtr& n, const std::string& x) {
  if (n->tag == Tag::Var) return n->name == x;
  for (std::size_t i = 0; i < n->kids.size(); ++i) {
    if (binds(n->tag, i) && n->name == x) continue;
    if (occurs_free(n->kids[i], x)) return true;
  }
  return false;
}

NamedPtr rename(const NamedPtr& n, const std::string& from, const std::string& to) {
  auto m = std::make_shared<Named>(*n);
  if (n->tag == Tag::Var) {
    if (n->name == from) m->name = to;
    return m;
  }
  for (std::size_t i = 0; i < n->kids.size(); ++i) {
    if (binds(n->tag, i) && n->name == from) continue;
    m->kids[i] = rename(n->kids[i], from, to);
  }
  return m;
}

NamedPtr subst_named(const NamedPtr& n, const std::string& x, const NamedPtr& u, Namer& namer) {
  if (n->tag == Tag::Var) return n->name == x ? u : n;
  auto m = std::make_shared<Named>(*n);
  for (std::size_t i = 0; i < n->kids.size(); ++i) {
    if (binds(n->tag, i)) {
      if (n->name == x) continue;  // shadowed
      NamedPtr body = n->kids[i];
      if (occurs_free(u, n->name)) {
        std::string fresh = namer.next() + "'";
        body = rename(body, n->name, fresh);
        m->name = fresh;
      }
      m->kids[i] = subst_named(body, x, u, namer);
    } else {
      m->kids[i] = subst_named(n->kids[i], x, u, namer);
    }
  }
  return m;
}

std::size_t free_index(const std::string& name) {
  if (name.size() < 2 || name[0] != 'f') throw std::logic_error("unexpected free name " + name);
  return std::stoul(name.substr(1));
}

}  // namespace

Term named_subst(const Term& t, std::size_t k, const Term& u) {
  Namer namer;
  std::vector<std::string> scope;
  NamedPtr nt = to_named(t, scope, namer, [](std::size_t i) { return free_name(i); });
  // u lives outside variable k: its Var 0 is t's Var k+1
  NamedPtr nu = to_named(u, scope, namer, [k](std::size_t i) { return free_name(i + k + 1); });
  NamedPtr r = subst_named(nt, free_name(k), nu, namer);
  return from_named(r, scope, [k](const std::string& s) {
    std::size_t i = free_index(s);
    if (i == k) throw std::logic_error("substituted variable survived");
    return i < k ? i : i - 1;
  });
}

Term named_shift(const Term& t, std::size_t cutoff, std::ptrdiff_t amount) {
  Namer namer;
  std::vector<std::string> scope;
  NamedPtr nt = to_named(t, scope, namer, [](std::size_t i) { return free_name(i); });
  return from_named(nt, scope, [&](const std::string& s) -> std::size_t {
    std::size_t i = free_index(s);
    if (i < cutoff) return i;
    auto j = static_cast<std::ptrdiff_t>(i) + amount;
    if (j < 0) throw std::logic_error("negative index");
    return static_cast<std::size_t>(j);
  });
}

// ---------------------------------------------------------------------------
// Small-step reduction with its own de Bruijn operations

namespace {

Term up(const Term& t, std::size_t cutoff, std::ptrdiff_t d) {
  if (t->tag == Tag::Var) {
    if (t->index < cutoff) return t;
    return mk::var(static_cast<std::size_t>(static_cast<std::ptrdiff_t>(t->index) + d));
  }
  if (t->kids.empty()) return t;
  std::vector<Term> kids;
  for (std::size_t i = 0; i < t->kids.size(); ++i) kids.push_back(up(t->kids[i], cutoff + (binds(t->tag, i) ? 1 : 0), d));
  return mk::with_kids(*t, std::move(kids));
}

// t[j := u] where u is closed under the j binders crossed so far
Term put(const Term& t, std::size_t j, const Term& u) {
  if (t->tag == Tag::Var) {
    if (t->index == j) return up(u, 0, static_cast<std::ptrdiff_t>(j));
    if (t->index > j) return mk::var(t->index - 1);
    return t;
  }
  if (t->kids.empty()) return t;
  std::vector<Term> kids;
  for (std::size_t i = 0; i < t->kids.size(); ++i) kids.push_back(put(t->kids[i], j + (binds(t->tag, i) ? 1 : 0), u));
  return mk::with_kids(*t, std::move(kids));
}

Term beta(const Term& body, const Term& arg) { return put(body, 0, arg); }

Term prep(const Term& t) {
  if (t->tag == Tag::Ref) return prep(t->def->body);
  if (t->tag == Tag::Lift) return prep((*t)[0]);
  if (t->kids.empty()) return t;
  std::vector<Term> kids;
  for (const auto& k : t->kids) kids.push_back(prep(k));
  return mk::with_kids(*t, std::move(kids));
}

// Contraction at the root, if `t` is a redex.
std::optional<Term> contract(const Term& t) {
  const TermNode& n = *t;
  switch (n.tag) {
    case Tag::App:
      if (n[0]->tag == Tag::Lam) return beta((*n[0])[1], n[1]);
      break;
    case Tag::Fst:
      if (n[0]->tag == Tag::Pair) return (*n[0])[0];
      break;
    case Tag::Snd:
      if (n[0]->tag == Tag::Pair) return (*n[0])[1];
      break;
    case Tag::NatInd: {
      const Term& s = n[3];
      if (s->tag == Tag::Zero) return n[1];
      if (s->tag == Tag::Suc) {
        Term p = s->count == 1 ? (*s)[0] : mk::suc((*s)[0], s->count - 1);
        return mk::app(mk::app(n[2], p), mk::nat_ind(n[0], n[1], n[2], p));
      }
      break;
    }
    case Tag::SumInd:
      if (n[3]->tag == Tag::Inl) return mk::app(n[1], (*n[3])[0]);
      if (n[3]->tag == Tag::Inr) return mk::app(n[2], (*n[3])[0]);
      break;
    case Tag::UnitInd:
      if (n[2]->tag == Tag::Star) return n[1];
      break;
    case Tag::EqInd:
      if (n[4]->tag == Tag::Refl) return n[1];
      break;
    default:
      break;
  }
  return std::nullopt;
}

}  // namespace

std::optional<Term> step(const Term& t) {
  if (auto r = contract(t)) return r;
  for (std::size_t i = 0; i < t->kids.size(); ++i) {
    if (auto r = step(t->kids[i])) {
      std::vector<Term> kids = t->kids;
      kids[i] = *r;
      return mk::with_kids(*t, std::move(kids));
    }
  }
  return std::nullopt;
}

std::optional<Term> small_step_normalize(const Term& t, std::uint64_t fuel) {
  Term cur = prep(t);
  while (fuel-- > 0) {
    auto next = step(cur);
    if (!next) return cur;
    cur = *next;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Primitive recursion

Natural eval_pr(const PRFun& f, const std::vector<Natural>& args) {
  switch (f->op) {
    case PROp::Const:
      return f->value;
    case PROp::Succ:
      return args.at(0) + 1;
    case PROp::Proj:
      return args.at(f->index);
    case PROp::Comp: {
      std::vector<Natural> inner;
      for (std::size_t i = 1; i < f->kids.size(); ++i) inner.push_back(oracle::eval_pr(f->kids[i], args));
      return oracle::eval_pr(f->kids[0], inner);
    }
    case PROp::PrimRec: {
      std::vector<Natural> params(args.begin() + 1, args.end());
      Natural acc = oracle::eval_pr(f->kids[0], params);
      for (Natural m = 0; m < args.at(0); ++m) {
        std::vector<Natural> a{m, acc};
        a.insert(a.end(), params.begin(), params.end());
        acc = oracle::eval_pr(f->kids[1], a);
      }
      return acc;
    }
  }
  throw std::logic_error("bad PR node");
}

// ---------------------------------------------------------------------------
// Pairing and trees

std::pair<std::uint64_t, std::uint64_t> unpair_walk(std::uint64_t z) {
  std::uint64_t diag = 0, start = 0;
  while (start + diag + 1 <= z) {
    start += diag + 1;
    ++diag;
  }
  std::uint64_t a = z - start;
  return {a, diag - a};
}

std::uint64_t pair_walk(std::uint64_t a, std::uint64_t b) {
  std::uint64_t start = 0;
  for (std::uint64_t d = 0; d < a + b; ++d) start += d + 1;
  return start + a;
}

TreePtr unrank(std::uint64_t code) {
  auto t = std::make_shared<Tree>();
  if (code > 0) {
    auto [a, b] = unpair_walk(code - 1);
    t->l = unrank(a);
    t->r = unrank(b);
  }
  return t;
}

std::uint64_t rank(const TreePtr& t) {
  if (!t->l) return 0;
  return 1 + pair_walk(rank(t->l), rank(t->r));
}

int compare(const TreePtr& a, const TreePtr& b) {
  if (!a->l && !b->l) return 0;
  if (!a->l) return -1;
  if (!b->l) return 1;
  int c = compare(a->l, b->l);
  return c != 0 ? c : compare(a->r, b->r);
}

bool is_cnf(const TreePtr& t) {
  if (!t->l) return true;
  static const TreePtr leaf = std::make_shared<Tree>();
  const TreePtr& left_of_tail = t->r->l ? t->r->l : leaf;
  return is_cnf(t->l) && is_cnf(t->r) && compare(left_of_tail, t->l) <= 0;
}

}  // namespace oracle
