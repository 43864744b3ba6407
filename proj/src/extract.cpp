#include "prtt/extract.hpp"

#include "prtt/checker.hpp"
#include "prtt/nbe.hpp"
#include "prtt/printer.hpp"

#include <boost/multiprecision/integer.hpp>

namespace prtt {

Natural pair(const Natural& m, const Natural& n) {
  Natural s = m + n;
  return s * (s + 1) / 2 + m;
}

std::pair<Natural, Natural> unpair(const Natural& p) {
  // Largest d with d(d+1)/2 <= p.
  Natural d = (boost::multiprecision::sqrt(Natural(8 * p + 1)) - 1) / 2;
  Natural m = p - d * (d + 1) / 2;
  return {m, d - m};
}

// ---------------------------------------------------------------------------
// Library of PR programs used by extracted code. Evaluation is by need, so
// a step that ignores its accumulator costs O(1) per unfolding.

namespace lib {

using pr::comp;
using pr::constant;
using pr::primrec;
using pr::proj;
using pr::succ;

PRFun pred() {
  static const PRFun f = primrec(constant(0, 0), proj(2, 0));
  return f;
}

PRFun iszero() {
  static const PRFun f = primrec(constant(0, 1), constant(2, 0));
  return f;
}

// cond(c, x, y) = x if c = 0 else y
PRFun cond() {
  static const PRFun f = primrec(proj(2, 0), proj(4, 3));
  return f;
}

// add(a, b), recursing on a
PRFun add() {
  static const PRFun f = primrec(proj(1, 0), comp(succ(), {proj(3, 1)}));
  return f;
}

// monus(a, b) = max(a - b, 0), b predecessor steps
PRFun monus() {
  static const PRFun f = [] {
    PRFun flipped = primrec(proj(1, 0), comp(pred(), {proj(3, 1)}));
    return comp(flipped, {proj(2, 1), proj(2, 0)});
  }();
  return f;
}

// tri(d) = d(d+1)/2
PRFun tri() {
  static const PRFun f =
      primrec(constant(0, 0), comp(add(), {comp(succ(), {proj(2, 0)}), proj(2, 1)}));
  return f;
}

PRFun twice() {
  static const PRFun f = comp(add(), {proj(1, 0), proj(1, 0)});
  return f;
}

PRFun parity() {
  static const PRFun f = primrec(constant(0, 0), comp(iszero(), {proj(2, 1)}));
  return f;
}

// half(c): h(k+1) = h(k) + parity(k)
PRFun half() {
  static const PRFun f =
      primrec(constant(0, 0), comp(add(), {comp(parity(), {proj(2, 0)}), proj(2, 1)}));
  return f;
}

PRFun pair() {
  static const PRFun f = comp(add(), {proj(2, 0), comp(tri(), {comp(add(), {proj(2, 0), proj(2, 1)})})});
  return f;
}

// First component of unpair(z): starting from r = z, subtract 1, 2, 3, ...
// while possible; what remains is z - tri(d).
PRFun unpair_fst() {
  static const PRFun f = [] {
    // step over (k, r, z)
    PRFun k1 = comp(succ(), {proj(3, 0)});
    PRFun r = proj(3, 1);
    PRFun fits = comp(monus(), {k1, r});   // 0 iff k+1 <= r
    PRFun taken = comp(monus(), {r, k1});
    PRFun step = comp(cond(), {fits, taken, r});
    PRFun loop = primrec(proj(1, 0), step);
    return comp(loop, {proj(1, 0), proj(1, 0)});
  }();
  return f;
}

// d(z) = z - #{k < z : tri(k+1) > z}; second component is d - fst.
PRFun unpair_snd() {
  static const PRFun f = [] {
    // step over (k, fails, z)
    PRFun fails = proj(3, 1);
    PRFun over = comp(monus(), {comp(tri(), {comp(succ(), {proj(3, 0)})}), proj(3, 2)});
    PRFun verdict = comp(cond(), {over, constant(3, 0), constant(3, 1)});
    PRFun step = comp(cond(), {fails, verdict, comp(succ(), {fails})});
    PRFun loop = primrec(constant(1, 0), step);
    PRFun diag = comp(monus(), {proj(1, 0), comp(loop, {proj(1, 0), proj(1, 0)})});
    return comp(monus(), {diag, unpair_fst()});
  }();
  return f;
}

}  // namespace lib

PRFun pr_pair() { return lib::pair(); }
PRFun pr_unpair_fst() { return lib::unpair_fst(); }
PRFun pr_unpair_snd() { return lib::unpair_snd(); }

// ---------------------------------------------------------------------------
// Encodings

namespace {

bool is_closed(const Term& t, std::size_t depth = 0) {
  if (t->tag == Tag::Var) return t->index < depth;
  for (std::size_t i = 0; i < t->kids.size(); ++i) {
    if (!is_closed(t->kids[i], depth + binders_of(t->tag, i))) return false;
  }
  return true;
}

Term normal_type(const Term& t) { return normalize_type(Context{}, t); }

Term numeral_of(const Natural& c) {
  if (c > std::numeric_limits<std::uint64_t>::max()) {
    throw std::overflow_error("code too large for a numeral");
  }
  return mk::numeral(static_cast<std::uint64_t>(c));
}

[[noreturn]] void not_level_zero(const Term& ty) {
  throw ExtractError("NotLevelZero", print_term(ty) + " is not a level-0 data type");
}

Natural enc_value(const Term& ty, const Term& v) {
  switch (ty->tag) {
    case Tag::Nat: {
      auto n = as_numeral(v);
      if (!n) throw std::invalid_argument("not a numeral: " + print_term(v));
      return *n;
    }
    case Tag::Unit:
    case Tag::Eq:
      return 0;
    case Tag::Empty:
      throw std::invalid_argument("Empty has no values");
    case Tag::Sum:
      if (v->tag == Tag::Inl) return 2 * enc_value(ty->kids[0], v->kids[0]);
      if (v->tag == Tag::Inr) return 2 * enc_value(ty->kids[1], v->kids[0]) + 1;
      throw std::invalid_argument("not an injection: " + print_term(v));
    case Tag::Sigma: {
      if (v->tag != Tag::Pair) throw std::invalid_argument("not a pair: " + print_term(v));
      Term b_ty = normal_type(instantiate(ty->kids[1], v->kids[0]));
      return pair(enc_value(ty->kids[0], v->kids[0]), enc_value(b_ty, v->kids[1]));
    }
    default:
      not_level_zero(ty);
  }
}

std::optional<Term> dec_value(const Term& ty, const Natural& c) {
  switch (ty->tag) {
    case Tag::Nat:
      return numeral_of(c);
    case Tag::Unit:
      if (c != 0) return std::nullopt;
      return mk::star();
    case Tag::Empty:
      return std::nullopt;
    case Tag::Eq:
      if (c != 0 || !alpha_equal(ty->kids[1], ty->kids[2])) return std::nullopt;
      return mk::refl(ty->kids[1]);
    case Tag::Sum: {
      bool right = (c % 2) == 1;
      auto v = dec_value(ty->kids[right ? 1 : 0], c / 2);
      if (!v) return std::nullopt;
      return right ? mk::inr(*v) : mk::inl(*v);
    }
    case Tag::Sigma: {
      auto [m, n] = unpair(c);
      auto a = dec_value(ty->kids[0], m);
      if (!a) return std::nullopt;
      auto b = dec_value(normal_type(instantiate(ty->kids[1], *a)), n);
      if (!b) return std::nullopt;
      return mk::pair(*a, *b);
    }
    default:
      not_level_zero(ty);
  }
}

// All values of a finite type; nothing for an infinite one.
std::optional<std::vector<Term>> finite_values(const Term& ty) {
  switch (ty->tag) {
    case Tag::Nat:
      return std::nullopt;
    case Tag::Unit:
      return std::vector<Term>{mk::star()};
    case Tag::Empty:
      return std::vector<Term>{};
    case Tag::Eq:
      if (alpha_equal(ty->kids[1], ty->kids[2])) return std::vector<Term>{mk::refl(ty->kids[1])};
      return std::vector<Term>{};
    case Tag::Sum: {
      auto l = finite_values(ty->kids[0]);
      auto r = finite_values(ty->kids[1]);
      if (!l || !r) return std::nullopt;
      std::vector<Term> out;
      for (const auto& a : *l) out.push_back(mk::inl(a));
      for (const auto& b : *r) out.push_back(mk::inr(b));
      return out;
    }
    case Tag::Sigma: {
      auto as = finite_values(ty->kids[0]);
      if (!as) return std::nullopt;
      std::vector<Term> out;
      for (const auto& a : *as) {
        auto bs = finite_values(normal_type(instantiate(ty->kids[1], a)));
        if (!bs) return std::nullopt;
        for (const auto& b : *bs) out.push_back(mk::pair(a, b));
      }
      return out;
    }
    default:
      not_level_zero(ty);
  }
}

std::optional<Natural> card_of(const Term& ty) {
  if (auto vs = finite_values(ty)) return Natural(vs->size());
  if (ty->tag == Tag::Sigma && !mentions(ty->kids[1], 0)) {
    auto a = card_of(ty->kids[0]);
    auto b = card_of(shift(ty->kids[1], 0, -1));
    if ((a && *a == 0) || (b && *b == 0)) return Natural(0);
  }
  return std::nullopt;
}

}  // namespace

Encoding encode_type(const Term& ty_in) {
  if (!is_closed(ty_in)) {
    throw ExtractError("NotGroundType", print_term(ty_in) + " mentions free variables");
  }
  Checker checker;
  std::optional<Level> level;
  try {
    level = checker.check_type(Context{}, ty_in);
  } catch (const TypeError&) {
    not_level_zero(ty_in);
  }
  if (!level || *level != Level{0}) not_level_zero(ty_in);
  Term ty = normal_type(ty_in);

  Encoding e;
  e.ty = ty;
  e.card = card_of(ty);
  e.enc = [ty](const Term& v) { return enc_value(ty, v); };
  e.valid = [ty](const Natural& c) { return dec_value(ty, c).has_value(); };
  e.dec = [ty](const Natural& c) -> Term {
    if (auto v = dec_value(ty, c)) return *v;
    for (unsigned probe = 0; probe < 4096; ++probe) {
      if (auto v = dec_value(ty, probe)) return *v;
    }
    throw std::domain_error("no inhabitant of " + print_term(ty) + " to default to");
  };
  return e;
}

// ---------------------------------------------------------------------------
// Compilation of normal forms

namespace {

using pr::comp;
using pr::constant;
using pr::primrec;
using pr::proj;

// Argument position of each de Bruijn variable (index 0 first).
struct Layout {
  std::size_t arity = 0;
  std::vector<std::size_t> pos;

  // Binds `fresh` new variables at positions 0..fresh-1, the last bound
  // being de Bruijn index 0, and shifts the rest.
  Layout under(std::size_t fresh) const {
    Layout l;
    l.arity = arity + fresh;
    for (std::size_t i = 0; i < fresh; ++i) l.pos.push_back(fresh - 1 - i);
    for (std::size_t p : pos) l.pos.push_back(p + fresh);
    return l;
  }

  std::vector<PRFun> identity() const {
    std::vector<PRFun> v;
    for (std::size_t i = 0; i < arity; ++i) v.push_back(proj(arity, i));
    return v;
  }
};

[[noreturn]] void not_first_order(const Term& t, const char* why) {
  throw ExtractError("NotFirstOrder",
                     std::string(why) + " in extracted normal form: " + dump_term(t));
}

// Body of a normal-form lambda with `n` binders.
const Term& peel(const Term& t, std::size_t n) {
  const Term* cur = &t;
  for (std::size_t i = 0; i < n; ++i) {
    if ((*cur)->tag != Tag::Lam) not_first_order(t, "eliminator branch is not a lambda");
    cur = &(**cur)[1];
  }
  return *cur;
}

bool motive_depends(const Term& motive) {
  if (motive->tag != Tag::Lam) return true;
  return mentions((*motive)[1], 0);
}

PRFun apply_with(const PRFun& g, PRFun first, const Layout& l) {
  std::vector<PRFun> args{std::move(first)};
  for (auto& p : l.identity()) args.push_back(p);
  return comp(g, std::move(args));
}

// (fst e, snd e) ~> e, bottom up. Normal forms are η-long, so a Σ-typed
// accumulator comes back fully expanded; re-pairing it would cost two
// unpairings per use.
Term contract_pairs(const Term& t) {
  if (t->kids.empty()) return t;
  std::vector<Term> kids;
  bool changed = false;
  for (const auto& k : t->kids) {
    kids.push_back(contract_pairs(k));
    changed = changed || kids.back() != k;
  }
  if (t->tag == Tag::Pair && kids[0]->tag == Tag::Fst && kids[1]->tag == Tag::Snd &&
      alpha_equal((*kids[0])[0], (*kids[1])[0])) {
    return (*kids[0])[0];
  }
  return changed ? mk::with_kids(*t, std::move(kids)) : t;
}

PRFun compile(const Term& t, const Layout& l) {
  const TermNode& n = *t;
  switch (n.tag) {
    case Tag::Var:
      if (n.index >= l.pos.size()) not_first_order(t, "unbound variable");
      return proj(l.arity, l.pos[n.index]);
    case Tag::Zero:
    case Tag::Star:
    case Tag::Refl:
      return constant(l.arity, 0);
    case Tag::Suc: {
      if (auto v = as_numeral(t)) return constant(l.arity, *v);
      PRFun f = compile(n[0], l);
      for (std::uint64_t i = 0; i < n.count; ++i) f = comp(pr::succ(), {f});
      return f;
    }
    case Tag::Pair:
      return comp(lib::pair(), {compile(n[0], l), compile(n[1], l)});
    case Tag::Fst:
      return comp(lib::unpair_fst(), {compile(n[0], l)});
    case Tag::Snd:
      return comp(lib::unpair_snd(), {compile(n[0], l)});
    case Tag::Inl:
      return comp(lib::twice(), {compile(n[0], l)});
    case Tag::Inr:
      return comp(pr::succ(), {comp(lib::twice(), {compile(n[0], l)})});
    case Tag::UnitInd:
      return compile(n[1], l);
    case Tag::EqInd:
      return compile(n[1], l);
    case Tag::ExFalso:
      return constant(l.arity, 0);
    case Tag::NatInd: {
      PRFun base = compile(n[1], l);
      Layout inner = l.under(2);
      PRFun body = compile(peel(n[2], 2), inner);
      PRFun loop;
      if (!motive_depends(n[0])) {
        loop = primrec(base, body);
      } else {
        // Eliminate into the total space Σ(k : Nat). M k and project.
        PRFun start = comp(lib::pair(), {constant(l.arity, 0), base});
        std::vector<PRFun> h_args{proj(inner.arity, 0),
                                  comp(lib::unpair_snd(), {proj(inner.arity, 1)})};
        for (std::size_t i = 2; i < inner.arity; ++i) h_args.push_back(proj(inner.arity, i));
        PRFun next = comp(body, std::move(h_args));
        PRFun step = comp(lib::pair(), {comp(pr::succ(), {proj(inner.arity, 0)}), next});
        loop = comp(lib::unpair_snd(), {primrec(start, step)});
        if (l.arity + 1 != loop->arity) throw std::logic_error("total-space arity");
      }
      return apply_with(loop, compile(n[3], l), l);
    }
    case Tag::SumInd: {
      // G(c, Γ) = cond(parity c, left(half c, Γ), right(half c, Γ))
      Layout with_code = l.under(1);
      Layout branch = l.under(1);
      PRFun left = compile(peel(n[1], 1), branch);
      PRFun right = compile(peel(n[2], 1), branch);
      std::size_t a = with_code.arity;
      PRFun code = proj(a, 0);
      PRFun half = comp(lib::half(), {code});
      auto call = [&](const PRFun& br) {
        std::vector<PRFun> args{half};
        for (std::size_t i = 1; i < a; ++i) args.push_back(proj(a, i));
        return comp(br, std::move(args));
      };
      PRFun g = comp(lib::cond(), {comp(lib::parity(), {code}), call(left), call(right)});
      return apply_with(g, compile(n[3], l), l);
    }
    case Tag::Lift:
      return compile(n[0], l);
    default:
      not_first_order(t, "higher-type or type-level subterm");
  }
}

}  // namespace

std::optional<std::size_t> function_arity(const Term& type_in) {
  Term type = erase_lifts(type_in);
  std::size_t k = 0;
  while (type->tag == Tag::Pi) {
    if ((*type)[0]->tag != Tag::Nat || mentions((*type)[1], 0)) return std::nullopt;
    type = shift((*type)[1], 0, -1);
    ++k;
  }
  if (type->tag != Tag::Nat) return std::nullopt;
  return k;
}

std::size_t extract_arity(const Term& type_in) {
  Term type = erase_lifts(type_in);
  std::size_t k = 0;
  while (type->tag == Tag::Pi) {
    if ((*type)[0]->tag != Tag::Nat || mentions((*type)[1], 0)) {
      throw ExtractError("NotFirstOrder", "argument " + std::to_string(k + 1) + " of " +
                                              print_term(type_in) + " is not Nat");
    }
    type = shift((*type)[1], 0, -1);
    ++k;
  }
  if (type->tag != Tag::Nat) {
    throw ExtractError("NotGroundType", "result type of " + print_term(type_in) + " is not Nat");
  }
  return k;
}

Term applied_to_vars(const Term& f, std::size_t k) {
  std::vector<Term> xs;
  for (std::size_t i = 0; i < k; ++i) xs.push_back(mk::var(k - 1 - i));
  return mk::apps(f, xs);
}

PRFun extract(std::size_t k, const Term& body) {
  Context ctx = Context::nats(k);
  Checker checker;
  TypedTerm typed = checker.infer(ctx, body);
  if (!checker.conv_types(ctx, typed.type, mk::nat())) {
    throw ExtractError("NotGroundType",
                       "extraction needs a term of type Nat, got " + print_term(typed.type, ctx));
  }
  Term nf = normalize(ctx, body, mk::nat());
  Layout l;
  l.arity = k;
  for (std::size_t i = 0; i < k; ++i) l.pos.push_back(k - 1 - i);
  return compile(contract_pairs(nf), l);
}

Term instantiate_nats(const Term& body, const std::vector<Natural>& args) {
  Term t = body;
  for (std::size_t i = args.size(); i-- > 0;) t = subst(t, 0, numeral_of(args[i]));
  return t;
}

std::vector<std::vector<Natural>> full_grid(std::size_t k, unsigned bound) {
  std::vector<std::vector<Natural>> out{{}};
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::vector<Natural>> next;
    for (const auto& row : out) {
      for (unsigned v = 0; v <= bound; ++v) {
        auto r = row;
        r.push_back(v);
        next.push_back(std::move(r));
      }
    }
    out = std::move(next);
  }
  return out;
}

DifferentialReport differential_test(const PRFun& program, std::size_t k, const Term& body,
                                     const std::vector<std::vector<Natural>>& grid,
                                     std::uint64_t pr_budget) {
  DifferentialReport r;
  for (const auto& args : grid) {
    if (args.size() != k) throw std::invalid_argument("grid tuple of the wrong length");
    Natural expected = canonical_nat(instantiate_nats(body, args));
    Natural actual = eval_pr(program, args, pr_budget);
    ++r.checked;
    if (expected != actual) r.mismatches.push_back({args, expected, actual});
  }
  return r;
}

DifferentialReport differential_test(std::size_t k, const Term& body,
                                     const std::vector<std::vector<Natural>>& grid,
                                     std::uint64_t pr_budget) {
  return differential_test(extract(k, body), k, body, grid, pr_budget);
}

}  // namespace prtt
