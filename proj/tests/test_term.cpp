#include "generators.hpp"
#include "oracles.hpp"

#include "prtt/printer.hpp"
#include "prtt/term.hpp"

#include <doctest.h>

#include <functional>
#include <random>

using namespace prtt;

TEST_CASE("subst examples") {
  CHECK(alpha_equal(subst(mk::var(0), 0, mk::zero()), mk::zero()));
  CHECK(alpha_equal(subst(mk::suc(mk::var(0)), 0, mk::zero()), mk::suc(mk::zero())));
  Term t = mk::lam(mk::nat(), mk::var(1));
  CHECK(alpha_equal(subst(t, 0, mk::zero()), mk::lam(mk::nat(), mk::zero())));
  CHECK(alpha_equal(oracle::named_subst(t, 0, mk::zero()), mk::lam(mk::nat(), mk::zero())));
}

TEST_CASE("shift examples") {
  CHECK(alpha_equal(shift(mk::var(0), 0, 1), mk::var(1)));
  CHECK(alpha_equal(shift(mk::var(0), 1, 1), mk::var(0)));
  Term t = mk::lam(mk::nat(), mk::var(1));
  CHECK(alpha_equal(shift(t, 0, 2), mk::lam(mk::nat(), mk::var(3))));
  CHECK(alpha_equal(oracle::named_shift(t, 0, 2), mk::lam(mk::nat(), mk::var(3))));
  CHECK_THROWS_AS(shift(mk::var(0), 0, -1), std::logic_error);
}

TEST_CASE("collapse_lifts examples") {
  const Level z{0}, o{1};
  CHECK(alpha_equal(collapse_lifts(mk::lift(z, z, mk::nat())), mk::nat()));
  CHECK(alpha_equal(collapse_lifts(mk::lift(o, o, mk::lift(z, o, mk::nat()))), mk::lift(z, o, mk::nat())));
  CHECK(alpha_equal(collapse_lifts(mk::lift(z, o, mk::sigma(mk::nat(), mk::nat()))),
                    mk::sigma(mk::lift(z, o, mk::nat()), mk::lift(z, o, mk::nat()))));
}

TEST_CASE("subst and shift agree with the named reference") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    Term t = gen::raw(rng, 1 + gen::below(rng, 20), 0, 3);
    Term u = gen::raw(rng, 1 + gen::below(rng, 8), 0, 2);
    std::size_t k = gen::below(rng, 3);
    INFO(dump_term(t), " k=", k, " u=", dump_term(u));
    CHECK(alpha_equal(subst(t, k, u), oracle::named_subst(t, k, u)));
    std::size_t cutoff = gen::below(rng, 3);
    std::ptrdiff_t amount = static_cast<std::ptrdiff_t>(gen::below(rng, 4));
    CHECK(alpha_equal(shift(t, cutoff, amount), oracle::named_shift(t, cutoff, amount)));
  }
}

TEST_CASE("substitution lemma") {
  // t[0:=u][0:=v] = t[1:=v↑][0:=u[0:=v]]
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    Term t = gen::raw(rng, 1 + gen::below(rng, 20), 0, 2);
    Term u = gen::raw(rng, 1 + gen::below(rng, 8), 0, 1);
    Term v = gen::raw(rng, 1 + gen::below(rng, 8), 0, 0);
    Term lhs = subst(subst(t, 0, u), 0, v);
    Term rhs = subst(subst(t, 1, shift(v, 0, 1)), 0, subst(u, 0, v));
    INFO(dump_term(t));
    CHECK(alpha_equal(lhs, rhs));
  }
}

TEST_CASE("shift round trip") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 1000; ++i) {
    Term t = gen::raw(rng, 1 + gen::below(rng, 20), 0, 3);
    std::size_t c = gen::below(rng, 3);
    CHECK(alpha_equal(shift(shift(t, c, 2), c, -2), t));
  }
}

TEST_CASE("collapse_lifts is idempotent and erasure-preserving") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 2000; ++i) {
    Term t = gen::lifted_type(rng, 4);
    Term c = collapse_lifts(t);
    INFO(dump_term(t));
    CHECK(alpha_equal(collapse_lifts(c), c));
    CHECK(alpha_equal(erase_lifts(c), erase_lifts(t)));
    // no identity lift and no lift directly over a lift
    std::function<bool(const Term&)> clean = [&](const Term& s) {
      if (s->tag == Tag::Lift && (s->from == s->to || (*s)[0]->tag == Tag::Lift)) return false;
      for (const auto& k : s->kids) {
        if (!clean(k)) return false;
      }
      return true;
    };
    CHECK(clean(c));
  }
}

TEST_CASE("term_size counts successors") {
  CHECK(term_size(mk::numeral(5)) == 6);
  CHECK(as_numeral(mk::numeral(5)) == 5u);
  CHECK_FALSE(as_numeral(mk::suc(mk::var(0))).has_value());
}
