#include "oracles.hpp"

#include "prtt/checker.hpp"
#include "prtt/module.hpp"
#include "prtt/nbe.hpp"
#include "prtt/printer.hpp"
#include "prtt/termgen.hpp"

#include <doctest.h>

#include <string>

using namespace prtt;

namespace {

const Module& arith() {
  static Loader loader;
  return loader.load(std::string(PRTT_CORPUS_DIR) + "/arith.prtt");
}

Term call(const std::string& name, std::vector<std::uint64_t> args) {
  Term t = mk::ref(arith().find(name));
  for (auto a : args) t = mk::app(t, mk::numeral(a));
  return t;
}

}  // namespace

TEST_CASE("eval examples") {
  Term motive = mk::lam(mk::nat(), mk::nat());
  Term step = mk::lam(mk::nat(), mk::lam(mk::nat(), mk::suc(mk::var(0))));
  ValuePtr v = eval({}, mk::nat_ind(motive, mk::numeral(4), step, mk::zero()));
  CHECK(value_numeral(v) == Natural(4));
  CHECK(value_numeral(eval({}, mk::app(mk::lam(mk::nat(), mk::var(0)), mk::zero()))) == Natural(0));
  CHECK(value_numeral(eval({}, call("add", {2, 3}))) == Natural(5));
}

TEST_CASE("quote examples") {
  CHECK(alpha_equal(quote(val::zero(), 0, val::nat()), mk::zero()));
  ValuePtr fty = val::arrow(val::nat(), val::nat());
  ValuePtr f = val::fresh(0, fty);
  CHECK(alpha_equal(quote(f, 1, fty), mk::lam(mk::nat(), mk::app(mk::var(1), mk::var(0)))));
  ValuePtr sty = val::sigma(val::nat(), Closure([](const ValuePtr&) { return val::unit(); }));
  CHECK(alpha_equal(quote(val::pair(val::zero(), val::star()), 0, sty), mk::pair(mk::zero(), mk::star())));
}

TEST_CASE("normalize examples") {
  Term t = mk::suc(call("add", {1, 1}));
  CHECK(alpha_equal(normalize({}, t, mk::nat()), mk::numeral(3)));
  Term id = mk::lam(mk::nat(), mk::app(mk::lam(mk::nat(), mk::var(0)), mk::var(0)));
  CHECK(alpha_equal(normalize({}, id, mk::arrow(mk::nat(), mk::nat())), mk::lam(mk::nat(), mk::var(0))));
  CHECK(alpha_equal(normalize({}, call("pred", {4}), mk::nat()), mk::numeral(3)));
}

TEST_CASE("canonical_nat examples") {
  CHECK(canonical_nat(mk::suc(mk::suc(mk::zero()))) == 2);
  CHECK(canonical_nat(call("exp", {2, 10})) == 1024);
  CHECK(canonical_nat(call("gcd", {54, 24})) == 6);
  CHECK(canonical_nat(mk::ref(arith().find("ten_pow"))) == 1024);
  CHECK(canonical_nat(call("exp", {2, 20})) == 1048576);
}

TEST_CASE("canonical_nat reports open terms") {
  CHECK_THROWS_AS(canonical_nat(mk::var(0)), std::exception);
}

TEST_CASE("step budget") {
  {
    StepBudget b(10);
    CHECK_THROWS_AS(canonical_nat(call("mult", {5, 5})), BudgetExceeded);
  }
  StepBudget b(1'000'000);
  CHECK(canonical_nat(call("mult", {5, 5})) == 25);
  CHECK(b.used() > 0);
}

TEST_CASE("corpus arithmetic against reference values") {
  for (std::uint64_t m = 0; m <= 6; ++m) {
    for (std::uint64_t n = 0; n <= 6; ++n) {
      CHECK(canonical_nat(call("add", {m, n})) == m + n);
      CHECK(canonical_nat(call("mult", {m, n})) == m * n);
      CHECK(canonical_nat(call("monus", {m, n})) == (m > n ? m - n : 0));
    }
  }
}

TEST_CASE("normalize is idempotent") {
  TermGen g(21);
  for (int i = 0; i < 300; ++i) {
    Term ty;
    Term t = g.closed_term(40, &ty);
    Term n1 = normalize({}, t, ty);
    CHECK(alpha_equal(normalize({}, n1, ty), n1));
  }
  for (int i = 0; i < 300; ++i) {
    std::size_t k = 1 + g.below(3);
    Term t = g.nat_term(40, k);
    Context ctx = Context::nats(k);
    Term n1 = normalize(ctx, t, mk::nat());
    INFO(print_term(t, ctx));
    CHECK(alpha_equal(normalize(ctx, n1, mk::nat()), n1));
  }
}

TEST_CASE("normalize agrees with small-step reduction") {
  TermGen g(2024);
  for (int i = 0; i < 300; ++i) {
    Term ty;
    Term t = g.closed_term(50, &ty);
    auto expected = oracle::small_step_normalize(t);
    REQUIRE(expected.has_value());
    INFO(print_term(t), " : ", print_term(ty));
    CHECK(alpha_equal(normalize({}, t, ty), *expected));
  }
}

TEST_CASE("conv matches small-step normal forms") {
  Checker c;
  TermGen g(77);
  std::vector<std::pair<Term, Term>> nats;
  for (int i = 0; i < 80; ++i) {
    Term t = g.nat_term(30);
    nats.push_back({t, *oracle::small_step_normalize(t)});
  }
  for (std::size_t i = 0; i < nats.size(); ++i) {
    for (std::size_t j = i; j < nats.size(); j += 3) {
      CHECK(c.conv({}, nats[i].first, nats[j].first, mk::nat()) ==
            alpha_equal(nats[i].second, nats[j].second));
    }
  }
}

TEST_CASE("canonicity over generated terms") {
  TermGen g(8);
  for (int i = 0; i < 500; ++i) {
    Term t = g.nat_term(60);
    CHECK_NOTHROW(canonical_nat(t));
  }
}
