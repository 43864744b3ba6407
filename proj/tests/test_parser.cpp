#include "prtt/module.hpp"
#include "prtt/parser.hpp"
#include "prtt/printer.hpp"

#include <doctest.h>

#include <string>

using namespace prtt;

namespace {

bool span_inside(const SourceSpan& s, const std::string& text) {
  std::size_t lines = 1;
  for (char c : text) lines += c == '\n';
  return s.line >= 1 && s.line <= lines && s.column >= 1 && s.length >= 1;
}

}  // namespace

TEST_CASE("numerals and suc") {
  auto decls = resolve(parse_module("def two : Nat := suc (suc zero)"));
  REQUIRE(decls.size() == 1);
  CHECK(decls[0].name == "two");
  CHECK(alpha_equal(decls[0].body, mk::suc(mk::suc(mk::zero()))));
  CHECK(alpha_equal(resolve_expr(parse_expr("3")), mk::numeral(3)));
}

TEST_CASE("missing body is a parse error at end of input") {
  const std::string text = "def id1 : (A : U0) -> ";
  try {
    parse_module(text);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.kind() == "ParseError");
    REQUIRE(e.span().has_value());
    CHECK(e.span()->line == 1);
    CHECK(e.span()->column == text.size() + 1);
    CHECK(e.message().find("end of input") != std::string::npos);
    CHECK_FALSE(e.expected().empty());
  }
}

TEST_CASE("pi in U0 parses; the checker rejects it") {
  auto m = parse_module("def pi0 : U0 := (n : Nat) -> Nat");
  auto decls = resolve(m);
  CHECK(decls[0].body->tag == Tag::Pi);
}

TEST_CASE("references to earlier declarations") {
  auto decls = resolve(parse_module(
      "def add : Nat -> Nat -> Nat := fun (m : Nat) (n : Nat) => ind (fun (_ : Nat) => Nat) n (fun (k : Nat) (acc : Nat) => suc acc) m\n"
      "def two : Nat := 2\n"
      "def four : Nat := add two two\n"));
  REQUIRE(decls.size() == 3);
  const Term& b = decls[2].body;
  REQUIRE(b->tag == Tag::App);
  CHECK((*b)[1]->tag == Tag::Ref);
  CHECK((*b)[1]->def == decls[1].def);
}

TEST_CASE("unbound identifier") {
  try {
    resolve(parse_module("def x : Nat := foo"));
    FAIL("expected a resolve error");
  } catch (const ResolveError& e) {
    CHECK(e.kind() == "UnboundIdentifier");
    CHECK(e.name() == "foo");
    REQUIRE(e.span().has_value());
    CHECK(e.span()->column == 16);
  }
}

TEST_CASE("duplicate definition") {
  try {
    resolve(parse_module("def x : Nat := 1\ndef x : Nat := 2"));
    FAIL("expected a resolve error");
  } catch (const ResolveError& e) {
    CHECK(e.kind() == "DuplicateDefinition");
    CHECK(e.span()->line == 2);
  }
}

TEST_CASE("no forward references") {
  CHECK_THROWS_AS(resolve(parse_module("def a : Nat := b\ndef b : Nat := 1")), ResolveError);
}

TEST_CASE("shadowed binder resolves to the innermost") {
  Term t = resolve_expr(parse_expr("fun (n : Nat) => fun (n : Nat) => n"));
  CHECK(alpha_equal(t, mk::lam(mk::nat(), mk::lam(mk::nat(), mk::var(0)))));
  Term u = resolve_expr(parse_expr("fun (n : Nat) (m : Nat) => n"));
  CHECK(alpha_equal(u, mk::lam(mk::nat(), mk::lam(mk::nat(), mk::var(1)))));
}

TEST_CASE("surface sugar") {
  CHECK(alpha_equal(resolve_expr(parse_expr("Nat -> Nat")), mk::arrow(mk::nat(), mk::nat())));
  CHECK(alpha_equal(resolve_expr(parse_expr("Nat → Nat")), mk::arrow(mk::nat(), mk::nat())));
  CHECK(alpha_equal(resolve_expr(parse_expr("Nat * Unit")), mk::product(mk::nat(), mk::unit())));
  CHECK(alpha_equal(resolve_expr(parse_expr("Nat × Unit")), mk::product(mk::nat(), mk::unit())));
  CHECK(alpha_equal(resolve_expr(parse_expr("λ (x : Nat) ⇒ x")), mk::lam(mk::nat(), mk::var(0))));
  CHECK(alpha_equal(resolve_expr(parse_expr("Unit + Nat * Nat")),
                    mk::sum(mk::unit(), mk::product(mk::nat(), mk::nat()))));
  CHECK(alpha_equal(resolve_expr(parse_expr("(x : Nat) -> Eq Nat x x")),
                    mk::pi(mk::nat(), mk::eq(mk::nat(), mk::var(0), mk::var(0)))));
  CHECK(alpha_equal(resolve_expr(parse_expr("Nat -> Nat -> Nat")),
                    mk::arrow(mk::nat(), mk::arrow(mk::nat(), mk::nat()))));
  CHECK(alpha_equal(resolve_expr(parse_expr("lift U0")), mk::lift(Level{0}, Level{1}, mk::univ(Level{0}))));
  CHECK(alpha_equal(resolve_expr(parse_expr("(1, star)")), mk::pair(mk::numeral(1), mk::star())));
}

TEST_CASE("comments and layout are ignored") {
  auto decls = resolve(parse_module("-- comment\ndef  a\n : Nat\n :=\n 1 -- trailing\n"));
  CHECK(alpha_equal(decls[0].body, mk::numeral(1)));
}

TEST_CASE("errors carry spans inside the input") {
  const char* bad[] = {"def", "def x", "def x :=", "def x : Nat := (1,", "def x : Nat := fun", "import",
                       "def x : Nat := ind 1 2", "def 1 := 2", "def x := @", "def x : Nat := ((1)"};
  for (const char* text : bad) {
    INFO(text);
    try {
      resolve(parse_module(text));
      FAIL("expected an error");
    } catch (const Diagnostic& e) {
      REQUIRE(e.span().has_value());
      CHECK(span_inside(*e.span(), text));
    }
  }
}

TEST_CASE("print, resolve, parse round trip over the corpus") {
  for (const char* name : {"arith.prtt", "cnf.prtt", "logic.prtt"}) {
    INFO(name);
    Loader loader;
    const Module& m = loader.load(std::string(PRTT_CORPUS_DIR) + "/" + name);
    std::string text1 = print_decls(m.decls);
    auto decls1 = resolve(parse_module(text1), m.imported);
    REQUIRE(decls1.size() == m.decls.size());
    for (std::size_t i = 0; i < decls1.size(); ++i) {
      INFO(decls1[i].name);
      CHECK(alpha_equal(decls1[i].body, m.decls[i].body));
      if (m.decls[i].type && decls1[i].type) CHECK(alpha_equal(*decls1[i].type, *m.decls[i].type));
    }
    CHECK(print_decls(decls1) == text1);
  }
}
