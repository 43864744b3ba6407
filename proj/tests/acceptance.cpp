// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "oracles.hpp"

#include "prtt/checker.hpp"
#include "prtt/extract.hpp"
#include "prtt/module.hpp"
#include "prtt/nbe.hpp"
#include "prtt/printer.hpp"
#include "prtt/prir.hpp"
#include "prtt/termgen.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace prtt;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

const fs::path kCorpus = PRTT_CORPUS_DIR;

std::vector<fs::path> corpus_files() {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(kCorpus)) {
    if (e.is_regular_file() && e.path().extension() == ".prtt") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

bool is_nat(const Term& ty) { return normalize_type({}, ty)->tag == Tag::Nat; }

Term app(const Term& f, std::initializer_list<Term> args) {
  Term t = f;
  for (const auto& a : args) t = mk::app(t, a);
  return t;
}

Term num(std::uint64_t n) { return mk::numeral(n); }

// 1. Closed Nat terms normalize to numerals.
Outcome canonicity() {
  std::size_t generated = 0, decls = 0, alarms = 0;
  Checker checker;
  TermGen gen(1);
  for (int i = 0; i < 1000; ++i) {
    Term t = gen.nat_term(60);
    checker.check({}, t, mk::nat());
    ++generated;
    try {
      canonical_nat(t);
    } catch (const NonCanonical&) {
      ++alarms;
    }
  }
  Loader loader;
  for (const auto& file : corpus_files()) {
    const Module& m = loader.load(file);
    for (const auto& d : m.decls) {
      if (!is_nat(d.def->type)) continue;
      ++decls;
      try {
        canonical_nat(mk::ref(d.def));
      } catch (const NonCanonical&) {
        ++alarms;
      }
    }
  }
  std::ostringstream s;
  s << generated << " generated terms, " << decls << " corpus decls, " << alarms << " NonCanonical";
  return {alarms == 0 && decls > 0, s.str()};
}

// 2. eval_pr . extract agrees with canonical_nat.
Outcome soundness() {
  Loader loader;
  const Module& arith = loader.load(kCorpus / "arith.prtt");
  const Module& cnf = loader.load(kCorpus / "cnf.prtt");
  std::size_t points = 0, mismatches = 0;
  std::ostringstream s;
  auto run = [&](const Module& m, const std::string& name, const std::vector<std::vector<Natural>>& grid) {
    DefinitionPtr def = m.find(name);
    std::size_t k = extract_arity(def->type);
    DifferentialReport r = differential_test(k, applied_to_vars(mk::ref(def), k), grid);
    points += r.checked;
    mismatches += r.mismatches.size();
    if (!r.mismatches.empty()) s << name << " mismatches " << r.mismatches.size() << "; ";
  };
  std::vector<std::vector<Natural>> exp_grid;
  for (unsigned b = 0; b <= 5; ++b) {
    for (unsigned e = 0; e <= 8; ++e) exp_grid.push_back({b, e});
  }
  run(arith, "add", full_grid(2, 10));
  run(arith, "mult", full_grid(2, 10));
  run(arith, "exp", exp_grid);
  run(arith, "gcd", full_grid(2, 10));
  run(arith, "pred", full_grid(1, 10));
  run(cnf, "cnf_lt_nat", full_grid(2, 10));
  TermGen gen(2);
  gen.limit_state_depth(2);
  std::size_t terms = 0;
  for (int i = 0; i < 200; ++i) {
    std::size_t k = 1 + gen.below(3);
    Term t = gen.nat_term(40, k);
    DifferentialReport r = differential_test(k, t, full_grid(k, 10));
    points += r.checked;
    mismatches += r.mismatches.size();
    ++terms;
  }
  s << "6 corpus functions and " << terms << " generated terms, " << points << " points, " << mismatches
    << " mismatches";
  return {mismatches == 0, s.str()};
}

// 3. PR programs survive the trip through the type theory.
Outcome completeness() {
  Checker checker;
  std::size_t points = 0, failures = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    PRFun f = generate(seed, 4, 3);
    std::size_t k = arity(f);
    Term t = to_prtt(f);
    TypedTerm typed = checker.infer({}, t);
    if (extract_arity(typed.type) != k) {
      ++failures;
      continue;
    }
    PRFun g = extract(k, applied_to_vars(t, k));
    for (const auto& args : full_grid(k, 6)) {
      ++points;
      Natural want = oracle::eval_pr(f, args);
      if (eval_pr(f, args) != want || eval_pr(g, args) != want) ++failures;
    }
  }
  std::ostringstream s;
  s << "200 programs, " << points << " points, " << failures << " failures";
  return {failures == 0, s.str()};
}

std::uint64_t ackermann(std::uint64_t m, std::uint64_t n) {
  if (m == 0) return n + 1;
  if (n == 0) return ackermann(m - 1, 1);
  return ackermann(m - 1, ackermann(m, n - 1));
}

// 4. The universe restrictions.
Outcome restrictions() {
  Checker checker;
  TermGen gen(4);
  std::size_t u1 = 0;
  for (int i = 0; i < 100; ++i) {
    Term a = gen.small_type(2), b = gen.small_type(2);
    bool small = alpha_equal(checker.infer({}, a).type, mk::univ(Level{0})) &&
                 alpha_equal(checker.infer({}, b).type, mk::univ(Level{0}));
    if (small && alpha_equal(checker.infer({}, mk::pi(a, shift(b, 0, 1))).type, mk::univ(Level{1}))) ++u1;
  }
  bool rejected = false;
  try {
    Loader strict;
    strict.load(kCorpus / "negative/ackermann.prtt");
  } catch (const TypeError& e) {
    rejected = e.error_kind() == ErrorKind::MotiveNotInU0;
  }
  bool accepted = false;
  Natural value = 0;
  try {
    Loader lax(CheckerOptions{kDefaultMaxLevel, false});
    const Module& m = lax.load(kCorpus / "negative/ackermann.prtt");
    value = canonical_nat(mk::ref(m.find("ack_2_3")));
    accepted = value == ackermann(2, 3);
  } catch (const std::exception&) {
  }
  std::ostringstream s;
  s << u1 << "/100 Pi types in U1, Ackermann " << (rejected ? "rejected with MotiveNotInU0" : "NOT rejected")
    << ", gate off " << (accepted ? "accepts (ack 2 3 = " + value.str() + ")" : "does NOT accept");
  return {u1 == 100 && rejected && accepted, s.str()};
}

// 5. Cantor normal forms over tree codes below 200.
Outcome cnf() {
  constexpr std::uint64_t N = 200;
  Loader loader;
  const Module& m = loader.load(kCorpus / "cnf.prtt");
  Term to_tree = mk::ref(m.find("to_tree")), from_tree = mk::ref(m.find("from_tree"));
  Term tree = mk::ref(m.find("Tree"));
  Term is_cnf = mk::ref(m.find("isCNF_nat")), lt = mk::ref(m.find("cnf_lt_nat"));
  std::size_t bad = 0;
  std::ostringstream s;

  // to_tree against the oracle, and both round trips
  for (std::uint64_t n = 0; n < N; ++n) {
    Term expected = mk::inl(mk::star());
    if (n > 0) {
      auto [a, b] = oracle::unpair_walk(n - 1);
      expected = mk::inr(mk::pair(num(a), num(b)));
    }
    Term t = normalize({}, mk::app(to_tree, num(n)), tree);
    if (!alpha_equal(t, expected)) ++bad;
    if (canonical_nat(mk::app(from_tree, t)) != n) ++bad;
    if (!alpha_equal(normalize({}, mk::app(to_tree, mk::app(from_tree, expected)), tree), expected)) ++bad;
  }
  if (bad) s << bad << " iso failures; ";

  std::vector<std::uint64_t> codes;
  std::size_t cnf_bad = 0;
  for (std::uint64_t n = 0; n < N; ++n) {
    bool got = canonical_nat(mk::app(is_cnf, num(n))) == 1;
    if (got != oracle::is_cnf(oracle::unrank(n))) ++cnf_bad;
    if (got) codes.push_back(n);
  }
  if (cnf_bad) s << cnf_bad << " isCNF disagreements; ";

  std::size_t c = codes.size(), order_bad = 0;
  std::vector<std::vector<char>> less(c, std::vector<char>(c));
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      less[i][j] = canonical_nat(app(lt, {num(codes[i]), num(codes[j])})) == 1;
      bool want = oracle::compare(oracle::unrank(codes[i]), oracle::unrank(codes[j])) < 0;
      if (less[i][j] != want) ++order_bad;
    }
  }
  std::size_t irreflexive = 0, trichotomy = 0, transitive = 0;
  for (std::size_t i = 0; i < c; ++i) {
    if (less[i][i]) ++irreflexive;
    for (std::size_t j = 0; j < c; ++j) {
      if (i != j && int(less[i][j]) + int(less[j][i]) != 1) ++trichotomy;
      if (!less[i][j]) continue;
      for (std::size_t k = 0; k < c; ++k) {
        if (less[j][k] && !less[i][k]) ++transitive;
      }
    }
  }
  s << c << " CNF codes, " << order_bad << " order disagreements, violations: " << irreflexive
    << " irreflexivity, " << transitive << " transitivity, " << trichotomy << " trichotomy";
  bool ok = bad == 0 && cnf_bad == 0 && order_bad == 0 && irreflexive == 0 && transitive == 0 &&
            trichotomy == 0 && c > 0;
  return {ok, s.str()};
}

// 6. Cantor pairing is a bijection.
Outcome pairing() {
  std::size_t bad = 0;
  for (std::uint64_t a = 0; a <= 100; ++a) {
    for (std::uint64_t b = 0; b <= 100; ++b) {
      Natural z = pair(a, b);
      if (z != oracle::pair_walk(a, b) || unpair(z) != std::pair<Natural, Natural>{a, b}) ++bad;
    }
  }
  for (std::uint64_t z = 0; z <= 5000; ++z) {
    auto [a, b] = unpair(z);
    auto [wa, wb] = oracle::unpair_walk(z);
    if (pair(a, b) != z || a != wa || b != wb) ++bad;
  }
  return {bad == 0, std::to_string(101 * 101 + 5001) + " cases, " + std::to_string(bad) + " failures"};
}

// 7. NbE agrees with small-step reduction.
Outcome nbe_agreement() {
  TermGen gen(7);
  std::size_t bad = 0, stuck = 0;
  for (int i = 0; i < 500; ++i) {
    Term ty;
    Term t = gen.closed_term(50, &ty);
    auto expected = oracle::small_step_normalize(t);
    if (!expected) {
      ++stuck;
      continue;
    }
    if (!alpha_equal(normalize({}, t, ty), *expected)) ++bad;
  }
  return {bad == 0 && stuck == 0, "500 terms, " + std::to_string(bad) + " disagreements, " +
                                      std::to_string(stuck) + " out of fuel"};
}

struct Criterion {
  int number;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "canonicity", 60, canonicity},
      {2, "soundness differential", 300, soundness},
      {3, "completeness round trip", 300, completeness},
      {4, "universe restrictions", 60, restrictions},
      {5, "CNF iso, isCNF and order", 60, cnf},
      {6, "pairing bijection", 1, pairing},
      {7, "NbE vs small-step", 300, nbe_agreement},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = secs < c.limit_seconds;
    bool pass = o.ok && in_time;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2fs, limit %.0fs", secs, c.limit_seconds);
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.number << ": " << c.name << " (" << o.detail
              << "; " << timing << (in_time ? "" : ", TOO SLOW") << ")" << std::endl;
    if (!pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
