#include "suite.hpp"

#include "prtt/extract.hpp"
#include "prtt/module.hpp"
#include "prtt/nbe.hpp"
#include "prtt/printer.hpp"
#include "prtt/prir.hpp"
#include "prtt/termgen.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace prtt::cli {

namespace fs = std::filesystem;

namespace {

using Args = std::vector<Natural>;
using RefFn = std::function<Natural(const Args&)>;

Natural cantor(const Natural& a, const Natural& b) { return (a + b) * (a + b + 1) / 2 + a; }

std::pair<Natural, Natural> uncantor(Natural z) {
  Natural s = 0;
  while ((s + 1) * (s + 2) / 2 <= z) ++s;
  Natural a = z - s * (s + 1) / 2;
  return {a, s - a};
}

// Lexicographic order on trees, leaf 0 smallest.
int tree_cmp(const Natural& x, const Natural& y) {
  if (x == y) return 0;
  if (x == 0) return -1;
  if (y == 0) return 1;
  auto [a, b] = uncantor(x - 1);
  auto [c, d] = uncantor(y - 1);
  int r = tree_cmp(a, c);
  return r != 0 ? r : tree_cmp(b, d);
}

bool tree_cnf(const Natural& x) {
  if (x == 0) return true;
  auto [a, b] = uncantor(x - 1);
  Natural lb = b == 0 ? Natural(0) : uncantor(b - 1).first;
  return tree_cnf(a) && tree_cnf(b) && tree_cmp(lb, a) <= 0;
}

Natural gcd(Natural a, Natural b) {
  while (b != 0) {
    Natural r = a % b;
    a = b;
    b = r;
  }
  return a;
}

// Expected behaviour of well-known corpus names.
const std::map<std::string, std::pair<std::size_t, RefFn>>& references() {
  static const std::map<std::string, std::pair<std::size_t, RefFn>> table = {
      {"add", {2, [](const Args& a) { return a[0] + a[1]; }}},
      {"mult", {2, [](const Args& a) { return a[0] * a[1]; }}},
      {"exp", {2, [](const Args& a) { return Natural(boost::multiprecision::pow(a[0], static_cast<unsigned>(a[1]))); }}},
      {"pred", {1, [](const Args& a) { return a[0] == 0 ? Natural(0) : Natural(a[0] - 1); }}},
      {"monus", {2, [](const Args& a) { return a[0] > a[1] ? Natural(a[0] - a[1]) : Natural(0); }}},
      {"tri", {1, [](const Args& a) { return a[0] * (a[0] + 1) / 2; }}},
      {"pair", {2, [](const Args& a) { return cantor(a[0], a[1]); }}},
      {"mod", {2, [](const Args& a) { return a[1] == 0 ? a[0] : Natural(a[0] % a[1]); }}},
      {"gcd", {2, [](const Args& a) { return gcd(a[0], a[1]); }}},
      {"cnf_lt_nat", {2, [](const Args& a) { return Natural(tree_cmp(a[0], a[1]) < 0 ? 1 : 0); }}},
      {"isCNF_nat", {1, [](const Args& a) { return Natural(tree_cnf(a[0]) ? 1 : 0); }}},
  };
  return table;
}

std::string tuple(const Args& a) {
  std::string s = "(";
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? ", " : "") + a[i].str();
  return s + ")";
}

struct Row {
  Row(std::string p, std::string s) : property(std::move(p)), subject(std::move(s)) {}

  std::string property;
  std::string subject;
  std::size_t cases = 0;
  std::vector<std::string> failures;
};

class Suite {
 public:
  Suite(const SuiteOptions& o) : o_(o) {}

  std::vector<Row> rows;

  void run() {
    std::vector<fs::path> files;
    if (fs::is_directory(o_.corpus)) {
      for (const auto& e : fs::directory_iterator(o_.corpus)) {
        if (e.is_regular_file() && e.path().extension() == ".prtt") files.push_back(e.path());
      }
    }
    std::sort(files.begin(), files.end());
    Loader loader(o_.checker);
    for (const auto& f : files) corpus_file(loader, f);
    if (!files.empty()) generated();
  }

 private:
  std::uint64_t step_budget() const { return o_.step_budget ? o_.step_budget : kDefaultStepBudget; }
  std::uint64_t pr_budget() const { return o_.pr_budget ? o_.pr_budget : kDefaultPrBudget; }

  // Runs one case; exceptions become failures.
  template <class F>
  void guarded(Row& r, const std::string& where, F&& body) {
    ++r.cases;
    try {
      StepBudget budget(step_budget());
      if (auto msg = body()) r.failures.push_back(where + ": " + *msg);
    } catch (const Diagnostic& e) {
      r.failures.push_back(where + ": [" + e.kind() + "] " + e.message());
    } catch (const std::exception& e) {
      r.failures.push_back(where + ": " + e.what());
    }
  }

  void corpus_file(Loader& loader, const fs::path& file) {
    const std::string fname = file.filename().string();
    const Module* m = nullptr;
    {
      Row r{"load", fname};
      guarded(r, fname, [&]() -> std::optional<std::string> {
        m = &loader.load(file);
        return std::nullopt;
      });
      rows.push_back(std::move(r));
    }
    if (m == nullptr) return;
    for (const auto& d : m->decls) {
      const std::string subject = fname + ":" + d.name;
      const Term& ty = d.def->type;
      if (alpha_equal(erase_lifts(ty), mk::nat())) {
        Row r{"canonicity", subject};
        guarded(r, d.name, [&]() -> std::optional<std::string> {
          canonical_nat(mk::ref(d.def));
          return std::nullopt;
        });
        rows.push_back(std::move(r));
        continue;
      }
      auto k = function_arity(ty);
      if (!k || *k == 0) continue;
      Term body = applied_to_vars(mk::ref(d.def), *k);
      auto grid = full_grid(*k, o_.grid);
      std::optional<PRFun> program;
      Row dr{"differential", subject};
      guarded(dr, d.name + " extract", [&]() -> std::optional<std::string> {
        program = extract(*k, body);
        return std::nullopt;
      });
      --dr.cases;
      if (program) {
        for (const auto& args : grid) {
          guarded(dr, d.name + tuple(args), [&]() -> std::optional<std::string> {
            Natural expected = canonical_nat(instantiate_nats(body, args));
            Natural actual = eval_pr(*program, args, pr_budget());
            if (expected == actual) return std::nullopt;
            return "kernel " + expected.str() + ", extracted " + actual.str();
          });
        }
      }
      rows.push_back(std::move(dr));
      auto ref = references().find(d.name);
      if (ref != references().end() && ref->second.first == *k) {
        Row rr{"reference", subject};
        for (const auto& args : grid) {
          guarded(rr, d.name + tuple(args), [&]() -> std::optional<std::string> {
            Natural want = ref->second.second(args);
            Natural got = canonical_nat(instantiate_nats(body, args));
            if (want == got) return std::nullopt;
            return "expected " + want.str() + ", got " + got.str();
          });
        }
        rows.push_back(std::move(rr));
      }
    }
  }

  void generated() {
    Checker checker(o_.checker);
    TermGen gen(o_.seed);
    Row canon{"canonicity", "generated terms"};
    for (std::size_t i = 0; i < o_.samples; ++i) {
      Term t = gen.nat_term(60);
      guarded(canon, "term " + std::to_string(i), [&]() -> std::optional<std::string> {
        checker.check(Context{}, t, mk::nat());
        canonical_nat(t);
        return std::nullopt;
      });
    }
    rows.push_back(std::move(canon));

    Row fo{"differential", "generated first-order terms"};
    for (std::size_t i = 0; i < o_.samples; ++i) {
      std::size_t k = 1 + gen.below(3);
      Term t = gen.nat_term(40, k);
      guarded(fo, "term " + std::to_string(i), [&]() -> std::optional<std::string> {
        PRFun p = extract(k, t);
        for (const auto& args : full_grid(k, std::min(o_.grid, 4u))) {
          Natural expected = canonical_nat(instantiate_nats(t, args));
          Natural actual = eval_pr(p, args, pr_budget());
          if (expected != actual) {
            return print_term(t, Context::nats(k)) + " at " + tuple(args) + ": kernel " +
                   expected.str() + ", extracted " + actual.str();
          }
        }
        return std::nullopt;
      });
    }
    rows.push_back(std::move(fo));

    Row rt{"roundtrip", "generated programs"};
    for (std::size_t i = 0; i < o_.samples; ++i) {
      PRFun f = generate(o_.seed + i, 4, 3);
      guarded(rt, "program " + std::to_string(i), [&]() -> std::optional<std::string> {
        std::size_t k = arity(f);
        Term closed = to_prtt(f);
        TypedTerm typed = checker.infer(Context{}, closed);
        if (function_arity(typed.type) != k) return "to_prtt has type " + print_term(typed.type);
        PRFun back = extract(k, applied_to_vars(closed, k));
        for (const auto& args : full_grid(k, std::min(o_.grid, 4u))) {
          Natural want = eval_pr(f, args, pr_budget());
          Natural got = eval_pr(back, args, pr_budget());
          if (want != got) {
            return show(f) + " at " + tuple(args) + ": " + want.str() + " vs " + got.str();
          }
        }
        return std::nullopt;
      });
    }
    rows.push_back(std::move(rt));
  }

  const SuiteOptions& o_;
};

}  // namespace

std::size_t run_suite(const SuiteOptions& options, std::ostream& out, std::ostream& err) {
  Suite s(options);
  s.run();
  std::size_t failed = 0, cases = 0;
  for (const auto& r : s.rows) {
    cases += r.cases;
    if (!r.failures.empty()) ++failed;
  }
  if (options.json) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : s.rows) {
      rows.push_back({{"property", r.property},
                      {"subject", r.subject},
                      {"cases", r.cases},
                      {"failures", r.failures}});
    }
    nlohmann::json doc = {{"schema", 1},
                          {"corpus", options.corpus.generic_string()},
                          {"grid", options.grid},
                          {"seed", options.seed},
                          {"samples", options.samples},
                          {"properties", rows},
                          {"failed", failed}};
    out << doc.dump(2) << "\n";
  } else {
    out << "corpus " << options.corpus.generic_string() << "  grid " << options.grid << "  seed "
        << options.seed << "  samples " << options.samples << "\n";
    out << std::left << std::setw(14) << "property" << std::setw(36) << "subject" << std::right
        << std::setw(8) << "cases" << std::setw(10) << "failures" << "\n";
    for (const auto& r : s.rows) {
      out << std::left << std::setw(14) << r.property << std::setw(36) << r.subject << std::right
          << std::setw(8) << r.cases << std::setw(10) << r.failures.size() << "\n";
    }
    for (const auto& r : s.rows) {
      for (const auto& f : r.failures) out << "FAIL " << r.property << " " << r.subject << " " << f << "\n";
    }
    out << s.rows.size() << " properties, " << cases << " cases, " << failed << " failed\n";
  }
  if (s.rows.empty()) err << "warning: 0 properties found in " << options.corpus.generic_string() << "\n";
  return failed;
}

}  // namespace prtt::cli
