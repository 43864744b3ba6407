#include "suite.hpp"

#include "prtt/extract.hpp"
#include "prtt/module.hpp"
#include "prtt/nbe.hpp"
#include "prtt/printer.hpp"
#include "prtt/prir.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace prtt;

namespace {

struct Global {
  bool json_errors = false;
  std::uint64_t step_budget = kDefaultStepBudget;
  std::uint64_t pr_budget = kDefaultPrBudget;
  unsigned max_level = kDefaultMaxLevel;

  CheckerOptions checker() const {
    CheckerOptions o;
    o.max_level = max_level;
    return o;
  }
};

// Usage errors: unknown declarations, bad arguments.
class UsageError : public Diagnostic {
 public:
  explicit UsageError(std::string message) : Diagnostic("UsageError", std::move(message)) {}
};

void report(const Global& g, const std::string& kind, const std::string& message,
            const Diagnostic* d = nullptr) {
  if (g.json_errors) {
    nlohmann::json j = d ? d->to_json() : nlohmann::json{{"kind", kind}, {"message", message}};
    j["schema"] = 1;
    std::cerr << j.dump() << "\n";
  } else {
    std::cerr << (d ? d->render() : "[" + kind + "] " + message) << "\n";
  }
}

bool is_front_end(const Diagnostic& d) {
  return dynamic_cast<const ParseError*>(&d) || dynamic_cast<const ResolveError*>(&d) ||
         dynamic_cast<const IoError*>(&d) || dynamic_cast<const UsageError*>(&d);
}

// Maps every failure to an exit code: 2 for input problems, 1 otherwise.
template <class F>
int guarded(const Global& g, F&& body) {
  try {
    StepBudget budget(g.step_budget);
    return body();
  } catch (const Diagnostic& d) {
    report(g, d.kind(), d.message(), &d);
    return is_front_end(d) ? 2 : 1;
  } catch (const IllFormed& e) {
    report(g, "IllFormed", e.what());
    return 2;
  } catch (const nlohmann::json::exception& e) {
    report(g, "ParseError", e.what());
    return 2;
  } catch (const BudgetExceeded& e) {
    report(g, "BudgetExceeded", e.what());
    return 1;
  } catch (const NonCanonical& e) {
    report(g, "NonCanonical", e.what());
    return 1;
  } catch (const std::exception& e) {
    report(g, "InternalError", e.what());
    return 1;
  }
}

DefinitionPtr lookup(const Module& m, const std::string& name) {
  for (const auto& d : m.decls) {
    if (d.name == name) return d.def;
  }
  throw UsageError("no declaration named " + name + " in " + m.path);
}

Natural parse_natural(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw UsageError("not a natural number: " + s);
  }
  return Natural(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prtt: a proof kernel for primitive recursive dependent type theory"};
  app.require_subcommand(1);
  Global g;
  app.add_flag("--json-errors", g.json_errors, "Print diagnostics as JSON objects");
  app.add_option("--step-budget", g.step_budget, "Maximum eliminator steps during normalization")
      ->capture_default_str();
  app.add_option("--pr-budget", g.pr_budget, "Maximum primrec unfoldings when running programs")
      ->capture_default_str();
  app.add_option("--max-level", g.max_level, "Top universe level")->check(CLI::Range(1, 8))
      ->capture_default_str();

  std::vector<std::string> files;
  auto* check = app.add_subcommand("check", "Type-check source files");
  check->add_option("files", files, "Source files")->required();

  std::string file, decl, out_path;
  auto* normalize_cmd = app.add_subcommand("normalize", "Print the normal form of a declaration");
  normalize_cmd->add_option("file", file)->required();
  normalize_cmd->add_option("--decl", decl)->required();

  auto* canon = app.add_subcommand("canon", "Print the numeral a closed Nat declaration denotes");
  canon->add_option("file", file)->required();
  canon->add_option("--decl", decl)->required();

  auto* extract_cmd = app.add_subcommand("extract", "Extract a primitive recursive program");
  extract_cmd->add_option("file", file)->required();
  extract_cmd->add_option("--decl", decl)->required();
  extract_cmd->add_option("-o,--output", out_path)->required();

  std::string ir_path;
  std::vector<std::string> run_args;
  auto* run = app.add_subcommand("run", "Run an extracted program");
  run->add_option("ir", ir_path)->required();
  run->add_option("args", run_args);

  cli::SuiteOptions suite;
  auto* test = app.add_subcommand("test", "Run the property suite over a corpus directory");
  test->add_option("dir", suite.corpus)->required();
  test->add_option("--grid", suite.grid, "Largest argument in differential grids")->capture_default_str();
  test->add_option("--seed", suite.seed, "Seed for generated terms")->capture_default_str();
  test->add_option("--samples", suite.samples, "Generated cases per sweep")->capture_default_str();
  test->add_flag("--json", suite.json, "Print the report as JSON");

  for (auto* sub : {check, normalize_cmd, canon, extract_cmd, run, test}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*check) {
    int worst = 0;
    for (const auto& f : files) {
      int code = guarded(g, [&] {
        Loader loader(g.checker());
        const Module& m = loader.load(f);
        std::cout << f << ": ok, " << m.decls.size() << " declarations\n";
        return 0;
      });
      worst = std::max(worst, code);
    }
    return worst;
  }
  if (*normalize_cmd) {
    return guarded(g, [&] {
      Loader loader(g.checker());
      DefinitionPtr d = lookup(loader.load(file), decl);
      std::cout << print_term(normalize(Context{}, mk::ref(d), d->type)) << "\n";
      return 0;
    });
  }
  if (*canon) {
    return guarded(g, [&] {
      Loader loader(g.checker());
      DefinitionPtr d = lookup(loader.load(file), decl);
      if (!alpha_equal(erase_lifts(d->type), mk::nat())) {
        throw TypeError(ErrorKind::Mismatch, decl + " has type " + print_term(d->type) + ", not Nat",
                        mk::nat(), d->type);
      }
      std::cout << canonical_nat(mk::ref(d)) << "\n";
      return 0;
    });
  }
  if (*extract_cmd) {
    return guarded(g, [&] {
      Loader loader(g.checker());
      DefinitionPtr d = lookup(loader.load(file), decl);
      std::size_t k = extract_arity(d->type);
      PRFun f = extract(k, applied_to_vars(mk::ref(d), k));
      nlohmann::json doc = to_json(f);
      doc["source"] = fs::path(file).generic_string();
      doc["decl"] = decl;
      std::ofstream out(out_path);
      if (!out) throw IoError("cannot write " + out_path);
      out << doc.dump(2) << "\n";
      if (!out) throw IoError("cannot write " + out_path);
      std::cout << decl << ": arity " << k << ", " << ir_size(f) << " nodes -> " << out_path << "\n";
      return 0;
    });
  }
  if (*run) {
    return guarded(g, [&] {
      std::ifstream in(ir_path);
      if (!in) throw IoError("cannot read " + ir_path);
      PRFun f = from_json(nlohmann::json::parse(in));
      std::vector<Natural> args;
      for (const auto& a : run_args) args.push_back(parse_natural(a));
      if (args.size() != arity(f)) {
        throw UsageError("program takes " + std::to_string(arity(f)) + " arguments, got " +
                         std::to_string(args.size()));
      }
      std::cout << eval_pr(f, args, g.pr_budget) << "\n";
      return 0;
    });
  }
  if (*test) {
    return guarded(g, [&] {
      if (!fs::is_directory(suite.corpus)) throw IoError("not a directory: " + suite.corpus.string());
      suite.step_budget = g.step_budget;
      suite.pr_budget = g.pr_budget;
      suite.checker = g.checker();
      return cli::run_suite(suite, std::cout, std::cerr) == 0 ? 0 : 1;
    });
  }
  return 0;
}
