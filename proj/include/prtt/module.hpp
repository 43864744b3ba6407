#pragma once

#include "prtt/checker.hpp"
#include "prtt/parser.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace prtt {

// Unreadable source file.
class IoError : public Diagnostic {
 public:
  IoError(std::string message, std::optional<SourceSpan> span = std::nullopt)
      : Diagnostic("IOError", std::move(message), std::move(span)) {}
};

// A checked module. Every definition carries its (possibly inferred) type.
struct Module {
  std::string path;
  std::vector<DefinitionPtr> imported;  // transitively, in load order
  std::vector<CoreDecl> decls;

  // Own declarations first, then imports.
  DefinitionPtr find(const std::string& name) const;
  Globals visible() const;
};

// Resolves and checks declarations in order, filling in missing types.
// Type errors carry the span of the offending declaration.
void check_decls(std::vector<CoreDecl>& decls, const Checker& checker);

Module check_source(const std::string& text, const std::string& file, const Checker& checker,
                    const Globals& visible = {});

// Loads a file and its imports (relative to the importing file).
class Loader {
 public:
  explicit Loader(CheckerOptions options = {}) : checker_(options) {}

  const Module& load(const std::filesystem::path& file);
  const Checker& checker() const { return checker_; }

 private:
  const Module& load(const std::filesystem::path& file, std::vector<std::string>& stack);

  Checker checker_;
  std::map<std::string, Module> cache_;
};

}  // namespace prtt
