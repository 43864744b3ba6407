#pragma once

#include "prtt/diagnostics.hpp"
#include "prtt/term.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace prtt {

class ParseError : public Diagnostic {
 public:
  ParseError(std::string message, SourceSpan span, std::vector<std::string> expected);

  const std::vector<std::string>& expected() const { return expected_; }
  nlohmann::json to_json() const override;

 private:
  std::vector<std::string> expected_;
};

// UnboundIdentifier, DuplicateDefinition, ImportError.
class ResolveError : public Diagnostic {
 public:
  ResolveError(std::string kind, std::string name, std::string message, SourceSpan span);
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Surface expression, names unresolved.
struct Expr {
  enum Kind {
    Ident,    // name
    Number,   // number
    Lam,      // binder name, kids = {annot, body}
    Pi,       // binder name ("" for a plain arrow), kids = {dom, cod}
    Sigma,    // same shape as Pi
    Sum,      // kids = {l, r}
    App,      // kids = {fn, arg}
    Pair,     // kids = {a, b}
    Keyword,  // name = keyword, kids = its arguments
    Univ,     // from
    Lift,     // from, to, kids = {ty}
  };

  Kind kind = Ident;
  std::string name;
  std::uint64_t number = 0;
  Level from, to;
  std::vector<ExprPtr> kids;
  SourceSpan span;
};

struct SurfaceDecl {
  std::string name;
  SourceSpan span;  // of the name
  ExprPtr type;     // may be null
  ExprPtr body;
};

struct SurfaceImport {
  std::string path;
  SourceSpan span;
};

struct SurfaceModule {
  std::string file;
  std::vector<SurfaceImport> imports;
  std::vector<SurfaceDecl> decls;
};

SurfaceModule parse_module(const std::string& text, const std::string& file = "<input>");

// Parses a lone expression (the whole text).
ExprPtr parse_expr(const std::string& text, const std::string& file = "<input>");

// A resolved declaration. `def` is what references to it point at; its
// type is left empty when the source gives none, for the checker to fill in.
struct CoreDecl {
  std::string name;
  SourceSpan span;
  std::optional<Term> type;
  Term body;
  std::shared_ptr<Definition> def;
};

// Declarations visible to a module before its own (from imports).
using Globals = std::vector<DefinitionPtr>;

std::vector<CoreDecl> resolve(const SurfaceModule& m, const Globals& visible = {});

// Resolves an expression against global definitions and local names
// (outermost first).
Term resolve_expr(const ExprPtr& e, const Globals& visible = {},
                  const std::vector<std::string>& locals = {});

// Surface rendering of a declaration list; parses back to the same terms.
std::string print_decls(const std::vector<CoreDecl>& decls);

}  // namespace prtt
