#include "prtt/module.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace prtt {

DefinitionPtr Module::find(const std::string& name) const {
  for (const auto& d : decls) {
    if (d.name == name) return d.def;
  }
  for (const auto& d : imported) {
    if (d->name == name) return d;
  }
  return nullptr;
}

Globals Module::visible() const {
  Globals g = imported;
  for (const auto& d : decls) g.push_back(d.def);
  return g;
}

void check_decls(std::vector<CoreDecl>& decls, const Checker& checker) {
  const Context empty;
  for (auto& d : decls) {
    try {
      if (d.type) {
        checker.check_type(empty, *d.type);
        checker.check(empty, d.body, *d.type);
      } else {
        d.type = checker.infer(empty, d.body).type;
        d.def->type = *d.type;
      }
    } catch (TypeError& e) {
      if (!e.span()) e.set_span(d.span);
      throw;
    }
  }
}

Module check_source(const std::string& text, const std::string& file, const Checker& checker,
                    const Globals& visible) {
  Module m;
  m.path = file;
  m.imported = visible;
  m.decls = resolve(parse_module(text, file), visible);
  check_decls(m.decls, checker);
  return m;
}

const Module& Loader::load(const std::filesystem::path& file) {
  std::vector<std::string> stack;
  return load(file, stack);
}

const Module& Loader::load(const std::filesystem::path& file, std::vector<std::string>& stack) {
  std::error_code ec;
  std::filesystem::path canon = std::filesystem::weakly_canonical(file, ec);
  std::string key = ec ? file.string() : canon.string();
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;

  std::ifstream in(file);
  if (!in) throw IoError("cannot read " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();

  stack.push_back(key);
  SurfaceModule sm = parse_module(buf.str(), file.string());
  Globals visible;
  std::set<const Definition*> have;
  for (const auto& imp : sm.imports) {
    std::filesystem::path target = file.parent_path() / imp.path;
    std::string tkey = std::filesystem::weakly_canonical(target, ec).string();
    for (const auto& s : stack) {
      if (s == tkey) {
        throw ResolveError("ImportError", imp.path, "import cycle through " + imp.path, imp.span);
      }
    }
    const Module* dep;
    try {
      dep = &load(target, stack);
    } catch (IoError& e) {
      if (!e.span()) e.set_span(imp.span);
      throw;
    }
    for (const auto& d : dep->visible()) {
      if (have.insert(d.get()).second) visible.push_back(d);
    }
  }
  Module m;
  m.path = file.string();
  m.imported = visible;
  m.decls = resolve(sm, visible);
  check_decls(m.decls, checker_);
  stack.pop_back();
  return cache_.emplace(key, std::move(m)).first->second;
}

}  // namespace prtt
