#pragma once

#include "prtt/term.hpp"

#include <string>
#include <vector>

namespace prtt {

struct Binding {
  std::string name;
  Term type;  // scoped over the bindings before this one
  Level level;
};

// Telescope of typed bindings; the last binding is Var 0.
struct Context {
  std::vector<Binding> bindings;

  std::size_t size() const { return bindings.size(); }
  bool empty() const { return bindings.empty(); }

  Context extended(std::string name, Term type, Level level) const {
    Context c = *this;
    c.bindings.push_back({std::move(name), std::move(type), level});
    return c;
  }

  // Binding referenced by de Bruijn index `index`.
  const Binding& at(std::size_t index) const { return bindings[bindings.size() - 1 - index]; }

  // Context of k variables of type Nat.
  static Context nats(std::size_t k) {
    Context c;
    for (std::size_t i = 0; i < k; ++i) c.bindings.push_back({"x" + std::to_string(i), mk::nat(), {}});
    return c;
  }
};

}  // namespace prtt
