#pragma once

#include "prtt/context.hpp"
#include "prtt/term.hpp"

#include <string>
#include <vector>

namespace prtt {

// Renders a core term in surface syntax. `names` lists the names of the
// free variables, outermost first. Binder names are freshened so that the
// output parses back to the same term.
std::string print_term(const Term& t, const std::vector<std::string>& names = {});

std::string print_term(const Term& t, const Context& ctx);

// Debug rendering with explicit constructors and indices, e.g. Lam(Nat, Var 0).
std::string dump_term(const Term& t);

}  // namespace prtt
