#pragma once

#include "prtt/nbe.hpp"
#include "prtt/term.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace prtt {

struct IllFormed : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class PROp { Const, Succ, Proj, Comp, PrimRec };

struct PRNode;
using PRFun = std::shared_ptr<const PRNode>;

// Comp: kids = {outer, inner...}. PrimRec: kids = {base, step}; the
// recursion argument comes first, the step sees (n, acc, params...).
struct PRNode {
  PROp op = PROp::Succ;
  std::size_t arity = 1;
  std::size_t index = 0;  // Proj
  Natural value;          // Const
  std::vector<PRFun> kids;
};

namespace pr {

PRFun constant(std::size_t arity, Natural value);
PRFun succ();
PRFun proj(std::size_t arity, std::size_t index);
PRFun comp(PRFun outer, std::vector<PRFun> inners);
PRFun primrec(PRFun base, PRFun step);

}  // namespace pr

// Checks every arity constraint; throws IllFormed.
std::size_t arity(const PRFun& f);
bool wellformed(const PRFun& f);

// Number of distinct nodes.
std::size_t ir_size(const PRFun& f);

inline constexpr std::uint64_t kDefaultPrBudget = 100'000'000;

struct EvalTrace {
  std::uint64_t steps = 0;  // primrec unfoldings
  std::size_t peak = 0;     // bit length of the largest value seen
};

// Arguments are passed by need: an argument a function never inspects is
// never computed. Throws BudgetExceeded past `budget` unfoldings.
Natural eval_pr(const PRFun& f, const std::vector<Natural>& args,
                std::uint64_t budget = kDefaultPrBudget, EvalTrace* trace = nullptr);

PRFun generate(std::uint64_t seed, std::size_t max_depth, std::size_t max_arity);

// Closed curried term of type Nat -> ... -> Nat.
Term to_prtt(const PRFun& f);

std::string show(const PRFun& f);

// {"op": "comp", "outer": ..., "inners": [...]} etc. Subtrees that occur
// more than once are written once under "shared" and referenced as
// {"op": "ref", "id": i}.
nlohmann::json to_json(const PRFun& f);
PRFun from_json(const nlohmann::json& j);

}  // namespace prtt
