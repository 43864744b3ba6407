#include "prtt/prir.hpp"

#include <map>
#include <random>
#include <set>
#include <sstream>

namespace prtt {

namespace pr {

PRFun constant(std::size_t arity, Natural value) {
  if (value < 0) throw IllFormed("negative constant");
  auto n = std::make_shared<PRNode>();
  n->op = PROp::Const;
  n->arity = arity;
  n->value = std::move(value);
  return n;
}

PRFun succ() {
  static const PRFun s = [] {
    auto n = std::make_shared<PRNode>();
    n->op = PROp::Succ;
    n->arity = 1;
    return n;
  }();
  return s;
}

PRFun proj(std::size_t arity, std::size_t index) {
  if (index >= arity) {
    throw IllFormed("Proj(" + std::to_string(arity) + "," + std::to_string(index) +
                    ") index out of range");
  }
  auto n = std::make_shared<PRNode>();
  n->op = PROp::Proj;
  n->arity = arity;
  n->index = index;
  return n;
}

PRFun comp(PRFun outer, std::vector<PRFun> inners) {
  if (outer->arity != inners.size()) {
    throw IllFormed("Comp: outer arity " + std::to_string(outer->arity) + " but " +
                    std::to_string(inners.size()) + " inner functions");
  }
  if (inners.empty()) throw IllFormed("Comp needs at least one inner function");
  std::size_t k = inners[0]->arity;
  for (const auto& g : inners) {
    if (g->arity != k) throw IllFormed("Comp: inner functions disagree on arity");
  }
  auto n = std::make_shared<PRNode>();
  n->op = PROp::Comp;
  n->arity = k;
  n->kids.push_back(std::move(outer));
  for (auto& g : inners) n->kids.push_back(std::move(g));
  return n;
}

PRFun primrec(PRFun base, PRFun step) {
  if (step->arity != base->arity + 2) {
    throw IllFormed("PrimRec: base arity " + std::to_string(base->arity) + " needs step arity " +
                    std::to_string(base->arity + 2) + ", got " + std::to_string(step->arity));
  }
  auto n = std::make_shared<PRNode>();
  n->op = PROp::PrimRec;
  n->arity = base->arity + 1;
  n->kids = {std::move(base), std::move(step)};
  return n;
}

}  // namespace pr

namespace {

std::size_t checked_arity(const PRNode* f, std::map<const PRNode*, std::size_t>& memo) {
  if (auto it = memo.find(f); it != memo.end()) return it->second;
  std::size_t a = 0;
  switch (f->op) {
    case PROp::Const:
      if (!f->kids.empty() || f->value < 0) throw IllFormed("malformed Const");
      a = f->arity;
      break;
    case PROp::Succ:
      if (!f->kids.empty()) throw IllFormed("malformed Succ");
      a = 1;
      break;
    case PROp::Proj:
      if (f->index >= f->arity) throw IllFormed("Proj index out of range");
      a = f->arity;
      break;
    case PROp::Comp: {
      if (f->kids.size() < 2) throw IllFormed("Comp needs at least one inner function");
      std::size_t outer = checked_arity(f->kids[0].get(), memo);
      if (outer != f->kids.size() - 1) throw IllFormed("Comp: outer arity mismatch");
      a = checked_arity(f->kids[1].get(), memo);
      for (std::size_t i = 2; i < f->kids.size(); ++i) {
        if (checked_arity(f->kids[i].get(), memo) != a) {
          throw IllFormed("Comp: inner functions disagree on arity");
        }
      }
      break;
    }
    case PROp::PrimRec: {
      if (f->kids.size() != 2) throw IllFormed("PrimRec needs base and step");
      std::size_t l = checked_arity(f->kids[0].get(), memo);
      if (checked_arity(f->kids[1].get(), memo) != l + 2) {
        throw IllFormed("PrimRec: step arity must be base arity + 2");
      }
      a = l + 1;
      break;
    }
  }
  if (a != f->arity) throw IllFormed("cached arity disagrees with structure");
  memo.emplace(f, a);
  return a;
}

}  // namespace

std::size_t arity(const PRFun& f) {
  std::map<const PRNode*, std::size_t> memo;
  return checked_arity(f.get(), memo);
}

bool wellformed(const PRFun& f) {
  try {
    arity(f);
    return true;
  } catch (const IllFormed&) {
    return false;
  }
}

std::size_t ir_size(const PRFun& f) {
  std::set<const PRNode*> seen;
  std::vector<const PRNode*> todo{f.get()};
  while (!todo.empty()) {
    const PRNode* n = todo.back();
    todo.pop_back();
    if (!seen.insert(n).second) continue;
    for (const auto& k : n->kids) todo.push_back(k.get());
  }
  return seen.size();
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

struct Thunk;
using ThunkPtr = std::shared_ptr<Thunk>;

struct Thunk {
  const PRNode* f = nullptr;
  std::vector<ThunkPtr> args;
  Natural value;
  bool done = false;

  Thunk() = default;
  Thunk(const PRNode* fn, std::vector<ThunkPtr> a) : f(fn), args(std::move(a)) {}
  explicit Thunk(Natural v) : value(std::move(v)), done(true) {}

  // Long argument chains are released iteratively.
  ~Thunk() {
    std::vector<ThunkPtr> pending = std::move(args);
    while (!pending.empty()) {
      ThunkPtr p = std::move(pending.back());
      pending.pop_back();
      if (p && p.use_count() == 1) {
        for (auto& a : p->args) pending.push_back(std::move(a));
        p->args.clear();
      }
    }
  }
};

ThunkPtr ready(Natural v) { return std::make_shared<Thunk>(std::move(v)); }

ThunkPtr delay(const PRNode* g, const std::vector<ThunkPtr>& args) {
  switch (g->op) {
    case PROp::Proj:
      return args[g->index];
    case PROp::Const:
      return ready(g->value);
    default:
      return std::make_shared<Thunk>(g, args);
  }
}

class Machine {
 public:
  Machine(std::uint64_t budget, EvalTrace* trace) : budget_(budget), trace_(trace) {}

  const Natural& force(const ThunkPtr& root) {
    if (!root->done) stack_.push_back({root, 0, nullptr});
    while (!stack_.empty()) step();
    return root->value;
  }

 private:
  struct Frame {
    ThunkPtr t;
    int stage;
    ThunkPtr wait;
  };

  void step() {
    Frame& fr = stack_.back();
    Thunk& t = *fr.t;
    if (t.done) {
      stack_.pop_back();
      return;
    }
    const PRNode& f = *t.f;
    switch (f.op) {
      case PROp::Const:
        finish(t, f.value);
        return;
      case PROp::Succ:
      case PROp::Proj: {
        const ThunkPtr& a = t.args[f.op == PROp::Succ ? 0 : f.index];
        if (!a->done) {
          push(a);
          return;
        }
        finish(t, f.op == PROp::Succ ? Natural(a->value + 1) : a->value);
        return;
      }
      case PROp::Comp: {
        if (fr.stage == 0) {
          std::vector<ThunkPtr> inner;
          inner.reserve(f.kids.size() - 1);
          for (std::size_t i = 1; i < f.kids.size(); ++i) inner.push_back(delay(f.kids[i].get(), t.args));
          fr.wait = delay(f.kids[0].get(), inner);
          fr.stage = 1;
          await(fr.wait);
          return;
        }
        finish(t, fr.wait->value);
        return;
      }
      case PROp::PrimRec: {
        if (fr.stage == 0) {
          fr.stage = 1;
          await(t.args[0]);
          return;
        }
        if (fr.stage == 1) {
          charge();
          const Natural& n = t.args[0]->value;
          std::vector<ThunkPtr> next;
          if (n == 0) {
            next.assign(t.args.begin() + 1, t.args.end());
            fr.wait = delay(f.kids[0].get(), next);
          } else {
            ThunkPtr pred = ready(n - 1);
            std::vector<ThunkPtr> rec = t.args;
            rec[0] = pred;
            ThunkPtr acc = std::make_shared<Thunk>(t.f, std::move(rec));
            next.reserve(t.args.size() + 1);
            next.push_back(pred);
            next.push_back(acc);
            next.insert(next.end(), t.args.begin() + 1, t.args.end());
            fr.wait = delay(f.kids[1].get(), next);
          }
          fr.stage = 2;
          await(fr.wait);
          return;
        }
        finish(t, fr.wait->value);
        return;
      }
    }
  }

  // Pushes `a` unless it is already evaluated; the current frame re-runs
  // once `a` is done. May invalidate references into the stack.
  void await(const ThunkPtr& a) {
    if (!a->done) push(a);
  }

  void push(const ThunkPtr& a) { stack_.push_back({a, 0, nullptr}); }

  void finish(Thunk& t, const Natural& v) {
    t.value = v;
    t.done = true;
    t.f = nullptr;
    std::vector<ThunkPtr>().swap(t.args);
    if (trace_ && v > 0) {
      std::size_t bits = msb(v) + 1;
      if (bits > trace_->peak) trace_->peak = bits;
    }
    stack_.pop_back();
  }

  void charge() {
    ++steps_;
    if (trace_) trace_->steps = steps_;
    if (steps_ > budget_) {
      throw BudgetExceeded("primitive recursion budget of " + std::to_string(budget_) +
                           " unfoldings exhausted");
    }
  }

  std::uint64_t budget_;
  EvalTrace* trace_;
  std::uint64_t steps_ = 0;
  std::vector<Frame> stack_;
};

}  // namespace

Natural eval_pr(const PRFun& f, const std::vector<Natural>& args, std::uint64_t budget,
                EvalTrace* trace) {
  std::size_t k = arity(f);
  if (args.size() != k) {
    throw IllFormed("expected " + std::to_string(k) + " arguments, got " +
                    std::to_string(args.size()));
  }
  std::vector<ThunkPtr> in;
  for (const auto& a : args) {
    if (a < 0) throw IllFormed("negative argument");
    in.push_back(ready(a));
  }
  if (trace) *trace = EvalTrace{};
  Machine m(budget, trace);
  ThunkPtr root = delay(f.get(), in);
  Natural out = m.force(root);
  if (trace && out > 0) trace->peak = std::max<std::size_t>(trace->peak, msb(out) + 1);
  return out;
}

// ---------------------------------------------------------------------------
// Generation

namespace {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t below(std::uint64_t n) { return rng_() % n; }

  PRFun leaf(std::size_t arity) {
    std::uint64_t choices = arity == 1 ? 3 : (arity > 0 ? 2 : 1);
    switch (below(choices)) {
      case 0:
        return pr::constant(arity, below(10));
      case 1:
        return pr::proj(arity, below(arity));
      default:
        return pr::succ();
    }
  }

  PRFun fun(std::size_t depth, std::size_t arity) {
    if (depth <= 1) return leaf(arity);
    std::uint64_t roll = below(100);
    if (roll < 35) return leaf(arity);
    if (roll < 70 || arity == 0) {
      std::size_t m = 1 + below(3);
      PRFun outer = fun(depth - 1, m);
      std::vector<PRFun> inners;
      for (std::size_t i = 0; i < m; ++i) inners.push_back(fun(depth - 1, arity));
      return pr::comp(outer, std::move(inners));
    }
    PRFun base = fun(depth - 1, arity - 1);
    PRFun step = fun(depth - 1, arity + 1);
    return pr::primrec(base, step);
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

PRFun generate(std::uint64_t seed, std::size_t max_depth, std::size_t max_arity) {
  if (max_depth < 1) throw std::invalid_argument("generate: max_depth must be at least 1");
  Gen g(seed);
  std::size_t arity = g.below(max_arity + 1);
  return g.fun(max_depth, arity);
}

// ---------------------------------------------------------------------------
// Completeness direction

namespace {

// Closed term for f, as a curried function of arity(f) Nats.
Term closed(const PRFun& f, std::map<const PRNode*, Term>& memo);

// Body of f applied to the variables Var(k-1) .. Var(0) (first argument
// outermost), under `k` binders.
Term applied(const PRFun& f, std::size_t k, std::map<const PRNode*, Term>& memo) {
  std::vector<Term> xs;
  for (std::size_t i = 0; i < k; ++i) xs.push_back(mk::var(k - 1 - i));
  return mk::apps(closed(f, memo), xs);
}

Term lambdas(std::size_t k, Term body) {
  for (std::size_t i = k; i-- > 0;) body = mk::lam(mk::nat(), body, "x" + std::to_string(i));
  return body;
}

Term closed(const PRFun& f, std::map<const PRNode*, Term>& memo) {
  if (auto it = memo.find(f.get()); it != memo.end()) return it->second;
  Term out;
  switch (f->op) {
    case PROp::Const: {
      if (f->value > std::numeric_limits<std::uint64_t>::max()) {
        throw IllFormed("constant too large for a numeral");
      }
      out = lambdas(f->arity, mk::numeral(static_cast<std::uint64_t>(f->value)));
      break;
    }
    case PROp::Succ:
      out = mk::lam(mk::nat(), mk::suc(mk::var(0)), "n");
      break;
    case PROp::Proj:
      out = lambdas(f->arity, mk::var(f->arity - 1 - f->index));
      break;
    case PROp::Comp: {
      std::size_t k = f->arity;
      std::vector<Term> inner;
      for (std::size_t i = 1; i < f->kids.size(); ++i) inner.push_back(applied(f->kids[i], k, memo));
      out = lambdas(k, mk::apps(closed(f->kids[0], memo), inner));
      break;
    }
    case PROp::PrimRec: {
      // fun n x.. => ind (fun _ => Nat) (g x..) (fun m acc => h m acc x..) n
      std::size_t l = f->arity - 1;
      std::vector<Term> params;
      for (std::size_t i = 0; i < l; ++i) params.push_back(mk::var(l - 1 - i));
      Term base = mk::apps(closed(f->kids[0], memo), params);
      std::vector<Term> step_args{mk::var(1), mk::var(0)};
      for (std::size_t i = 0; i < l; ++i) step_args.push_back(mk::var(l + 1 - i));
      Term step = mk::lam(mk::nat(),
                          mk::lam(mk::nat(), mk::apps(closed(f->kids[1], memo), step_args), "acc"),
                          "m");
      Term motive = mk::lam(mk::nat(), mk::nat(), "_");
      Term body = mk::nat_ind(motive, base, step, mk::var(l));
      out = mk::lam(mk::nat(), lambdas(l, body), "n");
      break;
    }
  }
  memo.emplace(f.get(), out);
  return out;
}

}  // namespace

Term to_prtt(const PRFun& f) {
  arity(f);
  std::map<const PRNode*, Term> memo;
  return closed(f, memo);
}

// ---------------------------------------------------------------------------
// Printing and serialization

namespace {

void show_into(const PRFun& f, std::ostringstream& out) {
  switch (f->op) {
    case PROp::Const: out << "Const(" << f->arity << "," << f->value << ")"; return;
    case PROp::Succ: out << "Succ"; return;
    case PROp::Proj: out << "Proj(" << f->arity << "," << f->index << ")"; return;
    case PROp::Comp:
      out << "Comp(";
      show_into(f->kids[0], out);
      out << ", [";
      for (std::size_t i = 1; i < f->kids.size(); ++i) {
        if (i > 1) out << ", ";
        show_into(f->kids[i], out);
      }
      out << "])";
      return;
    case PROp::PrimRec:
      out << "PrimRec(";
      show_into(f->kids[0], out);
      out << ", ";
      show_into(f->kids[1], out);
      out << ")";
      return;
  }
}

nlohmann::json natural_json(const Natural& v) {
  if (v <= std::numeric_limits<std::uint64_t>::max()) return static_cast<std::uint64_t>(v);
  return v.str();
}

Natural json_natural(const nlohmann::json& j) {
  if (j.is_number_unsigned()) return Natural(j.get<std::uint64_t>());
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return Natural(j.get<std::int64_t>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw IllFormed("bad natural \"" + s + "\"");
    }
    return Natural(s);
  }
  throw IllFormed("expected a natural number");
}

class Writer {
 public:
  explicit Writer(const PRFun& root) { count(root.get()); }

  nlohmann::json emit(const PRNode* n) {
    if (n->kids.empty()) return body(n);
    if (uses_[n] > 1) {
      if (auto it = ids_.find(n); it != ids_.end()) return ref(it->second);
      nlohmann::json j = body(n);
      shared_.push_back(std::move(j));
      ids_[n] = shared_.size() - 1;
      return ref(shared_.size() - 1);
    }
    return body(n);
  }

  nlohmann::json shared() const { return shared_; }

 private:
  void count(const PRNode* n) {
    if (++uses_[n] > 1) return;
    for (const auto& k : n->kids) count(k.get());
  }

  static nlohmann::json ref(std::size_t id) { return {{"op", "ref"}, {"id", id}}; }

  nlohmann::json body(const PRNode* n) {
    switch (n->op) {
      case PROp::Const: return {{"op", "const"}, {"arity", n->arity}, {"value", natural_json(n->value)}};
      case PROp::Succ: return {{"op", "succ"}};
      case PROp::Proj: return {{"op", "proj"}, {"arity", n->arity}, {"index", n->index}};
      case PROp::Comp: {
        nlohmann::json inners = nlohmann::json::array();
        nlohmann::json outer = emit(n->kids[0].get());
        for (std::size_t i = 1; i < n->kids.size(); ++i) inners.push_back(emit(n->kids[i].get()));
        return {{"op", "comp"}, {"outer", outer}, {"inners", inners}};
      }
      case PROp::PrimRec: {
        nlohmann::json base = emit(n->kids[0].get());
        nlohmann::json step = emit(n->kids[1].get());
        return {{"op", "primrec"}, {"base", base}, {"step", step}};
      }
    }
    return {};
  }

  std::map<const PRNode*, std::size_t> uses_;
  std::map<const PRNode*, std::size_t> ids_;
  nlohmann::json shared_ = nlohmann::json::array();
};

PRFun read_node(const nlohmann::json& j, const std::vector<PRFun>& shared) {
  if (!j.is_object() || !j.contains("op") || !j["op"].is_string()) {
    throw IllFormed("PR node must be an object with an \"op\" field");
  }
  const std::string op = j["op"].get<std::string>();
  auto field = [&](const char* name) -> const nlohmann::json& {
    if (!j.contains(name)) throw IllFormed(op + " node lacks \"" + name + "\"");
    return j[name];
  };
  auto size_field = [&](const char* name) -> std::size_t {
    const auto& v = field(name);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw IllFormed(op + ": \"" + name + "\" must be a natural number");
    }
    return v.get<std::size_t>();
  };
  if (op == "const") return pr::constant(size_field("arity"), json_natural(field("value")));
  if (op == "succ") return pr::succ();
  if (op == "proj") return pr::proj(size_field("arity"), size_field("index"));
  if (op == "comp") {
    const auto& inners = field("inners");
    if (!inners.is_array()) throw IllFormed("comp: \"inners\" must be an array");
    std::vector<PRFun> gs;
    for (const auto& g : inners) gs.push_back(read_node(g, shared));
    return pr::comp(read_node(field("outer"), shared), std::move(gs));
  }
  if (op == "primrec") return pr::primrec(read_node(field("base"), shared), read_node(field("step"), shared));
  if (op == "ref") {
    std::size_t id = size_field("id");
    if (id >= shared.size()) throw IllFormed("ref to unknown shared node " + std::to_string(id));
    return shared[id];
  }
  throw IllFormed("unknown op \"" + op + "\"");
}

}  // namespace

std::string show(const PRFun& f) {
  std::ostringstream out;
  show_into(f, out);
  return out.str();
}

nlohmann::json to_json(const PRFun& f) {
  Writer w(f);
  nlohmann::json root = w.emit(f.get());
  return {{"schema", 1}, {"arity", arity(f)}, {"shared", w.shared()}, {"fun", root}};
}

PRFun from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw IllFormed("PR document must be an object");
  if (!j.contains("fun")) return read_node(j, {});
  std::vector<PRFun> shared;
  if (j.contains("shared")) {
    if (!j["shared"].is_array()) throw IllFormed("\"shared\" must be an array");
    for (const auto& s : j["shared"]) shared.push_back(read_node(s, shared));
  }
  PRFun f = read_node(j["fun"], shared);
  if (j.contains("arity") && j["arity"] != arity(f)) {
    throw IllFormed("declared arity disagrees with the function");
  }
  return f;
}

}  // namespace prtt
