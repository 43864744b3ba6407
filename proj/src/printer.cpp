#include "prtt/printer.hpp"

#include <set>
#include <sstream>

namespace prtt {

namespace {

enum Prec { kExpr = 0, kSum = 1, kProd = 2, kApp = 3, kAtom = 4 };

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw = {
      "def",  "import", "fun",  "Eq",   "refl",    "J",    "ind",  "case", "unitind",
      "exfalso", "zero", "suc", "Nat",  "Unit",    "star", "Empty", "lift", "inl",
      "inr",  "fst",    "snd",  "U0",   "U1",      "U2",   "U3",   "U4",   "U5",
      "U6",   "U7",     "U8"};
  return kw;
}

void collect_refs(const Term& t, std::set<std::string>& out) {
  if (t->tag == Tag::Ref) out.insert(t->def->name);
  for (const auto& k : t->kids) collect_refs(k, out);
}

class Printer {
 public:
  Printer(std::vector<std::string> names, std::set<std::string> reserved)
      : names_(std::move(names)), reserved_(std::move(reserved)) {}

  void print(const Term& t, int prec) {
    const TermNode& n = *t;
    switch (n.tag) {
      case Tag::Var:
        if (n.index < names_.size()) {
          out_ << names_[names_.size() - 1 - n.index];
        } else {
          out_ << "#" << n.index;
        }
        return;
      case Tag::Lam: {
        open(prec > kExpr);
        out_ << "fun";
        const Term* cur = &t;
        std::size_t pushed = 0;
        while ((*cur)->tag == Tag::Lam) {
          std::string x = fresh((*cur)->name);
          out_ << " (" << x << " : ";
          print((**cur)[0], kExpr);
          out_ << ")";
          names_.push_back(x);
          ++pushed;
          cur = &(**cur)[1];
        }
        out_ << " => ";
        print(*cur, kExpr);
        names_.resize(names_.size() - pushed);
        close(prec > kExpr);
        return;
      }
      case Tag::App:
        open(prec > kApp);
        print(n[0], kApp);
        out_ << " ";
        print(n[1], kAtom);
        close(prec > kApp);
        return;
      case Tag::Pi:
      case Tag::Sigma: {
        bool dependent = mentions(n[1], 0);
        const char* op = n.tag == Tag::Pi ? " -> " : " * ";
        if (dependent) {
          open(prec > kExpr);
          std::string x = fresh(n.name);
          out_ << "(" << x << " : ";
          print(n[0], kExpr);
          out_ << ")" << op;
          names_.push_back(x);
          print(n[1], kExpr);
          names_.pop_back();
          close(prec > kExpr);
          return;
        }
        Term cod = shift(n[1], 0, -1);
        if (n.tag == Tag::Pi) {
          open(prec > kExpr);
          print(n[0], kSum);
          out_ << op;
          print(cod, kExpr);
          close(prec > kExpr);
        } else {
          open(prec > kProd);
          print(n[0], kApp);
          out_ << op;
          print(cod, kProd);
          close(prec > kProd);
        }
        return;
      }
      case Tag::Sum:
        open(prec > kSum);
        print(n[0], kProd);
        out_ << " + ";
        print(n[1], kSum);
        close(prec > kSum);
        return;
      case Tag::Pair:
        out_ << "(";
        print(n[0], kExpr);
        out_ << ", ";
        print(n[1], kExpr);
        out_ << ")";
        return;
      case Tag::Suc:
        if (n[0]->tag == Tag::Zero) {
          out_ << n.count;
          return;
        }
        open(prec > kApp);
        for (std::uint64_t i = 0; i < n.count; ++i) out_ << "suc " << (i + 1 < n.count ? "(" : "");
        print(n[0], kAtom);
        for (std::uint64_t i = 1; i < n.count; ++i) out_ << ")";
        close(prec > kApp);
        return;
      case Tag::Fst: keyword(prec, "fst", n); return;
      case Tag::Snd: keyword(prec, "snd", n); return;
      case Tag::Eq: keyword(prec, "Eq", n); return;
      case Tag::Refl: keyword(prec, "refl", n); return;
      case Tag::EqInd: keyword(prec, "J", n); return;
      case Tag::ExFalso: keyword(prec, "exfalso", n); return;
      case Tag::UnitInd: keyword(prec, "unitind", n); return;
      case Tag::NatInd: keyword(prec, "ind", n); return;
      case Tag::Inl: keyword(prec, "inl", n); return;
      case Tag::Inr: keyword(prec, "inr", n); return;
      case Tag::SumInd: keyword(prec, "case", n); return;
      case Tag::Lift:
        open(prec > kApp);
        out_ << "lift";
        if (n.from != Level{0} || n.to != Level{1}) {
          out_ << "[" << n.from.index << "," << n.to.index << "]";
        }
        out_ << " ";
        print(n[0], kAtom);
        close(prec > kApp);
        return;
      case Tag::Empty: out_ << "Empty"; return;
      case Tag::Unit: out_ << "Unit"; return;
      case Tag::Star: out_ << "star"; return;
      case Tag::Nat: out_ << "Nat"; return;
      case Tag::Zero: out_ << "zero"; return;
      case Tag::Univ: out_ << "U" << n.from.index; return;
      case Tag::Ref: out_ << n.def->name; return;
    }
  }

  std::string str() const { return out_.str(); }

 private:
  void open(bool paren) {
    if (paren) out_ << "(";
  }
  void close(bool paren) {
    if (paren) out_ << ")";
  }

  void keyword(int prec, const char* kw, const TermNode& n) {
    open(prec > kApp);
    out_ << kw;
    for (const auto& k : n.kids) {
      out_ << " ";
      print(k, kAtom);
    }
    close(prec > kApp);
  }

  bool taken(const std::string& x) const {
    if (keywords().count(x) || reserved_.count(x)) return true;
    for (const auto& y : names_) {
      if (y == x) return true;
    }
    return false;
  }

  std::string fresh(const std::string& hint) {
    std::string base = hint.empty() || hint == "_" ? "x" : hint;
    if (!taken(base)) return base;
    for (int i = 1;; ++i) {
      std::string cand = base + std::to_string(i);
      if (!taken(cand)) return cand;
    }
  }

  std::vector<std::string> names_;
  std::set<std::string> reserved_;
  std::ostringstream out_;
};

void dump(const Term& t, std::ostringstream& out) {
  const TermNode& n = *t;
  switch (n.tag) {
    case Tag::Var: out << "Var " << n.index; return;
    case Tag::Univ: out << "Univ(" << n.from.index << ")"; return;
    case Tag::Ref: out << "Ref(" << n.def->name << ")"; return;
    default: break;
  }
  out << tag_name(n.tag);
  if (n.tag == Tag::Suc && n.count > 1) out << "^" << n.count;
  if (n.kids.empty()) return;
  out << "(";
  if (n.tag == Tag::Lift) out << n.from.index << ", " << n.to.index << ", ";
  for (std::size_t i = 0; i < n.kids.size(); ++i) {
    if (i) out << ", ";
    dump(n.kids[i], out);
  }
  out << ")";
}

}  // namespace

std::string print_term(const Term& t, const std::vector<std::string>& names) {
  std::set<std::string> reserved;
  collect_refs(t, reserved);
  Printer p(names, std::move(reserved));
  p.print(t, kExpr);
  return p.str();
}

std::string print_term(const Term& t, const Context& ctx) {
  std::vector<std::string> names;
  for (const auto& b : ctx.bindings) names.push_back(b.name);
  return print_term(t, names);
}

std::string dump_term(const Term& t) {
  std::ostringstream out;
  dump(t, out);
  return out.str();
}

}  // namespace prtt
