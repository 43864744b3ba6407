#include "prtt/parser.hpp"

#include "prtt/printer.hpp"

#include <map>
#include <sstream>

namespace prtt {

ParseError::ParseError(std::string message, SourceSpan span, std::vector<std::string> expected)
    : Diagnostic("ParseError", std::move(message), std::move(span)),
      expected_(std::move(expected)) {}

nlohmann::json ParseError::to_json() const {
  nlohmann::json j = Diagnostic::to_json();
  j["expected"] = expected_;
  return j;
}

ResolveError::ResolveError(std::string kind, std::string name, std::string message,
                           SourceSpan span)
    : Diagnostic(std::move(kind), std::move(message), std::move(span)), name_(std::move(name)) {}

namespace {

enum class Tok { Ident, Number, String, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
};

// Keywords taking atom arguments, with their argument counts.
const std::map<std::string, int>& keyword_arity() {
  static const std::map<std::string, int> table = {
      {"Eq", 3},    {"refl", 1},  {"J", 5},       {"ind", 4},   {"case", 4},
      {"unitind", 3}, {"exfalso", 2}, {"suc", 1}, {"inl", 1},   {"inr", 1},
      {"fst", 1},   {"snd", 1},   {"lift", 1},    {"Nat", 0},   {"Unit", 0},
      {"star", 0},  {"Empty", 0}, {"zero", 0},
  };
  return table;
}

bool is_reserved(const std::string& s) {
  return s == "def" || s == "import" || s == "fun" || keyword_arity().count(s) > 0;
}

std::optional<unsigned> universe_index(const std::string& s) {
  if (s.size() < 2 || s[0] != 'U') return std::nullopt;
  unsigned v = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
    v = v * 10 + static_cast<unsigned>(s[i] - '0');
    if (v > 1000) return std::nullopt;
  }
  return v;
}

class Lexer {
 public:
  Lexer(const std::string& text, std::string file) : text_(text), file_(std::move(file)) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.span = here();
      if (pos_ >= text_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_' || text_[pos_] == '\'')) {
          advance(1);
        }
        t.kind = Tok::Ident;
        t.text = text_.substr(start, pos_ - start);
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          advance(1);
        }
        t.kind = Tok::Number;
        t.text = text_.substr(start, pos_ - start);
      } else if (c == '"') {
        advance(1);
        std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != '"' && text_[pos_] != '\n') advance(1);
        if (pos_ >= text_.size() || text_[pos_] != '"') {
          throw ParseError("unterminated string", t.span, {"\""});
        }
        t.kind = Tok::String;
        t.text = text_.substr(start, pos_ - start);
        advance(1);
      } else {
        t.text = symbol(t.span);
        t.kind = t.text == "fun" ? Tok::Ident : Tok::Sym;
      }
      t.span.length = std::max<std::size_t>(1, pos_ - offset_of(t.span));
      out.push_back(std::move(t));
    }
  }

 private:
  std::string symbol(const SourceSpan& span) {
    static const std::pair<const char*, const char*> table[] = {
        {":=", ":="}, {"->", "->"}, {"=>", "=>"},
        {"\xE2\x86\x92", "->"},  // →
        {"\xE2\x87\x92", "=>"},  // ⇒
        {"\xC3\x97", "*"},       // ×
        {"\xCE\xBB", "fun"},     // λ
        {"(", "("}, {")", ")"}, {",", ","}, {":", ":"}, {"*", "*"},
        {"+", "+"}, {"[", "["}, {"]", "]"},
    };
    for (const auto& [spelling, meaning] : table) {
      std::size_t n = std::char_traits<char>::length(spelling);
      if (text_.compare(pos_, n, spelling) == 0) {
        advance(n);
        return meaning;
      }
    }
    throw ParseError("unexpected character '" + std::string(1, text_[pos_]) + "'", span, {});
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance(1);
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
      } else {
        break;
      }
    }
  }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else if ((static_cast<unsigned char>(text_[pos_]) & 0xC0) != 0x80) {
        ++col_;
      }
      ++pos_;
    }
  }

  SourceSpan here() {
    SourceSpan s{file_, line_, col_, 1};
    starts_.push_back(pos_);
    return s;
  }

  std::size_t offset_of(const SourceSpan&) const { return starts_.back(); }

  const std::string& text_;
  std::string file_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  std::vector<std::size_t> starts_;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  SurfaceModule module(const std::string& file) {
    SurfaceModule m;
    m.file = file;
    while (peek().kind != Tok::End) {
      if (is_word("import")) {
        next();
        if (peek().kind != Tok::String) fail({"string"});
        m.imports.push_back({peek().text, peek().span});
        next();
      } else if (is_word("def")) {
        next();
        SurfaceDecl d;
        d.span = peek().span;
        d.name = ident();
        if (is_sym(":")) {
          next();
          d.type = expr();
        }
        expect(":=");
        d.body = expr();
        m.decls.push_back(std::move(d));
      } else {
        fail({"def", "import", "end of input"});
      }
    }
    return m;
  }

  ExprPtr whole_expr() {
    ExprPtr e = expr();
    if (peek().kind != Tok::End) fail({"end of input"});
    return e;
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  void next() {
    if (pos_ + 1 < toks_.size()) ++pos_;
  }
  bool is_sym(const char* s) const { return peek().kind == Tok::Sym && peek().text == s; }
  bool is_word(const char* s) const { return peek().kind == Tok::Ident && peek().text == s; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    std::string msg = "unexpected " + found;
    if (!expected.empty()) {
      msg += ", expected ";
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i) msg += i + 1 == expected.size() ? " or " : ", ";
        msg += expected[i];
      }
    }
    throw ParseError(msg, t.span, std::move(expected));
  }

  void expect(const char* s) {
    if (!is_sym(s)) fail({std::string("'") + s + "'"});
    next();
  }

  std::string ident() {
    if (peek().kind != Tok::Ident || is_reserved(peek().text) || universe_index(peek().text)) {
      fail({"identifier"});
    }
    std::string s = peek().text;
    next();
    return s;
  }

  static ExprPtr node(Expr::Kind kind, SourceSpan span, std::vector<ExprPtr> kids,
                      std::string name = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->span = std::move(span);
    e->kids = std::move(kids);
    e->name = std::move(name);
    return e;
  }

  bool binder_ahead() const {
    return is_sym("(") && peek(1).kind == Tok::Ident && peek(2).kind == Tok::Sym &&
           peek(2).text == ":";
  }

  ExprPtr expr() {
    SourceSpan start = peek().span;
    if (is_word("fun")) {
      next();
      std::vector<std::pair<std::string, ExprPtr>> binders;
      if (peek().kind == Tok::Ident) {
        std::string x = ident();
        expect(":");
        binders.emplace_back(x, expr());
      } else {
        if (!binder_ahead()) fail({"binder"});
        while (binder_ahead()) {
          next();
          std::string x = ident();
          expect(":");
          ExprPtr a = expr();
          expect(")");
          binders.emplace_back(x, a);
        }
      }
      expect("=>");
      ExprPtr body = expr();
      for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
        body = node(Expr::Lam, start, {it->second, body}, it->first);
      }
      return body;
    }
    if (binder_ahead()) {
      next();
      std::string x = ident();
      expect(":");
      ExprPtr a = expr();
      expect(")");
      Expr::Kind kind;
      if (is_sym("->")) {
        kind = Expr::Pi;
      } else if (is_sym("*")) {
        kind = Expr::Sigma;
      } else {
        fail({"'->'", "'*'"});
      }
      next();
      return node(kind, start, {a, expr()}, x);
    }
    ExprPtr lhs = sum_level();
    if (is_sym("->")) {
      next();
      return node(Expr::Pi, start, {lhs, expr()});
    }
    return lhs;
  }

  ExprPtr sum_level() {
    SourceSpan start = peek().span;
    ExprPtr l = prod_level();
    if (is_sym("+")) {
      next();
      return node(Expr::Sum, start, {l, sum_level()});
    }
    return l;
  }

  ExprPtr prod_level() {
    SourceSpan start = peek().span;
    ExprPtr l = app_level();
    if (is_sym("*")) {
      next();
      return node(Expr::Sigma, start, {l, prod_level()});
    }
    return l;
  }

  bool atom_ahead() const {
    const Token& t = peek();
    if (t.kind == Tok::Number) return true;
    if (t.kind == Tok::Sym) return t.text == "(";
    if (t.kind != Tok::Ident) return false;
    auto it = keyword_arity().find(t.text);
    if (it != keyword_arity().end()) return it->second == 0;
    return t.text != "def" && t.text != "import" && t.text != "fun";
  }

  ExprPtr app_level() {
    SourceSpan start = peek().span;
    ExprPtr head;
    auto it = peek().kind == Tok::Ident ? keyword_arity().find(peek().text) : keyword_arity().end();
    if (it != keyword_arity().end() && it->second > 0) {
      std::string kw = it->first;
      next();
      if (kw == "lift") {
        auto e = std::make_shared<Expr>();
        e->kind = Expr::Lift;
        e->span = start;
        e->from = Level{0};
        e->to = Level{1};
        if (is_sym("[")) {
          next();
          e->from = Level{level_number()};
          expect(",");
          e->to = Level{level_number()};
          expect("]");
        }
        e->kids.push_back(atom());
        head = e;
      } else {
        std::vector<ExprPtr> args;
        for (int i = 0; i < it->second; ++i) args.push_back(atom());
        head = node(Expr::Keyword, start, std::move(args), kw);
      }
    } else {
      head = atom();
    }
    while (atom_ahead()) {
      head = node(Expr::App, start, {head, atom()});
    }
    return head;
  }

  unsigned level_number() {
    if (peek().kind != Tok::Number || peek().text.size() > 4) fail({"universe level"});
    unsigned v = static_cast<unsigned>(std::stoul(peek().text));
    next();
    return v;
  }

  ExprPtr atom() {
    const Token& t = peek();
    SourceSpan start = t.span;
    if (t.kind == Tok::Number) {
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Number;
      e->span = start;
      try {
        e->number = std::stoull(t.text);
      } catch (const std::out_of_range&) {
        throw ParseError("numeral " + t.text + " is too large", start, {});
      }
      next();
      return e;
    }
    if (is_sym("(")) {
      next();
      ExprPtr e = expr();
      if (is_sym(",")) {
        next();
        ExprPtr b = expr();
        expect(")");
        return node(Expr::Pair, start, {e, b});
      }
      expect(")");
      return e;
    }
    if (t.kind == Tok::Ident) {
      if (auto u = universe_index(t.text)) {
        auto e = std::make_shared<Expr>();
        e->kind = Expr::Univ;
        e->span = start;
        e->from = Level{*u};
        next();
        return e;
      }
      auto it = keyword_arity().find(t.text);
      if (it != keyword_arity().end() && it->second == 0) {
        next();
        return node(Expr::Keyword, start, {}, it->first);
      }
      if (!is_reserved(t.text)) {
        std::string name = t.text;
        next();
        return node(Expr::Ident, start, {}, name);
      }
    }
    fail({"identifier", "number", "'('"});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

class Resolver {
 public:
  explicit Resolver(const Globals& visible) {
    for (const auto& d : visible) globals_[d->name] = d;
  }

  void add_global(const DefinitionPtr& d) { globals_[d->name] = d; }
  bool has_global(const std::string& name) const { return globals_.count(name) > 0; }

  Term go(const ExprPtr& e, std::vector<std::string>& locals) const {
    const Expr& x = *e;
    switch (x.kind) {
      case Expr::Ident: {
        for (std::size_t i = locals.size(); i-- > 0;) {
          if (locals[i] == x.name) return mk::var(locals.size() - 1 - i);
        }
        auto it = globals_.find(x.name);
        if (it == globals_.end()) {
          throw ResolveError("UnboundIdentifier", x.name, "unbound identifier '" + x.name + "'",
                             x.span);
        }
        return mk::ref(it->second);
      }
      case Expr::Number:
        return mk::numeral(x.number);
      case Expr::Lam:
      case Expr::Pi:
      case Expr::Sigma: {
        Term a = go(x.kids[0], locals);
        locals.push_back(x.name);
        Term b;
        try {
          b = go(x.kids[1], locals);
        } catch (...) {
          locals.pop_back();
          throw;
        }
        locals.pop_back();
        std::string hint = x.name.empty() ? "x" : x.name;
        if (x.kind == Expr::Lam) return mk::lam(a, b, hint);
        if (x.kind == Expr::Pi) return mk::pi(a, b, hint);
        return mk::sigma(a, b, hint);
      }
      case Expr::Sum:
        return mk::sum(go(x.kids[0], locals), go(x.kids[1], locals));
      case Expr::App:
        return mk::app(go(x.kids[0], locals), go(x.kids[1], locals));
      case Expr::Pair:
        return mk::pair(go(x.kids[0], locals), go(x.kids[1], locals));
      case Expr::Univ:
        return mk::univ(x.from);
      case Expr::Lift:
        if (x.to < x.from) {
          throw ResolveError("ParseError", "lift", "lift target below its source", x.span);
        }
        return mk::lift(x.from, x.to, go(x.kids[0], locals));
      case Expr::Keyword: {
        std::vector<Term> k;
        for (const auto& kid : x.kids) k.push_back(go(kid, locals));
        const std::string& kw = x.name;
        if (kw == "Nat") return mk::nat();
        if (kw == "Unit") return mk::unit();
        if (kw == "Empty") return mk::empty();
        if (kw == "star") return mk::star();
        if (kw == "zero") return mk::zero();
        if (kw == "suc") return mk::suc(k[0]);
        if (kw == "Eq") return mk::eq(k[0], k[1], k[2]);
        if (kw == "refl") return mk::refl(k[0]);
        if (kw == "J") return mk::eq_ind(k[0], k[1], k[2], k[3], k[4]);
        if (kw == "ind") return mk::nat_ind(k[0], k[1], k[2], k[3]);
        if (kw == "case") return mk::sum_ind(k[0], k[1], k[2], k[3]);
        if (kw == "unitind") return mk::unit_ind(k[0], k[1], k[2]);
        if (kw == "exfalso") return mk::ex_falso(k[0], k[1]);
        if (kw == "inl") return mk::inl(k[0]);
        if (kw == "inr") return mk::inr(k[0]);
        if (kw == "fst") return mk::fst(k[0]);
        if (kw == "snd") return mk::snd(k[0]);
        break;
      }
    }
    throw std::logic_error("unhandled surface expression");
  }

 private:
  std::map<std::string, DefinitionPtr> globals_;
};

}  // namespace

SurfaceModule parse_module(const std::string& text, const std::string& file) {
  Parser p(Lexer(text, file).run());
  return p.module(file);
}

ExprPtr parse_expr(const std::string& text, const std::string& file) {
  Parser p(Lexer(text, file).run());
  return p.whole_expr();
}

std::vector<CoreDecl> resolve(const SurfaceModule& m, const Globals& visible) {
  Resolver r(visible);
  std::vector<CoreDecl> out;
  std::map<std::string, bool> seen;
  for (const auto& d : m.decls) {
    if (seen.count(d.name) || r.has_global(d.name)) {
      throw ResolveError("DuplicateDefinition", d.name, "'" + d.name + "' is already defined",
                         d.span);
    }
    seen[d.name] = true;
    CoreDecl c;
    c.name = d.name;
    c.span = d.span;
    std::vector<std::string> locals;
    if (d.type) c.type = r.go(d.type, locals);
    c.body = r.go(d.body, locals);
    c.def = std::make_shared<Definition>();
    c.def->name = d.name;
    c.def->body = c.body;
    if (c.type) c.def->type = *c.type;
    r.add_global(c.def);
    out.push_back(std::move(c));
  }
  return out;
}

Term resolve_expr(const ExprPtr& e, const Globals& visible,
                  const std::vector<std::string>& locals) {
  Resolver r(visible);
  std::vector<std::string> names = locals;
  return r.go(e, names);
}

std::string print_decls(const std::vector<CoreDecl>& decls) {
  std::ostringstream out;
  for (const auto& d : decls) {
    out << "def " << d.name;
    if (d.type) out << " : " << print_term(*d.type);
    out << " :=\n  " << print_term(d.body) << "\n\n";
  }
  return out.str();
}

}  // namespace prtt
