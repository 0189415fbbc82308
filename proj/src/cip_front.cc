#include <algorithm>
#include <cctype>
#include <functional>

#include "cts/cip.hpp"

namespace cts::cip {

std::string show(Type t) { return t == Type::nat ? "nat" : "bool"; }

Error::Error(const std::string& what, Pos p)
    : std::runtime_error(p.line ? std::to_string(p.line) + ":" + std::to_string(p.col) + ": " + what : what), pos(p) {}

namespace {

struct Token {
  enum class Kind { ident, number, sym, eof };
  Kind kind = Kind::eof;
  std::string text;
  long value = 0;
  Pos pos;
};

const char* const kSymbols[] = {":=", "<<", ">>", "<=", ">=", "==", "!=", ";", "!", "?", "(", ")",
                                "~",  ",",  ":",  "|",  "+",  "-",  "*",  "<", ">"};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    unsigned char c = s[i];
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    if (s.compare(i, 2, "//") == 0) {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.pos = {line, col};
    if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      t.kind = Token::Kind::ident;
      t.text = s.substr(i, j - i);
      advance(j - i);
    } else if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      t.kind = Token::Kind::number;
      t.text = s.substr(i, j - i);
      if (t.text.size() > 15) throw Error("numeric literal too large", t.pos);
      t.value = std::stol(t.text);
      advance(j - i);
    } else if (s.compare(i, 3, "\xE2\x89\x8D") == 0) {  // the asymp sign
      t.kind = Token::Kind::sym;
      t.text = "~";
      advance(3);
      col -= 2;
    } else if (s.compare(i, 3, "\xE2\x88\xB8") == 0) {  // dot minus
      t.kind = Token::Kind::sym;
      t.text = "-";
      advance(3);
      col -= 2;
    } else {
      for (const char* sym : kSymbols) {
        std::size_t n = std::char_traits<char>::length(sym);
        if (s.compare(i, n, sym) == 0) {
          t.kind = Token::Kind::sym;
          t.text = sym;
          break;
        }
      }
      if (t.kind != Token::Kind::sym) throw Error(std::string("unexpected character '") + s[i] + "'", t.pos);
      advance(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token eof;
  eof.pos = {line, col};
  out.push_back(eof);
  return out;
}

const std::set<std::string> kKeywords = {"context", "program", "end",  "nop", "if",  "then", "else", "while",
                                         "do",      "true",    "false", "and", "or", "not",  "nat",  "bool"};

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  Program program() {
    Program p;
    expect_kw("context");
    if (!at_sym(";") && !at_sym("|")) p.context = decls();
    if (accept_sym("|")) p.ports = decls();
    expect_sym(";");
    expect_kw("program");
    p.term = term();
    expect_kw("end");
    expect_eof();
    return p;
  }

  Term whole_term() {
    Term t = term();
    expect_eof();
    return t;
  }

  Expr whole_expr() {
    Expr e = expr();
    expect_eof();
    return e;
  }

 private:
  std::vector<Token> toks_;
  std::size_t k_ = 0;

  const Token& cur() const { return toks_[k_]; }
  bool at_sym(const char* s) const { return cur().kind == Token::Kind::sym && cur().text == s; }
  bool at_kw(const char* s) const { return cur().kind == Token::Kind::ident && cur().text == s; }
  bool accept_sym(const char* s) {
    if (!at_sym(s)) return false;
    ++k_;
    return true;
  }
  bool accept_kw(const char* s) {
    if (!at_kw(s)) return false;
    ++k_;
    return true;
  }
  [[noreturn]] void fail(const std::string& what) const {
    std::string got = cur().kind == Token::Kind::eof ? "end of input" : "'" + cur().text + "'";
    throw Error(what + ", got " + got, cur().pos);
  }
  void expect_sym(const char* s) {
    if (!accept_sym(s)) fail(std::string("expected '") + s + "'");
  }
  void expect_kw(const char* s) {
    if (!accept_kw(s)) fail(std::string("expected '") + s + "'");
  }
  void expect_eof() {
    if (cur().kind != Token::Kind::eof) fail("expected end of input");
  }
  std::string name(const char* what) {
    if (cur().kind != Token::Kind::ident || kKeywords.count(cur().text)) fail(std::string("expected ") + what);
    return toks_[k_++].text;
  }

  Type type() {
    if (accept_kw("nat")) return Type::nat;
    if (accept_kw("bool")) return Type::boolean;
    fail("expected a type");
  }

  Context decls() {
    Context c;
    do {
      Decl d;
      d.name = name("a name");
      expect_sym(":");
      d.type = type();
      c.push_back(d);
    } while (accept_sym(","));
    return c;
  }

  Term term() {
    Term left = seq();
    while (at_sym("<<")) {
      Pos pos = cur().pos;
      ++k_;
      std::vector<Channel> chans;
      if (!at_sym(">>")) {
        do {
          Channel c;
          c.out = name("a port");
          expect_sym("~");
          c.in = name("a port");
          chans.push_back(c);
        } while (accept_sym(","));
      }
      expect_sym(">>");
      Term right = seq();
      Term t;
      t.composite = true;
      t.pos = pos;
      t.channels = std::move(chans);
      t.parts = {std::move(left), std::move(right)};
      left = std::move(t);
    }
    return left;
  }

  Term seq() {
    Term first = item();
    if (!at_sym(";")) return first;
    Stat s = as_stat(first);
    while (at_sym(";")) {
      Pos pos = cur().pos;
      ++k_;
      Stat next = as_stat(item());
      Stat q;
      q.kind = Stat::Kind::seq;
      q.pos = pos;
      q.body = {std::move(s), std::move(next)};
      s = std::move(q);
    }
    Term t;
    t.stat = std::move(s);
    t.pos = t.stat.pos;
    return t;
  }

  Stat as_stat(const Term& t) const {
    if (t.composite) throw Error("composition inside a statement", t.pos);
    return t.stat;
  }

  Stat stat() { return as_stat(seq()); }

  Term item() {
    if (accept_sym("(")) {
      Term t = term();
      expect_sym(")");
      return t;
    }
    Term t;
    t.stat = simple();
    t.pos = t.stat.pos;
    return t;
  }

  Stat simple() {
    Stat s;
    s.pos = cur().pos;
    if (accept_kw("nop")) {
      s.kind = Stat::Kind::nop;
    } else if (accept_kw("if")) {
      s.kind = Stat::Kind::if_;
      s.expr = expr();
      expect_kw("then");
      Stat a = stat();
      expect_kw("else");
      Stat b = stat();
      expect_kw("end");
      s.body = {std::move(a), std::move(b)};
    } else if (accept_kw("while")) {
      s.kind = Stat::Kind::while_;
      s.expr = expr();
      expect_kw("do");
      s.body = {stat()};
      expect_kw("end");
    } else {
      std::string n = name("a statement");
      if (accept_sym(":=")) {
        s.kind = Stat::Kind::assign;
        s.var = n;
        s.expr = expr();
      } else if (accept_sym("!")) {
        s.kind = Stat::Kind::send;
        s.port = n;
        s.expr = expr();
      } else if (accept_sym("?")) {
        s.kind = Stat::Kind::recv;
        s.port = n;
        s.var = name("a variable");
      } else {
        fail("expected ':=', '!' or '?'");
      }
    }
    return s;
  }

  Expr binary(std::string op, Expr a, Expr b, Pos pos) {
    Expr e = Expr::op(std::move(op), {std::move(a), std::move(b)});
    e.pos = pos;
    return e;
  }

  Expr expr() {
    Expr e = conj();
    while (at_kw("or")) {
      Pos pos = cur().pos;
      ++k_;
      e = binary("or", std::move(e), conj(), pos);
    }
    return e;
  }
  Expr conj() {
    Expr e = negation();
    while (at_kw("and")) {
      Pos pos = cur().pos;
      ++k_;
      e = binary("and", std::move(e), negation(), pos);
    }
    return e;
  }
  Expr negation() {
    if (at_kw("not")) {
      Pos pos = cur().pos;
      ++k_;
      Expr e = Expr::op("not", {negation()});
      e.pos = pos;
      return e;
    }
    return comparison();
  }
  Expr comparison() {
    Expr e = additive();
    for (const char* op : {"<", "<=", ">", ">=", "==", "!="})
      if (at_sym(op)) {
        Pos pos = cur().pos;
        ++k_;
        return binary(op, std::move(e), additive(), pos);
      }
    return e;
  }
  Expr additive() {
    Expr e = multiplicative();
    while (at_sym("+") || at_sym("-")) {
      Pos pos = cur().pos;
      std::string op = toks_[k_++].text;
      e = binary(op, std::move(e), multiplicative(), pos);
    }
    return e;
  }
  Expr multiplicative() {
    Expr e = atom();
    while (at_sym("*")) {
      Pos pos = cur().pos;
      ++k_;
      e = binary("*", std::move(e), atom(), pos);
    }
    return e;
  }
  Expr atom() {
    Pos pos = cur().pos;
    Expr e;
    if (cur().kind == Token::Kind::number) {
      e = Expr::nat(toks_[k_++].value);
    } else if (accept_kw("true")) {
      e = Expr::boolean(true);
    } else if (accept_kw("false")) {
      e = Expr::boolean(false);
    } else if (accept_sym("(")) {
      e = expr();
      expect_sym(")");
      return e;
    } else {
      e = Expr::var(name("an expression"));
    }
    e.pos = pos;
    return e;
  }
};

int precedence(const Expr& e) {
  if (e.kind != Expr::Kind::op) return 7;
  const std::string& o = e.name;
  if (o == "or") return 1;
  if (o == "and") return 2;
  if (o == "not") return 3;
  if (o == "+" || o == "-") return 5;
  if (o == "*") return 6;
  return 4;
}

std::string show_at(const Expr& e, int min) {
  std::string s;
  int p = precedence(e);
  switch (e.kind) {
    case Expr::Kind::var:
      s = e.name;
      break;
    case Expr::Kind::nat_lit:
      s = std::to_string(e.value);
      break;
    case Expr::Kind::bool_lit:
      s = e.value ? "true" : "false";
      break;
    case Expr::Kind::op:
      if (e.name == "not")
        s = "not " + show_at(e.args[0], 3);
      else if (p == 4)
        s = show_at(e.args[0], 5) + " " + e.name + " " + show_at(e.args[1], 5);
      else
        s = show_at(e.args[0], p) + " " + e.name + " " + show_at(e.args[1], p + 1);
      break;
  }
  return p < min ? "(" + s + ")" : s;
}

void visit(Stat& s, const std::function<void(Stat&)>& fn) {
  fn(s);
  for (auto& b : s.body) visit(b, fn);
}
void visit(const Stat& s, const std::function<void(const Stat&)>& fn) {
  fn(s);
  for (const auto& b : s.body) visit(b, fn);
}

void expr_vars(const Expr& e, std::set<std::string>& out) {
  if (e.kind == Expr::Kind::var) out.insert(e.name);
  for (const auto& a : e.args) expr_vars(a, out);
}

void rename_expr(Expr& e, const std::map<std::string, std::string>& m) {
  if (e.kind == Expr::Kind::var) {
    auto it = m.find(e.name);
    if (it != m.end()) e.name = it->second;
  }
  for (auto& a : e.args) rename_expr(a, m);
}

bool has_expr(Stat::Kind k) {
  return k == Stat::Kind::assign || k == Stat::Kind::send || k == Stat::Kind::if_ || k == Stat::Kind::while_;
}

void leaves(Term& t, std::vector<Stat*>& out) {
  if (!t.composite) {
    out.push_back(&t.stat);
    return;
  }
  leaves(t.parts[0], out);
  leaves(t.parts[1], out);
}
void leaves(const Term& t, std::vector<const Stat*>& out) {
  if (!t.composite) {
    out.push_back(&t.stat);
    return;
  }
  leaves(t.parts[0], out);
  leaves(t.parts[1], out);
}
void channels_in_order(const Term& t, std::vector<Channel>& out) {
  if (!t.composite) return;
  channels_in_order(t.parts[0], out);
  out.insert(out.end(), t.channels.begin(), t.channels.end());
  channels_in_order(t.parts[1], out);
}

std::string fresh(const std::string& base, const std::set<std::string>& taken) {
  for (int k = 1;; ++k) {
    std::string c = base + "#" + std::to_string(k);
    if (!taken.count(c)) return c;
  }
}

const PortType* find_port(const Signature& s, const std::string& p) {
  for (const auto& e : s)
    if (e.port == p) return &e;
  return nullptr;
}

std::string show_port(const PortType& p) { return p.port + ":" + show(p.type) + p.polarity; }

void merge_into(Signature& into, const Signature& more, Pos pos) {
  for (const auto& e : more) {
    const PortType* prev = find_port(into, e.port);
    if (!prev) {
      into.push_back(e);
    } else if (prev->type != e.type || prev->polarity != e.polarity) {
      throw Error("ill-formed signature: port " + e.port + " used as " + show_port(*prev) + " and " + show_port(e), pos);
    }
  }
}

void check_context(const Context& c, const char* what) {
  std::set<std::string> seen;
  for (const auto& d : c)
    if (!seen.insert(d.name).second) throw Error(std::string("ill-formed ") + what + ": repeated name " + d.name);
}

const Decl* lookup(const Context& c, const std::string& x) {
  for (const auto& d : c)
    if (d.name == x) return &d;
  return nullptr;
}

void rename_ports_in(Term& t, const std::map<std::string, std::string>& m) {
  if (!t.composite) {
    rename_ports(t.stat, m);
    return;
  }
  for (auto& c : t.channels) {
    if (m.count(c.out)) c.out = m.at(c.out);
    if (m.count(c.in)) c.in = m.at(c.in);
  }
  rename_ports_in(t.parts[0], m);
  rename_ports_in(t.parts[1], m);
}

struct TermTyping {
  Signature sig;
  std::set<std::string> ports;
};

TermTyping type_term(Term& t, std::vector<Context>::const_iterator& ctx) {
  if (!t.composite) {
    TermTyping r{typecheck(*ctx++, t.stat), ports_of(t.stat)};
    return r;
  }
  TermTyping l = type_term(t.parts[0], ctx);
  TermTyping r = type_term(t.parts[1], ctx);
  std::set<std::string> taken = l.ports;
  taken.insert(r.ports.begin(), r.ports.end());
  std::map<std::string, std::string> ren;
  for (const auto& p : r.ports)
    if (l.ports.count(p)) {
      ren[p] = fresh(p, taken);
      taken.insert(ren[p]);
    }
  if (!ren.empty()) {
    rename_ports_in(t.parts[1], ren);
    for (auto& c : t.channels)
      if (ren.count(c.in)) c.in = ren.at(c.in);
    for (auto& e : r.sig)
      if (ren.count(e.port)) e.port = ren.at(e.port);
    std::set<std::string> rp;
    for (const auto& p : r.ports) rp.insert(ren.count(p) ? ren.at(p) : p);
    r.ports = rp;
  }
  std::set<std::string> outs, ins;
  for (auto& c : t.channels) {
    const PortType* p = find_port(l.sig, c.out);
    const PortType* q = find_port(r.sig, c.in);
    if (!p) throw Error("channel " + c.out + " ~ " + c.in + ": " + c.out + " is not an open port of the left operand", t.pos);
    if (!q) throw Error("channel " + c.out + " ~ " + c.in + ": " + c.in + " is not an open port of the right operand", t.pos);
    if (p->polarity != '+') throw Error("channel " + c.out + " ~ " + c.in + ": " + c.out + " is not an output port", t.pos);
    if (q->polarity != '-') throw Error("channel " + c.out + " ~ " + c.in + ": " + c.in + " is not an input port", t.pos);
    if (p->type != q->type)
      throw Error("channel " + c.out + " ~ " + c.in + " joins " + show(p->type) + " and " + show(q->type), t.pos);
    if (!outs.insert(c.out).second || !ins.insert(c.in).second)
      throw Error("channel list uses a port twice", t.pos);
    c.type = p->type;
  }
  TermTyping out;
  for (const auto& e : l.sig)
    if (!outs.count(e.port)) out.sig.push_back(e);
  for (const auto& e : r.sig)
    if (!ins.count(e.port)) out.sig.push_back(e);
  out.ports = l.ports;
  out.ports.insert(r.ports.begin(), r.ports.end());
  return out;
}

using Bij = std::pair<std::map<std::string, std::string>, std::map<std::string, std::string>>;

bool bind(Bij& b, const std::string& x, const std::string& y) {
  auto i = b.first.find(x);
  auto j = b.second.find(y);
  if (i == b.first.end() && j == b.second.end()) {
    b.first[x] = y;
    b.second[y] = x;
    return true;
  }
  return i != b.first.end() && j != b.second.end() && i->second == y && j->second == x;
}

bool stat_equiv(const Stat& a, const Stat& b, Bij& bij) {
  if (a.kind != b.kind || a.var != b.var || !(a.expr == b.expr) || a.body.size() != b.body.size()) return false;
  if (!a.port.empty() || !b.port.empty())
    if (!bind(bij, a.port, b.port)) return false;
  for (std::size_t k = 0; k < a.body.size(); ++k)
    if (!stat_equiv(a.body[k], b.body[k], bij)) return false;
  return true;
}

bool channels_equiv(const std::vector<Channel>& a, const std::vector<Channel>& b, std::vector<char>& used,
                    std::size_t k, Bij bij) {
  if (k == a.size()) return true;
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (used[j] || a[k].type != b[j].type) continue;
    Bij next = bij;
    if (!bind(next, a[k].out, b[j].out) || !bind(next, a[k].in, b[j].in)) continue;
    used[j] = 1;
    if (channels_equiv(a, b, used, k + 1, next)) return true;
    used[j] = 0;
  }
  return false;
}

}  // namespace

Program parse_program(const std::string& text) { return Parser(text).program(); }
Term parse_term(const std::string& text) { return Parser(text).whole_term(); }
Expr parse_expr(const std::string& text) { return Parser(text).whole_expr(); }

std::string show(const Expr& e) { return show_at(e, 0); }

std::string show(const Stat& s) {
  switch (s.kind) {
    case Stat::Kind::nop:
      return "nop";
    case Stat::Kind::assign:
      return s.var + " := " + show(s.expr);
    case Stat::Kind::send:
      return s.port + "!" + show_at(s.expr, 7);
    case Stat::Kind::recv:
      return s.port + "?" + s.var;
    case Stat::Kind::seq:
      return show(s.body[0]) + "; " + show(s.body[1]);
    case Stat::Kind::if_:
      return "if " + show(s.expr) + " then " + show(s.body[0]) + " else " + show(s.body[1]) + " end";
    case Stat::Kind::while_:
      return "while " + show(s.expr) + " do " + show(s.body[0]) + " end";
  }
  return {};
}

std::string show(const Term& t) {
  if (!t.composite) return show(t.stat);
  std::string chans;
  for (std::size_t k = 0; k < t.channels.size(); ++k)
    chans += (k ? ", " : "") + t.channels[k].out + " ~ " + t.channels[k].in;
  std::string right = show(t.parts[1]);
  if (t.parts[1].composite) right = "(" + right + ")";
  return show(t.parts[0]) + " << " + chans + (chans.empty() ? ">> " : " >> ") + right;
}

std::string show(const Context& c) {
  std::string s;
  for (std::size_t k = 0; k < c.size(); ++k) s += (k ? ", " : "") + c[k].name + ":" + show(c[k].type);
  return s;
}

std::string show(const Signature& s) {
  std::string out = "\xE2\x9F\xA8";
  for (std::size_t k = 0; k < s.size(); ++k) out += (k ? ", " : "") + show_port(s[k]);
  return out + "\xE2\x9F\xA9";
}

bool operator==(const Expr& a, const Expr& b) {
  return a.kind == b.kind && a.name == b.name && a.value == b.value && a.args == b.args;
}

bool operator==(const Stat& a, const Stat& b) {
  return a.kind == b.kind && a.var == b.var && a.port == b.port && a.expr == b.expr && a.body == b.body;
}

std::set<std::string> free_vars(const Stat& s) {
  std::set<std::string> out;
  visit(s, [&](const Stat& n) {
    if (!n.var.empty()) out.insert(n.var);
    if (has_expr(n.kind)) expr_vars(n.expr, out);
  });
  return out;
}

std::set<std::string> ports_of(const Stat& s) {
  std::set<std::string> out;
  visit(s, [&](const Stat& n) {
    if (!n.port.empty()) out.insert(n.port);
  });
  return out;
}

void rename_vars(Stat& s, const std::map<std::string, std::string>& m) {
  visit(s, [&](Stat& n) {
    if (!n.var.empty() && m.count(n.var)) n.var = m.at(n.var);
    if (has_expr(n.kind)) rename_expr(n.expr, m);
  });
}

void rename_ports(Stat& s, const std::map<std::string, std::string>& m) {
  visit(s, [&](Stat& n) {
    if (!n.port.empty() && m.count(n.port)) n.port = m.at(n.port);
  });
}

Type type_of(const Context& gamma, const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::var: {
      const Decl* d = lookup(gamma, e.name);
      if (!d) throw Error("unbound variable " + e.name, e.pos);
      return d->type;
    }
    case Expr::Kind::nat_lit:
      return Type::nat;
    case Expr::Kind::bool_lit:
      return Type::boolean;
    case Expr::Kind::op:
      break;
  }
  const std::string& o = e.name;
  auto need = [&](const Expr& a, Type t) {
    Type got = type_of(gamma, a);
    if (got != t) throw Error("type mismatch: operator " + o + " expects " + show(t) + ", got " + show(got), a.pos);
  };
  if (o == "not") {
    need(e.args[0], Type::boolean);
    return Type::boolean;
  }
  if (o == "and" || o == "or") {
    need(e.args[0], Type::boolean);
    need(e.args[1], Type::boolean);
    return Type::boolean;
  }
  if (o == "==" || o == "!=") {
    Type a = type_of(gamma, e.args[0]);
    need(e.args[1], a);
    return Type::boolean;
  }
  need(e.args[0], Type::nat);
  need(e.args[1], Type::nat);
  return (o == "+" || o == "-" || o == "*") ? Type::nat : Type::boolean;
}

Signature typecheck(const Context& gamma, const Stat& s) {
  switch (s.kind) {
    case Stat::Kind::nop:
      return {};
    case Stat::Kind::assign: {
      const Decl* d = lookup(gamma, s.var);
      if (!d) throw Error("unbound variable " + s.var, s.pos);
      Type t = type_of(gamma, s.expr);
      if (t != d->type)
        throw Error("type mismatch: " + s.var + " has type " + show(d->type) + ", expression has type " + show(t), s.pos);
      return {};
    }
    case Stat::Kind::send:
      return {PortType{s.port, type_of(gamma, s.expr), '+'}};
    case Stat::Kind::recv: {
      const Decl* d = lookup(gamma, s.var);
      if (!d) throw Error("unbound variable " + s.var, s.pos);
      return {PortType{s.port, d->type, '-'}};
    }
    case Stat::Kind::seq: {
      Signature a = typecheck(gamma, s.body[0]);
      merge_into(a, typecheck(gamma, s.body[1]), s.pos);
      return a;
    }
    case Stat::Kind::if_: {
      if (type_of(gamma, s.expr) != Type::boolean) throw Error("condition is not bool", s.expr.pos);
      Signature a = typecheck(gamma, s.body[0]);
      merge_into(a, typecheck(gamma, s.body[1]), s.pos);
      return a;
    }
    case Stat::Kind::while_:
      if (type_of(gamma, s.expr) != Type::boolean) throw Error("condition is not bool", s.expr.pos);
      return typecheck(gamma, s.body[0]);
  }
  return {};
}

Typing typecheck(const Context& gamma, const Term& t) {
  check_context(gamma, "context");
  Typing out;
  out.term = t;
  std::vector<Stat*> procs;
  leaves(out.term, procs);

  std::set<std::string> used_anywhere, taken;
  for (const auto& d : gamma) taken.insert(d.name);
  std::vector<std::set<std::string>> used;
  for (Stat* s : procs) {
    used.push_back(free_vars(*s));
    used_anywhere.insert(used.back().begin(), used.back().end());
  }
  std::set<std::string> claimed;
  for (std::size_t i = 0; i < procs.size(); ++i) {
    Context ctx;
    std::map<std::string, std::string> ren;
    for (const auto& d : gamma) {
      bool mine = used[i].count(d.name) || (i == 0 && !used_anywhere.count(d.name));
      if (!mine) continue;
      Decl nd = d;
      if (claimed.count(d.name)) {
        nd.name = fresh(d.name, taken);
        taken.insert(nd.name);
        ren[d.name] = nd.name;
      }
      claimed.insert(d.name);
      ctx.push_back(nd);
    }
    // Names used but not declared stay as they are so that typing reports them.
    rename_vars(*procs[i], ren);
    out.process_contexts.push_back(ctx);
    out.context.insert(out.context.end(), ctx.begin(), ctx.end());
  }

  auto it = out.process_contexts.cbegin();
  TermTyping tt = type_term(out.term, it);
  out.signature = tt.sig;
  channels_in_order(out.term, out.channels);
  return out;
}

Typing typecheck(const Program& p) {
  check_context(p.ports, "port declaration");
  Typing t = typecheck(p.context, p.term);
  for (const auto& e : t.signature) {
    const Decl* d = lookup(p.ports, e.port);
    if (d && d->type != e.type)
      throw Error("port " + e.port + " is declared " + show(d->type) + " but used as " + show(e.type));
  }
  return t;
}

std::string show_judgement(const Typing& t, const Context& ports) {
  std::string ctx = show(t.context);
  if (!ports.empty()) ctx += " | " + show(ports);
  return (ctx.empty() ? "" : ctx + " ") + "\xE2\x8A\xA2 " + show(t.term) + " : " + show(t.signature);
}

Stat flatten(const Stat& s) {
  if (s.kind != Stat::Kind::seq) {
    Stat c = s;
    for (auto& b : c.body) b = flatten(b);
    return c;
  }
  std::vector<Stat> items;
  std::function<void(const Stat&)> collect = [&](const Stat& n) {
    if (n.kind == Stat::Kind::seq) {
      collect(n.body[0]);
      collect(n.body[1]);
    } else {
      items.push_back(flatten(n));
    }
  };
  collect(s);
  Stat acc = items.back();
  for (std::size_t k = items.size() - 1; k-- > 0;) {
    Stat q;
    q.kind = Stat::Kind::seq;
    q.pos = items[k].pos;
    q.body = {items[k], std::move(acc)};
    acc = std::move(q);
  }
  return acc;
}

NormalForm normal_form(const Term& t) {
  NormalForm nf;
  std::vector<const Stat*> procs;
  leaves(t, procs);
  for (const Stat* s : procs) nf.stats.push_back(flatten(*s));
  channels_in_order(t, nf.channels);
  return nf;
}

NormalForm normal_form(const Typing& t) {
  NormalForm nf = normal_form(t.term);
  nf.contexts = t.process_contexts;
  return nf;
}

Term reassemble(const NormalForm& nf) {
  if (nf.stats.empty()) throw Error("reassemble: no statements");
  std::map<std::string, std::size_t> owner;
  for (std::size_t i = 0; i < nf.stats.size(); ++i)
    for (const auto& p : ports_of(nf.stats[i])) owner.emplace(p, i);
  std::vector<std::vector<Channel>> cut(nf.stats.size());
  for (const auto& c : nf.channels) {
    auto o = owner.find(c.out);
    auto i = owner.find(c.in);
    if (o == owner.end() || i == owner.end() || o->second >= i->second)
      throw Error("reassemble: channel " + c.out + " ~ " + c.in + " does not run left to right");
    cut[i->second].push_back(c);
  }
  Term acc;
  acc.stat = nf.stats[0];
  for (std::size_t i = 1; i < nf.stats.size(); ++i) {
    Term right;
    right.stat = nf.stats[i];
    Term t;
    t.composite = true;
    t.channels = cut[i];
    t.parts = {std::move(acc), std::move(right)};
    acc = std::move(t);
  }
  return acc;
}

bool alpha_equiv(const NormalForm& a, const NormalForm& b) {
  if (a.stats.size() != b.stats.size() || a.channels.size() != b.channels.size()) return false;
  Bij bij;
  for (std::size_t k = 0; k < a.stats.size(); ++k)
    if (!stat_equiv(a.stats[k], b.stats[k], bij)) return false;
  std::vector<char> used(b.channels.size(), 0);
  return channels_equiv(a.channels, b.channels, used, 0, bij);
}

}  // namespace cts::cip
