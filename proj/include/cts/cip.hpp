#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cts::cip {

enum class Type { nat, boolean };
std::string show(Type t);

struct Pos {
  int line = 0;
  int col = 0;
};

// Lex, parse and typing errors; pos is zero when unknown.
class Error : public std::runtime_error {
 public:
  Error(const std::string& what, Pos pos = {});
  Pos pos;
};

struct Expr {
  enum class Kind { var, nat_lit, bool_lit, op };
  Kind kind = Kind::nat_lit;
  std::string name;  // variable or operator: + - * < <= > >= == != and or not
  long value = 0;
  std::vector<Expr> args;
  Pos pos;

  static Expr var(std::string n) { return Expr{Kind::var, std::move(n), 0, {}, {}}; }
  static Expr nat(long v) { return Expr{Kind::nat_lit, {}, v, {}, {}}; }
  static Expr boolean(bool b) { return Expr{Kind::bool_lit, {}, b ? 1 : 0, {}, {}}; }
  static Expr op(std::string o, std::vector<Expr> a) { return Expr{Kind::op, std::move(o), 0, std::move(a), {}}; }
};

struct Stat {
  enum class Kind { nop, assign, send, recv, seq, if_, while_ };
  Kind kind = Kind::nop;
  std::string var;   // assign, recv
  std::string port;  // send, recv
  Expr expr;         // assign, send, condition of if / while
  std::vector<Stat> body;  // seq: 2, if: then/else, while: 1
  Pos pos;
};

struct Channel {
  std::string out;  // sending port, left of ~
  std::string in;   // receiving port
  Type type = Type::nat;
};

struct Term {
  bool composite = false;
  Stat stat;
  std::vector<Term> parts;  // left, right
  std::vector<Channel> channels;
  Pos pos;
};

struct Decl {
  std::string name;
  Type type = Type::nat;
};
using Context = std::vector<Decl>;

struct PortType {
  std::string port;
  Type type = Type::nat;
  char polarity = '+';
};
using Signature = std::vector<PortType>;

struct Program {
  Context context;
  Context ports;  // declared interface ports, after '|'
  Term term;
};

Program parse_program(const std::string& text);
Term parse_term(const std::string& text);
Expr parse_expr(const std::string& text);

std::string show(const Expr& e);
std::string show(const Stat& s);
std::string show(const Term& t);
std::string show(const Context& c);
std::string show(const Signature& s);

bool operator==(const Expr& a, const Expr& b);
bool operator==(const Stat& a, const Stat& b);

std::set<std::string> free_vars(const Stat& s);
std::set<std::string> ports_of(const Stat& s);
void rename_vars(Stat& s, const std::map<std::string, std::string>& m);
void rename_ports(Stat& s, const std::map<std::string, std::string>& m);

// Typing of expressions and of a single statement.
Type type_of(const Context& gamma, const Expr& e);
Signature typecheck(const Context& gamma, const Stat& s);

// Whole terms. Statements are processes; each gets the variables it uses
// (unused ones go to the first), later copies of a shared name become x#k.
// Ports of the right operand of a composition that already occur on the
// left are renamed p#k.
struct Typing {
  Term term;  // after alpha-conversion
  Signature signature;
  std::vector<Channel> channels;  // typed, left to right
  std::vector<Context> process_contexts;
  Context context;  // concatenation of the process contexts
};
Typing typecheck(const Context& gamma, const Term& t);
// Also checks the declared ports against the signature.
Typing typecheck(const Program& p);
std::string show_judgement(const Typing& t, const Context& ports = {});

// Statements flattened to right-nested sequences, channels collected.
struct NormalForm {
  std::vector<Stat> stats;
  std::vector<Channel> channels;
  std::vector<Context> contexts;  // per statement, when known
};
NormalForm normal_form(const Term& t);
NormalForm normal_form(const Typing& t);
Stat flatten(const Stat& s);
Term reassemble(const NormalForm& nf);
// Equal up to a consistent renaming of ports; channels as multisets.
bool alpha_equiv(const NormalForm& a, const NormalForm& b);

}  // namespace cts::cip
