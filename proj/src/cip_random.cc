#include "cts/cip_random.hpp"

namespace cts::cip {

namespace {

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& xs) {
  return xs[std::uniform_int_distribution<std::size_t>(0, xs.size() - 1)(rng)];
}

std::string atom(std::mt19937_64& rng, const RandomStatSpec& s) {
  if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) return std::to_string(std::uniform_int_distribution<int>(0, 3)(rng));
  return pick(rng, s.vars);
}

std::string nat_expr(std::mt19937_64& rng, const RandomStatSpec& s) {
  static const std::vector<std::string> ops{"+", "-", "*"};
  if (std::uniform_int_distribution<int>(0, 1)(rng) == 0) return atom(rng, s);
  return atom(rng, s) + " " + pick(rng, ops) + " " + atom(rng, s);
}

std::string bool_expr(std::mt19937_64& rng, const RandomStatSpec& s) {
  static const std::vector<std::string> ops{"<", "<=", "==", "!="};
  return atom(rng, s) + " " + pick(rng, ops) + " " + atom(rng, s);
}

std::string stat(std::mt19937_64& rng, const RandomStatSpec& s, int depth) {
  int hi = depth > 0 ? (s.loops ? 7 : 6) : 3;
  switch (std::uniform_int_distribution<int>(0, hi)(rng)) {
    case 0:
      return "nop";
    case 1:
      return pick(rng, s.vars) + " := " + nat_expr(rng, s);
    case 2:
      if (!s.out_ports.empty()) return pick(rng, s.out_ports) + "!(" + nat_expr(rng, s) + ")";
      return pick(rng, s.vars) + " := " + nat_expr(rng, s);
    case 3:
      if (!s.in_ports.empty()) return pick(rng, s.in_ports) + "?" + pick(rng, s.vars);
      return "nop";
    case 4:
    case 5:
      return stat(rng, s, depth - 1) + "; " + stat(rng, s, depth - 1);
    case 6:
      return "if " + bool_expr(rng, s) + " then " + stat(rng, s, depth - 1) + " else " + stat(rng, s, depth - 1) +
             " end";
    default:
      return "while " + bool_expr(rng, s) + " do " + stat(rng, s, depth - 1) + " end";
  }
}

}  // namespace

std::string random_statement(std::mt19937_64& rng, const RandomStatSpec& spec) { return stat(rng, spec, spec.depth); }

std::string random_statement_program(std::mt19937_64& rng, const RandomStatSpec& spec) {
  std::string ctx;
  for (const auto& v : spec.vars) ctx += (ctx.empty() ? "" : ", ") + v + ":nat";
  std::string ports;
  for (const auto& p : spec.out_ports) ports += (ports.empty() ? "" : ", ") + p + ":nat";
  for (const auto& p : spec.in_ports) ports += (ports.empty() ? "" : ", ") + p + ":nat";
  return "context " + ctx + (ports.empty() ? "" : " | " + ports) + "; program " + random_statement(rng, spec) + " end";
}

std::string random_pair_program(std::mt19937_64& rng, int depth) {
  RandomStatSpec left{{"x", "y"}, {"p"}, {}, depth, true};
  RandomStatSpec right{{"x", "y"}, {}, {"q"}, depth, true};
  return "context x:nat, y:nat; program (" + random_statement(rng, left) + ") << p ~ q >> (" +
         random_statement(rng, right) + ") end";
}

}  // namespace cts::cip
