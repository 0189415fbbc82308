#pragma once

#include <random>
#include <string>
#include <vector>

namespace cts::cip {

// Well-typed random statements over nat variables; sends only on out_ports,
// receives only on in_ports.
struct RandomStatSpec {
  std::vector<std::string> vars{"x", "y"};
  std::vector<std::string> out_ports{"p"};
  std::vector<std::string> in_ports{"q"};
  int depth = 3;
  bool loops = true;
};
std::string random_statement(std::mt19937_64& rng, const RandomStatSpec& spec);

// "context x:nat, y:nat | ports; program s end"
std::string random_statement_program(std::mt19937_64& rng, const RandomStatSpec& spec);
// Two statements joined by p ~ q, the left one sending on p, the right one receiving on q.
std::string random_pair_program(std::mt19937_64& rng, int depth);

}  // namespace cts::cip
