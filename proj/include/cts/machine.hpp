#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cts/cip.hpp"

namespace cts::cip {

// Finite carriers: nat is {0..nat_mod-1}, bool is {0 = ff, 1 = tt}.
struct Interp {
  int nat_mod = 8;
  int size(Type t) const { return t == Type::nat ? nat_mod : 2; }
  std::string show_value(Type t, int v) const;
};

using Store = std::vector<int>;  // values in process-context order
constexpr int kBottom = -1;      // terminal location

// One node of a process statement, numbered in preorder.
struct Node {
  const Stat* stat = nullptr;
  int parent = -1;
  std::vector<int> children;
  std::vector<int> path;  // child indices from the root
};

// A normal-form term ready to run.
class Machine {
 public:
  Machine(const Typing& typing, Interp interp);
  explicit Machine(const NormalForm& nf, Interp interp);

  int num_processes() const { return static_cast<int>(procs_.size()); }
  const Interp& interp() const { return interp_; }
  const NormalForm& normal_form() const { return *nf_; }
  const Context& context(int i) const { return nf_->contexts[i]; }
  const std::vector<Node>& nodes(int i) const { return procs_[i].nodes; }
  const Stat& stat_at(int i, int loc) const { return *procs_[i].nodes[loc].stat; }
  // "l" followed by the preorder number, or "⊥".
  std::string location_name(int i, int loc) const;
  int var_index(int i, const std::string& x) const;
  const std::vector<Type>& var_types(int i) const { return procs_[i].types; }

  // Evaluation in a process store.
  int eval(int i, const Store& s, const Expr& e) const;

  struct Process {
    std::vector<int> stack;  // locations, top at the back
    int reg = kBottom;
    Store store;
    bool operator==(const Process& o) const { return stack == o.stack && reg == o.reg && store == o.store; }
  };
  using Config = std::vector<Process>;

  enum class Rule { Nop, Asg, If1, If2, While1, While2, RV, S, R };
  struct Step {
    Rule rule = Rule::Nop;
    std::vector<int> procs;  // one process, or sender then receiver
    int value = -1;          // sent or received value
    std::string port;        // S: sending port, R: receiving port, RV: the receiving port
    Config target;
  };

  Config initial(const std::vector<Store>& mu) const;
  // All applicable rewrites, sorted by (procs, rule name, value).
  std::vector<Step> step(const Config& c) const;

 private:
  struct Proc {
    std::vector<Node> nodes;
    std::map<std::string, int> vars;
    std::vector<Type> types;
  };
  std::shared_ptr<const NormalForm> nf_;
  Interp interp_;
  std::vector<Proc> procs_;
  std::map<std::string, std::string> partner_of_out_, partner_of_in_;

  void build();
  void load(Process& p, int proc, int loc) const;
  void pop(Process& p, int proc) const;
};

std::string rule_name(Machine::Rule r);
bool observable(Machine::Rule r);

// Concatenated store values and register locations.
std::vector<int> store_map(const Machine::Config& c);
std::vector<int> location_map(const Machine::Config& c);

struct InitPolicy {
  // Each alternative fixes some variables (context names after renaming);
  // the others range over their carriers. Empty = all initial stores.
  std::vector<std::map<std::string, int>> alternatives;
  long cap = 4096;
};
// e.g. "x=5,z=0;x=1"
InitPolicy parse_init(const std::string& text);
std::vector<std::vector<Store>> initial_stores(const Machine& m, const InitPolicy& policy);

struct StateSpace {
  struct Edge {
    int src = 0, dst = 0;
    Machine::Rule rule = Machine::Rule::Nop;
    std::vector<int> procs;
    int value = -1;
    std::string port;
  };
  std::vector<Machine::Config> states;
  std::vector<Edge> edges;
  std::vector<int> initial;
  bool truncated = false;
};

struct ExploreOptions {
  InitPolicy init;
  long state_cap = 1000000;
  bool parallel = true;
};
// Breadth-first closure from the initial configurations. The parallel and
// serial paths give identical numbering.
StateSpace explore(const Machine& m, const ExploreOptions& opt = {});
StateSpace explore_serial(const Machine& m, const ExploreOptions& opt = {});

}  // namespace cts::cip
