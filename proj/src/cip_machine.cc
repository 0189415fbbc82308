#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "cts/machine.hpp"

namespace cts::cip {

std::string Interp::show_value(Type t, int v) const {
  if (t == Type::boolean) return v ? "tt" : "ff";
  return std::to_string(v);
}

std::string rule_name(Machine::Rule r) {
  switch (r) {
    case Machine::Rule::Nop:
      return "Nop";
    case Machine::Rule::Asg:
      return "Asg";
    case Machine::Rule::If1:
      return "If1";
    case Machine::Rule::If2:
      return "If2";
    case Machine::Rule::While1:
      return "While1";
    case Machine::Rule::While2:
      return "While2";
    case Machine::Rule::RV:
      return "RV";
    case Machine::Rule::S:
      return "S";
    case Machine::Rule::R:
      return "R";
  }
  return {};
}

bool observable(Machine::Rule r) { return r == Machine::Rule::S || r == Machine::Rule::R; }

Machine::Machine(const Typing& typing, Interp interp)
    : nf_(std::make_shared<NormalForm>(cip::normal_form(typing))), interp_(interp) {
  build();
}

Machine::Machine(const NormalForm& nf, Interp interp) : nf_(std::make_shared<NormalForm>(nf)), interp_(interp) {
  build();
}

void Machine::build() {
  if (interp_.nat_mod < 1) throw Error("nat modulus must be positive");
  if (nf_->contexts.size() != nf_->stats.size()) throw Error("normal form lacks process contexts");
  for (std::size_t i = 0; i < nf_->stats.size(); ++i) {
    Proc p;
    for (const auto& d : nf_->contexts[i]) {
      p.vars.emplace(d.name, static_cast<int>(p.types.size()));
      p.types.push_back(d.type);
    }
    std::function<int(const Stat&, int, std::vector<int>)> add = [&](const Stat& s, int parent, std::vector<int> path) {
      int id = static_cast<int>(p.nodes.size());
      p.nodes.push_back(Node{&s, parent, {}, path});
      for (std::size_t k = 0; k < s.body.size(); ++k) {
        std::vector<int> sub = path;
        sub.push_back(static_cast<int>(k));
        int c = add(s.body[k], id, sub);
        p.nodes[id].children.push_back(c);
      }
      return id;
    };
    add(nf_->stats[i], -1, {});
    procs_.push_back(std::move(p));
  }
  for (const auto& c : nf_->channels) {
    partner_of_out_[c.out] = c.in;
    partner_of_in_[c.in] = c.out;
  }
}

std::string Machine::location_name(int, int loc) const { return loc == kBottom ? "\xE2\x8A\xA5" : "l" + std::to_string(loc); }

int Machine::var_index(int i, const std::string& x) const {
  auto it = procs_[i].vars.find(x);
  if (it == procs_[i].vars.end()) throw Error("unbound variable " + x + " in process " + std::to_string(i + 1));
  return it->second;
}

int Machine::eval(int i, const Store& s, const Expr& e) const {
  const long n = interp_.nat_mod;
  switch (e.kind) {
    case Expr::Kind::var:
      return s[var_index(i, e.name)];
    case Expr::Kind::nat_lit:
      return static_cast<int>(e.value % n);
    case Expr::Kind::bool_lit:
      return e.value ? 1 : 0;
    case Expr::Kind::op:
      break;
  }
  const std::string& o = e.name;
  long a = eval(i, s, e.args[0]);
  if (o == "not") return a ? 0 : 1;
  long b = eval(i, s, e.args[1]);
  if (o == "+") return static_cast<int>((a + b) % n);
  if (o == "-") return static_cast<int>(a > b ? a - b : 0);
  if (o == "*") return static_cast<int>((a * b) % n);
  if (o == "<") return a < b;
  if (o == "<=") return a <= b;
  if (o == ">") return a > b;
  if (o == ">=") return a >= b;
  if (o == "==") return a == b;
  if (o == "!=") return a != b;
  if (o == "and") return a && b;
  if (o == "or") return a || b;
  throw Error("unknown operator " + o, e.pos);
}

void Machine::load(Process& p, int proc, int loc) const {
  const auto& nodes = procs_[proc].nodes;
  while (nodes[loc].stat->kind == Stat::Kind::seq) {
    p.stack.push_back(nodes[loc].children[1]);
    loc = nodes[loc].children[0];
  }
  p.reg = loc;
}

void Machine::pop(Process& p, int proc) const {
  if (p.stack.empty()) {
    p.reg = kBottom;
    return;
  }
  int loc = p.stack.back();
  p.stack.pop_back();
  load(p, proc, loc);
}

Machine::Config Machine::initial(const std::vector<Store>& mu) const {
  if (mu.size() != procs_.size()) throw Error("initial store vector has the wrong length");
  Config c(procs_.size());
  for (std::size_t i = 0; i < procs_.size(); ++i) {
    if (mu[i].size() != procs_[i].types.size()) throw Error("initial store of process " + std::to_string(i + 1) + " has the wrong size");
    c[i].store = mu[i];
    load(c[i], static_cast<int>(i), 0);
  }
  return c;
}

std::vector<Machine::Step> Machine::step(const Config& c) const {
  std::vector<Step> out;
  for (int i = 0; i < num_processes(); ++i) {
    const Process& p = c[i];
    if (p.reg == kBottom) continue;
    const Node& node = procs_[i].nodes[p.reg];
    const Stat& s = *node.stat;
    auto single = [&](Rule r) {
      Step st;
      st.rule = r;
      st.procs = {i};
      st.target = c;
      return st;
    };
    switch (s.kind) {
      case Stat::Kind::nop: {
        Step st = single(Rule::Nop);
        pop(st.target[i], i);
        out.push_back(std::move(st));
        break;
      }
      case Stat::Kind::assign: {
        Step st = single(Rule::Asg);
        st.target[i].store[var_index(i, s.var)] = eval(i, p.store, s.expr);
        pop(st.target[i], i);
        out.push_back(std::move(st));
        break;
      }
      case Stat::Kind::if_: {
        bool tt = eval(i, p.store, s.expr);
        Step st = single(tt ? Rule::If1 : Rule::If2);
        load(st.target[i], i, node.children[tt ? 0 : 1]);
        out.push_back(std::move(st));
        break;
      }
      case Stat::Kind::while_: {
        bool tt = eval(i, p.store, s.expr);
        Step st = single(tt ? Rule::While1 : Rule::While2);
        if (tt) {
          st.target[i].stack.push_back(p.reg);
          load(st.target[i], i, node.children[0]);
        } else {
          pop(st.target[i], i);
        }
        out.push_back(std::move(st));
        break;
      }
      case Stat::Kind::send: {
        int v = eval(i, p.store, s.expr);
        auto partner = partner_of_out_.find(s.port);
        if (partner == partner_of_out_.end()) {
          Step st = single(Rule::S);
          st.value = v;
          st.port = s.port;
          pop(st.target[i], i);
          out.push_back(std::move(st));
          break;
        }
        for (int j = 0; j < num_processes(); ++j) {
          if (j == i || c[j].reg == kBottom) continue;
          const Stat& r = *procs_[j].nodes[c[j].reg].stat;
          if (r.kind != Stat::Kind::recv || r.port != partner->second) continue;
          Step st;
          st.rule = Rule::RV;
          st.procs = {i, j};
          st.value = v;
          st.port = r.port;
          st.target = c;
          pop(st.target[i], i);
          st.target[j].store[var_index(j, r.var)] = v;
          pop(st.target[j], j);
          out.push_back(std::move(st));
        }
        break;
      }
      case Stat::Kind::recv: {
        if (partner_of_in_.count(s.port)) break;
        int x = var_index(i, s.var);
        for (int w = 0; w < interp_.size(procs_[i].types[x]); ++w) {
          Step st = single(Rule::R);
          st.value = w;
          st.port = s.port;
          st.target[i].store[x] = w;
          pop(st.target[i], i);
          out.push_back(std::move(st));
        }
        break;
      }
      case Stat::Kind::seq:
        throw Error("register holds a sequence");
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Step& a, const Step& b) {
    return std::make_tuple(a.procs, rule_name(a.rule), a.value) < std::make_tuple(b.procs, rule_name(b.rule), b.value);
  });
  return out;
}

std::vector<int> store_map(const Machine::Config& c) {
  std::vector<int> out;
  for (const auto& p : c) out.insert(out.end(), p.store.begin(), p.store.end());
  return out;
}

std::vector<int> location_map(const Machine::Config& c) {
  std::vector<int> out;
  for (const auto& p : c) out.push_back(p.reg);
  return out;
}

InitPolicy parse_init(const std::string& text) {
  InitPolicy pol;
  std::stringstream alts(text);
  std::string alt;
  while (std::getline(alts, alt, ';')) {
    std::map<std::string, int> m;
    std::stringstream items(alt);
    std::string item;
    while (std::getline(items, item, ',')) {
      item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
      if (item.empty()) continue;
      auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) throw Error("bad initial assignment '" + item + "'");
      std::string name = item.substr(0, eq), val = item.substr(eq + 1);
      int v;
      if (val == "true" || val == "tt") {
        v = 1;
      } else if (val == "false" || val == "ff") {
        v = 0;
      } else {
        try {
          std::size_t used = 0;
          v = std::stoi(val, &used);
          if (used != val.size() || v < 0) throw std::invalid_argument(val);
        } catch (const std::exception&) {
          throw Error("bad initial value '" + val + "' for " + name);
        }
      }
      m[name] = v;
    }
    pol.alternatives.push_back(m);
  }
  return pol;
}

std::vector<std::vector<Store>> initial_stores(const Machine& m, const InitPolicy& policy) {
  struct Slot {
    int proc, index;
    std::string name;
    int size;
  };
  std::vector<Slot> slots;
  for (int i = 0; i < m.num_processes(); ++i)
    for (std::size_t k = 0; k < m.context(i).size(); ++k)
      slots.push_back({i, static_cast<int>(k), m.context(i)[k].name, m.interp().size(m.context(i)[k].type)});

  std::vector<std::map<std::string, int>> alts = policy.alternatives;
  if (alts.empty()) alts.emplace_back();
  std::vector<std::vector<Store>> out;
  std::set<std::vector<int>> seen;
  for (const auto& alt : alts) {
    for (const auto& [name, v] : alt) {
      auto it = std::find_if(slots.begin(), slots.end(), [&](const Slot& s) { return s.name == name; });
      if (it == slots.end()) throw Error("initial assignment to unknown variable " + name);
      if (v >= it->size) throw Error("initial value " + std::to_string(v) + " for " + name + " is outside its carrier");
    }
    long count = 1;
    for (const auto& s : slots)
      if (!alt.count(s.name)) {
        count *= s.size;
        if (count > policy.cap)
          throw Error("more than " + std::to_string(policy.cap) + " initial stores; restrict them with --init");
      }
    std::vector<int> vals(slots.size(), 0);
    for (std::size_t k = 0; k < slots.size(); ++k)
      if (alt.count(slots[k].name)) vals[k] = alt.at(slots[k].name);
    while (true) {
      if (seen.insert(vals).second) {
        std::vector<Store> mu(m.num_processes());
        for (std::size_t k = 0; k < slots.size(); ++k) mu[slots[k].proc].push_back(vals[k]);
        out.push_back(std::move(mu));
      }
      std::size_t k = slots.size();
      while (k-- > 0) {
        if (alt.count(slots[k].name)) continue;
        if (++vals[k] < slots[k].size) break;
        vals[k] = 0;
      }
      if (k == static_cast<std::size_t>(-1)) break;
    }
  }
  return out;
}

namespace {

std::vector<int> key_of(const Machine::Config& c) {
  std::vector<int> k;
  for (const auto& p : c) {
    k.push_back(static_cast<int>(p.stack.size()));
    k.insert(k.end(), p.stack.begin(), p.stack.end());
    k.push_back(p.reg);
    k.insert(k.end(), p.store.begin(), p.store.end());
  }
  return k;
}

struct KeyHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = v.size();
    for (int x : v) h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

class Builder {
 public:
  Builder(StateSpace& ss, long cap) : ss_(ss), cap_(cap) {}

  // Id of c, or -1 once the cap is reached.
  int intern(const Machine::Config& c, bool& fresh) {
    fresh = false;
    auto key = key_of(c);
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    if (static_cast<long>(ss_.states.size()) >= cap_) {
      ss_.truncated = true;
      return -1;
    }
    int id = static_cast<int>(ss_.states.size());
    ids_.emplace(std::move(key), id);
    ss_.states.push_back(c);
    fresh = true;
    return id;
  }

  void add_edge(int src, int dst, const Machine::Step& st) {
    ss_.edges.push_back({src, dst, st.rule, st.procs, st.value, st.port});
  }

 private:
  StateSpace& ss_;
  long cap_;
  std::unordered_map<std::vector<int>, int, KeyHash> ids_;
};

}  // namespace

StateSpace explore(const Machine& m, const ExploreOptions& opt) {
  if (!opt.parallel) return explore_serial(m, opt);
  StateSpace ss;
  Builder b(ss, opt.state_cap);
  std::vector<int> frontier;
  for (const auto& mu : initial_stores(m, opt.init)) {
    bool fresh;
    int id = b.intern(m.initial(mu), fresh);
    if (id < 0) break;
    ss.initial.push_back(id);
    if (fresh) frontier.push_back(id);
  }
  while (!frontier.empty()) {
    std::vector<std::vector<Machine::Step>> steps(frontier.size());
    const long n = static_cast<long>(frontier.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (long k = 0; k < n; ++k) steps[k] = m.step(ss.states[frontier[k]]);
    std::vector<int> next;
    for (std::size_t k = 0; k < frontier.size(); ++k)
      for (const auto& st : steps[k]) {
        bool fresh;
        int id = b.intern(st.target, fresh);
        if (id < 0) continue;
        b.add_edge(frontier[k], id, st);
        if (fresh) next.push_back(id);
      }
    frontier = std::move(next);
  }
  return ss;
}

StateSpace explore_serial(const Machine& m, const ExploreOptions& opt) {
  StateSpace ss;
  Builder b(ss, opt.state_cap);
  std::deque<int> queue;
  for (const auto& mu : initial_stores(m, opt.init)) {
    bool fresh;
    int id = b.intern(m.initial(mu), fresh);
    if (id < 0) break;
    ss.initial.push_back(id);
    if (fresh) queue.push_back(id);
  }
  while (!queue.empty()) {
    int src = queue.front();
    queue.pop_front();
    for (const auto& st : m.step(ss.states[src])) {
      bool fresh;
      int id = b.intern(st.target, fresh);
      if (id < 0) continue;
      b.add_edge(src, id, st);
      if (fresh) queue.push_back(id);
    }
  }
  return ss;
}

}  // namespace cts::cip
