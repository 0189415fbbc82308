#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "acceptance_suite.hpp"
#include "cts/json_io.hpp"
#include "cts/semantics.hpp"
#include "cts/sim.hpp"

using namespace cts;
using json = io::json;

namespace {

struct Config {
  int nat_mod = 8;
  int max_dim = 2;
  int max_len = 6;
  long state_cap = 1000000;
  std::string init;
  std::string format = "text";
  std::string out;
  bool hat = false;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Loaded {
  std::string path;
  cip::Program program;
  cip::Typing typing;
  std::unique_ptr<cip::Machine> machine;
};

Loaded load(const std::string& path, const Config& cfg) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  Loaded l;
  l.path = path;
  try {
    l.program = cip::parse_program(buf.str());
    l.typing = cip::typecheck(l.program);
  } catch (const cip::Error& e) {
    std::ostringstream os;
    os << path << ":" << e.what();
    throw InputError(os.str());
  }
  l.machine = std::make_unique<cip::Machine>(l.typing, cip::Interp{cfg.nat_mod});
  return l;
}

cip::ExploreOptions explore_options(const Config& cfg) {
  cip::ExploreOptions o;
  if (!cfg.init.empty()) o.init = cip::parse_init(cfg.init);
  o.state_cap = cfg.state_cap;
  return o;
}

class Output {
 public:
  explicit Output(const Config& cfg) {
    if (!cfg.out.empty()) {
      file_.open(cfg.out);
      if (!file_) throw InputError(cfg.out + ": cannot write");
    }
  }
  std::ostream& operator()() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void print_json(Output& out, const json& j) { out() << j.dump(2) << "\n"; }

std::string locations_of(const cip::Machine& m, const cip::Machine::Config& c) {
  std::string s;
  for (int i = 0; i < m.num_processes(); ++i) s += (i ? "," : "") + m.location_name(i, c[i].reg);
  return m.num_processes() > 1 ? "(" + s + ")" : s;
}

std::string stores_of(const cip::Machine& m, const cip::Machine::Config& c) {
  std::string s;
  for (int i = 0; i < m.num_processes(); ++i) {
    const auto& ctx = m.context(i);
    for (std::size_t k = 0; k < ctx.size(); ++k)
      s += (s.empty() ? "" : ",") + ctx[k].name + "=" + m.interp().show_value(ctx[k].type, c[i].store[k]);
  }
  return "{" + s + "}";
}

int cmd_check(const std::string& file, bool emit_ast, const Config& cfg) {
  Loaded l = load(file, cfg);
  Output out(cfg);
  if (emit_ast || cfg.format == "json") {
    print_json(out, io::to_json(l.program, l.typing));
  } else {
    out() << cip::show_judgement(l.typing, l.program.ports) << "\n";
  }
  return 0;
}

int cmd_nf(const std::string& file, const Config& cfg) {
  Loaded l = load(file, cfg);
  Output out(cfg);
  const cip::NormalForm& nf = l.machine->normal_form();
  out() << cip::show(cip::reassemble(nf)) << "\n";
  for (std::size_t i = 0; i < nf.stats.size(); ++i) {
    out() << "process " << i;
    if (i < nf.contexts.size()) out() << " [" << cip::show(nf.contexts[i]) << "]";
    out() << ": " << cip::show(nf.stats[i]) << "\n";
  }
  for (const auto& c : nf.channels) out() << "channel " << c.out << " ~ " << c.in << " : " << cip::show(c.type) << "\n";
  return 0;
}

int cmd_run(const std::string& file, const Config& cfg) {
  Loaded l = load(file, cfg);
  const cip::Machine& m = *l.machine;
  cip::StateSpace ss = cip::explore(m, explore_options(cfg));
  Output out(cfg);
  if (cfg.format == "json") {
    print_json(out, io::to_json(m, ss));
    return 0;
  }
  if (cfg.format == "dot") {
    cip::CipGraphs g = cip::graphs_of(m, ss);
    std::vector<std::string> labels;
    for (Symbol s : g.evolution.labels) labels.push_back(g.evolution.alphabet.show(s));
    out() << to_dot(g.evolution.graph, labels);
    return 0;
  }
  std::vector<int> outdeg(ss.states.size(), 0);
  for (const auto& e : ss.edges) ++outdeg[e.src];
  out() << "initial " << ss.initial.size() << ", states " << ss.states.size() << ", rule applications "
        << ss.edges.size() << (ss.truncated ? " (truncated at the state cap)" : "") << "\n";
  int shown = 0, finals = 0;
  for (std::size_t v = 0; v < ss.states.size(); ++v) {
    if (outdeg[v]) continue;
    ++finals;
    if (shown++ < 20) out() << "final " << locations_of(m, ss.states[v]) << " " << stores_of(m, ss.states[v]) << "\n";
  }
  if (finals > shown) out() << "... " << finals - shown << " more final states\n";
  return 0;
}

int cmd_hda(const std::string& file, const Config& cfg) {
  Loaded l = load(file, cfg);
  cip::CipGraphs g = cip::graphs_of(*l.machine, explore_options(cfg));
  cip::CipHdas h = cip::lift_to_hda(g, cfg.max_dim);
  const Hda& x = cfg.hat ? h.control : h.evolution;
  Output out(cfg);
  if (cfg.format == "json") {
    print_json(out, io::document(cfg.hat ? "control_hda" : "hda", io::to_json(x)));
  } else if (cfg.format == "dot") {
    LabeledGraph t = hda_tr1(x);
    std::vector<std::string> labels;
    for (Symbol s : t.labels) labels.push_back(t.alphabet.show(s));
    out() << to_dot(t.graph, labels);
  } else {
    out() << (cfg.hat ? "control" : "evolution") << " hda up to dimension " << cfg.max_dim << "\n";
    for (int d = 0; d <= x.carrier.trunc_dim(); ++d) out() << "  dim " << d << ": " << x.carrier.count(d) << " cells\n";
    if (g.truncated) out() << "  (state space truncated)\n";
  }
  return 0;
}

std::optional<cip::Environment> environment_of(const Loaded& l, const cip::CipCts& c) {
  if (l.machine->num_processes() != 1) return std::nullopt;
  return cip::environment_interface(*l.machine, c, l.program.ports);
}

int cmd_cts(const std::string& file, const Config& cfg) {
  Loaded l = load(file, cfg);
  cip::CipCts c = cip::categorical_semantics(*l.machine, explore_options(cfg));
  auto env = environment_of(l, c);
  Output out(cfg);
  if (cfg.format == "json") {
    print_json(out, io::to_json(c, env ? &*env : nullptr));
    return 0;
  }
  if (cfg.format == "dot") {
    out() << to_dot(c.control);
    return 0;
  }
  const auto& g = c.control.generators;
  out() << "control objects " << g.num_vertices() << ", generators " << g.num_edges()
        << (c.acubic ? "" : ", NOT acubic") << "\n";
  for (int x = 0; x < g.num_vertices(); ++x)
    out() << "  object " << g.vertices[x] << (x == c.initial ? " (initial)" : "") << ": " << c.spans.size(x)
          << " stores\n";
  for (int f = 0; f < g.num_edges(); ++f) {
    const FinSpan& s = c.spans.generator_span[f];
    out() << "  " << g.vertices[g.src(f)] << " -" << c.generator_labels[f] << "-> " << g.vertices[g.dst(f)]
          << ": span " << s.rows << "x" << s.cols << ", apex " << s.apex_size();
    if (env) {
      int k = env->leg.generator_of.at(f);
      out() << ", interface " << (k < 0 ? "id" : env->interface.phi.control.generators.edge_name(k));
    }
    out() << "\n";
  }
  for (const auto& n : c.notes) out() << "  note: " << n << "\n";
  return 0;
}

int cmd_sim(const std::string& a, const std::string& b, bool bisim, bool check_spans, bool strict, const Config& cfg) {
  if (check_spans && !bisim) throw InputError("--check-spans applies to --bisim");
  Loaded la = load(a, cfg), lb = load(b, cfg);
  auto opt = explore_options(cfg);
  cip::CipCts ca = cip::categorical_semantics(*la.machine, opt), cb = cip::categorical_semantics(*lb.machine, opt);
  sim::PointedCts s, t;
  if (check_spans) {
    auto ea = environment_of(la, ca), eb = environment_of(lb, cb);
    if (!ea || !eb) throw InputError("--check-spans needs single-process programs");
    s = sim::pointed_cts(ca, *ea);
    t = sim::pointed_cts(cb, *eb);
  } else {
    s = sim::pointed_cts(ca);
    t = sim::pointed_cts(cb);
  }
  Output out(cfg);
  std::string verdict, witness;
  bool ok = false;
  json rel;
  if (bisim) {
    sim::BisimOptions o;
    o.check_interfaces = check_spans;
    auto r = sim::path_bisimulation(s, t, o);
    ok = r.found;
    verdict = std::string("path bisimulation: ") + (r.found ? "FOUND" : r.interface_rejected ? "REJECTED (interface)" : "NOT FOUND");
    witness = r.witness;
    rel = io::to_json(r.relation, s, t);
  } else {
    sim::PathSimOptions o;
    o.max_len = cfg.max_len;
    o.strict = strict;
    auto r = sim::path_simulation(s, t, o);
    ok = r.found;
    verdict = std::string("path simulation: ") + (r.found ? "FOUND" : "NOT FOUND");
    if (r.horizon_binds) verdict += " (horizon L=" + std::to_string(cfg.max_len) + " binds)";
    witness = r.witness;
    rel = io::to_json(r.relation, s, t);
  }
  if (cfg.format == "json") {
    json j = io::document("simulation", json{{"verdict", verdict}, {"witness", witness}, {"relation", rel}});
    print_json(out, j);
  } else {
    out() << verdict << "\n";
    if (!witness.empty()) out() << "witness: " << witness << "\n";
    out() << "relation: " << rel.dump() << "\n";
  }
  return ok ? 0 : 1;
}

int cmd_product(const std::string& file, const Config& cfg) {
  Loaded l = load(file, cfg);
  cip::ProductReport r = cip::product_decomposition_check(*l.machine, explore_options(cfg));
  Output out(cfg);
  auto yes = [](bool b) { return b ? "isomorphic" : "NOT isomorphic"; };
  if (cfg.format == "json") {
    print_json(out, io::document("product", json{{"literal_iso", r.literal_iso},
                                                 {"restricted_iso", r.restricted_iso},
                                                 {"hat_iso", r.hat_iso},
                                                 {"direct", {r.direct_vertices, r.direct_edges}},
                                                 {"literal", {r.literal_vertices, r.literal_edges}},
                                                 {"restricted", {r.restricted_vertices, r.restricted_edges}},
                                                 {"witnesses", r.witnesses}}));
  } else {
    out() << "direct system: " << r.direct_vertices << " states, " << r.direct_edges << " transitions\n";
    out() << "literal table product: " << yes(r.literal_iso) << " (" << r.literal_vertices << ", " << r.literal_edges
          << ")\n";
    out() << "restricted product: " << yes(r.restricted_iso) << " (" << r.restricted_vertices << ", "
          << r.restricted_edges << ")\n";
    out() << "control projection: " << yes(r.hat_iso) << "\n";
    for (std::size_t i = 0; i < r.witnesses.size() && i < 10; ++i) out() << "  " << r.witnesses[i] << "\n";
  }
  return r.restricted_iso && r.hat_iso ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cip: cubical and categorical semantics of CIP programs"};
  app.require_subcommand(1);
  Config cfg;
  auto common = [&](CLI::App* c) {
    c->add_option("--nat-mod", cfg.nat_mod, "carrier size of nat")->check(CLI::Range(2, 1 << 20));
    c->add_option("--max-dim", cfg.max_dim, "truncation dimension")->check(CLI::Range(1, 8));
    c->add_option("--max-len", cfg.max_len, "path horizon")->check(CLI::Range(1, 64));
    c->add_option("--state-cap", cfg.state_cap, "state cap of the exploration")->check(CLI::PositiveNumber);
    c->add_option("--init", cfg.init, "initial stores, e.g. x=5,z=0;x=1");
    c->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"text", "dot", "json"}));
    c->add_option("--out", cfg.out, "output file");
  };
  std::string file, file2;
  bool emit_ast = false, bisim = false, check_spans = false, strict = false;

  auto* check = app.add_subcommand("check", "parse and typecheck");
  check->add_option("file", file)->required();
  check->add_flag("--emit-ast", emit_ast, "JSON dump of the typed AST");
  common(check);
  auto* nf = app.add_subcommand("nf", "normal form");
  nf->add_option("file", file)->required();
  common(nf);
  auto* run = app.add_subcommand("run", "explore the state space");
  run->add_option("file", file)->required();
  common(run);
  auto* hda = app.add_subcommand("hda", "coskeletal HDA of the evolution or control graph");
  hda->add_option("file", file)->required();
  hda->add_flag("--hat", cfg.hat, "control graph instead of the evolution graph");
  common(hda);
  auto* cts = app.add_subcommand("cts", "categorical transition system");
  cts->add_option("file", file)->required();
  common(cts);
  auto* simc = app.add_subcommand("sim", "path simulation or bisimulation of two programs");
  simc->add_option("a", file)->required();
  simc->add_option("b", file2)->required();
  simc->add_flag("--bisim", bisim, "single-step bisimulation");
  simc->add_flag("--check-spans", check_spans, "match interface legs too");
  simc->add_flag("--strict", strict, "single transitions matched by single transitions");
  common(simc);
  auto* product = app.add_subcommand("product", "synchronized product decomposition");
  product->add_option("file", file)->required();
  common(product);
  auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
  common(selftest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    if (check->parsed()) return cmd_check(file, emit_ast, cfg);
    if (nf->parsed()) return cmd_nf(file, cfg);
    if (run->parsed()) return cmd_run(file, cfg);
    if (hda->parsed()) return cmd_hda(file, cfg);
    if (cts->parsed()) return cmd_cts(file, cfg);
    if (simc->parsed()) return cmd_sim(file, file2, bisim, check_spans, strict, cfg);
    if (product->parsed()) return cmd_product(file, cfg);
    if (selftest->parsed()) {
      Output out(cfg);
      return acceptance::run_all(out()) == 0 ? 0 : 1;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const cip::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
