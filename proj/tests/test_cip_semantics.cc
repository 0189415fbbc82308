#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "cts/cip_random.hpp"
#include "cts/semantics.hpp"

using namespace cts;
using namespace cts::cip;

namespace {

Machine machine(const std::string& text, int n) { return Machine(typecheck(parse_program(text)), Interp{n}); }

ExploreOptions from(const std::string& init) {
  ExploreOptions o;
  o.init = parse_init(init);
  return o;
}

const char* const kWhile = "context x:nat; program x := 20; while x > 0 do x := x - 1 end end";
const char* const kParallel =
    "context x:nat, z:nat; program (x := 5; p!(x+x)) << p ~ q >> (q?z; z := z*z) end";

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("erasure and event letters") {
  auto send = parse_event("!10,p");
  REQUIRE(send);
  CHECK(send->kind == Event::Kind::send);
  CHECK(send->value == 10);
  CHECK(show(erase_label(*send)) == "!");
  CHECK(show(erase_label(*parse_event("?3,q"))) == "?");
  CHECK(show(erase_label(*parse_event("γ2"))) == "γ2");
  CHECK(show(erase_label(*parse_event("α"))) == "α");
  CHECK_FALSE(parse_event("!x,p"));
  CHECK_FALSE(parse_event("β"));
  for (const char* s : {"α", "γ1", "γ2", "!0,p", "?7,q#1", "!", "?"}) CHECK(show(*parse_event(s)) == s);
  Alphabet a = alphabet_of({*parse_event("?1,q"), *parse_event("!2,p"), *parse_event("γ1"), *parse_event("α")});
  CHECK(a.symbols() == std::vector<std::string>{"α", "γ1", "!2,p", "?1,q"});
}

TEST_CASE("graphs of a single assignment") {
  Machine m = machine("context x:nat; program x := 7 end", 8);
  CipGraphs g = graphs_of(m);
  CHECK(g.evolution.graph.num_vertices() == 9);
  CHECK(g.evolution.graph.num_edges() == 8);
  for (int e = 0; e < 8; ++e) {
    CHECK(g.evolution.alphabet.name(g.evolution.labels[e]) == "α");
    CHECK(g.evolution.graph.vertices[g.evolution.graph.dst(e)] == "⊥{x=7}");
  }
  CHECK(g.evolution.graph.vertices[0] == "l0{x=0}");
  CHECK(g.control.graph.num_vertices() == 2);
  REQUIRE(g.control.graph.num_edges() == 1);
  CHECK(g.control.alphabet.name(g.control.labels[0]) == "α");
  CHECK(g.control.graph.edge_name(0) == "l0 -α-> ⊥");
  CHECK(g.control.graph.vertices == std::vector<std::string>{"l0", "⊥"});
  CHECK(g.initial.size() == 8);
  CHECK_FALSE(check_commutes(g));
}

TEST_CASE("graphs of an open send") {
  Machine m = machine("context x:nat | p:nat; program p!(x + 1) end", 4);
  CipGraphs g = graphs_of(m);
  CHECK(g.evolution.alphabet.symbols() == std::vector<std::string>{"!0,p", "!1,p", "!2,p", "!3,p"});
  REQUIRE(g.control.graph.num_edges() == 1);
  CHECK(g.control.alphabet.name(g.control.labels[0]) == "!");
  CHECK(is_acubic(g.evolution.graph));
  CHECK(is_acubic(g.control.graph));
}

TEST_CASE("two processes: names and commutation") {
  Machine m = machine(kParallel, 4);
  CipGraphs g = graphs_of(m, from("x=0,z=0"));
  CHECK(g.evolution.graph.vertices.front() == "(l1,l1){x=0,z=0}");
  CHECK_FALSE(check_commutes(g));
  CHECK(sorted(g.control.graph.vertices) == sorted({"(l1,l1)", "(l2,l1)", "(⊥,l2)", "(⊥,⊥)"}));
  int rv = 0;
  for (int e = 0; e < g.control.graph.num_edges(); ++e) rv += g.control.alphabet.name(g.control.labels[e]) == "α";
  CHECK(rv == 3);
}

TEST_CASE("synchronization table") {
  Machine m = machine(kParallel, 16);
  Alphabet sigma({"γ1", "!10,p", "?9,q", "?10,q"});
  SyncTable t = sync_table_of(m.normal_form(), sigma);
  Symbol s10 = *t.alphabet().find("!10,p"), r9 = *t.alphabet().find("?9,q"), r10 = *t.alphabet().find("?10,q");
  Symbol al = *t.alphabet().find("α");
  Symbol g1 = *t.alphabet().find("γ1");
  CHECK(t(s10, r10) == al);
  CHECK(t(r10, s10) == al);
  CHECK(t(s10, r9) == kTop);
  CHECK(t(kStar, g1) == g1);
  CHECK(t(g1, kStar) == g1);
  CHECK(t(kStar, s10) == s10);
  CHECK(t(g1, g1) == kTop);
  SyncTable r = sync_table_of(m.normal_form(), sigma, true);
  CHECK(r(kStar, *r.alphabet().find("!10,p")) == kTop);
  CHECK(r(kStar, *r.alphabet().find("γ1")) == *r.alphabet().find("γ1"));
}

TEST_CASE("product decomposition") {
  SUBCASE("parallel example") {
    Machine m = machine(kParallel, 4);
    ProductReport r = product_decomposition_check(m);
    CHECK_FALSE(r.literal_iso);
    CHECK(r.restricted_iso);
    CHECK(r.hat_iso);
    CHECK(r.restricted_vertices == r.direct_vertices);
    CHECK(r.restricted_edges == r.direct_edges);
    CHECK(r.literal_vertices > r.direct_vertices);
    REQUIRE_FALSE(r.witnesses.empty());
    CHECK(r.witnesses.front().rfind("literal:", 0) == 0);
  }
  SUBCASE("single statement") {
    Machine m = machine(kWhile, 8);
    ProductReport r = product_decomposition_check(m);
    CHECK(r.literal_iso);
    CHECK(r.restricted_iso);
    CHECK(r.hat_iso);
  }
  SUBCASE("independent statements interleave") {
    Machine m = machine("context x:nat, y:nat; program x := 1 << >> y := x end", 3);
    ProductReport r = product_decomposition_check(m);
    CHECK(r.literal_iso);
    CHECK(r.restricted_iso);
    CHECK(r.hat_iso);
  }
}

// Non-degenerate 2-cells whose four faces are distinct edges.
int proper_squares(const Hda& h) {
  int n = 0;
  for (int c = 0; c < h.carrier.count(2); ++c) {
    std::set<int> bases;
    bool ok = true;
    for (const auto& f : h.carrier.faces_of(2, c)) {
      ok = ok && f.degens.empty();
      bases.insert(f.base);
    }
    n += ok && bases.size() == 4;
  }
  return n;
}

TEST_CASE("coskeletal lift") {
  SUBCASE("independent assignments give one square") {
    Machine m = machine("context x:nat, y:nat; program x := 1 << >> y := 2 end", 3);
    CipHdas h = lift_to_hda(graphs_of(m, from("x=0,y=0")), 3);
    // the square in both orientations plus one folded square along each path
    CHECK(h.evolution.carrier.count(2) == 4);
    CHECK(proper_squares(h.evolution) == 2);
    CHECK(h.evolution.carrier.count(3) == 0);
    for (const auto& w : h.evolution.labels[2]) CHECK(show_word(h.evolution.alphabet, w) == "(α,α)");
  }
  SUBCASE("sequential statements have only folded squares") {
    Machine m = machine("context x:nat; program x := 1; x := x + 1; x := 2 * x end", 4);
    CipHdas h = lift_to_hda(graphs_of(m), 3);
    CHECK(proper_squares(h.evolution) == 0);
    CHECK(proper_squares(h.control) == 0);
    Machine b = machine("context x:nat; program x := 1; if x < 2 then nop else nop end end", 4);
    CipHdas hb = lift_to_hda(graphs_of(b), 3);
    CHECK(hb.evolution.carrier.count(2) == 0);
    CHECK(hb.control.carrier.count(2) == 0);
  }
  SUBCASE("nop") {
    Machine m = machine("context x:nat; program nop end", 2);
    CipHdas h = lift_to_hda(graphs_of(m), 2);
    CHECK(h.control.carrier.count(1) == 1);
    CHECK(h.control.carrier.count(2) == 0);
  }
}

TEST_CASE("categorical semantics of the countdown") {
  Machine m = machine(kWhile, 32);
  CipCts c = categorical_semantics(m, from("x=0"));
  CHECK(c.control.num_objects() == 4);
  CHECK(c.control.generators.num_edges() == 4);
  CHECK(sorted(c.generator_labels) == sorted({"α", "γ1", "α", "γ2"}));
  CHECK(c.acubic);
  CHECK(is_ulf(c.pi).ulf);
  CHECK(validate(c.spans).empty());
  const auto& g = c.control.generators;
  int test = -1;
  for (int f = 0; f < g.num_edges(); ++f)
    if (c.generator_labels[f] == "γ1") test = g.src(f);
  REQUIRE(test >= 0);
  CHECK(c.spans.size(test) == 21);
  for (int f = 0; f < g.num_edges(); ++f) {
    if (g.src(f) != test) continue;
    const FinSpan& s = c.spans.generator_span[f];
    bool positive = c.generator_labels[f] == "γ1";
    CHECK(s.apex_size() == (positive ? 20 : 1));
    for (int a = 0; a < s.rows; ++a) {
      int x = std::stoi(c.spans.element_name(test, a).substr(2));
      int row = 0;
      for (int b = 0; b < s.cols; ++b) row += s.at(a, b);
      CHECK(row == ((x > 0) == positive ? 1 : 0));
    }
  }
}

TEST_CASE("fibers are the reachable stores") {
  Machine m = machine(kParallel, 4);
  CipCts c = categorical_semantics(m, from("x=2,z=3"));
  for (int x = 0; x < c.control.num_objects(); ++x)
    for (int a = 0; a < c.spans.size(x); ++a)
      CHECK(c.spans.element_name(x, a) == show_store(m, c.graphs.stores[c.fiber_vertices[x][a]]));
  int start = c.initial;
  REQUIRE(c.spans.size(start) == 1);
  CHECK(c.spans.element_name(start, 0) == "x=2,z=3");
}

TEST_CASE("closed-form spans") {
  SUBCASE("increment over four values") {
    Machine m = machine("context x:nat; program x := x + 1 end", 4);
    CipCts c = categorical_semantics(m);
    ClosedFormReport r = closed_form_spans(m, c);
    REQUIRE(r.entries.size() == 1);
    CHECK(r.entries[0].closed == FinSpan::of_function({1, 2, 3, 0}, 4));
    CHECK(r.entries[0].agrees);
    CHECK(r.discrepancies.empty());
  }
  SUBCASE("nop and branches agree") {
    Machine m = machine("context x:nat, y:nat; program nop; if x < y then x := y else y := 0 end end", 3);
    ClosedFormReport r = closed_form_spans(m, categorical_semantics(m));
    CHECK(r.entries.size() == 5);
    CHECK(r.discrepancies.empty());
    CHECK(r.entries[0].closed == FinSpan::identity(9));
  }
  SUBCASE("receive with one variable agrees") {
    Machine m = machine("context x:nat | q:nat; program q?x end", 3);
    ClosedFormReport r = closed_form_spans(m, categorical_semantics(m));
    REQUIRE(r.entries.size() == 1);
    CHECK(r.entries[0].agrees);
  }
  SUBCASE("receive with two variables differs") {
    Machine m = machine("context x:nat, y:nat | q:nat; program q?x end", 2);
    ClosedFormReport r = closed_form_spans(m, categorical_semantics(m));
    REQUIRE(r.entries.size() == 1);
    CHECK_FALSE(r.entries[0].agrees);
    CHECK(r.entries[0].closed.apex_size() == 16);
    CHECK(r.entries[0].fiber.apex_size() == 8);
    CHECK(r.discrepancies.size() == 1);
  }
}

TEST_CASE("environment interface of a send") {
  Machine m = machine("context x:nat | p:nat; program p!(2 * x) end", 4);
  CipCts c = categorical_semantics(m);
  Environment env = environment_interface(m, c);
  REQUIRE(env.interface.generators.size() == 1);
  CHECK(env.interface.generators[0].out == "p");
  CHECK(env.interface.phi.generator_span[0] == FinSpan::of_matrix({{4}}));
  REQUIRE(env.leg.generator_of.size() == 1);
  CHECK(env.leg.generator_of[0] == 0);
  CHECK(env.leg.iota.two_cells[0] == std::vector<int>{0, 2, 0, 2});
  CHECK(validate_lax(env.leg.iota).valid);

  Machine n = machine("context x:nat | p:nat; program nop end", 4);
  CipCts cn = categorical_semantics(n);
  Environment en = environment_interface(n, cn, {{"p", Type::nat}});
  CHECK(en.leg.generator_of == std::vector<int>{-1});
  CHECK(en.leg.iota.two_cells[0] == std::vector<int>{0, 0, 0, 0});
  CHECK(validate_lax(en.leg.iota).valid);
}

TEST_CASE("cut interfaces and the pullback") {
  Machine m = machine(kParallel, 4);
  CutInterfaces cut = cut_interfaces(m);
  REQUIRE(cut.interfaces.size() == 1);
  CHECK(cut.interfaces[0].generators.size() == 1);
  CHECK(cut.interfaces[0].phi.generator_span[0] == FinSpan::of_matrix({{4}}));
  CHECK(validate_lax(cut.plus[0].iota).valid);
  CHECK(validate_lax(cut.minus[0].iota).valid);
  CHECK(cut.notes.empty());

  PullbackSummary p = pullback_summary(m);
  CHECK(p.objects == 4);
  CHECK(p.generators == 3);
  CHECK(p.matches_direct);

  PullbackSummary q = pullback_summary(machine(kParallel, 8), from("z=0;z=3"));
  CHECK(q.objects == 4);
  CHECK(q.matches_direct);
}

TEST_CASE("wide pullback isomorphism on the parallel example") {
  Machine m = machine(kParallel, 4);
  SyncFamily fam;
  std::vector<Event> letters{Event{}};
  for (int i = 0; i < 2; ++i) {
    CipGraphs g = graphs_of(component(m, i));
    for (int e = 0; e < g.evolution.graph.num_edges(); ++e)
      letters.push_back(*parse_event(g.evolution.alphabet.name(g.evolution.labels[e])));
    fam.factors.push_back(g.evolution);
  }
  fam.tables.push_back(sync_table_of(m.normal_form(), alphabet_of(letters)));
  CatsynchroReport r = check_catsynchro(fam, 4, true);
  CHECK(r.acubic);
  CHECK(r.iso());
  CHECK_FALSE(r.truncated);
  // plain cosk_1 also fills the diamonds ?1;α and ?3;α of the receiver
  CatsynchroReport plain = check_catsynchro(fam, 4);
  CHECK_FALSE(plain.relations_respected);
}

TEST_CASE("random statements are acubic and commute") {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int round = 0; round < 60; ++round) {
    RandomStatSpec spec;
    spec.depth = 3;
    Machine m = machine(random_statement_program(rng, spec), 3);
    CipGraphs g = graphs_of(m);
    CHECK(is_acubic(g.evolution.graph));
    CHECK(is_acubic(g.control.graph));
    CHECK_FALSE(check_commutes(g));
    ++checked;
  }
  CHECK(checked == 60);
}

TEST_CASE("composed spans agree with the state space") {
  std::mt19937_64 rng(9);
  int checked = 0;
  for (int round = 0; round < 300 && checked < 12; ++round) {
    Typing t;
    try {
      t = typecheck(parse_program(random_pair_program(rng, 2)));
    } catch (const Error&) {
      continue;
    }
    Machine m(t, Interp{3});
    StateSpace ss = explore(m);
    CipCts c = categorical_semantics(m);
    OracleReport r = span_path_oracle(m, c, ss, 3);
    CHECK(r.paths > 0);
    CHECK(r.mismatches == 0);
    ProductReport p = product_decomposition_check(m);
    CHECK(p.restricted_iso);
    CHECK(p.hat_iso);
    ++checked;
  }
  CHECK(checked >= 5);
}
