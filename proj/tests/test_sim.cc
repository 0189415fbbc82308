#include <doctest.h>

#include <random>

#include "cts/sim.hpp"

using namespace cts;
using namespace cts::sim;

namespace {

LabeledGraph graph_of(int vertices, const std::vector<std::tuple<int, int, std::string>>& edges,
                      const std::vector<std::string>& letters) {
  LabeledGraph g;
  g.alphabet = Alphabet(letters);
  for (int v = 0; v < vertices; ++v) g.graph.add_vertex("v" + std::to_string(v));
  for (const auto& [a, b, l] : edges) {
    g.graph.add_edge(a, b);
    g.labels.push_back(*g.alphabet.find(l));
  }
  return g;
}

PointedHda square() { return coskeletal_hda(graph_of(4, {{0, 1, "a"}, {1, 3, "b"}, {0, 2, "b"}, {2, 3, "a"}}, {"a", "b"}), 0); }

PointedHda skeleton() {
  return coskeletal_hda(graph_of(4, {{0, 1, "a"}, {1, 3, "b"}, {0, 2, "b"}, {2, 3, "a"}}, {"a", "b"}), 0, 1);
}

cip::Machine machine(const std::string& text, int n) {
  return cip::Machine(cip::typecheck(cip::parse_program(text)), cip::Interp{n});
}

PointedCts cts_of(const std::string& text, int n) { return pointed_cts(cip::categorical_semantics(machine(text, n))); }

PointedCts cts_with_env(const std::string& text, int n) {
  auto prog = cip::parse_program(text);
  cip::Machine m(cip::typecheck(prog), cip::Interp{n});
  auto c = cip::categorical_semantics(m);
  return pointed_cts(c, cip::environment_interface(m, c, prog.ports));
}

PointedCts random_cts(std::mt19937_64& rng) {
  PointedCts c;
  c.spans = random_span_pseudofunctor(rng, free_category(random_control(rng, 3, 4)), 3, 2);
  return c;
}

// c with one more generator carrying a random span.
PointedCts extended(std::mt19937_64& rng, const PointedCts& c) {
  PointedCts d = c;
  auto& g = d.spans.control.generators;
  int n = g.num_vertices();
  int x = std::uniform_int_distribution<int>(0, n - 1)(rng), y = std::uniform_int_distribution<int>(0, n - 1)(rng);
  g.add_edge(x, y, "extra" + std::to_string(g.num_edges()));
  FinSpan s(d.spans.size(x), d.spans.size(y));
  for (int& v : s.m) v = std::uniform_int_distribution<int>(0, 1)(rng);
  d.spans.generator_span.push_back(s);
  return d;
}

}  // namespace

TEST_CASE("hda simulation of a system by itself contains the diagonal") {
  PointedHda s = square();
  auto r = hda_simulation(s, s, 2);
  REQUIRE(r.relation);
  for (int v = 0; v < 4; ++v) CHECK(r.relation->contains(v, v));
  CellTable c = cell_table(s.hda, 2);
  CHECK(refine(c, c, r.greatest) == r.greatest);
}

TEST_CASE("label mismatch has no simulation") {
  auto a = coskeletal_hda(graph_of(2, {{0, 1, "a"}}, {"a", "b"}), 0);
  auto b = coskeletal_hda(graph_of(2, {{0, 1, "b"}}, {"a", "b"}), 0);
  auto r = hda_simulation(a, b, 2);
  CHECK_FALSE(r.relation);
  CHECK(r.witness.find("a") != std::string::npos);
}

TEST_CASE("square and its skeleton") {
  auto sq = square(), sk = skeleton();
  CHECK(sq.hda.carrier.count(2) == 1);
  CHECK(sk.hda.carrier.count(2) == 0);
  CHECK(hda_simulation(sk, sq, 2).relation);
  auto back = hda_simulation(sq, sk, 2);
  CHECK_FALSE(back.relation);
  CHECK(back.witness.find("(a,b)") != std::string::npos);
  CHECK(hda_simulation(sq, sk, 1).relation);
}

TEST_CASE("greatest fixpoint is stable on random pairs") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    auto s = random_pointed_hda(rng, 5, {"a", "b"}), t = random_pointed_hda(rng, 5, {"a", "b"});
    auto r = hda_simulation(s, t, 2);
    CellTable cs = cell_table(s.hda, 2), ct = cell_table(t.hda, 2);
    CHECK(refine(cs, ct, r.greatest) == r.greatest);
    CHECK(r.relation.has_value() == std::binary_search(r.greatest.begin(), r.greatest.end(), Pair{s.point, t.point}));
  }
}

TEST_CASE("identity maps are open") {
  auto k = std::make_shared<const CubicalSet>(square().hda.carrier);
  CHECK(is_open(identity_map(k), 2, Pair{0, 0}).open);
}

TEST_CASE("inclusion missing a reachable edge is not open") {
  auto big = coskeletal_hda(graph_of(3, {{0, 1, "a"}, {0, 2, "b"}}, {"a", "b"}), 0);
  auto small = coskeletal_hda(graph_of(3, {{0, 1, "a"}}, {"a", "b"}), 0);
  CubicalMap inc;
  inc.source = std::make_shared<const CubicalSet>(small.hda.carrier);
  inc.target = std::make_shared<const CubicalSet>(big.hda.carrier);
  inc.assignment = {{CubicalSet::cell(0, 0), CubicalSet::cell(0, 1), CubicalSet::cell(0, 2)}, {CubicalSet::cell(1, 0)}, {}};
  CHECK(validate(inc).empty());
  auto v = is_open(inc, 2, Pair{0, 0});
  CHECK_FALSE(v.open);
  CHECK(v.witness.find(big.hda.carrier.name(1, 1)) != std::string::npos);
}

TEST_CASE("span leg built from a found simulation is open") {
  auto sk = skeleton(), sq = square();
  auto r = hda_simulation(sk, sq, 2);
  REQUIRE(r.relation);
  auto span = open_map_span(sk, sq, 2, r.relation);
  CHECK(span.exists);
  CHECK(span.r1.open);
  CHECK(validate(*span.span.apex).empty());
  CHECK(validate(span.span.left).empty());
  CHECK(validate(span.span.right).empty());
  CHECK_FALSE(open_map_span(sq, sk, 2).exists);
}

TEST_CASE("dom and cod matching is weaker than an open span") {
  // s: square 0,1,2,3 on a,b with an extra c after 1.
  // t: the same square without the c, and a second a-branch doing c and b.
  std::vector<std::string> abc{"a", "b", "c"};
  auto s = coskeletal_hda(graph_of(5, {{0, 1, "a"}, {1, 3, "b"}, {0, 2, "b"}, {2, 3, "a"}, {1, 4, "c"}}, abc), 0);
  auto t = coskeletal_hda(
      graph_of(7, {{0, 1, "a"}, {1, 3, "b"}, {0, 2, "b"}, {2, 3, "a"}, {0, 4, "a"}, {4, 5, "c"}, {4, 6, "b"}}, abc), 0);
  CHECK(s.hda.carrier.count(2) == 1);
  CHECK(t.hda.carrier.count(2) == 1);
  CHECK(hda_simulation(s, t, 2).relation);
  auto span = open_map_span(s, t, 2);
  CHECK_FALSE(span.exists);
  CHECK(hda_simulation(s, t, 1).relation);
  CHECK(open_map_span(s, t, 1).exists);
}

TEST_CASE("open span implies simulation on random pairs") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 40; ++i) {
    auto s = random_pointed_hda(rng, 5, {"a", "b"}), t = random_pointed_hda(rng, 5, {"a", "b"});
    auto span = open_map_span(s, t, 2);
    if (span.exists) CHECK(hda_simulation(s, t, 2).relation);
    if (!span.exists) CHECK_FALSE(open_map_span(s, t, 2, hda_simulation(s, t, 2).relation).exists);
  }
}

TEST_CASE("open maps compose and pull back") {
  std::mt19937_64 rng(3);
  int composed = 0;
  for (int i = 0; i < 40 && composed < 5; ++i) {
    auto s = random_pointed_hda(rng, 4, {"a", "b"}), t = random_pointed_hda(rng, 4, {"a", "b"});
    auto u = random_pointed_hda(rng, 4, {"a", "b"});
    auto first = open_map_span(s, t, 2);
    if (!first.exists) continue;
    PointedHda apex = labelled_apex(first.span, s.hda);
    auto second = open_map_span(apex, u, 2);
    if (!second.exists) continue;
    ++composed;
    CubicalMap h = compose(second.span.left, first.span.left);
    CHECK(validate(h).empty());
    CHECK(is_open(h, 2, Pair{second.span.point, s.point}).open);
    auto other = open_map_span(s, u, 2);
    if (!other.exists) continue;
    PairSpan pb = pullback(first.span.left, other.span.left, 2);
    CHECK(validate(*pb.apex).empty());
    CHECK(is_open(pb.right, 2).open);
  }
  CHECK(composed > 0);
}

TEST_CASE("assignment simulated by two assignments") {
  auto x7 = cts_of("context x:nat; program x := 7 end", 8);
  auto x52 = cts_of("context x:nat; program x := 5; x := x + 2 end", 8);
  auto r = path_simulation(x7, x52);
  CHECK(r.found);
  CHECK_FALSE(r.horizon_binds);
  PathSimOptions strict;
  strict.strict = true;
  CHECK_FALSE(path_simulation(x7, x52, strict).found);
  CHECK_FALSE(path_simulation(x52, x7, strict).found);
  CHECK_FALSE(path_simulation(x52, x7).found);
  auto self = path_simulation(x52, x52);
  for (int v = 0; v < x52.spans.control.num_objects(); ++v) CHECK(self.relation.contains(v, v));
}

TEST_CASE("nop against an open send") {
  const char* nop = "context x:nat | p:nat; program nop end";
  const char* send = "context x:nat | p:nat; program p!(2*x) end";
  auto a = cts_with_env(nop, 4), b = cts_with_env(send, 4);
  auto plain = path_bisimulation(a, b);
  CHECK(plain.found);
  BisimOptions chk;
  chk.check_interfaces = true;
  auto checked = path_bisimulation(a, b, chk);
  CHECK_FALSE(checked.found);
  CHECK(checked.interface_rejected);
  CHECK(path_bisimulation(b, b, chk).found);
  CHECK(path_bisimulation(a, a, chk).found);
}

TEST_CASE("path simulation is reflexive on random systems") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 25; ++i) {
    auto s = random_cts(rng);
    PathSimOptions o;
    o.max_len = 4;
    auto r = path_simulation(s, s, o);
    CHECK(r.found);
    for (int v = 0; v < s.spans.control.num_objects(); ++v) CHECK(r.relation.contains(v, v));
    CHECK(is_path_simulation(s, s, r.relation.pairs, o));
    CHECK(path_bisimulation(s, s).found);
  }
}

TEST_CASE("found path simulations compose") {
  std::mt19937_64 rng(8);
  PathSimOptions o;
  o.max_len = 4;
  for (int i = 0; i < 25; ++i) {
    auto s = random_cts(rng);
    auto t = extended(rng, s);
    auto u = extended(rng, t);
    auto st = path_simulation(s, t, o), tu = path_simulation(t, u, o);
    REQUIRE(st.found);
    REQUIRE(tu.found);
    auto comp = compose_relations(st.relation.pairs, tu.relation.pairs);
    CHECK(is_path_simulation(s, u, comp, o));
  }
}
