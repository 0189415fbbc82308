#include <doctest.h>

#include <functional>
#include <random>
#include <set>

#include "cts/cip.hpp"

using namespace cts::cip;

namespace {

const char* const kParallel = "(x := 5; p!(x+x)) << p ~ q >> (q?z; z := z*z)";

Context nat_ctx(std::initializer_list<const char*> names) {
  Context c;
  for (const char* n : names) c.push_back({n, Type::nat});
  return c;
}

Stat random_stat(std::mt19937_64& rng, int depth, const std::vector<std::string>& ports) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 6 : 3);
  std::uniform_int_distribution<int> port(0, static_cast<int>(ports.size()) - 1);
  std::string text;
  switch (pick(rng)) {
    case 0:
      text = "nop";
      break;
    case 1:
      text = "x := x + 1";
      break;
    case 2:
      text = ports[port(rng)] + "!(x*2)";
      break;
    case 3:
      text = ports[port(rng)] + "?x";
      break;
    default:
      break;
  }
  if (!text.empty()) return parse_term(text).stat;
  Stat s;
  int k = pick(rng) % 3;
  s.kind = k == 0 ? Stat::Kind::seq : k == 1 ? Stat::Kind::if_ : Stat::Kind::while_;
  if (s.kind != Stat::Kind::seq) s.expr = parse_expr("x < 3");
  s.body.push_back(random_stat(rng, depth - 1, ports));
  if (s.kind != Stat::Kind::while_) s.body.push_back(random_stat(rng, depth - 1, ports));
  return s;
}

}  // namespace

TEST_CASE("parse examples") {
  Program p = parse_program("context x:nat; program nop end");
  REQUIRE(p.context.size() == 1);
  CHECK(p.context[0].name == "x");
  CHECK_FALSE(p.term.composite);
  CHECK(p.term.stat.kind == Stat::Kind::nop);

  Term t = parse_term("x := 5 ; p!(x+x)");
  REQUIRE(t.stat.kind == Stat::Kind::seq);
  CHECK(t.stat.body[0].kind == Stat::Kind::assign);
  CHECK(t.stat.body[1].kind == Stat::Kind::send);
  CHECK(t.stat.body[1].port == "p");
  CHECK(show(t.stat.body[1].expr) == "x + x");

  Term c = parse_term("nop << p ~ q >> nop");
  REQUIRE(c.composite);
  REQUIRE(c.channels.size() == 1);
  CHECK(c.channels[0].out == "p");
  CHECK(c.channels[0].in == "q");

  Term u = parse_term("nop << p \xE2\x89\x8D q, r ~ s >> nop");
  REQUIRE(u.channels.size() == 2);
  CHECK(u.channels[0].in == "q");
  CHECK(u.channels[1].out == "r");
}

TEST_CASE("parse positions and errors") {
  Program p = parse_program("context x:nat;\nprogram\n  x := 1; y := 2\nend");
  CHECK(p.term.stat.body[0].pos.line == 3);
  CHECK(p.term.stat.body[0].pos.col == 3);
  CHECK(p.term.stat.body[1].pos.col == 11);

  try {
    parse_program("context x:nat;\nprogram x := end");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.pos.line == 2);
    CHECK(e.pos.col == 14);
  }
  CHECK_THROWS_AS(parse_term("x := 1 $"), Error);
  CHECK_THROWS_AS(parse_term("while x < 1 do nop << p ~ q >> nop end"), Error);
  CHECK_THROWS_AS(parse_term("x := 1; (nop << p ~ q >> nop)"), Error);
  CHECK_THROWS_AS(parse_program("context x:nat; program nop"), Error);
}

TEST_CASE("expression precedence and printing") {
  CHECK(show(parse_expr("1 + 2 * 3")) == "1 + 2 * 3");
  CHECK(show(parse_expr("(1 + 2) * 3")) == "(1 + 2) * 3");
  CHECK(show(parse_expr("1 - (2 - 3)")) == "1 - (2 - 3)");
  CHECK(show(parse_expr("not x < 1 and y")) == "not x < 1 and y");
  CHECK(show(parse_expr("not (a or b)")) == "not (a or b)");
  Expr e = parse_expr("a or b and c");
  CHECK(e.name == "or");
  CHECK(e.args[1].name == "and");
  CHECK(parse_expr("x \xE2\x88\xB8 1").name == "-");
}

TEST_CASE("printing round trips") {
  for (const char* text : {kParallel, "if x < 2 then p!x else q?x end; while not x == 0 do x := x - 1 end",
                           "nop << >> nop", "a!1 << a ~ b >> (b?x << >> c?y)"}) {
    Term t = parse_term(text);
    Term back = parse_term(show(t));
    CHECK(alpha_equiv(normal_form(t), normal_form(back)));
  }
}

TEST_CASE("statement typing") {
  Context g = nat_ctx({"x"});
  CHECK(typecheck(Context{}, parse_term("nop").stat).empty());
  Signature out = typecheck(g, parse_term("p!(x+1)").stat);
  REQUIRE(out.size() == 1);
  CHECK(out[0].polarity == '+');
  CHECK(out[0].type == Type::nat);
  CHECK(show(out) == "\xE2\x9F\xA8p:nat+\xE2\x9F\xA9");
  Signature in = typecheck(g, parse_term("p?x").stat);
  CHECK(in[0].polarity == '-');
  CHECK(typecheck(g, parse_term("p!(x < 1)").stat)[0].type == Type::boolean);
  CHECK(typecheck(g, parse_term("p!1; p!2").stat).size() == 1);

  CHECK_THROWS_AS(typecheck(g, parse_term("y := 1").stat), Error);
  CHECK_THROWS_AS(typecheck(g, parse_term("x := true").stat), Error);
  CHECK_THROWS_AS(typecheck(g, parse_term("if x then nop else nop end").stat), Error);
  CHECK_THROWS_AS(typecheck(g, parse_term("while x + 1 do nop end").stat), Error);
  CHECK_THROWS_AS(typecheck(g, parse_term("p!x; p?x").stat), Error);
  CHECK_THROWS_AS(typecheck(g, parse_term("p!x; p!true").stat), Error);
  CHECK_THROWS_AS(typecheck(g, parse_term("x := 1 and true").stat), Error);
  CHECK_THROWS_AS(typecheck(nat_ctx({"x", "x"}), parse_term("nop")), Error);
}

TEST_CASE("parallel example types to the empty signature") {
  Typing t = typecheck(nat_ctx({"x", "z"}), parse_term(kParallel));
  CHECK(t.signature.empty());
  REQUIRE(t.channels.size() == 1);
  CHECK(t.channels[0].type == Type::nat);
  REQUIRE(t.process_contexts.size() == 2);
  CHECK(show(t.process_contexts[0]) == "x:nat");
  CHECK(show(t.process_contexts[1]) == "z:nat");
  CHECK(show_judgement(t) == "x:nat, z:nat \xE2\x8A\xA2 " + show(parse_term(kParallel)) + " : \xE2\x9F\xA8\xE2\x9F\xA9");
}

TEST_CASE("composition errors and open ports") {
  Context g = nat_ctx({"x"});
  CHECK_THROWS_AS(typecheck(g, parse_term("p?x << p ~ q >> q?x")), Error);
  CHECK_THROWS_AS(typecheck(g, parse_term("p!x << p ~ q >> q!x")), Error);
  CHECK_THROWS_AS(typecheck(g, parse_term("p!(x < 1) << p ~ q >> q?x")), Error);
  CHECK_THROWS_AS(typecheck(g, parse_term("p!x << r ~ q >> q?x")), Error);

  Typing open = typecheck(g, parse_term("p!x; r?x << p ~ q >> (q?x; s!x)"));
  REQUIRE(open.signature.size() == 2);
  CHECK(open.signature[0].port == "r");
  CHECK(open.signature[1].port == "s");
}

TEST_CASE("alpha conversion of variables and ports") {
  Typing t = typecheck(nat_ctx({"x", "y"}), parse_term("x := 1 << >> x := 2 << >> x := 3"));
  REQUIRE(t.process_contexts.size() == 3);
  CHECK(show(t.process_contexts[0]) == "x:nat, y:nat");
  CHECK(show(t.process_contexts[1]) == "x#1:nat");
  CHECK(show(t.process_contexts[2]) == "x#2:nat");
  CHECK(show(t.term) == "x := 1 << >> x#1 := 2 << >> x#2 := 3");

  Typing p = typecheck(nat_ctx({"x"}), parse_term("p!x << p ~ p >> p?x"));
  CHECK(p.signature.empty());
  CHECK(p.channels[0].out == "p");
  CHECK(p.channels[0].in == "p#1");

  Typing q = typecheck(nat_ctx({"x"}), parse_term("p!x << >> p?x"));
  REQUIRE(q.signature.size() == 2);
  CHECK(q.signature[1].port == "p#1");
}

TEST_CASE("declared ports") {
  Program p = parse_program("context x:nat | p:nat; program p!(2*x) end");
  CHECK(p.ports.size() == 1);
  Typing t = typecheck(p);
  CHECK(show_judgement(t, p.ports) == "x:nat | p:nat \xE2\x8A\xA2 p!(2 * x) : \xE2\x9F\xA8p:nat+\xE2\x9F\xA9");
  CHECK_THROWS_AS(typecheck(parse_program("context x:nat | p:bool; program p!x end")), Error);
  CHECK_NOTHROW(typecheck(parse_program("context | p:nat; program nop end")));
}

TEST_CASE("normal form examples") {
  NormalForm a = normal_form(parse_term("(x := 1; x := 2); x := 3"));
  REQUIRE(a.stats.size() == 1);
  CHECK(a.channels.empty());
  CHECK(a.stats[0] == parse_term("x := 1; (x := 2; x := 3)").stat);

  NormalForm l = normal_form(parse_term("(p!1 << p ~ q >> (q?x; r!x)) << r ~ s >> s?y"));
  NormalForm r = normal_form(parse_term("p!1 << p ~ q >> ((q?x; r!x) << r ~ s >> s?y)"));
  CHECK(l.stats == r.stats);
  REQUIRE(l.channels.size() == 2);
  CHECK(alpha_equiv(l, r));

  NormalForm one = normal_form(parse_term("while x < 1 do x := x + 1 end"));
  CHECK(one.stats.size() == 1);
  CHECK(one.channels.empty());
}

TEST_CASE("alpha equivalence examples") {
  NormalForm a = normal_form(parse_term("(x := 5; p!(x+x)) << p ~ q >> (q?z; z := z*z)"));
  NormalForm b = normal_form(parse_term("(x := 5; p!(x+x)) << p ~ r >> (r?z; z := z*z)"));
  CHECK(alpha_equiv(a, b));
  NormalForm c = normal_form(parse_term("(x := 5; p!(x+x)) << p ~ q >> (q?z; z := z+z)"));
  CHECK_FALSE(alpha_equiv(a, c));
  NormalForm d = normal_form(parse_term("x := 5 << p ~ q >> z := 1"));
  CHECK_FALSE(alpha_equiv(a, d));

  NormalForm e = normal_form(parse_term("(p!1; r!2) << p ~ q, r ~ s >> (q?x; s?x)"));
  NormalForm f = normal_form(parse_term("(p!1; r!2) << r ~ s, p ~ q >> (q?x; s?x)"));
  CHECK(alpha_equiv(e, f));
  NormalForm g = normal_form(parse_term("(p!1; r!2) << p ~ s, r ~ q >> (q?x; s?x)"));
  CHECK_FALSE(alpha_equiv(e, g));

  NormalForm h = normal_form(parse_term("p!1 << >> p?x"));
  NormalForm i = normal_form(parse_term("a!1 << >> a?x"));
  NormalForm j = normal_form(parse_term("a!1 << >> b?x"));
  CHECK(alpha_equiv(h, i));
  CHECK_FALSE(alpha_equiv(h, j));
}

TEST_CASE("normal form properties on random terms") {
  std::mt19937_64 rng(7);
  const std::vector<std::string> ports = {"a", "b", "c"};
  std::uniform_int_distribution<int> nprocs(1, 4);
  for (int round = 0; round < 200; ++round) {
    int n = nprocs(rng);
    std::vector<Term> procs;
    for (int i = 0; i < n; ++i) {
      Term t;
      t.stat = random_stat(rng, 3, ports);
      procs.push_back(t);
    }
    auto build_left = [&] {
      Term acc = procs[0];
      for (int i = 1; i < n; ++i) {
        Term t;
        t.composite = true;
        t.parts = {acc, procs[i]};
        acc = t;
      }
      return acc;
    };
    std::function<Term(int)> build_right = [&](int i) {
      if (i == n - 1) return procs[i];
      Term t;
      t.composite = true;
      t.parts = {procs[i], build_right(i + 1)};
      return t;
    };
    Term left = build_left(), right = build_right(0);
    NormalForm nl = normal_form(left), nr = normal_form(right);
    CHECK(alpha_equiv(nl, nr));

    NormalForm again = normal_form(reassemble(nl));
    CHECK(again.stats == nl.stats);

    Context g = nat_ctx({"x"});
    bool ok = true;
    Typing tl, tr;
    try {
      tl = typecheck(g, left);
      tr = typecheck(g, right);
      typecheck(g, reassemble(nl));
    } catch (const Error&) {
      ok = false;
    }
    if (!ok) continue;
    CHECK(tl.signature.size() == tr.signature.size());
    std::set<std::string> seen;
    for (const auto& e : tl.signature) CHECK(seen.insert(e.port).second);
    std::set<std::string> vars;
    for (const auto& d : tl.context) CHECK(vars.insert(d.name).second);
  }
}
