#include "cts/json_io.hpp"

#include <stdexcept>

namespace cts::io {

json document(const std::string& kind, json body) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = kind;
  for (auto& [k, v] : body.items()) j[k] = v;
  return j;
}

namespace {

json word_json(const Alphabet& a, const BangCell& w) {
  json out = json::array();
  for (Symbol s : w) out.push_back(a.show(s));
  return out;
}

Symbol symbol_from(const Alphabet& a, const std::string& s) {
  if (s == "STAR") return kStar;
  if (s == "TOP") return kTop;
  auto f = a.find(s);
  if (!f) throw std::invalid_argument("unknown letter " + s);
  return *f;
}

void check_version(const json& j) {
  if (j.contains("schema_version") && j.at("schema_version") != kSchemaVersion)
    throw std::invalid_argument("unsupported schema_version " + j.at("schema_version").dump());
}

}  // namespace

json to_json(const CubicalSet& k) {
  json cells = json::array(), faces = json::array();
  for (int d = 0; d <= k.trunc_dim(); ++d) {
    json names = json::array();
    for (int c = 0; c < k.count(d); ++c) {
      names.push_back(k.name(d, c));
      for (int i = 1; i <= d; ++i)
        for (Sign s : {Sign::minus, Sign::plus}) {
          const CellRef& f = k.faces_of(d, c).at(face_slot(i, s));
          faces.push_back(json{{"dim", d}, {"cell", c}, {"i", i}, {"sign", std::string(1, sign_char(s))},
                               {"base", f.base}, {"degens", f.degens}});
        }
    }
    cells.push_back(names);
  }
  return json{{"trunc_dim", k.trunc_dim()}, {"cells", cells}, {"faces", faces}};
}

CubicalSet cubical_from_json(const json& j) {
  check_version(j);
  CubicalSet k(j.at("trunc_dim").get<int>());
  const json& cells = j.at("cells");
  std::vector<std::vector<std::vector<CellRef>>> faces(cells.size());
  for (std::size_t d = 0; d < cells.size(); ++d) faces[d].assign(cells[d].size(), std::vector<CellRef>(2 * d));
  for (const json& f : j.at("faces")) {
    int d = f.at("dim").get<int>();
    Sign s = f.at("sign").get<std::string>() == "+" ? Sign::plus : Sign::minus;
    faces.at(d).at(f.at("cell").get<int>()).at(face_slot(f.at("i").get<int>(), s)) =
        CellRef{d - 1, f.at("base").get<int>(), f.at("degens").get<std::vector<int>>()};
  }
  for (std::size_t d = 0; d < cells.size(); ++d)
    for (std::size_t c = 0; c < cells[d].size(); ++c)
      k.add_cell(static_cast<int>(d), cells[d][c].get<std::string>(), faces[d][c]);
  return k;
}

json to_json(const Hda& h) {
  json j = to_json(h.carrier);
  j["alphabet"] = h.alphabet.symbols();
  json labels = json::array();
  for (std::size_t d = 0; d < h.labels.size(); ++d)
    for (std::size_t c = 0; c < h.labels[d].size(); ++c)
      labels.push_back(json{{"dim", d}, {"cell", c}, {"word", word_json(h.alphabet, h.labels[d][c])}});
  j["labels"] = labels;
  return j;
}

Hda hda_from_json(const json& j) {
  Hda h;
  h.carrier = cubical_from_json(j);
  h.alphabet = Alphabet(j.at("alphabet").get<std::vector<std::string>>());
  h.labels.resize(h.carrier.trunc_dim() + 1);
  for (int d = 0; d <= h.carrier.trunc_dim(); ++d) h.labels[d].resize(h.carrier.count(d));
  for (const json& l : j.at("labels")) {
    BangCell w;
    for (const json& s : l.at("word")) w.push_back(symbol_from(h.alphabet, s.get<std::string>()));
    h.labels.at(l.at("dim").get<int>()).at(l.at("cell").get<int>()) = w;
  }
  return h;
}

json to_json(const SyncTable& t) {
  json entries = json::array();
  for (const auto& [k, r] : t.explicit_entries())
    entries.push_back(json::array({t.alphabet().show(k.first), t.alphabet().show(k.second), t.alphabet().show(r)}));
  return json{{"alphabet", t.alphabet().symbols()},
              {"order", "index"},
              {"idle_respecting", t.idle_respecting()},
              {"entries", entries}};
}

json to_json(const ReflexiveGraph& g) {
  json edges = json::array();
  for (int e = 0; e < g.num_edges(); ++e)
    edges.push_back(json{{"id", e}, {"src", g.src(e)}, {"dst", g.dst(e)}, {"name", g.edge_name(e)}});
  return json{{"vertices", g.vertices}, {"edges", edges}};
}

json to_json(const PresentedCategory& c) {
  json rels = json::array();
  for (const auto& [a, b] : c.relations) rels.push_back(json::array({a, b}));
  json g = to_json(c.generators);
  return json{{"objects", g["vertices"]}, {"generators", g["edges"]}, {"relations", rels}};
}

json to_json(const FinSpan& s) {
  json rows = json::array();
  for (int a = 0; a < s.rows; ++a) {
    json r = json::array();
    for (int b = 0; b < s.cols; ++b) r.push_back(s.at(a, b));
    rows.push_back(r);
  }
  return json{{"rows", s.rows}, {"cols", s.cols}, {"matrix", rows}};
}

json to_json(const SpanPseudofunctor& p) {
  json objects = json::array(), gens = json::array();
  for (int x = 0; x < p.control.num_objects(); ++x) {
    json set = json::array();
    for (int a = 0; a < p.size(x); ++a) set.push_back(p.element_name(x, a));
    objects.push_back(json{{"id", x}, {"set", set}});
  }
  for (int e = 0; e < p.control.generators.num_edges(); ++e)
    gens.push_back(json{{"edge", e}, {"matrix", to_json(p.generator_span[e])["matrix"]}});
  return json{{"control", to_json(p.control.generators)}, {"objects", objects}, {"generators", gens}};
}

SpanPseudofunctor spans_from_json(const json& j) {
  check_version(j);
  SpanPseudofunctor p;
  ReflexiveGraph g;
  for (const json& v : j.at("control").at("vertices")) g.add_vertex(v.get<std::string>());
  for (const json& e : j.at("control").at("edges"))
    g.add_edge(e.at("src").get<int>(), e.at("dst").get<int>(), e.at("name").get<std::string>());
  p.control = free_category(g);
  for (const json& o : j.at("objects")) {
    auto names = o.at("set").get<std::vector<std::string>>();
    p.object_size.push_back(static_cast<int>(names.size()));
    p.element_names.push_back(names);
  }
  for (const json& gen : j.at("generators")) {
    auto rows = gen.at("matrix").get<std::vector<std::vector<int>>>();
    int e = gen.at("edge").get<int>();
    FinSpan s(p.size(g.src(e)), p.size(g.dst(e)));
    for (std::size_t a = 0; a < rows.size(); ++a)
      for (std::size_t b = 0; b < rows[a].size(); ++b) s.at(static_cast<int>(a), static_cast<int>(b)) = rows[a][b];
    p.generator_span.push_back(s);
  }
  return p;
}

namespace {

json pos_json(const cip::Pos& p) { return json{{"line", p.line}, {"col", p.col}}; }

const char* stat_kind(cip::Stat::Kind k) {
  switch (k) {
    case cip::Stat::Kind::nop: return "nop";
    case cip::Stat::Kind::assign: return "assign";
    case cip::Stat::Kind::send: return "send";
    case cip::Stat::Kind::recv: return "recv";
    case cip::Stat::Kind::seq: return "seq";
    case cip::Stat::Kind::if_: return "if";
    case cip::Stat::Kind::while_: return "while";
  }
  return "?";
}

json context_json(const cip::Context& c) {
  json out = json::array();
  for (const auto& d : c) out.push_back(json{{"name", d.name}, {"type", cip::show(d.type)}});
  return out;
}

json channel_json(const cip::Channel& c) { return json{{"out", c.out}, {"in", c.in}, {"type", cip::show(c.type)}}; }

}  // namespace

json to_json(const cip::Expr& e) {
  json j{{"pos", pos_json(e.pos)}};
  switch (e.kind) {
    case cip::Expr::Kind::var: j["var"] = e.name; break;
    case cip::Expr::Kind::nat_lit: j["nat"] = e.value; break;
    case cip::Expr::Kind::bool_lit: j["bool"] = e.value != 0; break;
    case cip::Expr::Kind::op: {
      j["op"] = e.name;
      json args = json::array();
      for (const auto& a : e.args) args.push_back(to_json(a));
      j["args"] = args;
      break;
    }
  }
  return j;
}

json to_json(const cip::Stat& s) {
  json j{{"kind", stat_kind(s.kind)}, {"pos", pos_json(s.pos)}};
  using K = cip::Stat::Kind;
  if (s.kind == K::assign || s.kind == K::recv) j["var"] = s.var;
  if (s.kind == K::send || s.kind == K::recv) j["port"] = s.port;
  if (s.kind == K::assign || s.kind == K::send || s.kind == K::if_ || s.kind == K::while_) j["expr"] = to_json(s.expr);
  if (!s.body.empty()) {
    json body = json::array();
    for (const auto& b : s.body) body.push_back(to_json(b));
    j["body"] = body;
  }
  return j;
}

json to_json(const cip::Term& t) {
  if (!t.composite) return json{{"process", to_json(t.stat)}};
  json chans = json::array();
  for (const auto& c : t.channels) chans.push_back(channel_json(c));
  return json{{"compose", json::array({to_json(t.parts.at(0)), to_json(t.parts.at(1))})},
              {"channels", chans},
              {"pos", pos_json(t.pos)}};
}

json to_json(const cip::Program& p, const cip::Typing& t) {
  json sig = json::array();
  for (const auto& s : t.signature)
    sig.push_back(json{{"port", s.port}, {"type", cip::show(s.type)}, {"polarity", std::string(1, s.polarity)}});
  json procs = json::array();
  for (const auto& c : t.process_contexts) procs.push_back(context_json(c));
  return document("typed_ast", json{{"context", context_json(p.context)},
                                    {"ports", context_json(p.ports)},
                                    {"term", to_json(t.term)},
                                    {"signature", sig},
                                    {"process_contexts", procs},
                                    {"judgement", cip::show_judgement(t, p.ports)}});
}

json to_json(const cip::Machine& m, const cip::StateSpace& ss) {
  json states = json::array();
  for (std::size_t v = 0; v < ss.states.size(); ++v) {
    json stores = json::array(), locs = json::array();
    for (int i = 0; i < m.num_processes(); ++i) {
      json st = json::object();
      const auto& ctx = m.context(i);
      for (std::size_t k = 0; k < ctx.size(); ++k) st[ctx[k].name] = ss.states[v][i].store.at(k);
      stores.push_back(st);
      locs.push_back(m.location_name(i, ss.states[v][i].reg));
    }
    states.push_back(json{{"id", v}, {"stores", stores}, {"locations", locs}});
  }
  json edges = json::array();
  for (const auto& e : ss.edges) {
    json j{{"src", e.src}, {"dst", e.dst}, {"rule", cip::rule_name(e.rule)}, {"proc", e.procs}};
    if (e.value >= 0) j["value"] = e.value;
    if (!e.port.empty()) j["port"] = e.port;
    edges.push_back(j);
  }
  return document("state_space", json{{"initial", ss.initial}, {"truncated", ss.truncated}, {"states", states},
                                      {"edges", edges}});
}

json to_json(const cip::CipCts& c, const cip::Environment* env) {
  json body = to_json(c.spans);
  for (std::size_t f = 0; f < c.generator_labels.size(); ++f) body["generators"][f]["label"] = c.generator_labels[f];
  body["initial"] = c.initial;
  body["acubic"] = c.acubic;
  body["notes"] = c.notes;
  if (env) {
    json gens = json::array();
    const auto& g = env->interface.phi.control.generators;
    for (int e = 0; e < g.num_edges(); ++e) gens.push_back(g.edge_name(e));
    json legs = json::array();
    for (std::size_t f = 0; f < env->leg.generator_of.size(); ++f) {
      int k = env->leg.generator_of[f];
      legs.push_back(json{{"generator", f},
                          {"interface_generator", k < 0 ? json(nullptr) : json(g.edge_name(k))},
                          {"two_cell", env->leg.iota.two_cells.at(f)}});
    }
    body["interface"] = json{{"generators", gens}, {"legs", legs}};
  }
  return document("cts", body);
}

json to_json(const sim::SimRelation& r, const sim::PointedCts& s, const sim::PointedCts& t) {
  json pairs = json::array();
  for (const auto& [a, b] : r.pairs) pairs.push_back(json::array({s.object_name(a), t.object_name(b)}));
  return json{{"s_point", s.object_name(r.s_point)}, {"t_point", t.object_name(r.t_point)}, {"pairs", pairs}};
}

}  // namespace cts::io
