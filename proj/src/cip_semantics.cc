#include "cts/semantics.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace cts::cip {

namespace {

const char* const kAlpha = "\xCE\xB1";
const char* const kGamma1 = "\xCE\xB3" "1";
const char* const kGamma2 = "\xCE\xB3" "2";

int kind_rank(Event::Kind k) { return static_cast<int>(k); }

bool is_comm(const Event& e) { return e.kind == Event::Kind::send || e.kind == Event::Kind::recv; }

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

// Sort key of a location: terminal last.
int loc_key(int l) { return l == kBottom ? INT_MAX : l; }

std::string locations_name(const Machine& m, const std::vector<int>& locs) {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < locs.size(); ++i) parts.push_back(m.location_name(static_cast<int>(i), locs[i]));
  if (parts.size() == 1) return parts[0];
  return "(" + join(parts, ",") + ")";
}

std::string vertex_name(const Machine& m, const std::vector<int>& locs, const std::vector<int>& store) {
  return locations_name(m, locs) + "{" + show_store(m, store) + "}";
}

// Unique within a graph whose edges are distinct (src, label, dst) triples.
std::string edge_name(const ReflexiveGraph& g, int src, const std::string& label, int dst) {
  return g.vertices[src] + " -" + label + "-> " + g.vertices[dst];
}

std::vector<Type> store_types(const Machine& m) {
  std::vector<Type> out;
  for (int i = 0; i < m.num_processes(); ++i)
    for (Type t : m.var_types(i)) out.push_back(t);
  return out;
}

Event letter(const LabeledGraph& g, EdgeId e) {
  auto ev = parse_event(g.alphabet.name(g.label(e)));
  if (!ev) throw std::logic_error("not an event label: " + g.alphabet.name(g.label(e)));
  return *ev;
}

ExploreOptions project_options(const ExploreOptions& opt, const Context& ctx) {
  ExploreOptions out = opt;
  std::set<std::string> names;
  for (const auto& d : ctx) names.insert(d.name);
  std::vector<std::map<std::string, int>> alts;
  for (const auto& alt : opt.init.alternatives) {
    std::map<std::string, int> p;
    for (const auto& [k, v] : alt)
      if (names.count(k)) p[k] = v;
    if (std::find(alts.begin(), alts.end(), p) == alts.end()) alts.push_back(std::move(p));
  }
  // an empty projection means every store of the component
  if (std::find(alts.begin(), alts.end(), std::map<std::string, int>{}) != alts.end()) alts.clear();
  out.init.alternatives = std::move(alts);
  return out;
}

std::vector<int> process_of_port(const NormalForm& nf, const std::string& port) {
  std::vector<int> out;
  for (std::size_t i = 0; i < nf.stats.size(); ++i)
    if (ports_of(nf.stats[i]).count(port)) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<std::vector<int>> all_stores(const std::vector<int>& sizes) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(sizes.size(), 0);
  for (int s : sizes)
    if (s <= 0) return out;
  while (true) {
    out.push_back(cur);
    int k = static_cast<int>(sizes.size()) - 1;
    while (k >= 0 && ++cur[k] == sizes[k]) cur[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

}  // namespace

std::string show(const Event& e) {
  switch (e.kind) {
    case Event::Kind::alpha:
      return kAlpha;
    case Event::Kind::gamma1:
      return kGamma1;
    case Event::Kind::gamma2:
      return kGamma2;
    case Event::Kind::send:
      return e.port.empty() ? "!" : "!" + std::to_string(e.value) + "," + e.port;
    case Event::Kind::recv:
      return e.port.empty() ? "?" : "?" + std::to_string(e.value) + "," + e.port;
  }
  return "";
}

std::optional<Event> parse_event(const std::string& s) {
  if (s == kAlpha) return Event{Event::Kind::alpha, -1, {}};
  if (s == kGamma1) return Event{Event::Kind::gamma1, -1, {}};
  if (s == kGamma2) return Event{Event::Kind::gamma2, -1, {}};
  if (s.empty() || (s[0] != '!' && s[0] != '?')) return std::nullopt;
  Event e;
  e.kind = s[0] == '!' ? Event::Kind::send : Event::Kind::recv;
  if (s.size() == 1) return e;
  auto comma = s.find(',');
  if (comma == std::string::npos || comma == 1 || comma + 1 == s.size()) return std::nullopt;
  std::string num = s.substr(1, comma - 1);
  if (!std::all_of(num.begin(), num.end(), [](char c) { return c >= '0' && c <= '9'; }) || num.size() > 9)
    return std::nullopt;
  e.value = std::stoi(num);
  e.port = s.substr(comma + 1);
  return e;
}

Event erase_label(const Event& e) { return Event{e.kind, -1, {}}; }

Event event_of(const StateSpace::Edge& e) {
  using R = Machine::Rule;
  switch (e.rule) {
    case R::Nop:
    case R::Asg:
    case R::RV:
      return Event{Event::Kind::alpha, -1, {}};
    case R::If1:
    case R::While1:
      return Event{Event::Kind::gamma1, -1, {}};
    case R::If2:
    case R::While2:
      return Event{Event::Kind::gamma2, -1, {}};
    case R::S:
      return Event{Event::Kind::send, e.value, e.port};
    case R::R:
      return Event{Event::Kind::recv, e.value, e.port};
  }
  return {};
}

bool event_less(const Event& a, const Event& b) {
  return std::make_tuple(kind_rank(a.kind), a.port, a.value) < std::make_tuple(kind_rank(b.kind), b.port, b.value);
}

Alphabet alphabet_of(std::vector<Event> letters) {
  std::sort(letters.begin(), letters.end(), event_less);
  letters.erase(std::unique(letters.begin(), letters.end()), letters.end());
  std::vector<std::string> names;
  for (const auto& e : letters) names.push_back(show(e));
  return Alphabet(names);
}

std::vector<std::string> store_names(const Machine& m) {
  std::vector<std::string> out;
  for (int i = 0; i < m.num_processes(); ++i)
    for (const auto& d : m.context(i)) out.push_back(d.name);
  return out;
}

std::string show_store(const Machine& m, const std::vector<int>& store) {
  auto names = store_names(m);
  auto types = store_types(m);
  std::vector<std::string> parts;
  for (std::size_t k = 0; k < store.size() && k < names.size(); ++k)
    parts.push_back(names[k] + "=" + m.interp().show_value(types[k], store[k]));
  return join(parts, ",");
}

CipGraphs graphs_of(const Machine& m, const ExploreOptions& opt) { return graphs_of(m, explore(m, opt)); }

CipGraphs graphs_of(const Machine& m, const StateSpace& ss) {
  using Key = std::pair<std::vector<int>, std::vector<int>>;  // sortable locations, store
  auto sortable = [](std::vector<int> locs) {
    for (int& l : locs) l = loc_key(l);
    return locs;
  };
  auto unsort = [](std::vector<int> locs) {
    for (int& l : locs)
      if (l == INT_MAX) l = kBottom;
    return locs;
  };

  std::vector<Key> state_key(ss.states.size());
  std::map<Key, int> vid;
  for (std::size_t s = 0; s < ss.states.size(); ++s) {
    state_key[s] = {sortable(location_map(ss.states[s])), store_map(ss.states[s])};
    vid.emplace(state_key[s], 0);
  }
  std::map<std::vector<int>, int> cid;
  CipGraphs g;
  g.truncated = ss.truncated;
  int n = 0;
  for (auto& [k, id] : vid) {
    id = n++;
    g.locations.push_back(unsort(k.first));
    g.stores.push_back(k.second);
    g.evolution.graph.add_vertex(vertex_name(m, g.locations.back(), k.second));
    cid.emplace(k.first, 0);
  }
  n = 0;
  for (auto& [k, id] : cid) {
    id = n++;
    g.control_locations.push_back(unsort(k));
    g.control.graph.add_vertex(locations_name(m, g.control_locations.back()));
  }
  g.pi.on_vertices.resize(g.locations.size());
  for (std::size_t v = 0; v < g.locations.size(); ++v) g.pi.on_vertices[v] = cid.at(sortable(g.locations[v]));

  struct Ev {
    int src, dst;
    Event e;
  };
  std::vector<Ev> evs;
  for (const auto& e : ss.edges) evs.push_back({vid.at(state_key[e.src]), vid.at(state_key[e.dst]), event_of(e)});
  auto ev_less = [](const Ev& a, const Ev& b) {
    if (a.src != b.src) return a.src < b.src;
    if (a.dst != b.dst) return a.dst < b.dst;
    return event_less(a.e, b.e);
  };
  std::sort(evs.begin(), evs.end(), ev_less);
  evs.erase(std::unique(evs.begin(), evs.end(),
                        [](const Ev& a, const Ev& b) { return a.src == b.src && a.dst == b.dst && a.e == b.e; }),
            evs.end());

  std::vector<Event> letters, hat_letters;
  for (const auto& e : evs) {
    letters.push_back(e.e);
    hat_letters.push_back(erase_label(e.e));
  }
  g.evolution.alphabet = alphabet_of(letters);
  g.control.alphabet = alphabet_of(hat_letters);

  std::map<std::tuple<int, int, std::string>, int> ced;
  for (const auto& e : evs) {
    int cs = g.pi.on_vertices[e.src], cd = g.pi.on_vertices[e.dst];
    if (cs == cd) throw std::logic_error("graphs_of: a move keeps every location");
    std::string name = show(e.e), hat = show(erase_label(e.e));
    g.evolution.graph.add_edge(e.src, e.dst, edge_name(g.evolution.graph, e.src, name, e.dst));
    g.evolution.labels.push_back(*g.evolution.alphabet.find(name));
    auto key = std::make_tuple(cs, cd, hat);
    auto it = ced.find(key);
    if (it == ced.end()) {
      it = ced.emplace(key, g.control.graph.add_edge(cs, cd, edge_name(g.control.graph, cs, hat, cd))).first;
      g.control.labels.push_back(*g.control.alphabet.find(hat));
    }
    g.pi.on_edges.push_back(it->second);
  }

  std::set<int> init;
  for (int s : ss.initial) init.insert(vid.at(state_key[s]));
  g.initial.assign(init.begin(), init.end());
  g.initial_control = g.initial.empty() ? 0 : g.pi.on_vertices[g.initial.front()];
  return g;
}

std::optional<std::string> check_commutes(const CipGraphs& g) {
  const auto& ev = g.evolution;
  const auto& ct = g.control;
  for (int e = 0; e < ev.graph.num_edges(); ++e) {
    EdgeId f = g.pi.on_edges.at(e);
    if (is_id(f)) return "edge " + ev.graph.edge_name(e) + " maps to an identity";
    if (ct.graph.src(f) != g.pi.on_vertices[ev.graph.src(e)] || ct.graph.dst(f) != g.pi.on_vertices[ev.graph.dst(e)])
      return "edge " + std::to_string(e) + " is not preserved by pi";
    std::string want = show(erase_label(letter(ev, e)));
    if (ct.alphabet.name(ct.label(f)) != want)
      return "edge " + std::to_string(e) + ": erased label " + want + " vs control label " + ct.alphabet.name(ct.label(f));
  }
  return std::nullopt;
}

Machine component(const Machine& m, int i) {
  NormalForm nf;
  nf.stats.push_back(m.normal_form().stats.at(i));
  nf.contexts.push_back(m.context(i));
  return Machine(nf, m.interp());
}

CipHdas lift_to_hda(const CipGraphs& g, int max_dim) {
  CipHdas out{hda_of_graph(g.evolution), hda_of_graph(g.control)};
  if (max_dim > 1) {
    out.evolution = sigma_coskeleton(out.evolution, 1, max_dim);
    out.control = sigma_coskeleton(out.control, 1, max_dim);
  }
  return out;
}

SyncTable sync_table_of(const NormalForm& nf, const Alphabet& sigma, bool restricted) {
  SyncTable t(sigma, true);
  std::map<std::string, std::string> partner;  // out port -> in port
  std::set<std::string> channelled;
  for (const auto& c : nf.channels) {
    partner[c.out] = c.in;
    channelled.insert(c.out);
    channelled.insert(c.in);
  }
  std::vector<std::pair<Symbol, Event>> letters;
  for (Symbol s = 0; s < sigma.size(); ++s)
    if (auto e = parse_event(sigma.name(s))) letters.emplace_back(s, *e);
  for (const auto& [a, ea] : letters) {
    if (ea.kind != Event::Kind::send || ea.port.empty()) continue;
    auto it = partner.find(ea.port);
    if (it == partner.end()) continue;
    for (const auto& [b, eb] : letters)
      if (eb.kind == Event::Kind::recv && eb.port == it->second && eb.value == ea.value) {
        Symbol al = t.alphabet().intern(kAlpha);
        t.set(a, b, al);
        t.set(b, a, al);
      }
  }
  if (restricted)
    for (const auto& [a, ea] : letters)
      if (is_comm(ea) && channelled.count(ea.port)) {
        t.set(kStar, a, kTop);
        t.set(a, kStar, kTop);
      }
  return t;
}

namespace {

struct Product {
  std::vector<std::vector<int>> tuples;  // reachable vertex tuples, BFS order
  std::vector<std::tuple<int, int, std::string>> edges;
};

// Direct vertex name of a tuple of component vertices.
std::string tuple_name(const Machine& m, const std::vector<CipGraphs>& comps, const std::vector<int>& t) {
  std::vector<int> locs, store;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto& l = comps[i].locations[t[i]];
    const auto& s = comps[i].stores[t[i]];
    locs.insert(locs.end(), l.begin(), l.end());
    store.insert(store.end(), s.begin(), s.end());
  }
  return vertex_name(m, locs, store);
}

template <class Moves>
Product reachable_product(const std::vector<std::vector<int>>& init, Moves&& moves) {
  Product p;
  std::map<std::vector<int>, int> id;
  std::deque<std::vector<int>> queue;
  for (const auto& t : init)
    if (id.emplace(t, static_cast<int>(p.tuples.size())).second) {
      p.tuples.push_back(t);
      queue.push_back(t);
    }
  while (!queue.empty()) {
    auto t = queue.front();
    queue.pop_front();
    int src = id.at(t);
    for (auto& [dst, label] : moves(t)) {
      auto [it, fresh] = id.emplace(dst, static_cast<int>(p.tuples.size()));
      if (fresh) {
        p.tuples.push_back(dst);
        queue.push_back(dst);
      }
      p.edges.emplace_back(src, it->second, label);
    }
  }
  return p;
}

using EdgeSet = std::multiset<std::tuple<std::string, std::string, std::string>>;

EdgeSet named_edges(const Machine& m, const std::vector<CipGraphs>& comps, const Product& p) {
  EdgeSet out;
  for (const auto& [s, d, l] : p.edges) out.emplace(tuple_name(m, comps, p.tuples[s]), tuple_name(m, comps, p.tuples[d]), l);
  return out;
}

bool compare_with(const std::string& what, const std::set<std::string>& verts, const EdgeSet& edges,
                  const std::set<std::string>& want_verts, const EdgeSet& want_edges,
                  std::vector<std::string>& witnesses) {
  bool ok = true;
  for (const auto& v : verts)
    if (!want_verts.count(v)) {
      witnesses.push_back(what + ": extra vertex " + v);
      ok = false;
      break;
    }
  for (const auto& v : want_verts)
    if (!verts.count(v)) {
      witnesses.push_back(what + ": missing vertex " + v);
      ok = false;
      break;
    }
  if (edges != want_edges) {
    ok = false;
    std::vector<std::tuple<std::string, std::string, std::string>> diff;
    std::set_difference(edges.begin(), edges.end(), want_edges.begin(), want_edges.end(), std::back_inserter(diff));
    if (!diff.empty()) {
      auto& [s, d, l] = diff.front();
      witnesses.push_back(what + ": extra edge " + s + " -" + l + "-> " + d);
    } else {
      std::set_difference(want_edges.begin(), want_edges.end(), edges.begin(), edges.end(), std::back_inserter(diff));
      auto& [s, d, l] = diff.front();
      witnesses.push_back(what + ": missing edge " + s + " -" + l + "-> " + d);
    }
  }
  return ok;
}

}  // namespace

ProductReport product_decomposition_check(const Machine& m, const ExploreOptions& opt) {
  ProductReport rep;
  const NormalForm& nf = m.normal_form();
  int n = m.num_processes();
  CipGraphs direct = graphs_of(m, opt);
  rep.direct_vertices = direct.evolution.graph.num_vertices();
  rep.direct_edges = direct.evolution.graph.num_edges();

  std::vector<Machine> machines;
  std::vector<CipGraphs> comps;
  for (int i = 0; i < n; ++i) {
    machines.push_back(component(m, i));
    comps.push_back(graphs_of(machines.back(), project_options(opt, m.context(i))));
  }

  std::vector<std::map<std::pair<std::vector<int>, std::vector<int>>, int>> comp_vertex(n);
  for (int i = 0; i < n; ++i)
    for (int v = 0; v < comps[i].evolution.graph.num_vertices(); ++v)
      comp_vertex[i][{comps[i].locations[v], comps[i].stores[v]}] = v;

  // initial tuples from the directly explored initial configurations
  std::vector<std::vector<int>> init;
  for (int v : direct.initial) {
    std::vector<int> t;
    std::size_t off = 0;
    bool found = true;
    for (int i = 0; i < n; ++i) {
      std::size_t width = m.context(i).size();
      std::vector<int> locs{direct.locations[v][i]};
      std::vector<int> store(direct.stores[v].begin() + off, direct.stores[v].begin() + off + width);
      off += width;
      auto it = comp_vertex[i].find({locs, store});
      if (it == comp_vertex[i].end()) {
        found = false;
        break;
      }
      t.push_back(it->second);
    }
    if (!found) {
      rep.witnesses.push_back("initial vertex " + direct.evolution.graph.vertices[v] + " has no component tuple");
      return rep;
    }
    init.push_back(std::move(t));
  }

  std::set<std::string> want_verts(direct.evolution.graph.vertices.begin(), direct.evolution.graph.vertices.end());
  EdgeSet want_edges;
  for (int e = 0; e < direct.evolution.graph.num_edges(); ++e)
    want_edges.emplace(direct.evolution.graph.vertices[direct.evolution.graph.src(e)],
                       direct.evolution.graph.vertices[direct.evolution.graph.dst(e)],
                       direct.evolution.alphabet.name(direct.evolution.labels[e]));

  auto vertex_names = [&](const Product& p) {
    std::set<std::string> out;
    for (const auto& t : p.tuples) out.insert(tuple_name(m, comps, t));
    return out;
  };

  // literal: iterated binary synchronized products over the union alphabet
  {
    std::vector<Event> letters;
    for (const auto& c : comps)
      for (int e = 0; e < c.evolution.graph.num_edges(); ++e) letters.push_back(letter(c.evolution, e));
    letters.push_back(Event{});
    SyncTable table = sync_table_of(nf, alphabet_of(letters), false);
    LabeledGraph acc = comps[0].evolution;
    std::vector<int> sizes{acc.graph.num_vertices()};
    for (int i = 1; i < n; ++i) {
      SyncGraph sg = sync_graph(acc, comps[i].evolution, table);
      acc = std::move(sg.graph);
      sizes.push_back(comps[i].evolution.graph.num_vertices());
    }
    auto decode = [&](int v) {
      std::vector<int> t(n);
      for (int i = n - 1; i > 0; --i) {
        t[i] = v % sizes[i];
        v /= sizes[i];
      }
      t[0] = v;
      return t;
    };
    auto encode = [&](const std::vector<int>& t) {
      int v = t[0];
      for (int i = 1; i < n; ++i) v = v * sizes[i] + t[i];
      return v;
    };
    auto out = acc.graph.out_edges();
    Product p = reachable_product(init, [&](const std::vector<int>& t) {
      std::vector<std::pair<std::vector<int>, std::string>> mv;
      for (EdgeId e : out[encode(t)])
        if (acc.labels[e] != kTop) mv.emplace_back(decode(acc.graph.dst(e)), acc.alphabet.name(acc.labels[e]));
      return mv;
    });
    rep.literal_vertices = static_cast<int>(p.tuples.size());
    rep.literal_edges = static_cast<int>(p.edges.size());
    rep.literal_iso = compare_with("literal", vertex_names(p), named_edges(m, comps, p), want_verts, want_edges,
                                   rep.witnesses);
  }

  // restricted: a letter on a channelled port moves only with its partner
  std::map<std::string, std::string> partner;
  std::set<std::string> channelled;
  for (const auto& c : nf.channels) {
    partner[c.out] = c.in;
    channelled.insert(c.out);
    channelled.insert(c.in);
  }
  std::vector<std::vector<std::vector<EdgeId>>> outs;
  for (const auto& c : comps) outs.push_back(c.evolution.graph.out_edges());
  Product rp = reachable_product(init, [&](const std::vector<int>& t) {
    std::vector<std::pair<std::vector<int>, std::string>> mv;
    for (int i = 0; i < n; ++i)
      for (EdgeId e : outs[i][t[i]]) {
        Event ev = letter(comps[i].evolution, e);
        if (!is_comm(ev) || !channelled.count(ev.port)) {
          auto u = t;
          u[i] = comps[i].evolution.graph.dst(e);
          mv.emplace_back(u, show(ev));
          continue;
        }
        if (ev.kind != Event::Kind::send) continue;
        auto it = partner.find(ev.port);
        if (it == partner.end()) continue;
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          for (EdgeId f : outs[j][t[j]]) {
            Event fv = letter(comps[j].evolution, f);
            if (fv.kind == Event::Kind::recv && fv.port == it->second && fv.value == ev.value) {
              auto u = t;
              u[i] = comps[i].evolution.graph.dst(e);
              u[j] = comps[j].evolution.graph.dst(f);
              mv.emplace_back(u, kAlpha);
            }
          }
        }
      }
    return mv;
  });
  rep.restricted_vertices = static_cast<int>(rp.tuples.size());
  rep.restricted_edges = static_cast<int>(rp.edges.size());
  rep.restricted_iso = compare_with("restricted", vertex_names(rp), named_edges(m, comps, rp), want_verts,
                                    want_edges, rep.witnesses);

  // hat: componentwise projection to locations, labels erased
  {
    auto loc_name = [&](const std::vector<int>& t) {
      std::vector<int> locs;
      for (int i = 0; i < n; ++i) locs.push_back(comps[i].locations[t[i]][0]);
      return locations_name(m, locs);
    };
    std::set<std::string> verts, want_v(direct.control.graph.vertices.begin(), direct.control.graph.vertices.end());
    std::set<std::tuple<std::string, std::string, std::string>> es;
    for (const auto& t : rp.tuples) verts.insert(loc_name(t));
    for (const auto& [s, d, l] : rp.edges)
      es.emplace(loc_name(rp.tuples[s]), loc_name(rp.tuples[d]), show(erase_label(*parse_event(l))));
    EdgeSet got(es.begin(), es.end()), want;
    for (int e = 0; e < direct.control.graph.num_edges(); ++e)
      want.emplace(direct.control.graph.vertices[direct.control.graph.src(e)],
                   direct.control.graph.vertices[direct.control.graph.dst(e)],
                   direct.control.alphabet.name(direct.control.labels[e]));
    rep.hat_iso = compare_with("hat", verts, got, want_v, want, rep.witnesses);
  }
  return rep;
}

CipCts categorical_semantics(const Machine& m, const ExploreOptions& opt) {
  CipCts c;
  c.graphs = graphs_of(m, opt);
  const auto& g = c.graphs;
  if (g.truncated) c.notes.push_back("state space truncated at the state cap");
  if (g.evolution.graph.num_vertices() <= 5000) {
    c.acubic = is_acubic(g.evolution.graph) && is_acubic(g.control.graph);
    if (!c.acubic && m.num_processes() == 1) c.notes.push_back("a statement graph has a rigid square");
  } else {
    c.notes.push_back("acubicity not checked: evolution graph too large");
  }
  c.control = free_category(g.control.graph);
  c.pi.total = free_category(g.evolution.graph);
  c.pi.base = c.control;
  c.pi.on_objects = g.pi.on_vertices;
  for (EdgeId f : g.pi.on_edges) c.pi.on_generators.push_back(Path{f});
  c.spans = fibers(c.pi);
  c.fiber_vertices.assign(g.control.graph.num_vertices(), {});
  for (int v = 0; v < g.evolution.graph.num_vertices(); ++v) c.fiber_vertices[g.pi.on_vertices[v]].push_back(v);
  for (int x = 0; x < g.control.graph.num_vertices(); ++x)
    for (std::size_t a = 0; a < c.fiber_vertices[x].size(); ++a)
      c.spans.element_names[x][a] = show_store(m, g.stores[c.fiber_vertices[x][a]]);
  for (int e = 0; e < g.control.graph.num_edges(); ++e) c.generator_labels.push_back(g.control.alphabet.name(g.control.labels[e]));
  c.initial = g.initial_control;
  return c;
}

namespace {

Interface make_interface(const std::vector<Channel>& gens, const Interp& in) {
  Interface out;
  out.generators = gens;
  ReflexiveGraph g;
  g.add_vertex("\xE2\x80\xA2");
  for (const auto& c : gens) g.add_edge(0, 0, c.in.empty() ? c.out : c.out + "~" + c.in);
  out.phi.control = free_category(g);
  out.phi.object_size = {1};
  for (const auto& c : gens) out.phi.generator_span.push_back(FinSpan::of_matrix({{in.size(c.type)}}));
  out.phi.element_names = {{"*"}};
  return out;
}

// generator_of maps a send or receive port to the interface generator.
InterfaceLeg make_leg(const Machine& m, const CipCts& cts, int which, const Interface& itf,
                      const std::map<std::string, int>& gen_of_port) {
  InterfaceLeg leg;
  leg.interface = which;
  const auto& cg = cts.graphs.control.graph;
  const auto& eg = cts.graphs.evolution;
  GraphMorphism k;
  k.on_vertices.assign(cg.num_vertices(), 0);
  // the first evolution edge over each generator fixes its port
  std::vector<int> witness(cg.num_edges(), -1);
  for (int e = eg.graph.num_edges() - 1; e >= 0; --e) witness[cts.graphs.pi.on_edges[e]] = e;
  for (int f = 0; f < cg.num_edges(); ++f) {
    int gen = -1;
    if (witness[f] >= 0) {
      Event ev = letter(eg, witness[f]);
      if (is_comm(ev)) {
        auto it = gen_of_port.find(ev.port);
        if (it != gen_of_port.end()) gen = it->second;
      }
    }
    leg.generator_of.push_back(gen);
    k.on_edges.push_back(gen < 0 ? id_edge(0) : gen);
  }
  leg.iota.source = cts.spans;
  leg.iota.target = reindex(itf.phi, cts.control, k);
  for (int x = 0; x < cg.num_vertices(); ++x) {
    FinSpan c(cts.spans.size(x), 1);
    for (int a = 0; a < c.rows; ++a) c.at(a, 0) = 1;
    leg.iota.components.push_back(std::move(c));
  }
  for (int f = 0; f < cg.num_edges(); ++f) {
    const FinSpan& s = cts.spans.generator_span[f];
    std::vector<int> cell;
    int x = cg.src(f), y = cg.dst(f);
    const Stat& st = m.stat_at(0, cts.graphs.control_locations[x][0]);
    for (const auto& [a, b, kk] : s.apex()) {
      (void)kk;
      int v = 0;
      if (leg.generator_of[f] >= 0) {
        const auto& sa = cts.graphs.stores[cts.fiber_vertices[x][a]];
        const auto& sb = cts.graphs.stores[cts.fiber_vertices[y][b]];
        if (st.kind == Stat::Kind::send)
          v = m.eval(0, sa, st.expr);
        else
          v = sb[m.var_index(0, st.var)];
      }
      cell.push_back(v);
    }
    leg.iota.two_cells.push_back(std::move(cell));
  }
  return leg;
}

}  // namespace

CutInterfaces cut_interfaces(const Machine& m, const ExploreOptions& opt) {
  CutInterfaces out;
  const NormalForm& nf = m.normal_form();
  int n = m.num_processes();
  std::vector<Machine> machines;
  for (int i = 0; i < n; ++i) {
    machines.push_back(component(m, i));
    out.components.push_back(categorical_semantics(machines.back(), project_options(opt, m.context(i))));
    if (!out.components.back().acubic) out.notes.push_back("component " + std::to_string(i + 1) + " is not acubic");
  }
  std::vector<std::vector<Channel>> per_cut(n > 0 ? n - 1 : 0);
  for (const auto& c : nf.channels) {
    auto a = process_of_port(nf, c.out), b = process_of_port(nf, c.in);
    if (a.size() != 1 || b.size() != 1) {
      out.notes.push_back("channel " + c.out + "~" + c.in + " has no unique endpoints");
      continue;
    }
    int lo = std::min(a[0], b[0]), hi = std::max(a[0], b[0]);
    if (hi != lo + 1) {
      out.notes.push_back("channel " + c.out + "~" + c.in + " joins non-adjacent processes and is ignored");
      continue;
    }
    per_cut[lo].push_back(c);
  }
  for (int i = 0; i + 1 < n; ++i) {
    out.interfaces.push_back(make_interface(per_cut[i], m.interp()));
    std::map<std::string, int> ports;
    for (std::size_t k = 0; k < per_cut[i].size(); ++k) {
      ports[per_cut[i][k].out] = static_cast<int>(k);
      ports[per_cut[i][k].in] = static_cast<int>(k);
    }
    out.plus.push_back(make_leg(machines[i], out.components[i], i, out.interfaces.back(), ports));
    out.minus.push_back(make_leg(machines[i + 1], out.components[i + 1], i, out.interfaces.back(), ports));
  }
  return out;
}

Environment environment_interface(const Machine& m, const CipCts& cts, const Context& declared_ports) {
  if (m.num_processes() != 1) throw std::invalid_argument("environment_interface: single process only");
  std::map<std::string, Type> ports;
  for (const auto& d : declared_ports) ports[d.name] = d.type;
  for (const auto& pt : typecheck(m.context(0), m.normal_form().stats[0])) ports[pt.port] = pt.type;
  std::vector<Channel> gens;
  std::map<std::string, int> index;
  for (const auto& [p, t] : ports) {
    index[p] = static_cast<int>(gens.size());
    gens.push_back(Channel{p, "", t});
  }
  Environment env;
  env.interface = make_interface(gens, m.interp());
  env.leg = make_leg(m, cts, 0, env.interface, index);
  return env;
}

ClosedFormReport closed_form_spans(const Machine& m, const CipCts& cts) {
  if (m.num_processes() != 1) throw std::invalid_argument("closed_form_spans: single process only");
  ClosedFormReport rep;
  std::vector<int> sizes;
  for (Type t : m.var_types(0)) sizes.push_back(m.interp().size(t));
  auto stores = all_stores(sizes);
  std::map<std::vector<int>, int> index;
  for (std::size_t k = 0; k < stores.size(); ++k) index[stores[k]] = static_cast<int>(k);
  int S = static_cast<int>(stores.size());
  const auto& cg = cts.graphs.control.graph;
  rep.object_size.assign(cg.num_vertices(), S);

  for (int f = 0; f < cg.num_edges(); ++f) {
    ClosedFormEntry en;
    en.generator = f;
    en.label = cts.generator_labels[f];
    int x = cg.src(f), y = cg.dst(f);
    const Stat& st = m.stat_at(0, cts.graphs.control_locations[x][0]);
    switch (st.kind) {
      case Stat::Kind::nop:
      case Stat::Kind::send:
        en.closed = FinSpan::identity(S);
        break;
      case Stat::Kind::assign: {
        std::vector<int> fn;
        int j = m.var_index(0, st.var);
        for (const auto& s : stores) {
          auto t = s;
          t[j] = m.eval(0, s, st.expr);
          fn.push_back(index.at(t));
        }
        en.closed = FinSpan::of_function(fn, S);
        break;
      }
      case Stat::Kind::recv:
        en.closed = FinSpan(S, S);
        std::fill(en.closed.m.begin(), en.closed.m.end(), 1);
        break;
      case Stat::Kind::if_:
      case Stat::Kind::while_: {
        en.closed = FinSpan(S, S);
        bool want = en.label == kGamma1;
        for (int a = 0; a < S; ++a)
          if ((m.eval(0, stores[a], st.expr) != 0) == want) en.closed.at(a, a) = 1;
        break;
      }
      case Stat::Kind::seq:
        throw std::logic_error("closed_form_spans: a location holds a sequence");
    }
    const auto& rows = cts.fiber_vertices[x];
    const auto& cols = cts.fiber_vertices[y];
    en.restricted = FinSpan(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    for (std::size_t a = 0; a < rows.size(); ++a)
      for (std::size_t b = 0; b < cols.size(); ++b)
        en.restricted.at(static_cast<int>(a), static_cast<int>(b)) =
            en.closed.at(index.at(cts.graphs.stores[rows[a]]), index.at(cts.graphs.stores[cols[b]]));
    en.fiber = cts.spans.generator_span[f];
    en.agrees = en.restricted == en.fiber;
    if (!en.agrees)
      rep.discrepancies.push_back("generator " + std::to_string(f) + " (" + en.label + ") at " + show(st) +
                                  ": closed form " + show(en.restricted) + " vs fibers " + show(en.fiber));
    rep.entries.push_back(std::move(en));
  }
  return rep;
}

namespace {

LaxRepTransformation reindex_lax(const LaxRepTransformation& a, const PresentedCategory& c, const GraphMorphism& p,
                                 const SpanPseudofunctor& target) {
  LaxRepTransformation out;
  out.source = reindex(a.source, c, p);
  out.target = target;
  for (int v = 0; v < c.generators.num_vertices(); ++v) out.components.push_back(a.components[p.on_vertices[v]]);
  for (int e = 0; e < c.generators.num_edges(); ++e) {
    EdgeId f = p.on_edges[e];
    if (is_id(f))
      out.two_cells.emplace_back(out.source.generator_span[e].apex_size(), 0);
    else
      out.two_cells.push_back(a.two_cells[f]);
  }
  return out;
}

}  // namespace

PullbackSummary pullback_summary(const Machine& m, const ExploreOptions& opt) {
  PullbackSummary out;
  if (m.num_processes() != 2) {
    out.notes.push_back("pullback summary needs exactly two processes");
    return out;
  }
  CutInterfaces cut = cut_interfaces(m, opt);
  out.notes = cut.notes;
  const CipCts& c1 = cut.components[0];
  const CipCts& c2 = cut.components[1];
  const InterfaceLeg& a = cut.plus[0];
  const InterfaceLeg& b = cut.minus[0];
  const auto& g1 = c1.graphs.control.graph;
  const auto& g2 = c2.graphs.control.graph;
  int n2 = g2.num_vertices();

  ReflexiveGraph pg;
  GraphMorphism p1, p2, k;
  for (int x = 0; x < g1.num_vertices(); ++x)
    for (int y = 0; y < n2; ++y) {
      pg.add_vertex("(" + g1.vertices[x] + "," + g2.vertices[y] + ")");
      p1.on_vertices.push_back(x);
      p2.on_vertices.push_back(y);
      k.on_vertices.push_back(0);
    }
  std::vector<std::string> labels;
  for (EdgeId e1 : g1.all_edges())
    for (EdgeId e2 : g2.all_edges()) {
      if (is_id(e1) && is_id(e2)) continue;
      int k1 = is_id(e1) ? -1 : a.generator_of[e1];
      int k2 = is_id(e2) ? -1 : b.generator_of[e2];
      if (k1 != k2 || (!is_id(e1) && !is_id(e2) && k1 < 0)) continue;
      pg.add_edge(g1.src(e1) * n2 + g2.src(e2), g1.dst(e1) * n2 + g2.dst(e2),
                  "(" + g1.edge_name(e1) + "," + g2.edge_name(e2) + ")");
      p1.on_edges.push_back(e1);
      p2.on_edges.push_back(e2);
      k.on_edges.push_back(k1 < 0 ? id_edge(0) : k1);
      if (!is_id(e1) && !is_id(e2))
        labels.push_back(kAlpha);
      else
        labels.push_back(is_id(e1) ? c2.generator_labels[e2] : c1.generator_labels[e1]);
    }
  PresentedCategory pc = free_category(pg);
  SpanPseudofunctor g = reindex(cut.interfaces[0].phi, pc, k);
  LaxPullback lp = lax_pullback(reindex_lax(a.iota, pc, p1, g), reindex_lax(b.iota, pc, p2, g));

  CipGraphs direct = graphs_of(m, opt);
  auto element_name = [&](int v, int e) {
    auto [u, w] = lp.pairs[v][e];
    int x = p1.on_vertices[v], y = p2.on_vertices[v];
    int ev1 = c1.fiber_vertices[x][u], ev2 = c2.fiber_vertices[y][w];
    std::vector<int> locs{c1.graphs.locations[ev1][0], c2.graphs.locations[ev2][0]};
    std::vector<int> store = c1.graphs.stores[ev1];
    const auto& s2 = c2.graphs.stores[ev2];
    store.insert(store.end(), s2.begin(), s2.end());
    return vertex_name(m, locs, store);
  };

  std::set<std::string> init_names;
  for (int v : direct.initial) init_names.insert(direct.evolution.graph.vertices[v]);
  int v0 = c1.initial * n2 + c2.initial;
  std::vector<std::vector<char>> seen(pg.num_vertices());
  for (int v = 0; v < pg.num_vertices(); ++v) seen[v].assign(lp.object.size(v), 0);
  std::deque<std::pair<int, int>> queue;
  for (int e = 0; e < lp.object.size(v0); ++e)
    if (init_names.count(element_name(v0, e))) {
      seen[v0][e] = 1;
      queue.emplace_back(v0, e);
    }
  auto outs = pg.out_edges();
  EdgeSet got;
  std::set<int> gens;
  while (!queue.empty()) {
    auto [v, e] = queue.front();
    queue.pop_front();
    for (EdgeId f : outs[v]) {
      const FinSpan& s = lp.object.generator_span[f];
      int w = pg.dst(f);
      for (int t = 0; t < s.cols; ++t) {
        int mult = s.at(e, t);
        if (!mult) continue;
        gens.insert(f);
        for (int r = 0; r < mult; ++r) got.emplace(element_name(v, e), element_name(w, t), labels[f]);
        if (!seen[w][t]) {
          seen[w][t] = 1;
          queue.emplace_back(w, t);
        }
      }
    }
  }
  std::set<std::string> objects;
  for (int v = 0; v < pg.num_vertices(); ++v)
    if (std::find(seen[v].begin(), seen[v].end(), 1) != seen[v].end()) objects.insert(pg.vertices[v]);
  out.objects = static_cast<int>(objects.size());
  out.generators = static_cast<int>(gens.size());

  EdgeSet want;
  for (int e = 0; e < direct.evolution.graph.num_edges(); ++e)
    want.emplace(direct.evolution.graph.vertices[direct.evolution.graph.src(e)],
                 direct.evolution.graph.vertices[direct.evolution.graph.dst(e)],
                 show(erase_label(letter(direct.evolution, e))));
  std::set<std::string> direct_objects(direct.control.graph.vertices.begin(), direct.control.graph.vertices.end());
  bool same_objects = objects == direct_objects;
  if (!same_objects) out.notes.push_back("pullback objects differ from the direct control objects");
  std::vector<std::string> w;
  std::set<std::string> verts, want_verts;
  bool same_edges = compare_with("pullback", verts, got, want_verts, want, w);
  out.notes.insert(out.notes.end(), w.begin(), w.end());
  out.matches_direct = same_objects && same_edges;
  return out;
}

OracleReport span_path_oracle(const Machine&, const CipCts& cts, const StateSpace& ss, int max_len) {
  OracleReport rep;
  const auto& cg = cts.graphs.control.graph;
  const auto& locs = cts.graphs.control_locations;
  // raw moves by (source state, generator), duplicates by label dropped
  std::map<std::vector<int>, int> object_of;
  for (int x = 0; x < cg.num_vertices(); ++x) object_of[locs[x]] = x;
  std::vector<int> obj(ss.states.size());
  std::map<std::pair<std::vector<int>, std::vector<int>>, int> element;  // (locations, store) -> fiber index
  for (int x = 0; x < cg.num_vertices(); ++x)
    for (std::size_t a = 0; a < cts.fiber_vertices[x].size(); ++a) {
      int v = cts.fiber_vertices[x][a];
      element[{cts.graphs.locations[v], cts.graphs.stores[v]}] = static_cast<int>(a);
    }
  std::vector<int> elem(ss.states.size());
  for (std::size_t s = 0; s < ss.states.size(); ++s) {
    auto l = location_map(ss.states[s]);
    obj[s] = object_of.at(l);
    elem[s] = element.at({l, store_map(ss.states[s])});
  }
  std::map<std::pair<int, int>, std::set<std::pair<int, std::string>>> moves;  // (state, generator)
  std::map<std::tuple<int, int, std::string>, int> gen_of;
  for (int f = 0; f < cg.num_edges(); ++f) gen_of[{cg.src(f), cg.dst(f), cts.generator_labels[f]}] = f;
  for (const auto& e : ss.edges) {
    Event ev = event_of(e);
    auto it = gen_of.find({obj[e.src], obj[e.dst], show(erase_label(ev))});
    if (it == gen_of.end()) {
      ++rep.mismatches;
      rep.witnesses.push_back("raw edge without a control generator");
      continue;
    }
    moves[{e.src, it->second}].emplace(e.dst, show(ev));
  }
  // representative raw state per (object, element)
  std::map<std::pair<int, int>, int> rep_state;
  for (std::size_t s = 0; s < ss.states.size(); ++s) rep_state.emplace(std::make_pair(obj[s], elem[s]), static_cast<int>(s));

  auto outs = cg.out_edges();
  std::function<void(int, Path&)> walk = [&](int x, Path& p) {
    if (!p.empty()) {
      ++rep.paths;
      FinSpan composite = cts.spans.eval(x, p);
      int y = cg.dst(p.back());
      FinSpan counted(cts.spans.size(x), cts.spans.size(y));
      for (int a = 0; a < counted.rows; ++a) {
        auto rs = rep_state.find({x, a});
        if (rs == rep_state.end()) continue;
        std::map<int, long> frontier{{rs->second, 1}};
        for (EdgeId f : p) {
          std::map<int, long> next;
          for (auto [s, c] : frontier) {
            auto mv = moves.find({s, f});
            if (mv == moves.end()) continue;
            for (const auto& [d, lab] : mv->second) {
              (void)lab;
              next[d] += c;
            }
          }
          frontier = std::move(next);
        }
        for (auto [s, c] : frontier) counted.at(a, elem[s]) += static_cast<int>(c);
      }
      if (!(counted == composite)) {
        ++rep.mismatches;
        if (rep.witnesses.size() < 8) rep.witnesses.push_back("path " + show_path(cg, p) + " from " + cg.vertices[x]);
      }
    }
    if (static_cast<int>(p.size()) == max_len) return;
    int at = p.empty() ? x : cg.dst(p.back());
    for (EdgeId f : outs[at]) {
      p.push_back(f);
      walk(x, p);
      p.pop_back();
    }
  };
  for (int x = 0; x < cg.num_vertices(); ++x) {
    Path p;
    walk(x, p);
  }
  return rep;
}

}  // namespace cts::cip
