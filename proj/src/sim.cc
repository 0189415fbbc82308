#include "cts/sim.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace cts::sim {

bool SimRelation::contains(int a, int b) const { return std::binary_search(pairs.begin(), pairs.end(), Pair{a, b}); }

namespace {

std::vector<Pair> all_pairs(int n, int m) {
  std::vector<Pair> r;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < m; ++b) r.emplace_back(a, b);
  return r;
}

SimRelation make_relation(std::vector<Pair> r, int sp, int tp) {
  std::sort(r.begin(), r.end());
  return SimRelation{std::move(r), sp, tp};
}

}  // namespace

// ---------------------------------------------------------------- HDA side

CellTable cell_table(const Hda& h, int maxdim) {
  CellTable t;
  for (int n = 0; n <= maxdim; ++n) {
    t.cells.push_back(h.carrier.all_cells(n));
    auto& labels = t.labels.emplace_back();
    auto& dom = t.dom.emplace_back();
    auto& cod = t.cod.emplace_back();
    for (const CellRef& c : t.cells.back()) {
      labels.push_back(h.label(c));
      dom.push_back(dom_n(h.carrier, c).base);
      cod.push_back(cod_n(h.carrier, c).base);
    }
  }
  return t;
}

namespace {

// Index of the first cell of s at x that has no match from x'.
std::optional<std::pair<int, int>> unmatched(const CellTable& s, const CellTable& t, const std::set<Pair>& r, int x,
                                             int xp) {
  for (std::size_t n = 0; n < s.cells.size(); ++n)
    for (std::size_t k = 0; k < s.cells[n].size(); ++k) {
      if (s.dom[n][k] != x) continue;
      bool ok = false;
      for (std::size_t kp = 0; kp < t.cells[n].size() && !ok; ++kp)
        ok = t.dom[n][kp] == xp && t.labels[n][kp] == s.labels[n][k] && r.count({s.cod[n][k], t.cod[n][kp]});
      if (!ok) return std::pair<int, int>{static_cast<int>(n), static_cast<int>(k)};
    }
  return std::nullopt;
}

int num_vertices(const CellTable& t) { return static_cast<int>(t.cells.at(0).size()); }

}  // namespace

std::vector<Pair> refine(const CellTable& s, const CellTable& t, const std::vector<Pair>& r) {
  std::set<Pair> rs(r.begin(), r.end());
  std::vector<Pair> out;
  for (const Pair& p : r)
    if (!unmatched(s, t, rs, p.first, p.second)) out.push_back(p);
  return out;
}

HdaSimResult hda_simulation(const PointedHda& s, const PointedHda& t, int maxdim) {
  if (!(s.hda.alphabet == t.hda.alphabet)) throw std::invalid_argument("hda_simulation: alphabets differ");
  CellTable cs = cell_table(s.hda, maxdim), ct = cell_table(t.hda, maxdim);
  HdaSimResult res;
  std::vector<Pair> r = all_pairs(num_vertices(cs), num_vertices(ct));
  const Pair pt{s.point, t.point};
  for (;;) {
    ++res.rounds;
    std::vector<Pair> next = refine(cs, ct, r);
    if (next == r) break;
    std::set<Pair> rs(r.begin(), r.end());
    if (rs.count(pt) && !std::binary_search(next.begin(), next.end(), pt))
      if (auto u = unmatched(cs, ct, rs, s.point, t.point)) {
        const CellRef& c = cs.cells[u->first][u->second];
        res.witness = "cell " + s.hda.carrier.describe(c) + " labelled " +
                      show_word(s.hda.alphabet, cs.labels[u->first][u->second]) + " at " +
                      s.hda.carrier.name(0, s.point) + " has no match at " + t.hda.carrier.name(0, t.point);
      }
    r = std::move(next);
  }
  res.greatest = r;
  if (std::binary_search(r.begin(), r.end(), pt)) res.relation = make_relation(r, s.point, t.point);
  return res;
}

OpenVerdict is_open(const CubicalMap& h, int maxdim, std::optional<Pair> points) {
  const CubicalSet& m = *h.source;
  const CubicalSet& k = *h.target;
  OpenVerdict v;
  if (points && h.apply(CubicalSet::cell(0, points->first)) != CubicalSet::cell(0, points->second)) {
    v.open = false;
    v.witness = "point " + m.name(0, points->first) + " does not map to " + k.name(0, points->second);
    return v;
  }
  std::vector<bool> hit(k.count(0), false);
  for (int x = 0; x < m.count(0); ++x) hit[h.apply(CubicalSet::cell(0, x)).base] = true;
  for (int y = 0; y < k.count(0); ++y)
    if (!hit[y]) {
      v.open = false;
      v.witness = "vertex " + k.name(0, y) + " not in the image";
      return v;
    }
  for (int n = 1; n <= maxdim; ++n) {
    // images of the cells of m at each vertex
    std::vector<std::set<CellRef>> lifts(m.count(0));
    for (const CellRef& a : m.all_cells(n)) lifts[dom_n(m, a).base].insert(h.apply(a));
    std::vector<std::vector<CellRef>> at(k.count(0));
    for (const CellRef& b : k.all_cells(n)) at[dom_n(k, b).base].push_back(b);
    for (int x = 0; x < m.count(0); ++x)
      for (const CellRef& b : at[h.apply(CubicalSet::cell(0, x)).base])
        if (!lifts[x].count(b)) {
          v.open = false;
          v.witness = "cube " + k.describe(b) + " does not lift at " + m.name(0, x);
          return v;
        }
  }
  return v;
}

CubicalMap compose(const CubicalMap& f, const CubicalMap& g) {
  CubicalMap h;
  h.source = f.source;
  h.target = g.target;
  h.assignment.resize(f.assignment.size());
  for (std::size_t d = 0; d < f.assignment.size(); ++d)
    for (const CellRef& c : f.assignment[d]) h.assignment[d].push_back(g.apply(c));
  return h;
}

namespace {

// c = eps_D(result) for D a subset of c.degens.
CellRef strip(const CellRef& c, const std::vector<int>& d) {
  CellRef r{c.dim - static_cast<int>(d.size()), c.base, {}};
  for (int i : c.degens) {
    if (std::binary_search(d.begin(), d.end(), i)) continue;
    int below = static_cast<int>(std::lower_bound(d.begin(), d.end(), i) - d.begin());
    r.degens.push_back(i - below);
  }
  return r;
}

std::vector<int> common(const CellRef& a, const CellRef& b) {
  std::vector<int> d;
  std::set_intersection(a.degens.begin(), a.degens.end(), b.degens.begin(), b.degens.end(), std::back_inserter(d));
  return d;
}

}  // namespace

std::optional<int> PairSpan::vertex_of(int a, int b) const {
  const auto& v = cells.at(0);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i].first.base == a && v[i].second.base == b) return static_cast<int>(i);
  return std::nullopt;
}

PairSpan pair_span(std::shared_ptr<const CubicalSet> a, std::shared_ptr<const CubicalSet> b,
                   const std::vector<std::set<std::pair<CellRef, CellRef>>>& alive, std::optional<Pair> point) {
  const int top = static_cast<int>(alive.size()) - 1;
  PairSpan ps;
  auto apex = std::make_shared<CubicalSet>(std::max(top, 0));
  ps.cells.resize(alive.size());
  std::vector<std::map<std::pair<CellRef, CellRef>, int>> index(alive.size());
  auto to_apex = [&](const CellRef& x, const CellRef& y) {
    std::vector<int> d = common(x, y);
    CellRef sx = strip(x, d), sy = strip(y, d);
    return CellRef{x.dim, index.at(sx.dim).at({sx, sy}), d};
  };
  for (int n = 0; n <= top; ++n)
    for (const auto& p : alive[n]) {
      if (!common(p.first, p.second).empty()) continue;
      std::vector<CellRef> faces;
      for (int i = 1; i <= n; ++i)
        for (Sign w : {Sign::minus, Sign::plus}) faces.push_back(to_apex(a->face(p.first, i, w), b->face(p.second, i, w)));
      int id = apex->add_cell(n, "(" + a->describe(p.first) + "," + b->describe(p.second) + ")", std::move(faces));
      index[n][p] = id;
      ps.cells[n].push_back(p);
    }
  ps.left.source = ps.right.source = apex;
  ps.left.target = a;
  ps.right.target = b;
  ps.left.assignment.resize(alive.size());
  ps.right.assignment.resize(alive.size());
  for (std::size_t n = 0; n < alive.size(); ++n)
    for (const auto& p : ps.cells[n]) {
      ps.left.assignment[n].push_back(p.first);
      ps.right.assignment[n].push_back(p.second);
    }
  ps.apex = apex;
  if (point)
    if (auto v = ps.vertex_of(point->first, point->second)) ps.point = *v;
  return ps;
}

PairSpan pullback(const CubicalMap& f, const CubicalMap& g, int maxdim) {
  std::vector<std::set<std::pair<CellRef, CellRef>>> alive(maxdim + 1);
  for (int n = 0; n <= maxdim; ++n) {
    std::map<CellRef, std::vector<CellRef>> by_image;
    for (const CellRef& y : g.source->all_cells(n)) by_image[g.apply(y)].push_back(y);
    for (const CellRef& x : f.source->all_cells(n)) {
      auto it = by_image.find(f.apply(x));
      if (it == by_image.end()) continue;
      for (const CellRef& y : it->second) alive[n].insert({x, y});
    }
  }
  return pair_span(f.source, g.source, alive, std::nullopt);
}

OpenSpan open_map_span(const PointedHda& s, const PointedHda& t, int maxdim, const std::optional<SimRelation>& within) {
  if (!(s.hda.alphabet == t.hda.alphabet)) throw std::invalid_argument("open_map_span: alphabets differ");
  auto a = std::make_shared<const CubicalSet>(s.hda.carrier);
  auto b = std::make_shared<const CubicalSet>(t.hda.carrier);
  CellTable cs = cell_table(s.hda, maxdim), ct = cell_table(t.hda, maxdim);
  std::vector<std::set<std::pair<CellRef, CellRef>>> alive(maxdim + 1);
  for (int n = 0; n <= maxdim; ++n)
    for (std::size_t i = 0; i < cs.cells[n].size(); ++i)
      for (std::size_t j = 0; j < ct.cells[n].size(); ++j) {
        if (cs.labels[n][i] != ct.labels[n][j]) continue;
        const CellRef &x = cs.cells[n][i], &y = ct.cells[n][j];
        if (within) {
          bool ok = true;
          std::function<void(const CellRef&, const CellRef&)> walk = [&](const CellRef& p, const CellRef& q) {
            if (!ok) return;
            if (p.dim == 0) {
              ok = within->contains(p.base, q.base);
              return;
            }
            for (Sign w : {Sign::minus, Sign::plus}) walk(a->face(p, 1, w), b->face(q, 1, w));
          };
          walk(x, y);
          if (!ok) continue;
        }
        alive[n].insert({x, y});
      }
  for (bool changed = true; changed;) {
    changed = false;
    for (int n = 1; n <= maxdim; ++n)
      for (auto it = alive[n].begin(); it != alive[n].end();) {
        bool ok = true;
        for (int i = 1; i <= n && ok; ++i)
          for (Sign w : {Sign::minus, Sign::plus})
            if (!alive[n - 1].count({a->face(it->first, i, w), b->face(it->second, i, w)})) ok = false;
        if (ok) {
          ++it;
        } else {
          it = alive[n].erase(it);
          changed = true;
        }
      }
    for (auto it = alive[0].begin(); it != alive[0].end();) {
      int x = it->first.base, xp = it->second.base;
      bool ok = true;
      for (int n = 1; n <= maxdim && ok; ++n)
        for (std::size_t i = 0; i < cs.cells[n].size() && ok; ++i) {
          if (cs.dom[n][i] != x) continue;
          bool lifted = false;
          for (auto jt = alive[n].lower_bound({cs.cells[n][i], CellRef{}}); jt != alive[n].end() && jt->first == cs.cells[n][i];
               ++jt)
            if (dom_n(*b, jt->second).base == xp) {
              lifted = true;
              break;
            }
          ok = lifted;
        }
      if (ok) {
        ++it;
      } else {
        it = alive[0].erase(it);
        changed = true;
      }
    }
  }
  OpenSpan os;
  os.span = pair_span(a, b, alive, Pair{s.point, t.point});
  if (os.span.point < 0) {
    os.witness = "point pair removed";
    return os;
  }
  os.r1 = is_open(os.span.left, maxdim, Pair{os.span.point, s.point});
  os.exists = os.r1.open;
  if (!os.exists) os.witness = os.r1.witness;
  return os;
}

PointedHda labelled_apex(const PairSpan& span, const Hda& left_hda) {
  PointedHda p{Hda{*span.apex, left_hda.alphabet, {}}, std::max(span.point, 0)};
  p.hda.labels.resize(span.cells.size());
  for (std::size_t n = 0; n < span.cells.size(); ++n)
    for (const auto& c : span.cells[n]) p.hda.labels[n].push_back(left_hda.label(c.first));
  return p;
}

PointedHda coskeletal_hda(const LabeledGraph& g, int point, int maxdim) {
  LabeledGraph u;
  u.alphabet = g.alphabet;
  for (const auto& v : g.graph.vertices) u.graph.add_vertex(v);
  for (int e = 0; e < g.graph.num_edges(); ++e) {
    u.graph.add_edge(g.graph.src(e), g.graph.dst(e), "e" + std::to_string(e));
    u.labels.push_back(g.labels[e]);
  }
  return PointedHda{sigma_coskeleton(hda_of_graph(u), 1, maxdim), point};
}

PointedHda random_pointed_hda(std::mt19937_64& rng, int max_states, const std::vector<std::string>& letters,
                              int max_edges) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  LabeledGraph g;
  g.alphabet = Alphabet(letters);
  int n = pick(1, max_states);
  for (int v = 0; v < n; ++v) g.graph.add_vertex("s" + std::to_string(v));
  std::set<std::tuple<int, int, int>> seen;
  auto add = [&](int a, int b, int l) {
    if (!seen.insert({a, b, l}).second) return;
    g.graph.add_edge(a, b);
    g.labels.push_back(l);
  };
  int letters_n = static_cast<int>(letters.size());
  for (int v = 1; v < n; ++v) add(pick(0, v - 1), v, pick(0, letters_n - 1));
  int extra = pick(0, std::max(0, max_edges - (n - 1)));
  for (int k = 0; k < extra; ++k) add(pick(0, n - 1), pick(0, n - 1), pick(0, letters_n - 1));
  return coskeletal_hda(g, 0, 2);
}

// ---------------------------------------------------------------- CTS side

std::string PointedCts::object_name(int x) const {
  if (x < static_cast<int>(object_names.size())) return object_names[x];
  const auto& vs = spans.control.generators.vertices;
  if (x < static_cast<int>(vs.size()) && !vs[x].empty()) return vs[x];
  return "o" + std::to_string(x);
}

PointedCts pointed_cts(const cip::CipCts& c) {
  PointedCts p;
  p.spans = c.spans;
  p.point = c.initial;
  p.object_names = c.control.generators.vertices;
  return p;
}

PointedCts pointed_cts(const cip::CipCts& c, const cip::Environment& env) {
  PointedCts p = pointed_cts(c);
  LegData leg;
  const auto& gens = env.interface.phi.control.generators;
  for (int k : env.leg.generator_of) leg.generator_of.push_back(k < 0 ? std::string() : gens.edge_name(k));
  leg.two_cells = env.leg.iota.two_cells;
  p.leg = std::move(leg);
  return p;
}

namespace {

constexpr char kSep = '\x1f';

// Canonical value of a span between named element sets.
std::string signature(const SpanPseudofunctor& p, int x, int y, const FinSpan& s) {
  std::vector<std::string> src, dst;
  for (int a = 0; a < s.rows; ++a) src.push_back(p.element_name(x, a));
  for (int b = 0; b < s.cols; ++b) dst.push_back(p.element_name(y, b));
  std::vector<std::tuple<std::string, std::string, int>> entries;
  for (int a = 0; a < s.rows; ++a)
    for (int b = 0; b < s.cols; ++b)
      if (s.at(a, b)) entries.emplace_back(src[a], dst[b], s.at(a, b));
  std::sort(entries.begin(), entries.end());
  std::sort(src.begin(), src.end());
  std::sort(dst.begin(), dst.end());
  std::ostringstream os;
  for (const auto& v : src) os << v << kSep;
  os << '|';
  for (const auto& v : dst) os << v << kSep;
  os << '|';
  for (const auto& [a, b, k] : entries) os << a << kSep << b << kSep << k << kSep;
  return os.str();
}

std::string interface_signature(const PointedCts& c, int f) {
  const LegData& leg = *c.leg;
  const auto& g = c.spans.control.generators;
  const FinSpan& s = c.spans.generator_span.at(f);
  std::vector<std::string> entries;
  auto apex = s.apex();
  for (std::size_t i = 0; i < apex.size(); ++i) {
    const auto& [a, b, k] = apex[i];
    entries.push_back(c.spans.element_name(g.src(f), a) + kSep + c.spans.element_name(g.dst(f), b) + kSep +
                      std::to_string(k) + kSep + std::to_string(leg.two_cells.at(f).at(i)));
  }
  std::sort(entries.begin(), entries.end());
  std::string out = leg.generator_of.at(f) + "|";
  for (const auto& e : entries) out += e + kSep;
  return out;
}

struct Move {
  int dst = 0;
  std::string sig;
  std::string path;  // generator names, for witnesses
};

std::string path_name(const ReflexiveGraph& g, const Path& p) {
  if (p.empty()) return "id";
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ";" : "") + g.edge_name(p[i]);
  return s;
}

struct Moves {
  std::vector<std::vector<Move>> at;  // per object, deduplicated by (dst, sig)
  bool horizon_binds = false;
  long paths = 0;
};

Moves enumerate(const PointedCts& c, int min_len, int max_len) {
  const auto& g = c.spans.control.generators;
  auto out = g.out_edges();
  Moves mv;
  mv.at.resize(g.num_vertices());
  for (int x = 0; x < g.num_vertices(); ++x) {
    std::set<std::pair<int, std::string>> seen;
    Path p;
    std::function<void(int, const FinSpan&)> go = [&](int y, const FinSpan& acc) {
      int len = static_cast<int>(p.size());
      if (len >= min_len) {
        ++mv.paths;
        std::string sig = signature(c.spans, x, y, acc);
        if (seen.insert({y, sig}).second) mv.at[x].push_back(Move{y, std::move(sig), path_name(g, p)});
      }
      if (len == max_len) {
        if (!out[y].empty()) mv.horizon_binds = true;
        return;
      }
      for (EdgeId e : out[y]) {
        p.push_back(e);
        go(g.dst(e), span_compose(acc, c.spans.generator_span.at(e)));
        p.pop_back();
      }
    };
    go(x, FinSpan::identity(c.spans.size(x)));
  }
  return mv;
}

// Moves of s from x unmatched by t from x' within r.
const Move* first_unmatched(const Moves& s, const Moves& t, const std::set<Pair>& r, int x, int xp) {
  for (const Move& m : s.at[x]) {
    bool ok = false;
    for (const Move& n : t.at[xp])
      if (n.sig == m.sig && r.count({m.dst, n.dst})) {
        ok = true;
        break;
      }
    if (!ok) return &m;
  }
  return nullptr;
}

std::vector<Pair> refine_moves(const Moves& s, const Moves& t, const std::vector<Pair>& r, bool symmetric) {
  std::set<Pair> rs(r.begin(), r.end()), inv;
  for (const Pair& p : r) inv.insert({p.second, p.first});
  std::vector<Pair> out;
  for (const Pair& p : r) {
    if (first_unmatched(s, t, rs, p.first, p.second)) continue;
    if (symmetric && first_unmatched(t, s, inv, p.second, p.first)) continue;
    out.push_back(p);
  }
  return out;
}

std::vector<Pair> fixpoint(const Moves& s, const Moves& t, bool symmetric) {
  std::vector<Pair> r = all_pairs(static_cast<int>(s.at.size()), static_cast<int>(t.at.size()));
  for (;;) {
    std::vector<Pair> next = refine_moves(s, t, r, symmetric);
    if (next == r) return r;
    r = std::move(next);
  }
}

std::pair<Moves, Moves> path_moves(const PointedCts& s, const PointedCts& t, const PathSimOptions& opt) {
  if (opt.strict) return {enumerate(s, 1, 1), enumerate(t, 1, 1)};
  // identities are matched trivially on the left
  return {enumerate(s, 1, opt.max_len), enumerate(t, 0, opt.max_len)};
}

Moves single_steps(const PointedCts& c, bool interfaces) {
  const auto& g = c.spans.control.generators;
  Moves mv;
  mv.at.resize(g.num_vertices());
  for (int f = 0; f < g.num_edges(); ++f) {
    int x = g.src(f), y = g.dst(f);
    std::string sig = signature(c.spans, x, y, c.spans.generator_span.at(f));
    if (interfaces) sig += "#" + interface_signature(c, f);
    ++mv.paths;
    mv.at[x].push_back(Move{y, std::move(sig), g.edge_name(f)});
  }
  return mv;
}

std::string describe_failure(const PointedCts& s, const PointedCts& t, const Moves& ms, const Moves& mt,
                             const std::vector<Pair>& r, bool symmetric) {
  std::set<Pair> rs(r.begin(), r.end()), inv;
  for (const Pair& p : r) inv.insert({p.second, p.first});
  if (const Move* m = first_unmatched(ms, mt, rs, s.point, t.point))
    return "path " + m->path + " of " + s.object_name(s.point) + " has no match at " + t.object_name(t.point);
  if (symmetric)
    if (const Move* m = first_unmatched(mt, ms, inv, t.point, s.point))
      return "path " + m->path + " of " + t.object_name(t.point) + " has no match at " + s.object_name(s.point);
  return "points unrelated";
}

}  // namespace

PathSimResult path_simulation(const PointedCts& s, const PointedCts& t, const PathSimOptions& opt) {
  auto [ms, mt] = path_moves(s, t, opt);
  PathSimResult res;
  std::vector<Pair> r = fixpoint(ms, mt, false);
  res.relation = make_relation(r, s.point, t.point);
  res.found = res.relation.contains(s.point, t.point);
  res.horizon_binds = !opt.strict && (ms.horizon_binds || mt.horizon_binds);
  res.paths = ms.paths + mt.paths;
  if (!res.found) res.witness = describe_failure(s, t, ms, mt, r, false);
  return res;
}

bool is_path_simulation(const PointedCts& s, const PointedCts& t, const std::vector<Pair>& r,
                        const PathSimOptions& opt) {
  std::vector<Pair> sorted = r;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (!std::binary_search(sorted.begin(), sorted.end(), Pair{s.point, t.point})) return false;
  auto [ms, mt] = path_moves(s, t, opt);
  return refine_moves(ms, mt, sorted, false) == sorted;
}

BisimResult path_bisimulation(const PointedCts& s, const PointedCts& t, const BisimOptions& opt) {
  if (opt.check_interfaces && (!s.leg || !t.leg))
    throw std::invalid_argument("path_bisimulation: interface check needs legs on both systems");
  auto run = [&](bool interfaces) {
    Moves ms = single_steps(s, interfaces), mt = single_steps(t, interfaces);
    std::vector<Pair> r = fixpoint(ms, mt, true);
    BisimResult b;
    b.relation = make_relation(r, s.point, t.point);
    b.found = b.relation.contains(s.point, t.point);
    if (!b.found) b.witness = describe_failure(s, t, ms, mt, r, true);
    return b;
  };
  BisimResult res = run(opt.check_interfaces);
  if (!res.found && opt.check_interfaces) res.interface_rejected = run(false).found;
  return res;
}

std::vector<Pair> compose_relations(const std::vector<Pair>& r, const std::vector<Pair>& q) {
  std::set<Pair> out;
  for (const Pair& a : r)
    for (const Pair& b : q)
      if (a.second == b.first) out.insert({a.first, b.second});
  return {out.begin(), out.end()};
}

}  // namespace cts::sim
