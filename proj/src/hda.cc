#include "cts/hda.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace cts {

Alphabet::Alphabet(std::vector<std::string> ordered) {
  for (auto& s : ordered) intern(s);
}

std::string Alphabet::show(Symbol s) const {
  if (s == kStar) return "STAR";
  if (s == kTop) return "TOP";
  return name(s);
}

std::optional<Symbol> Alphabet::find(const std::string& n) const {
  auto it = index_.find(n);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Symbol Alphabet::intern(const std::string& n) {
  if (n == "STAR" || n == "TOP") throw std::invalid_argument("reserved symbol name " + n);
  auto it = index_.find(n);
  if (it != index_.end()) return it->second;
  Symbol s = size();
  symbols_.push_back(n);
  index_.emplace(n, s);
  return s;
}

bool bang_valid(const BangCell& a) {
  Symbol last = kStar;
  for (Symbol x : a) {
    if (x == kTop) return false;
    if (x == kStar) continue;
    if (last != kStar && x < last) return false;
    last = x;
  }
  return true;
}

BangCell bang_erase_star(const BangCell& a) {
  BangCell out;
  for (Symbol x : a)
    if (x != kStar) out.push_back(x);
  return out;
}

BangCell bang_face(const BangCell& a, int i) {
  if (i < 1 || i > static_cast<int>(a.size())) throw std::out_of_range("bang face index out of range");
  BangCell out = a;
  out.erase(out.begin() + (i - 1));
  return out;
}

BangCell bang_degeneracy(const BangCell& a, int i) {
  if (i < 1 || i > static_cast<int>(a.size()) + 1) throw std::out_of_range("bang degeneracy index out of range");
  BangCell out = a;
  out.insert(out.begin() + (i - 1), kStar);
  return out;
}

BangCell bang_boundary(const BangCell& a, BangOp op) {
  return op.kind == BangOp::Kind::face ? bang_face(a, op.index) : bang_degeneracy(a, op.index);
}

std::string show_word(const Alphabet& sigma, const BangCell& a) {
  std::string s = "(";
  for (std::size_t k = 0; k < a.size(); ++k) s += (k ? "," : "") + sigma.show(a[k]);
  return s + ")";
}

BangCell Hda::label(const CellRef& c) const {
  const BangCell& b = labels.at(c.base_dim()).at(c.base);
  BangCell out;
  std::size_t next = 0, d = 0;
  for (int pos = 1; pos <= c.dim; ++pos) {
    if (d < c.degens.size() && c.degens[d] == pos) {
      out.push_back(kStar);
      ++d;
    } else {
      out.push_back(b.at(next++));
    }
  }
  return out;
}

std::vector<std::string> validate(const Hda& t) {
  std::vector<std::string> rep = validate(t.carrier);
  if (!rep.empty()) return rep;
  const CubicalSet& k = t.carrier;
  if (static_cast<int>(t.labels.size()) != k.trunc_dim() + 1) return {"labels do not cover every dimension"};
  for (int d = 0; d <= k.trunc_dim(); ++d) {
    if (static_cast<int>(t.labels[d].size()) != k.count(d)) return {"labels incomplete in dimension " + std::to_string(d)};
    for (int c = 0; c < k.count(d); ++c) {
      const BangCell& l = t.labels[d][c];
      if (static_cast<int>(l.size()) != d) rep.push_back("label length mismatch at " + k.name(d, c));
      else if (!bang_valid(l)) rep.push_back("label not in the labeling object at " + k.name(d, c));
      else
        for (Symbol x : l)
          if (x != kStar && (x < 0 || x >= t.alphabet.size())) rep.push_back("unknown symbol at " + k.name(d, c));
    }
  }
  if (!rep.empty()) return rep;
  for (int d = 1; d <= k.trunc_dim(); ++d)
    for (int c = 0; c < k.count(d); ++c) {
      CellRef x = CubicalSet::cell(d, c);
      for (int i = 1; i <= d; ++i)
        for (Sign w : {Sign::minus, Sign::plus})
          if (t.label(k.face(x, i, w)) != bang_face(t.labels[d][c], i))
            rep.push_back("labeling does not commute with d" + std::to_string(i) + " at " + k.name(d, c));
    }
  return rep;
}

LabeledGraph hda_tr1(const Hda& t) {
  LabeledGraph g;
  g.graph = tr1(t.carrier);
  g.alphabet = t.alphabet;
  for (int e = 0; e < t.carrier.count(1); ++e) g.labels.push_back(t.labels.at(1).at(e).at(0));
  return g;
}

Hda hda_of_graph(const LabeledGraph& g) {
  Hda t;
  t.carrier = as_cubical(g.graph);
  t.alphabet = g.alphabet;
  t.labels.resize(2);
  t.labels[0].assign(g.graph.num_vertices(), BangCell{});
  for (Symbol s : g.labels) t.labels[1].push_back(BangCell{s});
  return t;
}

Hda sigma_coskeleton(const Hda& t, int n, int D, bool parallel) {
  if (n < 1) throw std::invalid_argument("sigma_coskeleton: n must be at least 1");
  if (t.carrier.trunc_dim() < n) throw std::invalid_argument("sigma_coskeleton: input truncated below n");
  Hda out;
  out.alphabet = t.alphabet;
  out.carrier = truncate(t.carrier, n);
  out.labels.assign(t.labels.begin(), t.labels.begin() + n + 1);
  for (int d = n + 1; d <= D; ++d) {
    KernelOptions opt;
    opt.parallel = parallel;
    const Hda& cur = out;
    opt.opposite = [&cur](const CellRef& m, const CellRef& p) { return cur.label(m) == cur.label(p); };
    std::vector<Shell> shells = cubical_kernel(out.carrier, d - 1, opt);
    out.carrier.set_trunc_dim(d);
    out.labels.resize(d + 1);
    int idx = 0;
    for (auto& s : shells) {
      if (shell_is_degenerate(out.carrier, s)) continue;
      // d_1 deletes the first letter, so the word is the first letter of
      // t(y_2^-) followed by t(y_1^-).
      BangCell y1 = out.label(s[face_slot(1, Sign::minus)]);
      BangCell y2 = out.label(s[face_slot(2, Sign::minus)]);
      BangCell w;
      w.push_back(y2.at(0));
      w.insert(w.end(), y1.begin(), y1.end());
      if (!bang_valid(w)) continue;
      bool ok = true;
      for (int i = 1; i <= d && ok; ++i) ok = bang_face(w, i) == out.label(s[face_slot(i, Sign::minus)]);
      if (!ok) continue;
      out.carrier.add_cell(d, "c" + std::to_string(d) + "_" + std::to_string(idx++), std::move(s));
      out.labels[d].push_back(std::move(w));
    }
  }
  return out;
}

std::vector<Symbol> image_factor(const LabeledGraph& g) {
  std::set<Symbol> used;
  for (Symbol s : g.labels)
    if (s != kStar) used.insert(s);
  return {used.begin(), used.end()};
}

std::vector<Symbol> image_factor(const Hda& t) { return image_factor(hda_tr1(t)); }

Symbol SyncTable::operator()(Symbol a, Symbol b) const {
  auto it = entries_.find({a, b});
  if (it != entries_.end()) return it->second;
  if (idle_) {
    if (a == kStar) return b;
    if (b == kStar) return a;
  }
  return kTop;
}

Upsilon upsilon(const SyncTable& table, const std::vector<Symbol>& sigma_s, const std::vector<Symbol>& sigma_t) {
  std::set<std::pair<Symbol, Symbol>> out;
  std::set<Symbol> p1, p2;
  for (Symbol a : sigma_s)
    for (Symbol b : sigma_t)
      if (a != kStar && b != kStar && table(a, b) != kTop) {
        out.insert({a, b});
        p1.insert(a);
        p2.insert(b);
      }
  for (Symbol b : sigma_t)
    if (b != kStar && !p2.count(b)) out.insert({kStar, b});
  for (Symbol a : sigma_s)
    if (a != kStar && !p1.count(a)) out.insert({a, kStar});
  out.insert({kStar, kStar});
  return {out.begin(), out.end()};
}

namespace {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) p[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

InterfaceGraph interface_pushout(const std::vector<Symbol>& sigma_s, const std::vector<Symbol>& sigma_t,
                                 const Upsilon& ups) {
  // node 0 = STAR, then the left letters, then the right letters
  std::map<Symbol, int> li, ri;
  int n = 1;
  for (Symbol a : sigma_s) li[a] = n++;
  for (Symbol b : sigma_t) ri[b] = n++;
  UnionFind uf(n);
  for (auto [a, b] : ups) {
    int x = a == kStar ? 0 : li.at(a);
    int y = b == kStar ? 0 : ri.at(b);
    uf.unite(x, y);
  }
  std::map<int, int> cls{{uf.find(0), 0}};
  InterfaceGraph p;
  auto class_of = [&](int node) {
    int r = uf.find(node);
    auto it = cls.find(r);
    if (it != cls.end()) return it->second;
    int c = p.classes++;
    cls.emplace(r, c);
    return c;
  };
  for (Symbol a : sigma_s) p.left[a] = class_of(li[a]);
  for (Symbol b : sigma_t) p.right[b] = class_of(ri[b]);
  return p;
}

Upsilon pushout_pullback(const std::vector<Symbol>& sigma_s, const std::vector<Symbol>& sigma_t,
                         const InterfaceGraph& p) {
  std::vector<Symbol> l{kStar}, r{kStar};
  l.insert(l.end(), sigma_s.begin(), sigma_s.end());
  r.insert(r.end(), sigma_t.begin(), sigma_t.end());
  Upsilon out;
  for (Symbol a : l)
    for (Symbol b : r)
      if (p.of_left(a) == p.of_right(b)) out.emplace_back(a, b);
  std::sort(out.begin(), out.end());
  return out;
}

Symbol translate(Symbol s, const Alphabet& from, const Alphabet& to) {
  if (s == kStar || s == kTop) return s;
  auto r = to.find(from.name(s));
  if (!r) throw std::invalid_argument("symbol " + from.name(s) + " missing from the target alphabet");
  return *r;
}

SyncGraph sync_graph(const LabeledGraph& s, const LabeledGraph& t, const SyncTable& table) {
  const Alphabet& sig = table.alphabet();
  auto lab_s = [&](EdgeId e) { return translate(s.label(e), s.alphabet, sig); };
  auto lab_t = [&](EdgeId e) { return translate(t.label(e), t.alphabet, sig); };
  std::vector<Symbol> ss, ts;
  for (Symbol x : image_factor(s)) ss.push_back(translate(x, s.alphabet, sig));
  for (Symbol x : image_factor(t)) ts.push_back(translate(x, t.alphabet, sig));
  std::sort(ss.begin(), ss.end());
  std::sort(ts.begin(), ts.end());
  SyncGraph out;
  out.ups = upsilon(table, ss, ts);
  std::set<std::pair<Symbol, Symbol>> ups(out.ups.begin(), out.ups.end());
  out.right_vertices = t.graph.num_vertices();
  out.graph.alphabet = sig;
  for (int a = 0; a < s.graph.num_vertices(); ++a)
    for (int b = 0; b < t.graph.num_vertices(); ++b)
      out.graph.graph.add_vertex("(" + s.graph.vertices[a] + "," + t.graph.vertices[b] + ")");
  for (EdgeId e1 : s.graph.all_edges())
    for (EdgeId e2 : t.graph.all_edges()) {
      if (is_id(e1) && is_id(e2)) continue;
      std::pair<Symbol, Symbol> key{lab_s(e1), lab_t(e2)};
      if (!ups.count(key)) continue;
      int src = s.graph.src(e1) * out.right_vertices + t.graph.src(e2);
      int dst = s.graph.dst(e1) * out.right_vertices + t.graph.dst(e2);
      out.graph.graph.add_edge(src, dst, "(" + s.graph.edge_name(e1) + "," + t.graph.edge_name(e2) + ")");
      out.graph.labels.push_back(table(key.first, key.second));
      out.pairs.emplace_back(e1, e2);
    }
  return out;
}

Hda synchronized_product(const Hda& s, const Hda& t, const SyncTable& table, int D) {
  SyncGraph g = sync_graph(hda_tr1(s), hda_tr1(t), table);
  Hda h = hda_of_graph(g.graph);
  if (D <= 1) return h;
  return sigma_coskeleton(h, 1, D);
}

AlphabetChange alphabet_change(const std::vector<Symbol>& w, const LabeledGraph& s, const LabeledGraph& t,
                               const LabeledGraph& s_hat, const LabeledGraph& t_hat, const SyncTable& table,
                               const SyncTable& table_hat, const GraphMorphism& u, const GraphMorphism& v) {
  auto wmap = [&](Symbol x) { return x == kStar ? kStar : w.at(x); };
  auto check_square = [&](const LabeledGraph& a, const LabeledGraph& ah, const GraphMorphism& m, const char* nm) {
    if (static_cast<int>(m.on_vertices.size()) != a.graph.num_vertices() ||
        static_cast<int>(m.on_edges.size()) != a.graph.num_edges())
      throw std::invalid_argument(std::string("alphabet_change: incomplete morphism ") + nm);
    for (int e = 0; e < a.graph.num_edges(); ++e) {
      EdgeId he = m.on_edges[e];
      if (ah.graph.src(he) != m.on_vertices[a.graph.edges[e].src] ||
          ah.graph.dst(he) != m.on_vertices[a.graph.edges[e].dst])
        throw std::invalid_argument(std::string("alphabet_change: not a graph morphism ") + nm);
      if (ah.label(he) != wmap(a.labels[e]))
        throw std::invalid_argument(std::string("alphabet_change: square does not commute for ") + nm);
    }
  };
  check_square(s, s_hat, u, "u");
  check_square(t, t_hat, v, "v");
  SyncGraph g = sync_graph(s, t, table);
  SyncGraph gh = sync_graph(s_hat, t_hat, table_hat);
  auto ss = image_factor(s), ts = image_factor(t);
  InterfaceGraph p = interface_pushout(ss, ts, g.ups);
  InterfaceGraph ph = interface_pushout(image_factor(s_hat), image_factor(t_hat), gh.ups);
  AlphabetChange out;
  out.wbar.assign(p.classes, -1);
  out.wbar[0] = 0;
  auto assign = [&](int cls, int img) {
    if (out.wbar[cls] == -1) out.wbar[cls] = img;
    else if (out.wbar[cls] != img) throw std::invalid_argument("alphabet_change: induced interface map not well defined");
  };
  for (Symbol a : ss) assign(p.of_left(a), ph.of_left(wmap(a)));
  for (Symbol b : ts) assign(p.of_right(b), ph.of_right(wmap(b)));
  std::map<std::pair<EdgeId, EdgeId>, EdgeId> hat_index;
  for (std::size_t e = 0; e < gh.pairs.size(); ++e) hat_index[gh.pairs[e]] = static_cast<EdgeId>(e);
  auto map_edge = [](const GraphMorphism& m, EdgeId e) { return is_id(e) ? id_edge(m.on_vertices[id_vertex(e)]) : m.on_edges[e]; };
  for (int a = 0; a < s.graph.num_vertices(); ++a)
    for (int b = 0; b < t.graph.num_vertices(); ++b)
      out.product_map.on_vertices.push_back(u.on_vertices[a] * gh.right_vertices + v.on_vertices[b]);
  for (auto [e1, e2] : g.pairs) {
    EdgeId h1 = map_edge(u, e1), h2 = map_edge(v, e2);
    if (is_id(h1) && is_id(h2)) {
      out.product_map.on_edges.push_back(id_edge(u.on_vertices[s.graph.src(e1)] * gh.right_vertices +
                                                 v.on_vertices[t.graph.src(e2)]));
      continue;
    }
    auto it = hat_index.find({h1, h2});
    if (it == hat_index.end())
      throw std::invalid_argument("alphabet_change: a synchronized edge has no image in the hatted product");
    out.product_map.on_edges.push_back(it->second);
  }
  return out;
}

}  // namespace cts
