#include "cts/catkit.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cts {

PresentedCategory free_category(const ReflexiveGraph& g) { return PresentedCategory{g, {}}; }

std::vector<std::vector<CellRef>> paths_around_cube(const CubicalSet& k, const CellRef& y) {
  int n = y.dim;
  if (n < 1) throw std::invalid_argument("paths_around_cube: dimension must be at least 1");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 1);
  std::vector<std::vector<CellRef>> out;
  do {
    std::vector<int> bits(n + 1, 0);
    std::vector<CellRef> path;
    for (int c : order) {
      CellRef e = y;
      for (int j = n; j >= 1; --j)
        if (j != c) e = k.face(e, j, bits[j] ? Sign::plus : Sign::minus);
      path.push_back(e);
      bits[c] = 1;
    }
    out.push_back(std::move(path));
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

PresentedCategory categorify(const CubicalSet& k) {
  PresentedCategory c;
  c.generators = tr1(k);
  std::set<std::pair<Path, Path>> rels;
  for (int d = 2; d <= k.trunc_dim(); ++d)
    for (int y = 0; y < k.count(d); ++y) {
      std::vector<Path> ps;
      for (auto& p : paths_around_cube(k, CubicalSet::cell(d, y))) {
        Path q;
        for (auto& e : p)
          if (!e.degenerate()) q.push_back(e.base);
        ps.push_back(std::move(q));
      }
      for (std::size_t i = 1; i < ps.size(); ++i)
        if (ps[i] != ps[0]) rels.insert(std::minmax(ps[0], ps[i]));
    }
  c.relations.assign(rels.begin(), rels.end());
  return c;
}

namespace {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) p[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

int HomClasses::find(int from, const Path& p) const {
  int node = roots_.at(from);
  for (EdgeId e : p) {
    if (node < 0 || length[node] >= horizon) return -1;
    const auto& outs = out_[dst[node]];
    auto it = std::find(outs.begin(), outs.end(), e);
    if (it == outs.end()) return -1;
    node = children_[node][it - outs.begin()];
  }
  return node;
}

int HomClasses::class_of(int from, const Path& p) const {
  int k = find(from, p);
  return k < 0 ? -1 : cls[k];
}

std::vector<int> HomClasses::classes_between(int x, int y) const {
  std::set<int> out;
  for (std::size_t k = 0; k < paths.size(); ++k)
    if (src[k] == x && dst[k] == y) out.insert(cls[k]);
  return {out.begin(), out.end()};
}

int HomClasses::compose(int c1, int c2) const {
  if (class_dst(c1) != class_src(c2)) throw std::invalid_argument("compose: classes not composable");
  Path p = paths[rep[c1]];
  const Path& q = paths[rep[c2]];
  p.insert(p.end(), q.begin(), q.end());
  return class_of(class_src(c1), p);
}

HomClasses hom_classes(const PresentedCategory& c, int horizon) {
  const ReflexiveGraph& g = c.generators;
  HomClasses h;
  h.horizon = horizon;
  h.out_ = g.out_edges();
  auto add = [&](Path p, int s, int d) {
    h.paths.push_back(std::move(p));
    h.src.push_back(s);
    h.dst.push_back(d);
    h.length.push_back(static_cast<int>(h.paths.back().size()));
    h.children_.emplace_back();
    return static_cast<int>(h.paths.size()) - 1;
  };
  std::vector<int> frontier;
  for (int v = 0; v < g.num_vertices(); ++v) {
    h.roots_.push_back(add({}, v, v));
    frontier.push_back(h.roots_.back());
  }
  for (int len = 1; len <= horizon; ++len) {
    std::vector<int> next;
    for (int node : frontier) {
      const auto& outs = h.out_[h.dst[node]];
      h.children_[node].resize(outs.size());
      for (std::size_t k = 0; k < outs.size(); ++k) {
        Path p = h.paths[node];
        p.push_back(outs[k]);
        int idx = add(std::move(p), h.src[node], g.dst(outs[k]));
        h.children_[node][k] = idx;
        next.push_back(idx);
      }
    }
    frontier = std::move(next);
  }
  for (int node : frontier)
    if (!h.out_[h.dst[node]].empty()) h.truncated = true;

  std::vector<int> pos(g.num_edges());
  for (const auto& outs : h.out_)
    for (std::size_t k = 0; k < outs.size(); ++k) pos[outs[k]] = static_cast<int>(k);
  auto walk = [&](int node, const Path& p) {
    for (EdgeId e : p) {
      if (node < 0 || h.length[node] >= horizon) return -1;
      node = h.children_[node][pos[e]];
    }
    return node;
  };
  std::vector<std::vector<int>> ending(g.num_vertices());
  for (std::size_t k = 0; k < h.paths.size(); ++k) ending[h.dst[k]].push_back(static_cast<int>(k));
  std::vector<std::vector<int>> starting(g.num_vertices());
  for (std::size_t k = 0; k < h.paths.size(); ++k) starting[h.src[k]].push_back(static_cast<int>(k));

  UnionFind uf(static_cast<int>(h.paths.size()));
  for (const auto& [r, s] : c.relations) {
    int x, y;
    if (!r.empty()) {
      x = g.src(r.front());
      y = g.dst(r.back());
    } else if (!s.empty()) {
      x = g.src(s.front());
      y = g.src(s.front());
    } else {
      continue;
    }
    for (int p : ending[x]) {
      int a = walk(p, r), b = walk(p, s);
      if (a < 0 && b < 0) continue;
      for (int q : starting[y]) {
        int ia = a < 0 ? -1 : walk(a, h.paths[q]);
        int ib = b < 0 ? -1 : walk(b, h.paths[q]);
        if (ia >= 0 && ib >= 0) uf.unite(ia, ib);
        else if (ia >= 0 || ib >= 0) h.horizon_hit = true;
      }
    }
  }
  std::map<int, int> renum;
  h.cls.resize(h.paths.size());
  for (std::size_t k = 0; k < h.paths.size(); ++k) {
    int r = uf.find(static_cast<int>(k));
    auto [it, fresh] = renum.emplace(r, static_cast<int>(renum.size()));
    if (fresh) h.rep.push_back(static_cast<int>(k));
    h.cls[k] = it->second;
  }
  h.num_classes = static_cast<int>(renum.size());
  return h;
}

HomSet hom_sets(const PresentedCategory& c, int x, int y, int horizon) {
  HomClasses h = hom_classes(c, horizon);
  HomSet out;
  out.truncated = h.truncated;
  out.horizon_hit = h.horizon_hit;
  std::map<int, int> slot;
  for (std::size_t k = 0; k < h.paths.size(); ++k) {
    if (h.src[k] != x || h.dst[k] != y) continue;
    auto [it, fresh] = slot.emplace(h.cls[k], static_cast<int>(out.classes.size()));
    if (fresh) out.classes.emplace_back();
    out.classes[it->second].push_back(h.paths[k]);
  }
  return out;
}

std::string show_path(const ReflexiveGraph& g, const Path& p) {
  if (p.empty()) return "id";
  std::string s;
  for (std::size_t k = 0; k < p.size(); ++k) s += (k ? ";" : "") + g.edge_name(p[k]);
  return s;
}

std::string to_dot(const PresentedCategory& c) {
  std::string dot = to_dot(c.generators);
  std::ostringstream rel;
  for (const auto& [r, s] : c.relations)
    rel << "  // " << show_path(c.generators, r) << " = " << show_path(c.generators, s) << "\n";
  dot.insert(dot.rfind('}'), rel.str());
  return dot;
}

namespace {

int word_vertex(const std::string& w) {
  int v = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] == '+') v |= 1 << i;
  return v;
}

std::string replace_c(std::string w, char by) {
  std::replace(w.begin(), w.end(), 'c', by);
  return w;
}

}  // namespace

std::vector<std::string> cube_edge_words(int m, bool diagonals) {
  std::vector<std::string> out;
  int total = 1;
  for (int i = 0; i < m; ++i) total *= 3;
  for (int code = 0; code < total; ++code) {
    std::string w;
    int cs = 0;
    for (int i = 0, x = code; i < m; ++i, x /= 3) {
      char ch = "-+c"[x % 3];
      cs += ch == 'c';
      w += ch;
    }
    if (cs == 0 || (!diagonals && cs > 1)) continue;
    out.push_back(w);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::shared_ptr<const CubeShape> cube_shape(int m, bool diagonals) {
  auto sh = std::make_shared<CubeShape>();
  sh->m = m;
  sh->words = cube_edge_words(m, diagonals);
  for (std::size_t k = 0; k < sh->words.size(); ++k) {
    sh->index[sh->words[k]] = static_cast<int>(k);
    sh->src.push_back(word_vertex(replace_c(sh->words[k], '-')));
    sh->dst.push_back(word_vertex(replace_c(sh->words[k], '+')));
  }
  sh->partner.assign(m, std::vector<int>(sh->words.size(), -2));
  for (int i = 0; i < m; ++i)
    for (std::size_t k = 0; k < sh->words.size(); ++k) {
      std::string w = sh->words[k];
      if (w[i] == '-') {
        w[i] = '+';
        sh->partner[i][k] = sh->index.at(w);
      } else if (w[i] == 'c') {
        w[i] = '-';
        auto it = sh->index.find(w);
        sh->partner[i][k] = it == sh->index.end() ? -1 : it->second;
      }
    }
  return sh;
}

GraphCube::Kind GraphCube::kind() const {
  bool all_id = true, none_id = true;
  for (EdgeId e : edge) {
    if (is_id(e)) none_id = false;
    else all_id = false;
  }
  if (all_id) return Kind::contractible;
  if (none_id) return Kind::rigid;
  return Kind::neither;
}

bool GraphCube::degenerate() const {
  int mm = shape->m;
  for (int i = 0; i < mm; ++i) {
    bool constant = true;
    for (int v = 0; v < (1 << mm) && constant; ++v)
      if (!(v >> i & 1) && vertex[v] != vertex[v | 1 << i]) constant = false;
    const auto& part = shape->partner[i];
    for (std::size_t k = 0; k < edge.size() && constant; ++k) {
      if (part[k] == -2) continue;
      if (shape->words[k][i] == 'c' && part[k] == -1) constant = is_id(edge[k]);
      else constant = edge[part[k]] == edge[k];
    }
    if (constant) return true;
  }
  return false;
}

void for_each_graph_cube(const ReflexiveGraph& r, int m, bool diagonals,
                         const std::function<void(const GraphCube&)>& fn) {
  int nv = r.num_vertices();
  std::vector<std::vector<std::vector<EdgeId>>> between(nv, std::vector<std::vector<EdgeId>>(nv));
  for (EdgeId e : r.all_edges()) between[r.src(e)][r.dst(e)].push_back(e);
  GraphCube cube;
  cube.shape = cube_shape(m, diagonals);
  const CubeShape& sh = *cube.shape;
  std::size_t nw = sh.words.size();
  // edges checkable once their later endpoint is assigned
  std::vector<std::vector<int>> due(1 << m);
  for (std::size_t k = 0; k < nw; ++k) due[std::max(sh.src[k], sh.dst[k])].push_back(static_cast<int>(k));
  cube.vertex.assign(1 << m, 0);
  cube.edge.assign(nw, 0);
  std::function<void(std::size_t)> edges = [&](std::size_t k) {
    if (k == nw) {
      fn(cube);
      return;
    }
    for (EdgeId e : between[cube.vertex[sh.src[k]]][cube.vertex[sh.dst[k]]]) {
      cube.edge[k] = e;
      edges(k + 1);
    }
  };
  std::function<void(int)> verts = [&](int x) {
    if (x == (1 << m)) {
      edges(0);
      return;
    }
    for (int v = 0; v < nv; ++v) {
      cube.vertex[x] = v;
      bool ok = true;
      for (int k : due[x])
        if (between[cube.vertex[sh.src[k]]][cube.vertex[sh.dst[k]]].empty()) {
          ok = false;
          break;
        }
      if (ok) verts(x + 1);
    }
  };
  verts(0);
}

std::vector<GraphCube> graph_cubes(const ReflexiveGraph& r, int m, bool diagonals) {
  std::vector<GraphCube> out;
  for_each_graph_cube(r, m, diagonals, [&](const GraphCube& c) { out.push_back(c); });
  return out;
}

bool is_acubic(const ReflexiveGraph& r, int max_m) {
  for (int m = 2; m <= max_m; ++m) {
    bool rigid = false;
    for_each_graph_cube(r, m, true, [&](const GraphCube& c) { rigid = rigid || c.kind() == GraphCube::Kind::rigid; });
    if (rigid) return false;
  }
  return true;
}

int WidePullback::vertex_of(const std::vector<int>& comps) const {
  auto it = std::find(vertex_tuples.begin(), vertex_tuples.end(), comps);
  if (it == vertex_tuples.end()) throw std::out_of_range("vertex_of: not a vertex tuple");
  return static_cast<int>(it - vertex_tuples.begin());
}

std::vector<Path> WidePullback::project(const Path& p) const {
  std::size_t m = interfaces.size() + 1;
  std::vector<Path> out(m);
  for (EdgeId g : p)
    for (std::size_t i = 0; i < m; ++i)
      if (!is_id(tuples[g][i])) out[i].push_back(tuples[g][i]);
  return out;
}

WidePullback wide_pullback(const SyncFamily& fam) {
  std::size_t m = fam.factors.size();
  if (m == 0) throw std::invalid_argument("wide_pullback: no factors");
  if (fam.tables.size() + 1 != m) throw std::invalid_argument("wide_pullback: need one table per adjacent pair");
  WidePullback w;
  w.minus.resize(m);
  w.plus.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    w.minus[i].assign(fam.factors[i].graph.num_edges(), 0);
    w.plus[i].assign(fam.factors[i].graph.num_edges(), 0);
  }
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const SyncTable& table = fam.tables[i];
    const LabeledGraph& l = fam.factors[i];
    const LabeledGraph& r = fam.factors[i + 1];
    auto img = [&](const LabeledGraph& g) {
      std::vector<Symbol> out;
      for (Symbol s : image_factor(g)) out.push_back(translate(s, g.alphabet, table.alphabet()));
      std::sort(out.begin(), out.end());
      return out;
    };
    auto ls = img(l), rs = img(r);
    InterfaceGraph p = interface_pushout(ls, rs, upsilon(table, ls, rs));
    for (int e = 0; e < l.graph.num_edges(); ++e) w.plus[i][e] = p.of_left(translate(l.labels[e], l.alphabet, table.alphabet()));
    for (int e = 0; e < r.graph.num_edges(); ++e)
      w.minus[i + 1][e] = p.of_right(translate(r.labels[e], r.alphabet, table.alphabet()));
    w.interfaces.push_back(std::move(p));
  }
  auto cls = [](const std::vector<int>& v, EdgeId e) { return is_id(e) ? 0 : v[e]; };

  std::vector<int> comps(m);
  std::function<void(std::size_t)> verts = [&](std::size_t i) {
    if (i == m) {
      std::string nm = "(";
      for (std::size_t k = 0; k < m; ++k) nm += (k ? "," : "") + fam.factors[k].graph.vertices[comps[k]];
      w.graph.add_vertex(nm + ")");
      w.vertex_tuples.push_back(comps);
      return;
    }
    for (int v = 0; v < fam.factors[i].graph.num_vertices(); ++v) {
      comps[i] = v;
      verts(i + 1);
    }
  };
  verts(0);
  std::vector<int> stride(m, 1);
  for (std::size_t i = m - 1; i-- > 0;) stride[i] = stride[i + 1] * fam.factors[i + 1].graph.num_vertices();

  std::vector<EdgeId> es(m);
  std::function<void(std::size_t)> edges = [&](std::size_t i) {
    if (i == m) {
      if (std::all_of(es.begin(), es.end(), [](EdgeId e) { return is_id(e); })) return;
      int s = 0, d = 0;
      std::string nm = "(";
      for (std::size_t k = 0; k < m; ++k) {
        const ReflexiveGraph& g = fam.factors[k].graph;
        s += stride[k] * g.src(es[k]);
        d += stride[k] * g.dst(es[k]);
        nm += (k ? "," : "") + g.edge_name(es[k]);
      }
      w.graph.add_edge(s, d, nm + ")");
      w.tuples.push_back(es);
      return;
    }
    for (EdgeId e : fam.factors[i].graph.all_edges()) {
      if (i > 0 && cls(w.plus[i - 1], es[i - 1]) != cls(w.minus[i], e)) continue;
      es[i] = e;
      edges(i + 1);
    }
  };
  edges(0);

  // composites of length <= 2 with equal components are identified
  w.category.generators = w.graph;
  std::map<std::pair<int, std::vector<Path>>, Path> first;
  std::set<std::pair<Path, Path>> rels;
  auto note = [&](const Path& p) {
    int s = w.graph.src(p.front());
    auto key = std::make_pair(s, w.project(p));
    auto [it, fresh] = first.emplace(key, p);
    if (!fresh && it->second != p) rels.insert(std::minmax(it->second, p));
  };
  auto outs = w.graph.out_edges();
  for (int g = 0; g < w.graph.num_edges(); ++g) note({g});
  for (int g = 0; g < w.graph.num_edges(); ++g)
    for (EdgeId h : outs[w.graph.dst(g)]) note({g, h});
  w.category.relations.assign(rels.begin(), rels.end());
  return w;
}

namespace {

std::vector<int> interface_word(const std::vector<int>& classes, const Path& p) {
  std::vector<int> out;
  for (EdgeId e : p)
    if (classes[e] != 0) out.push_back(classes[e]);
  return out;
}

// Fewest joint steps realizing the tuple of component paths; -1 if none.
int schedule_length(const WidePullback& w, const std::vector<Path>& ps) {
  std::size_t m = ps.size();
  std::vector<int> dims(m);
  int states = 1;
  for (std::size_t i = 0; i < m; ++i) {
    dims[i] = static_cast<int>(ps[i].size()) + 1;
    states *= dims[i];
  }
  auto encode = [&](const std::vector<int>& k) {
    int s = 0;
    for (std::size_t i = 0; i < m; ++i) s = s * dims[i] + k[i];
    return s;
  };
  std::vector<int> dist(states, -1);
  std::vector<int> start(m, 0), goal(m);
  for (std::size_t i = 0; i < m; ++i) goal[i] = dims[i] - 1;
  std::deque<std::vector<int>> q{start};
  dist[encode(start)] = 0;
  while (!q.empty()) {
    std::vector<int> k = q.front();
    q.pop_front();
    int dk = dist[encode(k)];
    if (k == goal) return dk;
    for (int mask = 1; mask < (1 << m); ++mask) {
      std::vector<int> plus(m, 0), minus(m, 0), nk = k;
      bool ok = true;
      for (std::size_t i = 0; i < m && ok; ++i)
        if (mask >> i & 1) {
          if (k[i] + 1 >= dims[i]) ok = false;
          else {
            EdgeId e = ps[i][k[i]];
            plus[i] = w.plus[i][e];
            minus[i] = w.minus[i][e];
            ++nk[i];
          }
        }
      for (std::size_t i = 0; ok && i + 1 < m; ++i) ok = plus[i] == minus[i + 1];
      if (!ok) continue;
      int code = encode(nk);
      if (dist[code] >= 0) continue;
      dist[code] = dk + 1;
      q.push_back(nk);
    }
  }
  return -1;
}

}  // namespace

namespace {

// The left-hand side graph: its generators as component tuples.
struct ProductSide {
  ReflexiveGraph graph;
  std::vector<std::vector<EdgeId>> tuples;
  std::vector<std::vector<int>> vertex_tuples;
  PresentedCategory category;
};

ProductSide plain_side(const WidePullback& w) {
  ProductSide p;
  p.graph = w.graph;
  p.tuples = w.tuples;
  p.vertex_tuples = w.vertex_tuples;
  p.category = categorify(coskeleton(as_cubical(w.graph), 1, 2));
  return p;
}

// Iterated synchronized products, Sigma-coskeleton on the table labels.
ProductSide labeled_side(const SyncFamily& fam) {
  ProductSide p;
  LabeledGraph acc = fam.factors[0];
  std::vector<std::vector<int>> vt;
  std::vector<std::vector<EdgeId>> et;
  for (int v = 0; v < acc.graph.num_vertices(); ++v) vt.push_back({v});
  for (int e = 0; e < acc.graph.num_edges(); ++e) et.push_back({e});
  for (std::size_t i = 0; i + 1 < fam.factors.size(); ++i) {
    const LabeledGraph& t = fam.factors[i + 1];
    SyncGraph sg = sync_graph(acc, t, fam.tables[i]);
    std::vector<std::vector<int>> nvt;
    for (int a = 0; a < acc.graph.num_vertices(); ++a)
      for (int b = 0; b < t.graph.num_vertices(); ++b) {
        nvt.push_back(vt[a]);
        nvt.back().push_back(b);
      }
    LabeledGraph next;
    next.alphabet = sg.graph.alphabet;
    next.graph.vertices = sg.graph.graph.vertices;
    std::vector<std::vector<EdgeId>> net;
    for (int e = 0; e < sg.graph.graph.num_edges(); ++e) {
      if (sg.graph.labels[e] == kTop) continue;
      auto [e1, e2] = sg.pairs[e];
      std::vector<EdgeId> tup;
      if (is_id(e1))
        for (int v : vt[id_vertex(e1)]) tup.push_back(id_edge(v));
      else
        tup = et[e1];
      tup.push_back(e2);
      const auto& ed = sg.graph.graph.edges[e];
      next.graph.add_edge(ed.src, ed.dst, ed.name);
      next.labels.push_back(sg.graph.labels[e]);
      net.push_back(std::move(tup));
    }
    acc = std::move(next);
    vt = std::move(nvt);
    et = std::move(net);
  }
  p.graph = acc.graph;
  p.tuples = et;
  p.vertex_tuples = vt;
  p.category = categorify(sigma_coskeleton(hda_of_graph(acc), 1, 2).carrier);
  return p;
}

std::vector<Path> project_tuples(const std::vector<std::vector<EdgeId>>& tuples, std::size_t m, const Path& p) {
  std::vector<Path> out(m);
  for (EdgeId g : p)
    for (std::size_t i = 0; i < m; ++i)
      if (!is_id(tuples[g][i])) out[i].push_back(tuples[g][i]);
  return out;
}

// Fewest steps of the product graph realizing the tuple of component paths
// from the vertex tuple xs; -1 if none.
int product_schedule_at(const ProductSide& p, const std::map<std::vector<int>, int>& vindex,
                        const std::vector<std::vector<EdgeId>>& outs, const std::vector<Path>& ps,
                        const std::vector<int>& xs, const std::vector<LabeledGraph>& factors) {
  std::size_t m = ps.size();
  std::map<std::vector<int>, int> dist;
  std::vector<int> start(m, 0), goal(m);
  for (std::size_t i = 0; i < m; ++i) goal[i] = static_cast<int>(ps[i].size());
  std::deque<std::vector<int>> q{start};
  dist[start] = 0;
  while (!q.empty()) {
    auto k = q.front();
    q.pop_front();
    int dk = dist[k];
    if (k == goal) return dk;
    std::vector<int> at(m);
    for (std::size_t i = 0; i < m; ++i) at[i] = k[i] == 0 ? xs[i] : factors[i].graph.dst(ps[i][k[i] - 1]);
    for (EdgeId g : outs[vindex.at(at)]) {
      auto nk = k;
      bool ok = true;
      for (std::size_t i = 0; i < m && ok; ++i) {
        EdgeId e = p.tuples[g][i];
        if (is_id(e)) continue;
        if (k[i] >= goal[i] || ps[i][k[i]] != e)
          ok = false;
        else
          ++nk[i];
      }
      if (!ok || dist.count(nk)) continue;
      dist[nk] = dk + 1;
      q.push_back(nk);
    }
  }
  return -1;
}

}  // namespace

CatsynchroReport check_catsynchro(const SyncFamily& fam, int horizon, bool labeled) {
  CatsynchroReport rep;
  WidePullback w = wide_pullback(fam);
  std::size_t m = fam.factors.size();
  rep.acubic = std::all_of(fam.factors.begin(), fam.factors.end(),
                           [](const LabeledGraph& t) { return is_acubic(t.graph); });
  if (!rep.acubic) rep.notes.push_back("a factor has a rigid cube");

  ProductSide side = labeled ? labeled_side(fam) : plain_side(w);
  const PresentedCategory& lhs = side.category;
  auto project = [&](const Path& p) { return project_tuples(side.tuples, m, p); };
  std::map<std::vector<int>, int> vindex;
  for (std::size_t v = 0; v < side.vertex_tuples.size(); ++v) vindex[side.vertex_tuples[v]] = static_cast<int>(v);
  auto outs = side.graph.out_edges();

  HomClasses lh = hom_classes(lhs, horizon);
  rep.objects = lhs.num_objects();
  rep.generators = lhs.generators.num_edges();
  rep.relations = static_cast<int>(lhs.relations.size());
  long product = 1;
  for (const auto& t : fam.factors) product *= t.graph.num_vertices();
  rep.objects_equal = rep.objects == product;

  // single-step tuples of the pullback of free categories; in the labeled
  // reading only the indecomposable ones
  auto cls_plus = [&](std::size_t i, EdgeId e) { return is_id(e) ? 0 : w.plus[i][e]; };
  std::vector<std::vector<EdgeId>> steps;
  std::vector<EdgeId> cur(m);
  std::function<void(std::size_t)> gen = [&](std::size_t i) {
    if (i == m) {
      if (std::any_of(cur.begin(), cur.end(), [](EdgeId e) { return !is_id(e); })) steps.push_back(cur);
      return;
    }
    for (EdgeId e : fam.factors[i].graph.all_edges()) {
      cur[i] = e;
      gen(i + 1);
    }
  };
  gen(0);
  auto indecomposable = [&](const std::vector<EdgeId>& s) {
    std::vector<std::size_t> moving;
    for (std::size_t i = 0; i < m; ++i)
      if (!is_id(s[i])) moving.push_back(i);
    for (std::size_t k = 0; k + 1 < moving.size(); ++k)
      if (moving[k + 1] != moving[k] + 1 || cls_plus(moving[k], s[moving[k]]) == 0) return false;
    return true;
  };
  std::set<std::pair<int, std::vector<Path>>> steps_rhs;
  for (auto& s : steps) {
    bool ok = true;
    for (std::size_t i = 0; i + 1 < m && ok; ++i) {
      int a = is_id(s[i]) ? 0 : w.plus[i][s[i]];
      int b = is_id(s[i + 1]) ? 0 : w.minus[i + 1][s[i + 1]];
      ok = a == b;
    }
    if (!ok || (labeled && !indecomposable(s))) continue;
    std::vector<Path> t(m);
    std::vector<int> from(m);
    for (std::size_t i = 0; i < m; ++i) {
      from[i] = fam.factors[i].graph.src(s[i]);
      if (!is_id(s[i])) t[i] = {s[i]};
    }
    steps_rhs.insert({vindex.at(from), std::move(t)});
  }
  std::set<std::pair<int, std::vector<Path>>> gen_images;
  for (int g = 0; g < side.graph.num_edges(); ++g) gen_images.insert({side.graph.src(g), project({g})});
  rep.generator_bijection =
      gen_images.size() == static_cast<std::size_t>(side.graph.num_edges()) && gen_images == steps_rhs;

  rep.relations_respected = true;
  for (const auto& [r, s] : lhs.relations)
    if (project(r) != project(s)) {
      rep.relations_respected = false;
      rep.notes.push_back("relation not respected: " + show_path(side.graph, r) + " = " + show_path(side.graph, s));
      break;
    }

  // right-hand side: tuples of component paths with matching interface
  // words, realizable within the horizon
  std::vector<HomClasses> comp;
  for (const auto& t : fam.factors) comp.push_back(hom_classes(free_category(t.graph), horizon));
  rep.truncated = lh.truncated || lh.horizon_hit;
  for (const auto& c : comp) rep.truncated = rep.truncated || c.truncated;

  std::map<std::pair<int, std::vector<Path>>, std::set<int>> image_classes;
  std::map<int, std::set<std::vector<Path>>> class_images;
  for (std::size_t k = 0; k < lh.paths.size(); ++k) {
    auto img = project(lh.paths[k]);
    image_classes[{lh.src[k], img}].insert(lh.cls[k]);
    class_images[lh.cls[k]].insert(std::move(img));
  }
  bool bij = true;
  for (const auto& [k, v] : image_classes) bij = bij && v.size() == 1;
  for (const auto& [k, v] : class_images) bij = bij && v.size() == 1;

  std::set<std::pair<int, std::vector<Path>>> rhs;
  for (std::size_t x = 0; x < side.vertex_tuples.size(); ++x) {
    const auto& xs = side.vertex_tuples[x];
    std::vector<std::vector<int>> choices(m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < comp[i].paths.size(); ++k)
        if (comp[i].src[k] == xs[i]) choices[i].push_back(static_cast<int>(k));
    std::vector<Path> ps(m);
    std::function<void(std::size_t)> pick = [&](std::size_t i) {
      if (i == m) {
        for (std::size_t j = 0; j + 1 < m; ++j)
          if (interface_word(w.plus[j], ps[j]) != interface_word(w.minus[j + 1], ps[j + 1])) return;
        int len;
        if (labeled)
          len = product_schedule_at(side, vindex, outs, ps, xs, fam.factors);
        else
          len = schedule_length(w, ps);
        if (len == -1) {
          rep.notes.push_back("matching interface words without a joint schedule");
          return;
        }
        if (len <= horizon) rhs.insert({static_cast<int>(x), ps});
        return;
      }
      for (int k : choices[i]) {
        ps[i] = comp[i].paths[k];
        pick(i + 1);
      }
    };
    pick(0);
  }
  std::set<std::pair<int, std::vector<Path>>> lhs_images;
  for (const auto& [k, v] : image_classes) lhs_images.insert(k);
  rep.classes_match_images = bij && lhs_images == rhs;
  rep.lhs_classes = lh.num_classes;
  rep.rhs_classes = static_cast<long>(rhs.size());
  rep.hom_counts_equal = rep.lhs_classes == rep.rhs_classes;
  return rep;
}

namespace {

struct NerveCube {
  int p;
  std::vector<std::string> words;  // edge words over {0,1} with one *
  std::map<std::string, int> index;
};

NerveCube nerve_cube(int p) {
  NerveCube c{p, {}, {}};
  for (int i = 0; i < p; ++i)
    for (int v = 0; v < (1 << p); ++v) {
      if (v >> i & 1) continue;
      std::string w;
      for (int j = 0; j < p; ++j) w += j == i ? '*' : ((v >> j & 1) ? '1' : '0');
      c.words.push_back(w);
    }
  std::sort(c.words.begin(), c.words.end());
  for (std::size_t k = 0; k < c.words.size(); ++k) c.index[c.words[k]] = static_cast<int>(k);
  return c;
}

int bits_of(const std::string& w) {
  int v = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] == '1') v |= 1 << i;
  return v;
}

struct Functor {
  std::vector<int> obj;
  std::vector<int> arr;
  auto operator<=>(const Functor&) const = default;
};

// Restriction to coordinate i (0-based) fixed at b.
Functor restrict_functor(const Functor& f, const NerveCube& big, const NerveCube& small, int i, int b) {
  Functor g;
  for (int v = 0; v < (1 << small.p); ++v) {
    int lo = v & ((1 << i) - 1), hi = v >> i;
    g.obj.push_back(f.obj[lo | (b << i) | (hi << (i + 1))]);
  }
  for (const auto& w : small.words) {
    std::string bw = w.substr(0, i) + char('0' + b) + w.substr(i);
    g.arr.push_back(f.arr[big.index.at(bw)]);
  }
  return g;
}

bool constant_along(const Functor& f, const NerveCube& c, const HomClasses& h, int i) {
  for (const auto& w : c.words) {
    if (w[i] == '*') {
      if (f.arr[c.index.at(w)] != h.identity(f.obj[bits_of(w)])) return false;
    } else if (w[i] == '0') {
      std::string up = w;
      up[i] = '1';
      if (f.arr[c.index.at(w)] != f.arr[c.index.at(up)]) return false;
    }
  }
  for (int v = 0; v < (1 << c.p); ++v)
    if (!(v >> i & 1) && f.obj[v] != f.obj[v | 1 << i]) return false;
  return true;
}

}  // namespace

CubicalSet cubical_nerve(const PresentedCategory& cat, int D, int horizon) {
  HomClasses h = hom_classes(cat, horizon);
  std::vector<NerveCube> cubes;
  for (int p = 0; p <= D; ++p) cubes.push_back(nerve_cube(p));
  std::vector<std::map<Functor, int>> known(D + 1);
  CubicalSet out(D);

  std::function<CellRef(const Functor&, int)> canonical = [&](const Functor& f, int p) {
    std::vector<int> degens;
    Functor g = f;
    int q = p;
    for (int i = p - 1; i >= 0; --i)
      if (constant_along(g, cubes[q], h, i)) {
        g = restrict_functor(g, cubes[q], cubes[q - 1], i, 0);
        --q;
        degens.push_back(i + 1);
      }
    std::sort(degens.begin(), degens.end());
    auto it = known[q].find(g);
    if (it == known[q].end()) throw std::logic_error("cubical_nerve: face not enumerated");
    return CellRef{p, it->second, degens};
  };

  for (int p = 0; p <= D; ++p) {
    const NerveCube& c = cubes[p];
    Functor f;
    f.obj.assign(1 << p, 0);
    f.arr.assign(c.words.size(), 0);
    std::function<void(std::size_t)> arrows = [&](std::size_t k) {
      if (k == c.words.size()) {
        // every 2-face commutes
        for (int i = 0; i < p; ++i)
          for (int j = i + 1; j < p; ++j)
            for (int v = 0; v < (1 << p); ++v) {
              if ((v >> i & 1) || (v >> j & 1)) continue;
              auto edge = [&](int base, int coord) {
                std::string w;
                for (int t = 0; t < p; ++t) w += t == coord ? '*' : ((base >> t & 1) ? '1' : '0');
                return f.arr[c.index.at(w)];
              };
              int a = h.compose(edge(v, i), edge(v | 1 << i, j));
              int b = h.compose(edge(v, j), edge(v | 1 << j, i));
              if (a < 0 || b < 0) throw std::overflow_error("cubical_nerve: composite beyond the horizon");
              if (a != b) return;
            }
        for (int i = 0; i < p; ++i)
          if (constant_along(f, c, h, i)) return;
        int idx = static_cast<int>(known[p].size());
        std::vector<CellRef> faces;
        for (int i = 1; i <= p; ++i)
          for (int b = 0; b < 2; ++b) faces.push_back(canonical(restrict_functor(f, c, cubes[p - 1], i - 1, b), p - 1));
        std::string name = p == 0 ? cat.generators.vertices[f.obj[0]] : "F" + std::to_string(p) + "_" + std::to_string(idx);
        out.add_cell(p, name, std::move(faces));
        known[p].emplace(f, idx);
        return;
      }
      int s = f.obj[bits_of(c.words[k])];
      std::string up = c.words[k];
      std::replace(up.begin(), up.end(), '*', '1');
      int d = f.obj[bits_of(up)];
      for (int cl : h.classes_between(s, d)) {
        f.arr[k] = cl;
        arrows(k + 1);
      }
    };
    std::function<void(int)> objects = [&](int v) {
      if (v == (1 << p)) {
        arrows(0);
        return;
      }
      for (int o = 0; o < cat.num_objects(); ++o) {
        f.obj[v] = o;
        objects(v + 1);
      }
    };
    objects(0);
  }
  return out;
}

}  // namespace cts
