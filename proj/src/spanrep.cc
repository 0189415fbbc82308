#include "cts/spanrep.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace cts {

FinSpan FinSpan::identity(int n) {
  FinSpan s(n, n);
  for (int a = 0; a < n; ++a) s.at(a, a) = 1;
  return s;
}

FinSpan FinSpan::of_function(const std::vector<int>& f, int cols) {
  FinSpan s(static_cast<int>(f.size()), cols);
  for (int a = 0; a < s.rows; ++a) {
    if (f[a] < 0 || f[a] >= cols) throw std::invalid_argument("FinSpan::of_function: value out of range");
    s.at(a, f[a]) = 1;
  }
  return s;
}

FinSpan FinSpan::of_matrix(const std::vector<std::vector<int>>& rows) {
  int c = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  FinSpan s(static_cast<int>(rows.size()), c);
  for (int a = 0; a < s.rows; ++a) {
    if (static_cast<int>(rows[a].size()) != c) throw std::invalid_argument("FinSpan::of_matrix: ragged rows");
    for (int b = 0; b < c; ++b) {
      if (rows[a][b] < 0) throw std::invalid_argument("FinSpan::of_matrix: negative multiplicity");
      s.at(a, b) = rows[a][b];
    }
  }
  return s;
}

long FinSpan::apex_size() const { return std::accumulate(m.begin(), m.end(), 0L); }

bool FinSpan::is_map() const {
  for (int a = 0; a < rows; ++a) {
    int sum = 0;
    for (int b = 0; b < cols; ++b) sum += at(a, b);
    if (sum != 1) return false;
  }
  return true;
}

std::vector<int> FinSpan::as_function() const {
  if (!is_map()) throw std::invalid_argument("FinSpan::as_function: not a map");
  std::vector<int> f(rows);
  for (int a = 0; a < rows; ++a)
    for (int b = 0; b < cols; ++b)
      if (at(a, b)) f[a] = b;
  return f;
}

std::vector<std::array<int, 3>> FinSpan::apex() const {
  std::vector<std::array<int, 3>> out;
  for (int a = 0; a < rows; ++a)
    for (int b = 0; b < cols; ++b)
      for (int k = 0; k < at(a, b); ++k) out.push_back({a, b, k});
  return out;
}

int FinSpan::apex_index(int a, int b, int k) const {
  std::size_t cell = static_cast<std::size_t>(a) * cols + b;
  if (k >= m.at(cell)) throw std::out_of_range("FinSpan::apex_index");
  return static_cast<int>(std::accumulate(m.begin(), m.begin() + static_cast<long>(cell), 0L)) + k;
}

FinSpan FinSpan::transpose() const {
  FinSpan t(cols, rows);
  for (int a = 0; a < rows; ++a)
    for (int b = 0; b < cols; ++b) t.at(b, a) = at(a, b);
  return t;
}

FinSpan span_compose(const FinSpan& f, const FinSpan& g) {
  if (f.cols != g.rows) throw std::invalid_argument("span_compose: endpoint mismatch");
  FinSpan h(f.rows, g.cols);
  for (int a = 0; a < f.rows; ++a)
    for (int b = 0; b < f.cols; ++b) {
      int x = f.at(a, b);
      if (!x) continue;
      for (int c = 0; c < g.cols; ++c) h.at(a, c) += x * g.at(b, c);
    }
  return h;
}

std::string show(const FinSpan& s) {
  std::ostringstream os;
  os << "[";
  for (int a = 0; a < s.rows; ++a) {
    os << (a ? "," : "") << "[";
    for (int b = 0; b < s.cols; ++b) os << (b ? "," : "") << s.at(a, b);
    os << "]";
  }
  os << "]";
  return os.str();
}

FinSpan SpanPseudofunctor::eval(int x, const Path& p) const {
  FinSpan s = FinSpan::identity(size(x));
  int at = x;
  for (EdgeId e : p) {
    if (is_id(e)) continue;
    if (control.generators.src(e) != at) throw std::invalid_argument("SpanPseudofunctor::eval: path not composable");
    s = span_compose(s, generator_span.at(e));
    at = control.generators.dst(e);
  }
  return s;
}

std::string SpanPseudofunctor::element_name(int x, int a) const {
  if (x < static_cast<int>(element_names.size()) && a < static_cast<int>(element_names[x].size()))
    return element_names[x][a];
  return std::to_string(a);
}

std::vector<std::string> validate(const SpanPseudofunctor& p) {
  std::vector<std::string> errs;
  const auto& g = p.control.generators;
  if (!p.control.relations.empty()) errs.push_back("control category is not free");
  if (static_cast<int>(p.object_size.size()) != g.num_vertices()) {
    errs.push_back("object assignment does not cover the control objects");
    return errs;
  }
  for (int x = 0; x < g.num_vertices(); ++x)
    if (p.object_size[x] < 0) errs.push_back("negative set size at " + g.vertices[x]);
  if (static_cast<int>(p.generator_span.size()) != g.num_edges()) {
    errs.push_back("generator assignment does not cover the control generators");
    return errs;
  }
  for (int e = 0; e < g.num_edges(); ++e) {
    const FinSpan& s = p.generator_span[e];
    if (s.rows != p.object_size[g.src(e)] || s.cols != p.object_size[g.dst(e)])
      errs.push_back("span at " + g.edge_name(e) + " has the wrong endpoints");
    if (static_cast<long>(s.m.size()) != static_cast<long>(s.rows) * s.cols)
      errs.push_back("span at " + g.edge_name(e) + " has a malformed matrix");
    for (int v : s.m)
      if (v < 0) errs.push_back("span at " + g.edge_name(e) + " has a negative multiplicity");
  }
  for (std::size_t x = 0; x < p.element_names.size(); ++x)
    if (x >= p.object_size.size() || static_cast<int>(p.element_names[x].size()) != p.object_size[x])
      errs.push_back("element names do not match the set sizes");
  return errs;
}

namespace {

bool same_shape(const ReflexiveGraph& a, const ReflexiveGraph& b) {
  if (a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges()) return false;
  for (int e = 0; e < a.num_edges(); ++e)
    if (a.src(e) != b.src(e) || a.dst(e) != b.dst(e)) return false;
  return true;
}

void require_free(const PresentedCategory& c, const char* what) {
  if (!c.relations.empty()) throw std::invalid_argument(std::string(what) + ": category is not free");
}

std::vector<std::vector<int>> permutations(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// Pairs (i, j) with f[i] == g[j], lexicographic.
std::vector<std::pair<int, int>> set_pullback(const std::vector<int>& f, const std::vector<int>& g) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < static_cast<int>(f.size()); ++i)
    for (int j = 0; j < static_cast<int>(g.size()); ++j)
      if (f[i] == g[j]) out.emplace_back(i, j);
  return out;
}

int index_of(const std::vector<std::pair<int, int>>& v, std::pair<int, int> x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) throw std::logic_error("pullback element missing");
  return static_cast<int>(it - v.begin());
}

std::vector<int> offsets(const std::vector<int>& sizes) {
  std::vector<int> off(sizes.size() + 1, 0);
  for (std::size_t i = 0; i < sizes.size(); ++i) off[i + 1] = off[i] + sizes[i];
  return off;
}

}  // namespace

std::optional<std::vector<std::vector<int>>> isomorphism(const SpanPseudofunctor& p, const SpanPseudofunctor& q) {
  const auto& g = p.control.generators;
  if (!same_shape(g, q.control.generators) || p.object_size != q.object_size) return std::nullopt;
  int n = g.num_vertices();
  std::vector<std::vector<int>> sigma(n);
  std::vector<std::vector<int>> by_last(n);  // generators checked once both ends are fixed
  for (int e = 0; e < g.num_edges(); ++e) by_last[std::max(g.src(e), g.dst(e))].push_back(e);
  std::map<int, std::vector<std::vector<int>>> perms;
  for (int s : p.object_size)
    if (!perms.count(s)) perms[s] = permutations(s);

  auto consistent = [&](int x) {
    for (int e : by_last[x]) {
      const FinSpan& a = p.generator_span[e];
      const FinSpan& b = q.generator_span[e];
      const auto& sx = sigma[g.src(e)];
      const auto& sy = sigma[g.dst(e)];
      for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j)
          if (a.at(i, j) != b.at(sx[i], sy[j])) return false;
    }
    return true;
  };
  std::function<bool(int)> go = [&](int x) {
    if (x == n) return true;
    for (const auto& s : perms[p.object_size[x]]) {
      sigma[x] = s;
      if (consistent(x) && go(x + 1)) return true;
    }
    return false;
  };
  if (!go(0)) return std::nullopt;
  return sigma;
}

SpanPseudofunctor reindex(const SpanPseudofunctor& t, const PresentedCategory& g, const GraphMorphism& k) {
  const auto& gg = g.generators;
  const auto& h = t.control.generators;
  if (static_cast<int>(k.on_vertices.size()) != gg.num_vertices() ||
      static_cast<int>(k.on_edges.size()) != gg.num_edges())
    throw std::invalid_argument("reindex: morphism does not cover the graph");
  SpanPseudofunctor out;
  out.control = g;
  for (int v = 0; v < gg.num_vertices(); ++v) {
    out.object_size.push_back(t.size(k.on_vertices[v]));
    if (k.on_vertices[v] < static_cast<int>(t.element_names.size()))
      out.element_names.push_back(t.element_names[k.on_vertices[v]]);
  }
  if (out.element_names.size() != out.object_size.size()) out.element_names.clear();
  for (int e = 0; e < gg.num_edges(); ++e) {
    EdgeId ke = k.on_edges[e];
    if (h.src(ke) != k.on_vertices[gg.src(e)] || h.dst(ke) != k.on_vertices[gg.dst(e)])
      throw std::invalid_argument("reindex: not a graph morphism at " + gg.edge_name(e));
    out.generator_span.push_back(is_id(ke) ? FinSpan::identity(t.size(id_vertex(ke))) : t.generator_span[ke]);
  }
  return out;
}

void check_functor(const UlfFunctor& u) {
  const auto& t = u.total.generators;
  const auto& b = u.base.generators;
  if (static_cast<int>(u.on_objects.size()) != t.num_vertices() ||
      static_cast<int>(u.on_generators.size()) != t.num_edges())
    throw std::invalid_argument("functor data does not cover the total category");
  for (int x : u.on_objects)
    if (x < 0 || x >= b.num_vertices()) throw std::invalid_argument("functor: object image out of range");
  for (int e = 0; e < t.num_edges(); ++e) {
    int at = u.on_objects[t.src(e)];
    for (EdgeId f : u.on_generators[e]) {
      if (is_id(f) || f >= b.num_edges()) throw std::invalid_argument("functor: malformed image of " + t.edge_name(e));
      if (b.src(f) != at) throw std::invalid_argument("functor: image of " + t.edge_name(e) + " is not a path");
      at = b.dst(f);
    }
    if (at != u.on_objects[t.dst(e)])
      throw std::invalid_argument("functor: image of " + t.edge_name(e) + " has the wrong endpoints");
  }
}

UlfVerdict is_ulf(const UlfFunctor& u) {
  require_free(u.total, "is_ulf");
  require_free(u.base, "is_ulf");
  check_functor(u);
  const auto& t = u.total.generators;
  const auto& b = u.base.generators;
  UlfVerdict v;
  for (int e = 0; e < t.num_edges(); ++e) {
    const Path& img = u.on_generators[e];
    if (img.size() == 1) continue;
    v.ulf = false;
    v.generator = e;
    v.image = img;
    std::string en = t.edge_name(e);
    if (img.empty()) {
      v.liftings = 2;
      v.witness = en + " maps to an identity: id o id has the two liftings id o " + en + " and " + en + " o id";
    } else {
      v.first = Path(img.begin(), img.begin() + 1);
      v.second = Path(img.begin() + 1, img.end());
      v.liftings = 0;
      v.witness = en + " maps to " + show_path(b, img) + ": the factorization (" + show_path(b, v.first) + ") then (" +
                  show_path(b, v.second) + ") has no lifting";
    }
    return v;
  }
  return v;
}

bool isomorphic(const UlfFunctor& u, const UlfFunctor& v) {
  const auto& ut = u.total.generators;
  const auto& vt = v.total.generators;
  if (!same_shape(u.base.generators, v.base.generators)) return false;
  if (ut.num_vertices() != vt.num_vertices() || ut.num_edges() != vt.num_edges()) return false;
  int nb = u.base.generators.num_vertices();
  std::vector<std::vector<int>> fu(nb), fv(nb);
  for (int x = 0; x < ut.num_vertices(); ++x) fu[u.on_objects[x]].push_back(x);
  for (int x = 0; x < vt.num_vertices(); ++x) fv[v.on_objects[x]].push_back(x);
  for (int y = 0; y < nb; ++y)
    if (fu[y].size() != fv[y].size()) return false;

  std::vector<int> sigma(ut.num_vertices(), -1);
  using Key = std::tuple<Path, int, int>;
  auto edges_between_fixed = [&](int last) {
    std::map<Key, int> cu, cv;
    std::vector<char> fixed_v(vt.num_vertices(), 0);
    for (int x = 0; x < ut.num_vertices(); ++x)
      if (sigma[x] >= 0) fixed_v[sigma[x]] = 1;
    for (int e = 0; e < ut.num_edges(); ++e) {
      int s = ut.src(e), d = ut.dst(e);
      if (sigma[s] < 0 || sigma[d] < 0) continue;
      if (std::max(u.on_objects[s], u.on_objects[d]) != last) continue;
      ++cu[{u.on_generators[e], sigma[s], sigma[d]}];
    }
    for (int e = 0; e < vt.num_edges(); ++e) {
      int s = vt.src(e), d = vt.dst(e);
      if (!fixed_v[s] || !fixed_v[d]) continue;
      if (std::max(v.on_objects[s], v.on_objects[d]) != last) continue;
      ++cv[{v.on_generators[e], s, d}];
    }
    return cu == cv;
  };
  std::function<bool(int)> go = [&](int y) {
    if (y == nb) return true;
    for (const auto& p : permutations(static_cast<int>(fu[y].size()))) {
      for (std::size_t i = 0; i < p.size(); ++i) sigma[fu[y][i]] = fv[y][p[i]];
      if (edges_between_fixed(y) && go(y + 1)) return true;
    }
    for (int x : fu[y]) sigma[x] = -1;
    return false;
  };
  return go(0);
}

SpanPseudofunctor fibers(const UlfFunctor& u) {
  UlfVerdict v = is_ulf(u);
  if (!v.ulf) throw std::invalid_argument("fibers: not ulf: " + v.witness);
  const auto& t = u.total.generators;
  const auto& b = u.base.generators;
  SpanPseudofunctor p;
  p.control = u.base;
  p.object_size.assign(b.num_vertices(), 0);
  p.element_names.assign(b.num_vertices(), {});
  std::vector<int> local(t.num_vertices());
  for (int x = 0; x < t.num_vertices(); ++x) {
    int y = u.on_objects[x];
    local[x] = p.object_size[y]++;
    p.element_names[y].push_back(t.vertices[x]);
  }
  for (int f = 0; f < b.num_edges(); ++f) p.generator_span.emplace_back(p.object_size[b.src(f)], p.object_size[b.dst(f)]);
  for (int e = 0; e < t.num_edges(); ++e) ++p.generator_span[u.on_generators[e][0]].at(local[t.src(e)], local[t.dst(e)]);
  return p;
}

UlfFunctor grothendieck(const SpanPseudofunctor& p) {
  auto errs = validate(p);
  if (!errs.empty()) throw std::invalid_argument("grothendieck: " + errs.front());
  const auto& g = p.control.generators;
  UlfFunctor u;
  u.base = p.control;
  auto off = offsets(p.object_size);
  for (int x = 0; x < g.num_vertices(); ++x)
    for (int a = 0; a < p.size(x); ++a) {
      u.total.generators.add_vertex("(" + p.element_name(x, a) + "," + g.vertices[x] + ")");
      u.on_objects.push_back(x);
    }
  for (int f = 0; f < g.num_edges(); ++f) {
    const auto apex = p.generator_span[f].apex();
    for (std::size_t k = 0; k < apex.size(); ++k) {
      auto [a, b, i] = apex[k];
      (void)i;
      u.total.generators.add_edge(off[g.src(f)] + a, off[g.dst(f)] + b,
                                  "(" + std::to_string(k) + "," + g.edge_name(f) + ")");
      u.on_generators.push_back({f});
    }
  }
  return u;
}

LaxRepTransformation LaxRepTransformation::identity(const SpanPseudofunctor& p) {
  LaxRepTransformation a;
  a.source = p;
  a.target = p;
  for (int s : p.object_size) a.components.push_back(FinSpan::identity(s));
  for (const auto& s : p.generator_span) {
    std::vector<int> id(static_cast<std::size_t>(s.apex_size()));
    std::iota(id.begin(), id.end(), 0);
    a.two_cells.push_back(std::move(id));
  }
  return a;
}

LaxReport validate_lax(const LaxRepTransformation& a) {
  LaxReport r;
  const auto& g = a.source.control.generators;
  auto fail = [&](bool& flag, std::string msg) {
    flag = false;
    r.valid = false;
    r.errors.push_back(std::move(msg));
  };
  bool shape = true;
  if (!same_shape(g, a.target.control.generators)) fail(shape, "source and target have different controls");
  for (const auto* p : {&a.source, &a.target})
    for (auto& e : validate(*p)) fail(shape, e);
  if (static_cast<int>(a.components.size()) != g.num_vertices() ||
      static_cast<int>(a.two_cells.size()) != g.num_edges())
    fail(shape, "transformation data does not cover the control");
  if (!shape) return r;

  std::vector<std::vector<int>> comp(g.num_vertices());
  for (int x = 0; x < g.num_vertices(); ++x) {
    const FinSpan& c = a.components[x];
    if (c.rows != a.source.size(x) || c.cols != a.target.size(x)) {
      fail(r.representable, "component at " + g.vertices[x] + " has the wrong endpoints");
    } else if (!c.is_map()) {
      for (int i = 0; i < c.rows; ++i) {
        int sum = 0;
        for (int j = 0; j < c.cols; ++j) sum += c.at(i, j);
        if (sum != 1) {
          fail(r.representable, "component at " + g.vertices[x] + " is not a map: left leg not iso over element " +
                                    a.source.element_name(x, i));
          break;
        }
      }
    } else {
      comp[x] = c.as_function();
    }
  }
  if (!r.representable) return r;

  std::vector<std::vector<std::array<int, 3>>> src_apex, dst_apex;
  for (int f = 0; f < g.num_edges(); ++f) {
    src_apex.push_back(a.source.generator_span[f].apex());
    dst_apex.push_back(a.target.generator_span[f].apex());
    const auto& cell = a.two_cells[f];
    int x = g.src(f), y = g.dst(f);
    if (cell.size() != src_apex[f].size()) {
      fail(r.coherent, "two-cell at " + g.edge_name(f) + " does not cover the apex");
      continue;
    }
    for (std::size_t k = 0; k < cell.size(); ++k) {
      if (cell[k] < 0 || cell[k] >= static_cast<int>(dst_apex[f].size())) {
        fail(r.coherent, "two-cell at " + g.edge_name(f) + " sends element " + std::to_string(k) + " out of range");
        continue;
      }
      const auto& sk = src_apex[f][k];
      const auto& tk = dst_apex[f][cell[k]];
      if (comp[x][sk[0]] != tk[0])
        fail(r.coherent, "two-cell at " + g.edge_name(f) + ", element " + std::to_string(k) + ": left leg square fails");
      if (comp[y][sk[1]] != tk[1])
        fail(r.coherent, "two-cell at " + g.edge_name(f) + ", element " + std::to_string(k) + ": right leg square fails");
    }
  }
  if (!r.coherent) return r;

  // Pasting along composable pairs: (k1, k2) |-> (alpha_f k1, alpha_g k2)
  // must again be a morphism between the composite spans.
  for (int f = 0; f < g.num_edges(); ++f)
    for (int h = 0; h < g.num_edges(); ++h) {
      if (g.dst(f) != g.src(h)) continue;
      bool ok = true;
      for (std::size_t k1 = 0; k1 < src_apex[f].size(); ++k1)
        for (std::size_t k2 = 0; k2 < src_apex[h].size(); ++k2) {
          if (src_apex[f][k1][1] != src_apex[h][k2][0]) continue;
          const auto& t1 = dst_apex[f][a.two_cells[f][k1]];
          const auto& t2 = dst_apex[h][a.two_cells[h][k2]];
          ok = ok && t1[1] == t2[0];
          ok = ok && t1[0] == comp[g.src(f)][src_apex[f][k1][0]] && t2[1] == comp[g.dst(h)][src_apex[h][k2][1]];
        }
      if (!ok) fail(r.coherent, "pasting at " + g.edge_name(f) + ";" + g.edge_name(h) + " is not a span morphism");
    }
  return r;
}

UlfFunctor total_functor(const LaxRepTransformation& a) {
  auto rep = validate_lax(a);
  if (!rep.valid) throw std::invalid_argument("total_functor: " + rep.errors.front());
  UlfFunctor s = grothendieck(a.source);
  UlfFunctor t = grothendieck(a.target);
  const auto& g = a.source.control.generators;
  auto toff = offsets(a.target.object_size);
  std::vector<int> tgen_off(g.num_edges() + 1, 0);
  for (int f = 0; f < g.num_edges(); ++f)
    tgen_off[f + 1] = tgen_off[f] + static_cast<int>(a.target.generator_span[f].apex_size());
  UlfFunctor u;
  u.total = s.total;
  u.base = t.total;
  for (int x = 0; x < g.num_vertices(); ++x) {
    auto fn = a.components[x].as_function();
    for (int i = 0; i < a.source.size(x); ++i) u.on_objects.push_back(toff[x] + fn[i]);
  }
  for (int f = 0; f < g.num_edges(); ++f)
    for (int k : a.two_cells[f]) u.on_generators.push_back({tgen_off[f] + k});
  return u;
}

LaxPullback lax_pullback(const LaxRepTransformation& alpha, const LaxRepTransformation& beta) {
  for (const auto* t : {&alpha, &beta}) {
    auto rep = validate_lax(*t);
    if (!rep.valid) throw std::invalid_argument("lax_pullback: " + rep.errors.front());
  }
  const auto& g = alpha.target.control.generators;
  if (!same_shape(g, beta.target.control.generators) || alpha.target.object_size != beta.target.object_size ||
      alpha.target.generator_span != beta.target.generator_span)
    throw std::invalid_argument("lax_pullback: the transformations have different codomains");
  const SpanPseudofunctor& F = alpha.source;
  const SpanPseudofunctor& H = beta.source;
  const SpanPseudofunctor& G = alpha.target;

  LaxPullback out;
  out.object.control = G.control;
  std::vector<std::vector<int>> af(g.num_vertices()), bf(g.num_vertices());
  for (int x = 0; x < g.num_vertices(); ++x) {
    af[x] = alpha.components[x].as_function();
    bf[x] = beta.components[x].as_function();
    out.pairs.push_back(set_pullback(af[x], bf[x]));
    out.object.object_size.push_back(static_cast<int>(out.pairs[x].size()));
    std::vector<std::string> names;
    for (auto [u, v] : out.pairs[x]) names.push_back("(" + F.element_name(x, u) + "," + H.element_name(x, v) + ")");
    out.object.element_names.push_back(std::move(names));
  }

  out.to_left.source = out.to_right.source = out.object;
  out.to_left.target = F;
  out.to_right.target = H;
  for (int x = 0; x < g.num_vertices(); ++x) {
    std::vector<int> l, r;
    for (auto [u, v] : out.pairs[x]) {
      l.push_back(u);
      r.push_back(v);
    }
    out.to_left.components.push_back(FinSpan::of_function(l, F.size(x)));
    out.to_right.components.push_back(FinSpan::of_function(r, H.size(x)));
  }

  for (int f = 0; f < g.num_edges(); ++f) {
    int a = g.src(f), b = g.dst(f);
    auto fa = F.generator_span[f].apex();
    auto ha = H.generator_span[f].apex();
    auto ga = G.generator_span[f].apex();
    std::vector<int> g_left;
    for (const auto& e : ga) g_left.push_back(e[0]);
    // Q' and Q'', with alpha_f and beta_f as maps into them.
    auto q1 = set_pullback(af[a], g_left);
    auto q2 = set_pullback(bf[a], g_left);
    std::vector<int> alpha_f, beta_f, q2a, q2b;
    for (std::size_t k = 0; k < fa.size(); ++k) {
      alpha_f.push_back(index_of(q1, {fa[k][0], alpha.two_cells[f][k]}));
      q2a.push_back(q1[alpha_f.back()].second);
    }
    for (std::size_t k = 0; k < ha.size(); ++k) {
      beta_f.push_back(index_of(q2, {ha[k][0], beta.two_cells[f][k]}));
      q2b.push_back(q2[beta_f.back()].second);
    }
    auto q = set_pullback(q2a, q2b);
    const auto& R = out.pairs[a];
    const auto& S = out.pairs[b];
    FinSpan span(static_cast<int>(R.size()), static_cast<int>(S.size()));
    std::vector<std::pair<int, int>> legs;
    for (auto [k, kk] : q) {
      int r = index_of(R, {q1[alpha_f[k]].first, q2[beta_f[kk]].first});
      int s = index_of(S, {fa[k][1], ha[kk][1]});
      legs.emplace_back(r, s);
      ++span.at(r, s);
    }
    // Canonical apex order: by (r, s), ties in Q order.
    std::vector<int> order(q.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return legs[i] < legs[j]; });
    std::vector<int> cl(q.size()), cr(q.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      cl[pos] = q[order[pos]].first;
      cr[pos] = q[order[pos]].second;
    }
    out.object.generator_span.push_back(span);
    out.to_left.two_cells.push_back(std::move(cl));
    out.to_right.two_cells.push_back(std::move(cr));
  }
  out.to_left.source = out.to_right.source = out.object;
  return out;
}

ReflexiveGraph random_control(std::mt19937_64& rng, int max_objects, int max_edges) {
  ReflexiveGraph g;
  int n = std::uniform_int_distribution<int>(1, max_objects)(rng);
  for (int x = 0; x < n; ++x) g.add_vertex("x" + std::to_string(x));
  int m = std::uniform_int_distribution<int>(0, max_edges)(rng);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int e = 0; e < m; ++e) {
    int s = pick(rng), d = pick(rng);
    g.add_edge(s, d, "f" + std::to_string(e));
  }
  return g;
}

SpanPseudofunctor random_span_pseudofunctor(std::mt19937_64& rng, const PresentedCategory& control, int max_set,
                                            int max_mult) {
  SpanPseudofunctor p;
  p.control = control;
  const auto& g = control.generators;
  std::uniform_int_distribution<int> size(0, max_set), mult(0, max_mult);
  for (int x = 0; x < g.num_vertices(); ++x) p.object_size.push_back(size(rng));
  for (int e = 0; e < g.num_edges(); ++e) {
    FinSpan s(p.size(g.src(e)), p.size(g.dst(e)));
    for (int& v : s.m) v = mult(rng);
    p.generator_span.push_back(std::move(s));
  }
  return p;
}

LaxRepTransformation random_lax_into(std::mt19937_64& rng, const SpanPseudofunctor& target, int max_set,
                                     int max_mult) {
  const auto& g = target.control.generators;
  LaxRepTransformation a;
  a.target = target;
  a.source.control = target.control;
  std::uniform_int_distribution<int> size(0, max_set), mult(0, max_mult);
  std::vector<std::vector<int>> fn(g.num_vertices());
  for (int x = 0; x < g.num_vertices(); ++x) {
    int n = target.size(x) ? size(rng) : 0;
    std::uniform_int_distribution<int> pick(0, std::max(0, target.size(x) - 1));
    for (int i = 0; i < n; ++i) fn[x].push_back(pick(rng));
    a.source.object_size.push_back(n);
    a.components.push_back(FinSpan::of_function(fn[x], target.size(x)));
  }
  for (int f = 0; f < g.num_edges(); ++f) {
    int x = g.src(f), y = g.dst(f);
    auto ga = target.generator_span[f].apex();
    FinSpan s(a.source.size(x), a.source.size(y));
    std::vector<int> cell;
    for (int i = 0; i < s.rows; ++i)
      for (int j = 0; j < s.cols; ++j) {
        std::vector<int> over;
        for (int k = 0; k < static_cast<int>(ga.size()); ++k)
          if (ga[k][0] == fn[x][i] && ga[k][1] == fn[y][j]) over.push_back(k);
        if (over.empty()) continue;
        s.at(i, j) = mult(rng);
        std::uniform_int_distribution<int> pick(0, static_cast<int>(over.size()) - 1);
        for (int c = 0; c < s.at(i, j); ++c) cell.push_back(over[pick(rng)]);
      }
    a.source.generator_span.push_back(std::move(s));
    a.two_cells.push_back(std::move(cell));
  }
  return a;
}

}  // namespace cts
