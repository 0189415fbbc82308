#include "cts/cubical.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <omp.h>

namespace cts {

namespace {

void combinations(int n, int r, std::vector<std::vector<int>>& out) {
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == r) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i <= n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 1);
}

std::string sign_str(Sign s) { return std::string(1, sign_char(s)); }

}  // namespace

std::vector<int> compose_degens(const std::vector<int>& outer, const std::vector<int>& inner) {
  if (inner.empty()) return outer;
  int need = *std::max_element(inner.begin(), inner.end());
  std::vector<int> remaining;
  std::size_t o = 0;
  for (int v = 1; static_cast<int>(remaining.size()) < need; ++v) {
    if (o < outer.size() && outer[o] == v) {
      ++o;
      continue;
    }
    remaining.push_back(v);
  }
  std::vector<int> out = outer;
  for (int k : inner) out.push_back(remaining[k - 1]);
  std::sort(out.begin(), out.end());
  return out;
}

CubicalSet::CubicalSet(int trunc_dim) { set_trunc_dim(trunc_dim); }

void CubicalSet::set_trunc_dim(int d) {
  if (d < 0) throw std::invalid_argument("negative truncation dimension");
  names_.resize(d + 1);
  faces_.resize(d + 1);
  index_.resize(d + 1);
}

int CubicalSet::add_cell(int dim, std::string name, std::vector<CellRef> faces) {
  if (dim < 0 || dim > trunc_dim()) throw std::out_of_range("add_cell: dimension above truncation");
  if (static_cast<int>(faces.size()) != 2 * dim) throw std::invalid_argument("add_cell: wrong number of faces");
  if (index_[dim].count(name)) throw std::invalid_argument("add_cell: duplicate cell name " + name);
  int id = static_cast<int>(names_[dim].size());
  index_[dim].emplace(name, id);
  names_[dim].push_back(std::move(name));
  faces_[dim].push_back(std::move(faces));
  return id;
}

int CubicalSet::count(int dim) const {
  if (dim < 0 || dim > trunc_dim()) return 0;
  return static_cast<int>(names_[dim].size());
}

std::optional<int> CubicalSet::find(int dim, const std::string& name) const {
  if (dim < 0 || dim > trunc_dim()) return std::nullopt;
  auto it = index_[dim].find(name);
  if (it == index_[dim].end()) return std::nullopt;
  return it->second;
}

CellRef CubicalSet::face(const CellRef& c, int j, Sign s) const {
  if (j < 1 || j > c.dim) throw std::out_of_range("face index out of range");
  std::vector<int> shifted;
  int before = 0;
  bool hit = false;
  for (int i : c.degens) {
    if (i < j) {
      shifted.push_back(i);
      ++before;
    } else if (i == j) {
      hit = true;
    } else {
      shifted.push_back(i - 1);
    }
  }
  if (hit) return CellRef{c.dim - 1, c.base, shifted};
  const CellRef& f = faces_of(c.base_dim(), c.base).at(face_slot(j - before, s));
  return CellRef{c.dim - 1, f.base, compose_degens(shifted, f.degens)};
}

CellRef CubicalSet::degeneracy(const CellRef& c, int j) const {
  if (j < 1 || j > c.dim + 1) throw std::out_of_range("degeneracy index out of range");
  return CellRef{c.dim + 1, c.base, compose_degens({j}, c.degens)};
}

Shell CubicalSet::boundary(const CellRef& c) const {
  Shell s;
  for (int i = 1; i <= c.dim; ++i)
    for (Sign w : {Sign::minus, Sign::plus}) s.push_back(face(c, i, w));
  return s;
}

std::vector<CellRef> CubicalSet::all_cells(int n) const {
  std::vector<CellRef> out;
  for (int k = n; k >= 0; --k) {
    if (k > trunc_dim()) continue;
    std::vector<std::vector<int>> subsets;
    combinations(n, n - k, subsets);
    for (int b = 0; b < count(k); ++b)
      for (const auto& sub : subsets) out.push_back(CellRef{n, b, sub});
  }
  return out;
}

std::string CubicalSet::describe(const CellRef& c) const {
  std::ostringstream os;
  if (!c.degens.empty()) {
    os << "e";
    for (std::size_t k = 0; k < c.degens.size(); ++k) os << (k ? "," : "") << c.degens[k];
    os << "(";
  }
  if (c.base_dim() >= 0 && c.base_dim() <= trunc_dim() && c.base < count(c.base_dim()))
    os << name(c.base_dim(), c.base);
  else
    os << "?" << c.base;
  if (!c.degens.empty()) os << ")";
  return os.str();
}

CellRef apply_cell_map(const CubicalSet& k, CellMapKind kind, const CellRef& c) {
  if (kind.kind == CellMapKind::Kind::face) return k.face(c, kind.index, kind.sign);
  return k.degeneracy(c, kind.index);
}

CellRef CubicalMap::apply(const CellRef& c) const {
  const CellRef& img = assignment.at(c.base_dim()).at(c.base);
  return CellRef{c.dim, img.base, compose_degens(c.degens, img.degens)};
}

CubicalMap identity_map(std::shared_ptr<const CubicalSet> k) {
  CubicalMap f;
  f.source = k;
  f.target = k;
  f.assignment.resize(k->trunc_dim() + 1);
  for (int d = 0; d <= k->trunc_dim(); ++d)
    for (int c = 0; c < k->count(d); ++c) f.assignment[d].push_back(CubicalSet::cell(d, c));
  return f;
}

namespace {

bool well_formed_ref(const CubicalSet& k, const CellRef& r, int dim) {
  if (r.dim != dim) return false;
  int bd = r.base_dim();
  if (bd < 0 || bd > k.trunc_dim() || r.base < 0 || r.base >= k.count(bd)) return false;
  for (std::size_t i = 0; i < r.degens.size(); ++i) {
    if (r.degens[i] < 1 || r.degens[i] > dim) return false;
    if (i && r.degens[i] <= r.degens[i - 1]) return false;
  }
  return true;
}

}  // namespace

std::vector<std::string> validate(const CubicalSet& k) {
  std::vector<std::string> rep;
  for (int d = 1; d <= k.trunc_dim(); ++d)
    for (int c = 0; c < k.count(d); ++c) {
      const auto& fs = k.faces_of(d, c);
      for (std::size_t q = 0; q < fs.size(); ++q)
        if (!well_formed_ref(k, fs[q], d - 1))
          rep.push_back("malformed face " + std::to_string(q / 2 + 1) + " of " + k.name(d, c));
    }
  if (!rep.empty()) return rep;
  for (int d = 2; d <= k.trunc_dim(); ++d)
    for (int c = 0; c < k.count(d); ++c) {
      CellRef x = CubicalSet::cell(d, c);
      for (int i = 1; i <= d; ++i)
        for (int j = i + 1; j <= d; ++j)
          for (Sign w : {Sign::minus, Sign::plus})
            for (Sign w2 : {Sign::minus, Sign::plus}) {
              CellRef lhs = k.face(k.face(x, j, w2), i, w);
              CellRef rhs = k.face(k.face(x, i, w), j - 1, w2);
              if (lhs != rhs)
                rep.push_back("identity (i) violated at " + k.name(d, c) + ": d" + std::to_string(i) +
                              sign_str(w) + " d" + std::to_string(j) + sign_str(w2));
            }
    }
  // identities (ii) and (iii) on one level of degeneracies
  for (int d = 0; d < k.trunc_dim(); ++d)
    for (const CellRef& x : k.all_cells(d)) {
      if (x.degens.size() > 1) continue;
      for (int j = 1; j <= d + 1; ++j) {
        CellRef ex = k.degeneracy(x, j);
        for (int i = 1; i <= j; ++i)
          if (k.degeneracy(ex, i) != k.degeneracy(k.degeneracy(x, i), j + 1))
            rep.push_back("identity (ii) violated at " + k.describe(x));
        for (int i = 1; i <= d + 1; ++i)
          for (Sign w : {Sign::minus, Sign::plus}) {
            CellRef lhs = k.face(ex, i, w);
            CellRef rhs = i < j   ? k.degeneracy(k.face(x, i, w), j - 1)
                          : i > j ? k.degeneracy(k.face(x, i - 1, w), j)
                                  : x;
            if (lhs != rhs) rep.push_back("identity (iii) violated at " + k.describe(x));
          }
      }
    }
  return rep;
}

std::vector<std::string> validate(const CubicalMap& f) {
  std::vector<std::string> rep;
  const CubicalSet& s = *f.source;
  const CubicalSet& t = *f.target;
  if (static_cast<int>(f.assignment.size()) != s.trunc_dim() + 1) {
    rep.push_back("assignment does not cover every dimension");
    return rep;
  }
  for (int d = 0; d <= s.trunc_dim(); ++d) {
    if (static_cast<int>(f.assignment[d].size()) != s.count(d)) {
      rep.push_back("assignment incomplete in dimension " + std::to_string(d));
      return rep;
    }
    for (const auto& img : f.assignment[d])
      if (!well_formed_ref(t, img, d)) {
        rep.push_back("assignment target malformed in dimension " + std::to_string(d));
        return rep;
      }
  }
  for (int d = 1; d <= s.trunc_dim(); ++d)
    for (int c = 0; c < s.count(d); ++c) {
      CellRef x = CubicalSet::cell(d, c);
      for (int i = 1; i <= d; ++i)
        for (Sign w : {Sign::minus, Sign::plus})
          if (f.apply(s.face(x, i, w)) != t.face(f.apply(x), i, w))
            rep.push_back("map does not commute with d" + std::to_string(i) + sign_str(w) + " at " + s.name(d, c));
    }
  for (int d = 0; d < s.trunc_dim(); ++d)
    for (int c = 0; c < s.count(d); ++c) {
      CellRef x = CubicalSet::cell(d, c);
      for (int j = 1; j <= d + 1; ++j)
        if (f.apply(s.degeneracy(x, j)) != t.degeneracy(f.apply(x), j))
          rep.push_back("map does not commute with e" + std::to_string(j) + " at " + s.name(d, c));
    }
  return rep;
}

namespace {

struct KernelIndex {
  std::vector<CellRef> cells;                 // n-cells
  std::vector<std::vector<int>> faces;        // per n-cell, faces as (n-1)-cell indices
  std::vector<std::vector<int>> by_first;     // (n-1)-cell -> n-cells with that d1- face
};

KernelIndex build_index(const CubicalSet& y, int n) {
  KernelIndex ix;
  ix.cells = y.all_cells(n);
  if (n == 0) return ix;
  std::vector<CellRef> lower = y.all_cells(n - 1);
  std::map<CellRef, int> pos;
  for (std::size_t i = 0; i < lower.size(); ++i) pos.emplace(lower[i], static_cast<int>(i));
  ix.by_first.resize(lower.size());
  ix.faces.resize(ix.cells.size());
  for (std::size_t c = 0; c < ix.cells.size(); ++c) {
    for (int i = 1; i <= n; ++i)
      for (Sign w : {Sign::minus, Sign::plus}) ix.faces[c].push_back(pos.at(y.face(ix.cells[c], i, w)));
    ix.by_first[ix.faces[c][0]].push_back(static_cast<int>(c));
  }
  return ix;
}

// Depth-first completion of a shell whose first slot is fixed.
void extend(const KernelIndex& ix, int n, const KernelOptions& opt, std::vector<int>& chosen,
            std::vector<Shell>& out) {
  const int slots = 2 * (n + 1);
  int q = static_cast<int>(chosen.size());
  if (q == slots) {
    Shell s;
    for (int c : chosen) s.push_back(ix.cells[c]);
    if (!opt.keep || opt.keep(s)) out.push_back(std::move(s));
    return;
  }
  int j = q / 2 + 1;
  int wj = q % 2;
  auto ok = [&](int cand) {
    for (int i = 1; i < j; ++i)
      for (int wi = 0; wi < 2; ++wi) {
        int yi = chosen[2 * (i - 1) + wi];
        if (ix.faces[cand][2 * (i - 1) + wi] != ix.faces[yi][2 * (j - 2) + wj]) return false;
      }
    if (wj == 1 && opt.opposite && !opt.opposite(ix.cells[chosen[q - 1]], ix.cells[cand])) return false;
    return true;
  };
  if (j == 1) {
    for (std::size_t cand = 0; cand < ix.cells.size(); ++cand) {
      if (!ok(static_cast<int>(cand))) continue;
      chosen.push_back(static_cast<int>(cand));
      extend(ix, n, opt, chosen, out);
      chosen.pop_back();
    }
    return;
  }
  // d1^-(y_j^w) must equal d_{j-1}^w(y_1^-)
  int key = ix.faces[chosen[0]][2 * (j - 2) + wj];
  for (int cand : ix.by_first[key]) {
    if (!ok(cand)) continue;
    chosen.push_back(cand);
    extend(ix, n, opt, chosen, out);
    chosen.pop_back();
  }
}

}  // namespace

std::vector<Shell> cubical_kernel(const CubicalSet& y, int n, const KernelOptions& opt) {
  if (n < 0 || n > y.trunc_dim()) throw std::out_of_range("cubical_kernel: dimension not stored");
  KernelIndex ix = build_index(y, n);
  const int roots = static_cast<int>(ix.cells.size());
  std::vector<std::vector<Shell>> parts(roots);
  if (opt.parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < roots; ++r) {
      std::vector<int> chosen{r};
      extend(ix, n, opt, chosen, parts[r]);
    }
  } else {
    for (int r = 0; r < roots; ++r) {
      std::vector<int> chosen{r};
      extend(ix, n, opt, chosen, parts[r]);
    }
  }
  std::vector<Shell> out;
  for (auto& p : parts)
    for (auto& s : p) out.push_back(std::move(s));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Shell> cubical_kernel(const CubicalSet& y, int n) { return cubical_kernel(y, n, KernelOptions{}); }

std::vector<Shell> cubical_kernel_serial(const CubicalSet& y, int n) {
  KernelOptions opt;
  opt.parallel = false;
  return cubical_kernel(y, n, opt);
}

bool shell_is_degenerate(const CubicalSet& y, const Shell& s) {
  int k = static_cast<int>(s.size()) / 2;
  for (int j = 1; j <= k; ++j) {
    const CellRef& z = s[face_slot(j, Sign::minus)];
    if (z != s[face_slot(j, Sign::plus)]) continue;
    if (y.boundary(y.degeneracy(z, j)) == s) return true;
  }
  return false;
}

CubicalSet truncate(const CubicalSet& k, int d) {
  CubicalSet out(d);
  for (int e = 0; e <= std::min(d, k.trunc_dim()); ++e)
    for (int c = 0; c < k.count(e); ++c) out.add_cell(e, k.name(e, c), k.faces_of(e, c));
  return out;
}

CubicalSet coskeleton(const CubicalSet& k, int n, int D) {
  if (k.trunc_dim() < n) throw std::invalid_argument("coskeleton: input truncated below n");
  CubicalSet x = truncate(k, n);
  for (int d = n + 1; d <= D; ++d) {
    std::vector<Shell> shells = cubical_kernel(x, d - 1);
    x.set_trunc_dim(d);
    int idx = 0;
    for (auto& s : shells) {
      if (shell_is_degenerate(x, s)) continue;
      x.add_cell(d, "c" + std::to_string(d) + "_" + std::to_string(idx++), std::move(s));
    }
  }
  if (D < n) x = truncate(x, D);
  return x;
}

std::string cube_word_name(const std::string& word) { return "[" + word + "]"; }

CubicalSet standard_cube(int k, int trunc) {
  if (k < 0) throw std::invalid_argument("standard_cube: negative dimension");
  int D = std::max(k, trunc);
  CubicalSet out(D);
  std::vector<std::string> words{""};
  for (int i = 0; i < k; ++i) {
    std::vector<std::string> next;
    for (const auto& w : words)
      for (char ch : {'*', '0', '1'}) next.push_back(w + ch);
    words = std::move(next);
  }
  std::sort(words.begin(), words.end());
  for (int p = 0; p <= k; ++p)
    for (const auto& w : words) {
      if (std::count(w.begin(), w.end(), '*') != p) continue;
      std::vector<CellRef> faces;
      for (int i = 1; i <= p; ++i)
        for (char ch : {'0', '1'}) {
          std::string f = w;
          int seen = 0;
          for (auto& c : f)
            if (c == '*' && ++seen == i) {
              c = ch;
              break;
            }
          faces.push_back(CubicalSet::cell(p - 1, *out.find(p - 1, cube_word_name(f))));
        }
      out.add_cell(p, cube_word_name(w), std::move(faces));
    }
  return out;
}

CubicalSet cube_boundary(int k, int trunc) {
  CubicalSet full = standard_cube(k, trunc);
  CubicalSet out(full.trunc_dim());
  for (int d = 0; d <= full.trunc_dim(); ++d)
    for (int c = 0; c < full.count(d); ++c)
      if (d < k) out.add_cell(d, full.name(d, c), full.faces_of(d, c));
  return out;
}

CellRef dom_n(const CubicalSet& k, const CellRef& c) {
  CellRef x = c;
  while (x.dim > 0) x = k.face(x, 1, Sign::minus);
  return x;
}

CellRef cod_n(const CubicalSet& k, const CellRef& c) {
  CellRef x = c;
  while (x.dim > 0) x = k.face(x, 1, Sign::plus);
  return x;
}

}  // namespace cts
