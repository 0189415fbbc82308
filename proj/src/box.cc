#include "cts/box.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace cts {

namespace {

int gen_dst(const BoxGen& g, int src) {
  if (g.src_dim >= 0 && g.src_dim != src)
    throw std::invalid_argument("box word: dimension mismatch");
  if (g.kind == BoxGen::Kind::coface) {
    if (g.index < 1 || g.index > src + 1)
      throw std::invalid_argument("box word: coface index out of range");
    return src + 1;
  }
  if (g.index < 1 || g.index > src)
    throw std::invalid_argument("box word: codegeneracy index out of range");
  return src - 1;
}

// Rewrites the leftmost non-canonical adjacent pair; false when none left.
bool rewrite_once(std::vector<BoxGen>& w) {
  using K = BoxGen::Kind;
  for (std::size_t p = 0; p + 1 < w.size(); ++p) {
    BoxGen l = w[p];
    BoxGen r = w[p + 1];
    std::vector<BoxGen> repl;
    if (l.kind == K::codegen && r.kind == K::coface) {
      int j = l.index, i = r.index;
      if (i < j)
        repl = {BoxGen::delta(i, r.sign), BoxGen::eps(j - 1)};
      else if (i > j)
        repl = {BoxGen::delta(i - 1, r.sign), BoxGen::eps(j)};
    } else if (l.kind == K::coface && r.kind == K::coface) {
      if (l.index > r.index) continue;
      repl = {BoxGen::delta(r.index + 1, r.sign), BoxGen::delta(l.index, l.sign)};
    } else if (l.kind == K::codegen && r.kind == K::codegen) {
      if (l.index < r.index) continue;
      repl = {BoxGen::eps(r.index), BoxGen::eps(l.index + 1)};
    } else {
      continue;
    }
    w.erase(w.begin() + p, w.begin() + p + 2);
    w.insert(w.begin() + p, repl.begin(), repl.end());
    return true;
  }
  return false;
}

}  // namespace

std::string BoxMorphism::str() const {
  std::ostringstream os;
  os << "2^" << src_dim << "->2^" << dst_dim << " ";
  bool first = true;
  for (auto [j, s] : cofaces) {
    os << (first ? "" : ".") << "d" << j << sign_char(s);
    first = false;
  }
  for (int i : codegens) {
    os << (first ? "" : ".") << "e" << i;
    first = false;
  }
  if (first) os << "id";
  return os.str();
}

int word_dst_dim(const BoxWord& w) {
  int d = w.src_dim;
  for (auto it = w.gens.rbegin(); it != w.gens.rend(); ++it) d = gen_dst(*it, d);
  return d;
}

BoxMorphism normalize_box(const BoxWord& w) {
  BoxMorphism out;
  out.src_dim = w.src_dim;
  out.dst_dim = word_dst_dim(w);
  std::vector<BoxGen> g = w.gens;
  for (auto& x : g) x.src_dim = -1;
  while (rewrite_once(g)) {
  }
  for (const auto& x : g) {
    if (x.kind == BoxGen::Kind::coface)
      out.cofaces.emplace_back(x.index, x.sign);
    else
      out.codegens.push_back(x.index);
  }
  return out;
}

bool is_canonical(const BoxMorphism& f) {
  for (std::size_t k = 0; k + 1 < f.cofaces.size(); ++k)
    if (f.cofaces[k].first <= f.cofaces[k + 1].first) return false;
  for (std::size_t k = 0; k + 1 < f.codegens.size(); ++k)
    if (f.codegens[k] >= f.codegens[k + 1]) return false;
  int mid = f.src_dim - static_cast<int>(f.codegens.size());
  if (mid < 0 || f.dst_dim - static_cast<int>(f.cofaces.size()) != mid) return false;
  for (int i : f.codegens)
    if (i < 1 || i > f.src_dim) return false;
  for (auto [j, s] : f.cofaces)
    if (j < 1 || j > f.dst_dim) return false;
  return true;
}

Bits apply_gen(const BoxGen& g, const Bits& x) {
  Bits y = x;
  if (g.kind == BoxGen::Kind::coface)
    y.insert(y.begin() + (g.index - 1), static_cast<std::uint8_t>(bit(g.sign)));
  else
    y.erase(y.begin() + (g.index - 1));
  return y;
}

Bits realize_word(const BoxWord& w, const Bits& x) {
  Bits y = x;
  for (auto it = w.gens.rbegin(); it != w.gens.rend(); ++it) y = apply_gen(*it, y);
  return y;
}

BoxWord to_word(const BoxMorphism& f) {
  BoxWord w;
  w.src_dim = f.src_dim;
  for (auto [j, s] : f.cofaces) w.gens.push_back(BoxGen::delta(j, s));
  for (int i : f.codegens) w.gens.push_back(BoxGen::eps(i));
  return w;
}

Bits realize_box(const BoxMorphism& f, const Bits& x) { return realize_word(to_word(f), x); }

std::vector<std::uint32_t> realize_table(const BoxMorphism& f) {
  std::vector<std::uint32_t> t(std::size_t{1} << f.src_dim);
  for (std::uint32_t v = 0; v < t.size(); ++v) {
    Bits x(f.src_dim);
    for (int i = 0; i < f.src_dim; ++i) x[i] = (v >> i) & 1u;
    Bits y = realize_box(f, x);
    std::uint32_t r = 0;
    for (std::size_t i = 0; i < y.size(); ++i) r |= std::uint32_t{y[i]} << i;
    t[v] = r;
  }
  return t;
}

BoxMorphism compose(const BoxMorphism& f, const BoxMorphism& g) {
  if (g.dst_dim != f.src_dim) throw std::invalid_argument("compose: dimension mismatch");
  BoxWord w = to_word(g);
  BoxWord wf = to_word(f);
  w.gens.insert(w.gens.begin(), wf.gens.begin(), wf.gens.end());
  return normalize_box(w);
}

std::vector<BoxMorphism> all_canonical(int m, int n) {
  std::vector<BoxMorphism> out;
  for (int k = 0; k <= std::min(m, n); ++k) {
    int t = m - k, s = n - k;
    // ascending subsets of size t from 1..m, descending subsets of size s
    // from 1..n with a sign each
    std::vector<int> del(m);
    for (int i = 0; i < m; ++i) del[i] = i < t ? 1 : 0;
    std::sort(del.begin(), del.end());
    do {
      std::vector<int> eps;
      for (int i = 0; i < m; ++i)
        if (del[i]) eps.push_back(i + 1);
      std::vector<int> ins(n);
      for (int j = 0; j < n; ++j) ins[j] = j < s ? 1 : 0;
      std::sort(ins.begin(), ins.end());
      do {
        std::vector<int> pos;
        for (int j = n - 1; j >= 0; --j)
          if (ins[j]) pos.push_back(j + 1);
        for (std::uint32_t signs = 0; signs < (1u << s); ++signs) {
          BoxMorphism f;
          f.src_dim = m;
          f.dst_dim = n;
          f.codegens = eps;
          for (int q = 0; q < s; ++q)
            f.cofaces.emplace_back(pos[q], (signs >> q) & 1u ? Sign::plus : Sign::minus);
          out.push_back(std::move(f));
        }
      } while (std::next_permutation(ins.begin(), ins.end()));
    } while (std::next_permutation(del.begin(), del.end()));
  }
  return out;
}

}  // namespace cts
