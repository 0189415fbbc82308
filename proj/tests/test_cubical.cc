#include <doctest.h>

#include <map>
#include <random>

#include "cts/cubical.hpp"

using namespace cts;

namespace {

long binom(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Reflexive graph as a 1-truncated cubical set; edges given as (src,dst).
CubicalSet graph_set(int nv, const std::vector<std::pair<int, int>>& edges) {
  CubicalSet g(1);
  for (int v = 0; v < nv; ++v) g.add_cell(0, "v" + std::to_string(v));
  for (std::size_t e = 0; e < edges.size(); ++e)
    g.add_cell(1, "e" + std::to_string(e),
               {CubicalSet::cell(0, edges[e].first), CubicalSet::cell(0, edges[e].second)});
  return g;
}

// Brute force: all cubical maps from s into x, as per-dim assignments. Cells
// of s are assigned arbitrary cells of x of the same dimension; faces must
// commute.
void all_maps(const CubicalSet& s, const CubicalSet& x, int upto,
              std::vector<std::vector<CellRef>>& cur, std::vector<std::vector<std::vector<CellRef>>>& out) {
  int d = static_cast<int>(cur.size()) - 1;
  if (d >= 0 && static_cast<int>(cur[d].size()) == s.count(d)) {
    if (d == upto) {
      out.push_back(cur);
      return;
    }
    cur.emplace_back();
    all_maps(s, x, upto, cur, out);
    cur.pop_back();
    return;
  }
  if (d < 0) {
    cur.emplace_back();
    all_maps(s, x, upto, cur, out);
    cur.pop_back();
    return;
  }
  int c = static_cast<int>(cur[d].size());
  for (const CellRef& cand : x.all_cells(d)) {
    bool ok = true;
    for (int i = 1; i <= d && ok; ++i)
      for (Sign w : {Sign::minus, Sign::plus}) {
        CellRef f = s.faces_of(d, c)[face_slot(i, w)];
        const CellRef& img = cur[f.base_dim()][f.base];
        CellRef mapped{d - 1, img.base, compose_degens(f.degens, img.degens)};
        if (mapped != x.face(cand, i, w)) {
          ok = false;
          break;
        }
      }
    if (!ok) continue;
    cur[d].push_back(cand);
    all_maps(s, x, upto, cur, out);
    cur[d].pop_back();
  }
}

}  // namespace

TEST_CASE("standard cubes have the expected cell counts") {
  for (int k = 0; k <= 4; ++k) {
    CubicalSet q = standard_cube(k);
    for (int p = 0; p <= k; ++p) CHECK(q.count(p) == (1L << (k - p)) * binom(k, p));
    CHECK(validate(q).empty());
  }
  CubicalSet b = cube_boundary(2);
  CHECK(b.count(0) == 4);
  CHECK(b.count(1) == 4);
  CHECK(b.count(2) == 0);
  CHECK(validate(b).empty());
}

TEST_CASE("validate reports a corrupted face") {
  CubicalSet q = standard_cube(2);
  CHECK(validate(q).empty());
  int s2 = *q.find(2, "[**]");
  q.set_face(2, s2, 1, Sign::minus, CubicalSet::cell(1, *q.find(1, "[1*]")));
  auto rep = validate(q);
  REQUIRE_FALSE(rep.empty());
  CHECK(rep.front().find("identity (i)") != std::string::npos);
}

TEST_CASE("identity map is natural") {
  auto q = std::make_shared<CubicalSet>(standard_cube(3));
  CHECK(validate(identity_map(q)).empty());
}

TEST_CASE("apply_cell_map follows the cubical identities") {
  CubicalSet q = standard_cube(2, 3);
  CellRef s2 = CubicalSet::cell(2, *q.find(2, "[**]"));
  CellRef f = apply_cell_map(q, {CellMapKind::Kind::face, 1, Sign::minus}, s2);
  CHECK(q.describe(f) == "[0*]");
  for (int i = 1; i <= 3; ++i) {
    CellRef d = apply_cell_map(q, {CellMapKind::Kind::degeneracy, i, Sign::minus}, s2);
    for (Sign w : {Sign::minus, Sign::plus}) CHECK(apply_cell_map(q, {CellMapKind::Kind::face, i, w}, d) == s2);
  }
  CellRef x = CubicalSet::cell(0, 0);
  CellRef e1 = q.degeneracy(x, 1);
  CellRef e11 = q.degeneracy(e1, 1);
  CHECK(e11.base == x.base);
  CHECK(e11.degens == std::vector<int>{1, 2});
  CHECK_THROWS(q.face(s2, 3, Sign::minus));
}

TEST_CASE("cubical kernel: small cases") {
  CubicalSet pt(1);
  pt.add_cell(0, "x");
  CHECK(cubical_kernel(pt, 1).size() == 1);

  CubicalSet q1 = truncate(standard_cube(2), 1);
  CubicalSet q = standard_cube(2);
  Shell bd = q.boundary(CubicalSet::cell(2, 0));
  auto shells = cubical_kernel(q1, 1);
  CHECK(std::find(shells.begin(), shells.end(), bd) != shells.end());

  // one edge a -> b; brute force over the three 1-cells by endpoints
  CubicalSet g = graph_set(2, {{0, 1}});
  std::vector<std::pair<int, int>> ends{{0, 0}, {1, 1}, {0, 1}};  // id_a, id_b, e
  int brute = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) {
          // y1-=a, y1+=b, y2-=c, y2+=d ; d_1^w(y_2^w') = d_1^w'(y_1^w)
          auto end = [&](int e, int w) { return w ? ends[e].second : ends[e].first; };
          int y1[2] = {a, b}, y2[2] = {c, d};
          bool ok = true;
          for (int w = 0; w < 2; ++w)
            for (int w2 = 0; w2 < 2; ++w2)
              if (end(y2[w2], w) != end(y1[w], w2)) ok = false;
          brute += ok;
        }
  CHECK(static_cast<int>(cubical_kernel(g, 1).size()) == brute);
  CHECK(brute == 6);
}

TEST_CASE("coskeleton examples") {
  CubicalSet pt(0);
  pt.add_cell(0, "x");
  CubicalSet c = coskeleton(pt, 0, 3);
  CHECK(c.count(0) == 1);
  for (int d = 1; d <= 3; ++d) CHECK(c.count(d) == 0);

  // interval graph: 6 monotone squares, two of them non-degenerate
  CubicalSet iv = graph_set(2, {{0, 1}});
  CubicalSet ci = coskeleton(iv, 1, 2);
  CHECK(cubical_kernel(truncate(ci, 1), 1).size() == 6);
  CHECK(ci.count(2) == 2);
  CHECK(validate(ci).empty());

  CubicalSet b1 = truncate(cube_boundary(2), 1);
  CubicalSet cb = coskeleton(b1, 1, 2);
  CubicalSet q = standard_cube(2);
  bool found = false;
  for (int i = 0; i < cb.count(2); ++i) {
    std::vector<std::string> names;
    for (const auto& f : cb.faces_of(2, i)) names.push_back(cb.describe(f));
    if (names == std::vector<std::string>{"[0*]", "[1*]", "[*0]", "[*1]"}) found = true;
  }
  CHECK(found);
  CHECK(validate(cb).empty());
}

TEST_CASE("coskeleton keeps low dimensions and is idempotent") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 8; ++trial) {
    int nv = 1 + static_cast<int>(rng() % 3);
    std::vector<std::pair<int, int>> edges;
    int ne = static_cast<int>(rng() % 4);
    for (int e = 0; e < ne; ++e) edges.emplace_back(rng() % nv, rng() % nv);
    CubicalSet g = graph_set(nv, edges);
    CubicalSet c = coskeleton(g, 1, 3);
    CHECK(validate(c).empty());
    CHECK(c.count(0) == g.count(0));
    CHECK(c.count(1) == g.count(1));
    CubicalSet again = coskeleton(truncate(c, 2), 2, 3);
    CHECK(again.count(3) == c.count(3));
    CubicalSet again1 = coskeleton(truncate(c, 1), 1, 3);
    for (int d = 0; d <= 3; ++d) CHECK(again1.count(d) == c.count(d));
  }
}

TEST_CASE("boundaries extend uniquely into a coskeleton") {
  std::vector<CubicalSet> graphs{graph_set(2, {{0, 1}}), graph_set(2, {{0, 1}, {0, 1}}),
                                 graph_set(1, {{0, 0}}), graph_set(3, {{0, 1}, {1, 2}, {0, 2}})};
  for (const auto& g : graphs)
    for (int k = 2; k <= 3; ++k) {
      CubicalSet x = coskeleton(g, 1, 3);
      CubicalSet bd = cube_boundary(k);
      std::vector<std::vector<CellRef>> cur;
      std::vector<std::vector<std::vector<CellRef>>> maps;
      all_maps(bd, x, k - 1, cur, maps);
      REQUIRE_FALSE(maps.empty());
      CubicalSet q = standard_cube(k);
      const auto& top_faces = q.faces_of(k, 0);
      for (const auto& m : maps) {
        Shell want;
        for (const auto& f : top_faces) {
          const CellRef& img = m[f.base_dim()][f.base];
          want.push_back(CellRef{k - 1, img.base, compose_degens(f.degens, img.degens)});
        }
        int fillers = 0;
        for (const CellRef& c : x.all_cells(k)) fillers += x.boundary(c) == want;
        CHECK(fillers == 1);
      }
    }
}

TEST_CASE("dom and cod of the standard cube") {
  for (int k = 1; k <= 4; ++k) {
    CubicalSet q = standard_cube(k);
    CellRef top = CubicalSet::cell(k, 0);
    CHECK(q.describe(dom_n(q, top)) == "[" + std::string(k, '0') + "]");
    CHECK(q.describe(cod_n(q, top)) == "[" + std::string(k, '1') + "]");
  }
}
