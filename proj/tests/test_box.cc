#include <doctest.h>

#include <set>
#include <stdexcept>

#include "cts/box.hpp"

using namespace cts;

namespace {

// Every composable word of length <= max_len with all intermediate
// dimensions <= max_dim, starting anywhere in 0..max_dim.
std::vector<BoxWord> all_words(int max_len, int max_dim) {
  std::vector<BoxWord> out;
  for (int src = 0; src <= max_dim; ++src) {
    // gens stored in application order, reversed at the end
    std::vector<std::pair<std::vector<BoxGen>, int>> layer{{{}, src}};
    for (int len = 0; len <= max_len; ++len) {
      std::vector<std::pair<std::vector<BoxGen>, int>> next;
      for (auto& [applied, d] : layer) {
        BoxWord w;
        w.src_dim = src;
        w.gens.assign(applied.rbegin(), applied.rend());
        out.push_back(w);
        if (len == max_len) continue;
        if (d + 1 <= max_dim)
          for (int i = 1; i <= d + 1; ++i)
            for (Sign s : {Sign::minus, Sign::plus}) {
              auto a = applied;
              a.push_back(BoxGen::delta(i, s));
              next.emplace_back(a, d + 1);
            }
        for (int i = 1; i <= d; ++i) {
          auto a = applied;
          a.push_back(BoxGen::eps(i));
          next.emplace_back(a, d - 1);
        }
      }
      layer = std::move(next);
    }
  }
  return out;
}

std::vector<Bits> all_bits(int m) {
  std::vector<Bits> out;
  for (std::uint32_t v = 0; v < (1u << m); ++v) {
    Bits x(m);
    for (int i = 0; i < m; ++i) x[i] = (v >> i) & 1u;
    out.push_back(x);
  }
  return out;
}

// Box maps 2^m -> 2^n as functions: every output coordinate is a constant or
// an input coordinate, the input coordinates used strictly increasing.
std::set<std::vector<std::uint32_t>> brute_box_tables(int m, int n) {
  std::set<std::vector<std::uint32_t>> out;
  std::vector<int> choice(n, 0);  // 0 -> const 0, 1 -> const 1, 2+k -> input k
  auto rec = [&](auto&& self, int pos, int last) -> void {
    if (pos == n) {
      std::vector<std::uint32_t> t(1u << m);
      for (std::uint32_t v = 0; v < t.size(); ++v) {
        std::uint32_t r = 0;
        for (int j = 0; j < n; ++j) {
          int c = choice[j];
          std::uint32_t b = c < 2 ? static_cast<std::uint32_t>(c) : (v >> (c - 2)) & 1u;
          r |= b << j;
        }
        t[v] = r;
      }
      out.insert(t);
      return;
    }
    for (int c = 0; c < 2 + m; ++c) {
      if (c >= 2 && c - 2 <= last) continue;
      choice[pos] = c;
      self(self, pos + 1, c >= 2 ? c - 2 : last);
    }
  };
  rec(rec, 0, -1);
  return out;
}

}  // namespace

TEST_CASE("normalize_box: worked identities") {
  BoxWord w1{0, {BoxGen::eps(1), BoxGen::delta(1, Sign::minus)}};
  BoxMorphism f1 = normalize_box(w1);
  CHECK(f1.is_identity());
  CHECK(f1.src_dim == 0);
  CHECK(f1.dst_dim == 0);

  BoxWord w2{1, {BoxGen::eps(2), BoxGen::delta(1, Sign::minus)}};
  BoxMorphism f2 = normalize_box(w2);
  CHECK(f2.cofaces == std::vector<std::pair<int, Sign>>{{1, Sign::minus}});
  CHECK(f2.codegens == std::vector<int>{1});

  BoxWord w3{0, {BoxGen::delta(1, Sign::minus), BoxGen::delta(1, Sign::plus)}};
  BoxMorphism f3 = normalize_box(w3);
  CHECK(f3.cofaces == std::vector<std::pair<int, Sign>>{{2, Sign::plus}, {1, Sign::minus}});
  CHECK(f3.codegens.empty());
  CHECK(realize_box(f3, {}) == realize_word(w3, {}));
  CHECK(realize_box(f3, {}) == Bits{0, 1});
}

TEST_CASE("normalize_box: dimension errors") {
  BoxWord bad{1, {BoxGen::eps(3)}};
  CHECK_THROWS_AS(normalize_box(bad), std::invalid_argument);
  BoxWord mism{1, {BoxGen::eps(1, 3), BoxGen::delta(1, Sign::plus, 1)}};
  CHECK_THROWS_AS(normalize_box(mism), std::invalid_argument);
}

TEST_CASE("realize_box examples") {
  BoxMorphism d1p{0, 1, {{1, Sign::plus}}, {}};
  CHECK(realize_box(d1p, {}) == Bits{1});
  BoxMorphism id2{2, 2, {}, {}};
  for (const auto& x : all_bits(2)) CHECK(realize_box(id2, x) == x);
  BoxMorphism e1{2, 1, {}, {1}};
  CHECK(realize_box(e1, {0, 1}) == Bits{1});
}

TEST_CASE("normal forms agree with composed generators, exhaustively") {
  auto words = all_words(4, 4);
  CHECK(words.size() > 1000);
  for (const auto& w : words) {
    BoxMorphism f = normalize_box(w);
    REQUIRE(is_canonical(f));
    for (const auto& x : all_bits(w.src_dim)) REQUIRE(realize_box(f, x) == realize_word(w, x));
  }
}

TEST_CASE("canonical forms are unique and exhaust the box maps") {
  for (int m = 0; m <= 4; ++m)
    for (int n = 0; n <= 4; ++n) {
      auto forms = all_canonical(m, n);
      std::set<std::vector<std::uint32_t>> tables;
      for (const auto& f : forms) {
        REQUIRE(is_canonical(f));
        tables.insert(realize_table(f));
      }
      CHECK(tables.size() == forms.size());
      CHECK(tables == brute_box_tables(m, n));
    }
}

TEST_CASE("compose is associative on small dims") {
  auto a = all_canonical(1, 2), b = all_canonical(2, 2), c = all_canonical(2, 1);
  for (const auto& f : c)
    for (const auto& g : b)
      for (const auto& h : a) CHECK(compose(compose(f, g), h) == compose(f, compose(g, h)));
}
