#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace cts {

enum class Sign : std::uint8_t { minus = 0, plus = 1 };

inline int bit(Sign s) { return s == Sign::plus ? 1 : 0; }
inline char sign_char(Sign s) { return s == Sign::plus ? '+' : '-'; }

// One generator of the box category. A coface delta_i^s : 2^(n-1) -> 2^n
// inserts the bit s at position i; a codegeneracy eps_i : 2^n -> 2^(n-1)
// deletes position i. Indices are 1-based.
struct BoxGen {
  enum class Kind : std::uint8_t { coface, codegen };
  Kind kind = Kind::coface;
  int index = 1;
  Sign sign = Sign::minus;
  int src_dim = -1;  // optional, checked against the composite when >= 0

  static BoxGen delta(int i, Sign s, int src = -1) { return {Kind::coface, i, s, src}; }
  static BoxGen eps(int i, int src = -1) { return {Kind::codegen, i, Sign::minus, src}; }
  bool operator==(const BoxGen&) const = default;
};

// A composite g_1 o g_2 o ... o g_k; g_k is applied first.
struct BoxWord {
  int src_dim = 0;
  std::vector<BoxGen> gens;
};

// Canonical form delta_{j1} o ... o delta_{js} o eps_{i1} o ... o eps_{it}
// with j1 > ... > js and i1 < ... < it.
struct BoxMorphism {
  int src_dim = 0;
  int dst_dim = 0;
  std::vector<std::pair<int, Sign>> cofaces;
  std::vector<int> codegens;

  bool operator==(const BoxMorphism&) const = default;
  bool is_identity() const { return cofaces.empty() && codegens.empty(); }
  std::string str() const;
};

using Bits = std::vector<std::uint8_t>;

// Dimension of the target of the word; throws std::invalid_argument on a
// mismatch or an index out of range.
int word_dst_dim(const BoxWord& w);

BoxMorphism normalize_box(const BoxWord& w);
bool is_canonical(const BoxMorphism& f);

Bits apply_gen(const BoxGen& g, const Bits& x);
Bits realize_box(const BoxMorphism& f, const Bits& x);
Bits realize_word(const BoxWord& w, const Bits& x);

// Table of the realization: entry x (bit i-1 = coordinate i) is the image.
std::vector<std::uint32_t> realize_table(const BoxMorphism& f);

BoxMorphism compose(const BoxMorphism& f, const BoxMorphism& g);  // f o g
BoxWord to_word(const BoxMorphism& f);

// All canonical forms 2^m -> 2^n.
std::vector<BoxMorphism> all_canonical(int m, int n);

}  // namespace cts
