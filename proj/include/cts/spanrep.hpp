#pragma once

#include <array>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cts/catkit.hpp"
#include "cts/graph.hpp"

namespace cts {

// A span A <- S -> B of finite sets up to isomorphism: entry (a,b) is the
// number of apex elements over (a,b).
struct FinSpan {
  int rows = 0;  // |A|
  int cols = 0;  // |B|
  std::vector<int> m;  // row-major

  FinSpan() = default;
  FinSpan(int r, int c) : rows(r), cols(c), m(static_cast<std::size_t>(r) * c, 0) {}
  static FinSpan identity(int n);
  static FinSpan of_function(const std::vector<int>& f, int cols);
  static FinSpan of_matrix(const std::vector<std::vector<int>>& rows);

  int at(int a, int b) const { return m[static_cast<std::size_t>(a) * cols + b]; }
  int& at(int a, int b) { return m[static_cast<std::size_t>(a) * cols + b]; }
  long apex_size() const;
  // Left leg iso: every row sums to 1.
  bool is_map() const;
  // The function of a map, row -> the column of its single 1.
  std::vector<int> as_function() const;
  // Apex elements (a, b, k), row-major with k innermost.
  std::vector<std::array<int, 3>> apex() const;
  int apex_index(int a, int b, int k) const;
  FinSpan transpose() const;

  bool operator==(const FinSpan& o) const { return rows == o.rows && cols == o.cols && m == o.m; }
};

// f : A -> B then g : B -> C, i.e. the matrix product f g.
FinSpan span_compose(const FinSpan& f, const FinSpan& g);
std::string show(const FinSpan& s);

// Normal pseudofunctor from a free category into spans of finite sets.
struct SpanPseudofunctor {
  PresentedCategory control;  // relations must be empty
  std::vector<int> object_size;
  std::vector<FinSpan> generator_span;  // per non-identity edge
  std::vector<std::vector<std::string>> element_names;  // optional, per object

  int size(int x) const { return object_size.at(x); }
  // Composite along a path from x; the empty path gives the identity span.
  FinSpan eval(int x, const Path& p) const;
  std::string element_name(int x, int a) const;
};
std::vector<std::string> validate(const SpanPseudofunctor& p);

// Bijections per object carrying every generator matrix of p onto q's.
std::optional<std::vector<std::vector<int>>> isomorphism(const SpanPseudofunctor& p, const SpanPseudofunctor& q);

// t o F(k) for a graph morphism k : G -> H (edges to edges or identities).
SpanPseudofunctor reindex(const SpanPseudofunctor& t, const PresentedCategory& g, const GraphMorphism& k);

// A functor between free categories, given on generators.
struct UlfFunctor {
  PresentedCategory total;
  PresentedCategory base;
  std::vector<int> on_objects;
  std::vector<Path> on_generators;  // images; empty = identity
};
// Functoriality of the data (endpoints of images); throws otherwise.
void check_functor(const UlfFunctor& u);

struct UlfVerdict {
  bool ulf = true;
  int generator = -1;  // offending generator of the total category
  Path image;
  Path first, second;   // the factorization of the image that lifts badly
  int liftings = 0;     // number of liftings of that factorization
  std::string witness;
};
UlfVerdict is_ulf(const UlfFunctor& u);

// Fiber-preserving bijection on objects carried by a bijection on
// generators over the same base generators.
bool isomorphic(const UlfFunctor& u, const UlfFunctor& v);

SpanPseudofunctor fibers(const UlfFunctor& u);
UlfFunctor grothendieck(const SpanPseudofunctor& p);

// alpha : source => target over the same control. Components are spans that
// should be maps; two_cells[f] sends the apex of source(f) to the apex of
// target(f), commuting with the legs through the components.
struct LaxRepTransformation {
  SpanPseudofunctor source;
  SpanPseudofunctor target;
  std::vector<FinSpan> components;
  std::vector<std::vector<int>> two_cells;

  static LaxRepTransformation identity(const SpanPseudofunctor& p);
};

struct LaxReport {
  bool valid = true;
  bool representable = true;
  bool coherent = true;
  std::vector<std::string> errors;
};
LaxReport validate_lax(const LaxRepTransformation& a);

// The induced functor grothendieck(source).total -> grothendieck(target).total.
UlfFunctor total_functor(const LaxRepTransformation& a);

struct LaxPullback {
  SpanPseudofunctor object;
  std::vector<std::vector<std::pair<int, int>>> pairs;  // per object: (u, v) of each element
  LaxRepTransformation to_left, to_right;
};
// Pullback of alpha : F => G along beta : H => G, at each generator f : a -> b
// built from the pullbacks Q' = (alpha_a, left G f), Q'' = (beta_a, left G f),
// Q of the two induced apex maps, R = (alpha_a, beta_a) and S = (alpha_b, beta_b).
LaxPullback lax_pullback(const LaxRepTransformation& alpha, const LaxRepTransformation& beta);

// Random instances: at most max_objects objects, sets of size <= max_set,
// multiplicities <= max_mult, at most max_edges generators.
ReflexiveGraph random_control(std::mt19937_64& rng, int max_objects, int max_edges);
SpanPseudofunctor random_span_pseudofunctor(std::mt19937_64& rng, const PresentedCategory& control,
                                            int max_set, int max_mult);
// A random F with alpha : F => g, every apex element of F(f) sent to a
// random element of g(f).
LaxRepTransformation random_lax_into(std::mt19937_64& rng, const SpanPseudofunctor& g, int max_set,
                                     int max_mult);

}  // namespace cts
