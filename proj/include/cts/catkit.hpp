#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cts/cubical.hpp"
#include "cts/graph.hpp"
#include "cts/hda.hpp"

namespace cts {

// Non-identity generators, composed left to right (first edge first).
using Path = std::vector<EdgeId>;

struct PresentedCategory {
  ReflexiveGraph generators;
  std::vector<std::pair<Path, Path>> relations;

  int num_objects() const { return generators.num_vertices(); }
};

PresentedCategory free_category(const ReflexiveGraph& g);

// The n! monotone edge paths of an n-cell from dom_n(y) to cod_n(y), one per
// order in which the coordinates are flipped.
std::vector<std::vector<CellRef>> paths_around_cube(const CubicalSet& k, const CellRef& y);

// Generated by tr_1(K) with all paths around each non-degenerate cell of
// dimension >= 2 equated; degenerate edges of such paths are erased.
PresentedCategory categorify(const CubicalSet& k);

// Congruence closure over the paths of length <= horizon.
struct HomClasses {
  int horizon = 0;
  bool truncated = false;    // longer paths exist and were not enumerated
  bool horizon_hit = false;  // a relation instance crossed the horizon
  int num_classes = 0;
  std::vector<Path> paths;  // paths[k] starts at src[k]; identities are empty paths
  std::vector<int> src, dst, length, cls;
  std::vector<int> rep;  // shortest representative path per class

  int find(int from, const Path& p) const;  // path index, -1 beyond the horizon
  int class_of(int from, const Path& p) const;
  int identity(int x) const { return cls[roots_.at(x)]; }
  std::vector<int> classes_between(int x, int y) const;
  int class_src(int c) const { return src[rep[c]]; }
  int class_dst(int c) const { return dst[rep[c]]; }
  int compose(int c1, int c2) const;  // -1 when the composite is beyond the horizon

 private:
  friend HomClasses hom_classes(const PresentedCategory& c, int horizon);
  std::vector<int> roots_;
  std::vector<std::vector<int>> children_;  // aligned with out_edges of dst
  std::vector<std::vector<EdgeId>> out_;
};

HomClasses hom_classes(const PresentedCategory& c, int horizon);

struct HomSet {
  std::vector<std::vector<Path>> classes;  // shortest representative first
  bool truncated = false;
  bool horizon_hit = false;
};
HomSet hom_sets(const PresentedCategory& c, int x, int y, int horizon);

std::string show_path(const ReflexiveGraph& g, const Path& p);
std::string to_dot(const PresentedCategory& c);

// Graph morphisms C^m -> R. Edges of C^m are turtle words over {-,+,c} with
// at least one c; with `diagonals` false the words have exactly one c.
struct CubeShape {
  int m = 0;
  std::vector<std::string> words;
  std::map<std::string, int> index;
  std::vector<int> src, dst;  // vertex bits, bit i-1 = coordinate i, + = 1
  // per coordinate and word: the word with '-' there replaced by '+', or
  // with 'c' replaced by '-' (-1 when that is a vertex); -2 otherwise
  std::vector<std::vector<int>> partner;
};
std::shared_ptr<const CubeShape> cube_shape(int m, bool diagonals);

struct GraphCube {
  enum class Kind { rigid, contractible, neither };
  std::shared_ptr<const CubeShape> shape;
  std::vector<int> vertex;  // indexed by vertex bits
  std::vector<EdgeId> edge;  // aligned with shape->words

  int m() const { return shape->m; }
  EdgeId at(const std::string& word) const { return edge.at(shape->index.at(word)); }
  Kind kind() const;
  // Constant along some coordinate (factors through a projection).
  bool degenerate() const;
};

std::vector<std::string> cube_edge_words(int m, bool diagonals);
void for_each_graph_cube(const ReflexiveGraph& r, int m, bool diagonals,
                         const std::function<void(const GraphCube&)>& fn);
std::vector<GraphCube> graph_cubes(const ReflexiveGraph& r, int m, bool diagonals = true);
// No rigid m-cube for 2 <= m <= max_m, diagonals included.
bool is_acubic(const ReflexiveGraph& r, int max_m = 2);

// T_1 [x] ... [x] T_m over the one-vertex interfaces Sigma_{i,i+1}.
struct SyncFamily {
  std::vector<LabeledGraph> factors;
  std::vector<SyncTable> tables;  // tables[i] relates factors i and i+1
};

struct WidePullback {
  ReflexiveGraph graph;
  std::vector<std::vector<EdgeId>> tuples;    // components of each generator
  std::vector<std::vector<int>> vertex_tuples;
  std::vector<InterfaceGraph> interfaces;     // Sigma_{i,i+1}
  std::vector<std::vector<int>> minus, plus;  // per factor, per edge: class in the left / right interface
  PresentedCategory category;                 // tuple generators, componentwise relations

  int vertex_of(const std::vector<int>& comps) const;
  std::vector<Path> project(const Path& p) const;  // componentwise, identities erased
};
WidePullback wide_pullback(const SyncFamily& fam);

struct CatsynchroReport {
  bool acubic = false;
  bool objects_equal = false;
  bool generator_bijection = false;
  bool relations_respected = false;
  bool hom_counts_equal = false;
  bool classes_match_images = false;  // same class iff same tuple of paths
  bool truncated = false;
  int objects = 0;
  int generators = 0;
  int relations = 0;
  long lhs_classes = 0;
  long rhs_classes = 0;
  std::vector<std::string> notes;

  bool iso() const {
    return objects_equal && generator_bijection && relations_respected && hom_counts_equal && classes_match_images;
  }
};

// C(cosk(T_1 [x] ... [x] T_m)) against the wide pullback of the free
// categories, bounded by the horizon. The plain reading takes cosk_1 of the
// graph pullback; the labeled one takes the Sigma-coskeleton of the iterated
// synchronized products (tables[i] must know the letters of factors 0..i+1).
CatsynchroReport check_catsynchro(const SyncFamily& fam, int horizon = 4, bool labeled = false);

// Functors J^p -> Cat for p <= D. Throws std::overflow_error when a needed
// composite lies beyond the horizon.
CubicalSet cubical_nerve(const PresentedCategory& c, int D, int horizon = 4);

}  // namespace cts
