#pragma once

#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cts/cubical.hpp"
#include "cts/hda.hpp"
#include "cts/semantics.hpp"
#include "cts/spanrep.hpp"

namespace cts::sim {

using Pair = std::pair<int, int>;

// Relation between state sets, sorted; the points are kept alongside.
struct SimRelation {
  std::vector<Pair> pairs;
  int s_point = 0, t_point = 0;

  bool contains(int a, int b) const;
  std::size_t size() const { return pairs.size(); }
};

// ---------------------------------------------------------------- HDA side

struct PointedHda {
  Hda hda;
  int point = 0;
};

// Cells of dimension <= maxdim (degenerate ones included) with their dom/cod.
struct CellTable {
  std::vector<std::vector<CellRef>> cells;  // per dim
  std::vector<std::vector<BangCell>> labels;
  std::vector<std::vector<int>> dom, cod;   // vertex indices
};
CellTable cell_table(const Hda& h, int maxdim);

// One refinement round: keeps the pairs of r whose every k is matched.
std::vector<Pair> refine(const CellTable& s, const CellTable& t, const std::vector<Pair>& r);

// Greatest simulation; none when the points are not related.
struct HdaSimResult {
  std::optional<SimRelation> relation;
  std::vector<Pair> greatest;  // the whole greatest fixpoint
  int rounds = 0;
  std::string witness;  // why the points fell out
};
HdaSimResult hda_simulation(const PointedHda& s, const PointedHda& t, int maxdim);

struct OpenVerdict {
  bool open = true;
  std::string witness;
};
// Surjectivity on vertices and lifting of every cube of dimension <= maxdim
// at the image of every vertex; a given point must map to the point.
OpenVerdict is_open(const CubicalMap& h, int maxdim, std::optional<Pair> points = std::nullopt);

// g after f.
CubicalMap compose(const CubicalMap& f, const CubicalMap& g);

// A sub-cubical set of A x B given by pairs of cells, with its projections.
struct PairSpan {
  std::shared_ptr<const CubicalSet> apex;
  CubicalMap left, right;
  std::vector<std::vector<std::pair<CellRef, CellRef>>> cells;  // per dim, non-degenerate, apex order
  int point = -1;  // apex vertex of the point pair, -1 if absent

  std::optional<int> vertex_of(int a, int b) const;
};
// alive[n] must be closed under faces.
PairSpan pair_span(std::shared_ptr<const CubicalSet> a, std::shared_ptr<const CubicalSet> b,
                   const std::vector<std::set<std::pair<CellRef, CellRef>>>& alive, std::optional<Pair> point);
// Pullback of f : A -> C and g : B -> C up to dimension maxdim.
PairSpan pullback(const CubicalMap& f, const CubicalMap& g, int maxdim);

// Largest sub-object of S x_{!Sigma} T over which the first projection has
// the lifting property, optionally restricted to cells whose vertices lie in
// a relation; exists when the point pair survives and r1 checks open.
struct OpenSpan {
  bool exists = false;
  PairSpan span;
  OpenVerdict r1;
  std::string witness;
};
OpenSpan open_map_span(const PointedHda& s, const PointedHda& t, int maxdim,
                       const std::optional<SimRelation>& within = std::nullopt);

// The apex of a span labelled through its left leg.
PointedHda labelled_apex(const PairSpan& span, const Hda& left_hda);

// Random 1-coskeletal HDA up to dimension 2 on at most max_states states,
// every state reachable from the point 0.
PointedHda random_pointed_hda(std::mt19937_64& rng, int max_states, const std::vector<std::string>& letters,
                              int max_edges = 7);
// Labelled graph to pointed Sigma-coskeletal HDA (unique edge names generated).
PointedHda coskeletal_hda(const LabeledGraph& g, int point, int maxdim = 2);

// ---------------------------------------------------------------- CTS side

// Lax leg data per control generator, by interface generator name ("" for
// identity) and the apex map of its two-cell.
struct LegData {
  std::vector<std::string> generator_of;
  std::vector<std::vector<int>> two_cells;
};

struct PointedCts {
  SpanPseudofunctor spans;
  int point = 0;
  std::vector<std::string> object_names;
  std::optional<LegData> leg;

  std::string object_name(int x) const;
};

PointedCts pointed_cts(const cip::CipCts& c);
PointedCts pointed_cts(const cip::CipCts& c, const cip::Environment& env);

struct PathSimOptions {
  int max_len = 6;
  bool strict = false;  // single generators matched by single generators
};

struct PathSimResult {
  bool found = false;
  SimRelation relation;  // greatest relation
  bool horizon_binds = false;
  long paths = 0;
  std::string witness;
};
PathSimResult path_simulation(const PointedCts& s, const PointedCts& t, const PathSimOptions& opt = {});
// Whether a given relation satisfies the path simulation conditions.
bool is_path_simulation(const PointedCts& s, const PointedCts& t, const std::vector<Pair>& r,
                        const PathSimOptions& opt = {});

struct BisimOptions {
  bool check_interfaces = false;
};
struct BisimResult {
  bool found = false;
  bool interface_rejected = false;  // found without the interface check only
  SimRelation relation;
  std::string witness;
};
BisimResult path_bisimulation(const PointedCts& s, const PointedCts& t, const BisimOptions& opt = {});

// Relational composition.
std::vector<Pair> compose_relations(const std::vector<Pair>& r, const std::vector<Pair>& q);

}  // namespace cts::sim
