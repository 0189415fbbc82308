#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cts/cubical.hpp"
#include "cts/graph.hpp"

namespace cts {

// Symbols are indices into the alphabet; the order of the indices is the
// total order of the alphabet.
using Symbol = int;
constexpr Symbol kStar = -1;
constexpr Symbol kTop = -2;

class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> ordered);

  int size() const { return static_cast<int>(symbols_.size()); }
  const std::string& name(Symbol s) const { return symbols_.at(s); }
  std::string show(Symbol s) const;  // STAR / TOP for the reserved values
  std::optional<Symbol> find(const std::string& n) const;
  Symbol intern(const std::string& n);  // appends at the top of the order
  const std::vector<std::string>& symbols() const { return symbols_; }
  bool operator==(const Alphabet& o) const { return symbols_ == o.symbols_; }

 private:
  std::vector<std::string> symbols_;
  std::map<std::string, Symbol> index_;
};

// Same-named symbol in another alphabet; STAR and TOP are kept.
Symbol translate(Symbol s, const Alphabet& from, const Alphabet& to);

using BangCell = std::vector<Symbol>;

bool bang_valid(const BangCell& a);
BangCell bang_erase_star(const BangCell& a);
BangCell bang_face(const BangCell& a, int i);        // either sign
BangCell bang_degeneracy(const BangCell& a, int i);  // inserts STAR at i
std::string show_word(const Alphabet& sigma, const BangCell& a);

struct BangOp {
  enum class Kind { face, degeneracy } kind = Kind::face;
  int index = 1;
};
BangCell bang_boundary(const BangCell& a, BangOp op);

struct Hda {
  CubicalSet carrier;
  Alphabet alphabet;
  std::vector<std::vector<BangCell>> labels;  // per dim, per non-degenerate cell

  BangCell label(const CellRef& c) const;
};

std::vector<std::string> validate(const Hda& t);

// Labeled reflexive graph; labels of non-identity edges (identities carry STAR).
struct LabeledGraph {
  ReflexiveGraph graph;
  Alphabet alphabet;
  std::vector<Symbol> labels;

  Symbol label(EdgeId e) const { return is_id(e) ? kStar : labels.at(e); }
};

LabeledGraph hda_tr1(const Hda& t);
Hda hda_of_graph(const LabeledGraph& g);

// Sigma-coskeleton above dimension n (n >= 1), up to dimension D.
Hda sigma_coskeleton(const Hda& t, int n, int D, bool parallel = true);

// Labels actually used by edges (STAR excluded), sorted.
std::vector<Symbol> image_factor(const Hda& t);
std::vector<Symbol> image_factor(const LabeledGraph& g);

class SyncTable {
 public:
  SyncTable() = default;
  explicit SyncTable(Alphabet a, bool idle_respecting = true) : alphabet_(std::move(a)), idle_(idle_respecting) {}

  void set(Symbol a, Symbol b, Symbol r) { entries_[{a, b}] = r; }
  Symbol operator()(Symbol a, Symbol b) const;
  const Alphabet& alphabet() const { return alphabet_; }
  Alphabet& alphabet() { return alphabet_; }
  bool idle_respecting() const { return idle_; }
  const std::map<std::pair<Symbol, Symbol>, Symbol>& explicit_entries() const { return entries_; }

 private:
  Alphabet alphabet_;
  bool idle_ = true;
  std::map<std::pair<Symbol, Symbol>, Symbol> entries_;
};

using Upsilon = std::vector<std::pair<Symbol, Symbol>>;

Upsilon upsilon(const SyncTable& table, const std::vector<Symbol>& sigma_s, const std::vector<Symbol>& sigma_t);

// The pushout of Sigma_s <- Upsilon -> Sigma_t as classes of letters; class 0
// is the identity (STAR). `left[k]` is the class of sigma_s[k], etc.
struct InterfaceGraph {
  int classes = 1;
  std::map<Symbol, int> left;
  std::map<Symbol, int> right;
  int of_left(Symbol s) const { return s == kStar ? 0 : left.at(s); }
  int of_right(Symbol s) const { return s == kStar ? 0 : right.at(s); }
};
InterfaceGraph interface_pushout(const std::vector<Symbol>& sigma_s, const std::vector<Symbol>& sigma_t,
                                 const Upsilon& ups);
// Pairs (theta, psi) with equal image in the pushout.
Upsilon pushout_pullback(const std::vector<Symbol>& sigma_s, const std::vector<Symbol>& sigma_t,
                         const InterfaceGraph& p);

// tr_1 S x_Upsilon tr_1 T relabeled by the table. Vertex (a, b) has index
// a * |T_0| + b; pairs[e] are the component edges of edge e.
struct SyncGraph {
  LabeledGraph graph;
  std::vector<std::pair<EdgeId, EdgeId>> pairs;
  int right_vertices = 0;
  Upsilon ups;
};
SyncGraph sync_graph(const LabeledGraph& s, const LabeledGraph& t, const SyncTable& table);
Hda synchronized_product(const Hda& s, const Hda& t, const SyncTable& table, int D);

// Change of alphabet: w maps letters of Sigma to letters of the hatted
// alphabet; u, v are graph morphisms S -> S^, T -> T^ on vertices and edges.
struct GraphMorphism {
  std::vector<int> on_vertices;
  std::vector<EdgeId> on_edges;
};
struct AlphabetChange {
  std::vector<int> wbar;      // class of Sigma_{s,t} -> class of the hatted pushout
  GraphMorphism product_map;  // S (x) T -> S^ (x) T^ on the sync graphs
};
AlphabetChange alphabet_change(const std::vector<Symbol>& w, const LabeledGraph& s, const LabeledGraph& t,
                               const LabeledGraph& s_hat, const LabeledGraph& t_hat, const SyncTable& table,
                               const SyncTable& table_hat, const GraphMorphism& u, const GraphMorphism& v);

}  // namespace cts
