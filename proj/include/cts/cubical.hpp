#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cts/box.hpp"

namespace cts {

// A cell as a canonical degeneracy of a non-degenerate cell. `degens` lists
// the coordinates (1-based, ascending) of the dim-cube along which the cell
// is constant; base indexes the cells of dimension dim - degens.size().
struct CellRef {
  int dim = 0;
  int base = 0;
  std::vector<int> degens;

  int base_dim() const { return dim - static_cast<int>(degens.size()); }
  bool degenerate() const { return !degens.empty(); }
  auto operator<=>(const CellRef&) const = default;
};

using Shell = std::vector<CellRef>;  // (1,-),(1,+),(2,-),(2,+),...

inline int face_slot(int i, Sign s) { return 2 * (i - 1) + bit(s); }

class CubicalSet {
 public:
  explicit CubicalSet(int trunc_dim = 0);

  int trunc_dim() const { return static_cast<int>(names_.size()) - 1; }
  void set_trunc_dim(int d);

  // faces in shell order; must be empty for dim 0.
  int add_cell(int dim, std::string name, std::vector<CellRef> faces = {});

  int count(int dim) const;
  const std::string& name(int dim, int cell) const { return names_.at(dim).at(cell); }
  std::optional<int> find(int dim, const std::string& name) const;
  const std::vector<CellRef>& faces_of(int dim, int cell) const { return faces_.at(dim).at(cell); }
  void set_face(int dim, int cell, int i, Sign s, CellRef c) { faces_.at(dim).at(cell).at(face_slot(i, s)) = std::move(c); }

  // Cubical-set operations on arbitrary cells (degenerate ones included).
  CellRef face(const CellRef& c, int i, Sign s) const;
  CellRef degeneracy(const CellRef& c, int i) const;
  Shell boundary(const CellRef& c) const;

  // Every cell of dimension n, degenerate ones included, in a fixed order.
  std::vector<CellRef> all_cells(int n) const;

  static CellRef cell(int dim, int base) { return CellRef{dim, base, {}}; }
  std::string describe(const CellRef& c) const;

 private:
  std::vector<std::vector<std::string>> names_;
  std::vector<std::vector<std::vector<CellRef>>> faces_;
  std::vector<std::map<std::string, int>> index_;
};

// Composite degeneracy: `outer` is a set of deleted coordinates of an n-cube,
// `inner` a set of deleted coordinates of the remaining cube.
std::vector<int> compose_degens(const std::vector<int>& outer, const std::vector<int>& inner);

struct CellMapKind {
  enum class Kind { face, degeneracy } kind = Kind::face;
  int index = 1;
  Sign sign = Sign::minus;
};
CellRef apply_cell_map(const CubicalSet& k, CellMapKind kind, const CellRef& c);

struct CubicalMap {
  std::shared_ptr<const CubicalSet> source;
  std::shared_ptr<const CubicalSet> target;
  std::vector<std::vector<CellRef>> assignment;  // per dim, per non-degenerate cell

  CellRef apply(const CellRef& c) const;
};

CubicalMap identity_map(std::shared_ptr<const CubicalSet> k);

std::vector<std::string> validate(const CubicalSet& k);
std::vector<std::string> validate(const CubicalMap& f);

// Shells of n-cells: tuples ((y_i^-),(y_i^+)), i = 1..n+1, with
// d_i^w(y_j^w') = d_{j-1}^w'(y_i^w) for i < j. Sorted. The parallel variant
// splits the search over the first coordinate.
std::vector<Shell> cubical_kernel(const CubicalSet& y, int n);
std::vector<Shell> cubical_kernel_serial(const CubicalSet& y, int n);

struct KernelOptions {
  bool parallel = true;
  // Pruning predicate on an opposite pair (y_i^-, y_i^+).
  std::function<bool(const CellRef& minus, const CellRef& plus)> opposite;
  // Final filter on complete shells.
  std::function<bool(const Shell&)> keep;
};
std::vector<Shell> cubical_kernel(const CubicalSet& y, int n, const KernelOptions& opt);

bool shell_is_degenerate(const CubicalSet& y, const Shell& s);

// Truncation of k to dimension d (cells above d dropped).
CubicalSet truncate(const CubicalSet& k, int d);

// Cosk_n up to dimension D: dims <= n are copied, dims in (n, D] are iterated
// kernels whose faces are the projections.
CubicalSet coskeleton(const CubicalSet& k, int n, int D);

// The standard cube and its boundary; cells are named by words over {0,1,*}.
CubicalSet standard_cube(int k, int trunc = -1);
CubicalSet cube_boundary(int k, int trunc = -1);
std::string cube_word_name(const std::string& word);

// dom_n and cod_n of an n-cell: iterated minus- resp. plus-faces.
CellRef dom_n(const CubicalSet& k, const CellRef& c);
CellRef cod_n(const CubicalSet& k, const CellRef& c);

}  // namespace cts
