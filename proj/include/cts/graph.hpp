#pragma once

#include <string>
#include <vector>

#include "cts/cubical.hpp"

namespace cts {

// Edge handles: non-negative values index the non-identity edges, the
// identity loop of vertex v is encoded as -(v + 1).
using EdgeId = int;
inline EdgeId id_edge(int v) { return -(v + 1); }
inline bool is_id(EdgeId e) { return e < 0; }
inline int id_vertex(EdgeId e) { return -e - 1; }

struct ReflexiveGraph {
  struct Edge {
    int src = 0;
    int dst = 0;
    std::string name;
  };
  std::vector<std::string> vertices;
  std::vector<Edge> edges;  // identities are implicit

  int add_vertex(std::string name);
  int add_edge(int src, int dst, std::string name = {});

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int src(EdgeId e) const { return is_id(e) ? id_vertex(e) : edges.at(e).src; }
  int dst(EdgeId e) const { return is_id(e) ? id_vertex(e) : edges.at(e).dst; }
  std::string edge_name(EdgeId e) const;
  // All edges, identities first (vertex order), then the others.
  std::vector<EdgeId> all_edges() const;
  std::vector<std::vector<EdgeId>> out_edges() const;  // non-identity only
};

// tr_1 of a cubical set and the inverse embedding (1-truncated set).
ReflexiveGraph tr1(const CubicalSet& k);
CubicalSet as_cubical(const ReflexiveGraph& g);
CellRef edge_cell(EdgeId e);
EdgeId cell_edge(const CellRef& c);

// The interval graph C = (- -> +).
ReflexiveGraph interval_graph();

std::string to_dot(const ReflexiveGraph& g, const std::vector<std::string>& edge_labels = {});

}  // namespace cts
