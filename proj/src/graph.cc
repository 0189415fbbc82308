#include "cts/graph.hpp"

#include <sstream>
#include <stdexcept>

namespace cts {

int ReflexiveGraph::add_vertex(std::string name) {
  vertices.push_back(std::move(name));
  return num_vertices() - 1;
}

int ReflexiveGraph::add_edge(int s, int d, std::string name) {
  if (s < 0 || d < 0 || s >= num_vertices() || d >= num_vertices())
    throw std::out_of_range("add_edge: unknown vertex");
  if (name.empty()) name = "e" + std::to_string(edges.size());
  edges.push_back({s, d, std::move(name)});
  return num_edges() - 1;
}

std::string ReflexiveGraph::edge_name(EdgeId e) const {
  if (is_id(e)) return "id(" + vertices.at(id_vertex(e)) + ")";
  return edges.at(e).name;
}

std::vector<EdgeId> ReflexiveGraph::all_edges() const {
  std::vector<EdgeId> out;
  for (int v = 0; v < num_vertices(); ++v) out.push_back(id_edge(v));
  for (int e = 0; e < num_edges(); ++e) out.push_back(e);
  return out;
}

std::vector<std::vector<EdgeId>> ReflexiveGraph::out_edges() const {
  std::vector<std::vector<EdgeId>> out(vertices.size());
  for (int e = 0; e < num_edges(); ++e) out[edges[e].src].push_back(e);
  return out;
}

ReflexiveGraph tr1(const CubicalSet& k) {
  ReflexiveGraph g;
  for (int v = 0; v < k.count(0); ++v) g.add_vertex(k.name(0, v));
  for (int e = 0; e < k.count(1); ++e) {
    const auto& f = k.faces_of(1, e);
    g.add_edge(f[0].base, f[1].base, k.name(1, e));
  }
  return g;
}

CubicalSet as_cubical(const ReflexiveGraph& g) {
  CubicalSet k(1);
  for (const auto& v : g.vertices) k.add_cell(0, v);
  for (const auto& e : g.edges) k.add_cell(1, e.name, {CubicalSet::cell(0, e.src), CubicalSet::cell(0, e.dst)});
  return k;
}

CellRef edge_cell(EdgeId e) {
  if (is_id(e)) return CellRef{1, id_vertex(e), {1}};
  return CellRef{1, e, {}};
}

EdgeId cell_edge(const CellRef& c) {
  if (c.dim != 1) throw std::invalid_argument("cell_edge: not a 1-cell");
  return c.degenerate() ? id_edge(c.base) : c.base;
}

ReflexiveGraph interval_graph() {
  ReflexiveGraph c;
  c.add_vertex("-");
  c.add_vertex("+");
  c.add_edge(0, 1, "c");
  return c;
}

std::string to_dot(const ReflexiveGraph& g, const std::vector<std::string>& edge_labels) {
  std::ostringstream os;
  os << "digraph G {\n";
  for (int v = 0; v < g.num_vertices(); ++v) os << "  n" << v << " [label=\"" << g.vertices[v] << "\"];\n";
  for (int e = 0; e < g.num_edges(); ++e) {
    os << "  n" << g.edges[e].src << " -> n" << g.edges[e].dst << " [label=\"";
    os << (static_cast<std::size_t>(e) < edge_labels.size() ? edge_labels[e] : g.edges[e].name) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace cts
