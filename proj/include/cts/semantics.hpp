#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cts/catkit.hpp"
#include "cts/hda.hpp"
#include "cts/machine.hpp"
#include "cts/spanrep.hpp"

namespace cts::cip {

// Letters of E (value and port carrying) and of the erased alphabet.
struct Event {
  enum class Kind { alpha, gamma1, gamma2, send, recv };
  Kind kind = Kind::alpha;
  int value = -1;    // send / recv only, -1 once erased
  std::string port;  // send / recv only, empty once erased

  bool operator==(const Event& o) const { return kind == o.kind && value == o.value && port == o.port; }
};
std::string show(const Event& e);  // α γ1 γ2 !10,p ?3,q ! ?
std::optional<Event> parse_event(const std::string& s);
Event erase_label(const Event& e);
Event event_of(const StateSpace::Edge& e);
// Total order used for alphabets: α < γ1 < γ2 < sends < receives.
bool event_less(const Event& a, const Event& b);
Alphabet alphabet_of(std::vector<Event> letters);

struct CipGraphs {
  LabeledGraph evolution;  // vertices: (store map, location map) classes
  LabeledGraph control;    // vertices: location maps
  GraphMorphism pi;        // evolution -> control
  std::vector<std::vector<int>> stores;     // per evolution vertex
  std::vector<std::vector<int>> locations;  // per evolution vertex
  std::vector<std::vector<int>> control_locations;
  std::vector<int> initial;  // evolution vertices of initial configurations
  int initial_control = 0;
  bool truncated = false;
};
CipGraphs graphs_of(const Machine& m, const ExploreOptions& opt = {});
CipGraphs graphs_of(const Machine& m, const StateSpace& ss);
// pi followed by erasure equals the control labelling; first failure, if any.
std::optional<std::string> check_commutes(const CipGraphs& g);
// Names of variables in store-map order.
std::vector<std::string> store_names(const Machine& m);
std::string show_store(const Machine& m, const std::vector<int>& store);

// Process i alone, all of its ports open.
Machine component(const Machine& m, int i);

struct CipHdas {
  Hda evolution, control;
};
CipHdas lift_to_hda(const CipGraphs& g, int max_dim);

// Tab_t over the letters of sigma. With restricted set, a letter on a
// channelled port cannot idle.
SyncTable sync_table_of(const NormalForm& nf, const Alphabet& sigma, bool restricted = false);

struct ProductReport {
  bool literal_iso = false;     // iterated binary product with the literal table, reachable part
  bool restricted_iso = false;  // reachable product, channelled letters cannot idle
  bool hat_iso = false;         // componentwise pi-image of the restricted product vs the control graph
  int direct_vertices = 0, direct_edges = 0;
  int literal_vertices = 0, literal_edges = 0;
  int restricted_vertices = 0, restricted_edges = 0;
  std::vector<std::string> witnesses;
};
ProductReport product_decomposition_check(const Machine& m, const ExploreOptions& opt = {});

struct Interface {
  std::vector<Channel> generators;  // channels of a cut, or open ports as p ~ "" for the environment
  SpanPseudofunctor phi;            // one object
};

// A component with its lax leg into an interface.
struct InterfaceLeg {
  int interface = 0;
  std::vector<int> generator_of;  // per control generator: interface generator, -1 for identity
  LaxRepTransformation iota;      // source: the component's spans
};

struct CipCts {
  CipGraphs graphs;
  PresentedCategory control;
  UlfFunctor pi;
  SpanPseudofunctor spans;  // fibers of pi, elements named by stores
  std::vector<std::vector<int>> fiber_vertices;  // per control object, evolution vertices in element order
  std::vector<std::string> generator_labels;
  int initial = 0;
  bool acubic = true;
  std::vector<std::string> notes;
};
// Single process systems, or whole programs over their reachable control.
CipCts categorical_semantics(const Machine& m, const ExploreOptions& opt = {});

struct CutInterfaces {
  std::vector<CipCts> components;
  std::vector<Interface> interfaces;  // one per cut
  std::vector<InterfaceLeg> plus, minus;  // plus[i]: component i -> cut i, minus[i]: component i+1 -> cut i
  std::vector<std::string> notes;
};
CutInterfaces cut_interfaces(const Machine& m, const ExploreOptions& opt = {});

// The environment interface of a single process over its open and declared ports.
struct Environment {
  Interface interface;
  InterfaceLeg leg;
};
Environment environment_interface(const Machine& m, const CipCts& cts, const Context& declared_ports = {});

struct ClosedFormEntry {
  int generator = 0;
  std::string label;
  FinSpan closed;      // over all stores of the context
  FinSpan restricted;  // closed form restricted to the reachable fibers
  FinSpan fiber;       // the fiber-derived span
  bool agrees = false;
};
struct ClosedFormReport {
  std::vector<int> object_size;  // |context| for every location
  std::vector<ClosedFormEntry> entries;
  std::vector<std::string> discrepancies;
};
// Single process only.
ClosedFormReport closed_form_spans(const Machine& m, const CipCts& cts);

// Reachable part of the lax pullback of the component spans over the cut
// interfaces, for two processes.
struct PullbackSummary {
  int objects = 0;            // control objects of the pullback with a non-empty fiber, reachable from the start
  int generators = 0;
  bool matches_direct = false;  // same objects, generators and spans as the directly computed system
  std::vector<std::string> notes;
};
PullbackSummary pullback_summary(const Machine& m, const ExploreOptions& opt = {});

// Composite spans along control paths of length 1..max_len against path
// counts taken from the raw state space.
struct OracleReport {
  long paths = 0;
  long mismatches = 0;
  std::vector<std::string> witnesses;
};
OracleReport span_path_oracle(const Machine& m, const CipCts& cts, const StateSpace& ss, int max_len = 3);

}  // namespace cts::cip
