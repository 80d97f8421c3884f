#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "advnet/errors.hpp"

namespace advnet::topo {

enum class Role { Internal, Source, Dest };

struct Edge {
  std::string id, tail, head;
  uint64_t capacity = 1;
  bool operator==(const Edge&) const = default;
};

// A directed acyclic multigraph with one source and one or more
// destinations.  Node and edge ids are free-form strings; every ordering
// the library exposes (adjacency lists, topological ties) is lexicographic
// in those ids, which is what makes simulations reproducible.
class Network {
 public:
  void add_node(const std::string& id, Role role = Role::Internal);
  void add_edge(const std::string& id, const std::string& tail,
                const std::string& head, uint64_t capacity = 1);

  // Structural invariants: exactly one source, at least one destination,
  // acyclicity.  Throws ConfigError naming a back edge when a cycle exists.
  void validate() const;

  const std::string& source() const;
  const std::vector<std::string>& destinations() const { return dests_; }
  std::vector<std::string> node_ids() const;           // sorted
  std::vector<std::string> internal_node_ids() const;  // sorted, relay-only
  std::vector<std::string> non_source_node_ids() const;
  size_t node_count() const { return nodes_.size(); }
  bool has_node(const std::string& id) const { return nodes_.count(id) > 0; }
  bool has_edge(const std::string& id) const {
    return edge_index_.count(id) > 0;
  }
  Role role(const std::string& id) const;
  const Edge& edge(const std::string& id) const;
  const std::vector<Edge>& edges() const { return edges_; }  // file order
  // Incident edge ids sorted lexicographically.
  const std::vector<std::string>& out_edge_ids(const std::string& node) const;
  const std::vector<std::string>& in_edge_ids(const std::string& node) const;
  // in-degree + out-degree, maximized over nodes
  size_t max_degree() const;

  const std::string& name() const { return name_; }
  void set_name(const std::string& n) { name_ = n; }

  bool operator==(const Network&) const = default;

 private:
  std::map<std::string, Role> nodes_;
  std::vector<Edge> edges_;
  std::map<std::string, size_t> edge_index_;
  std::map<std::string, std::vector<std::string>> out_, in_;
  std::vector<std::string> dests_;
  std::string source_;
  std::string name_;
};

// Which edges the adversary may control: either "any z internal nodes"
// (their full out-edge sets) or an explicit list of edge sets.
struct AdversarySpec {
  enum class Kind { NodeBased, General };
  Kind kind = Kind::NodeBased;
  uint32_t z = 0;                               // NodeBased only
  std::vector<std::vector<std::string>> sets;   // General only
  bool operator==(const AdversarySpec&) const = default;
};

// One concrete choice of controlled edges.
struct AdversarySet {
  std::vector<std::string> edges;  // sorted edge ids
  std::vector<std::string> nodes;  // controlled nodes when node-based
  std::string label;               // stable human-readable tag
};

struct LoadResult {
  Network net;
  std::optional<AdversarySpec> adversary;
};

// Line-oriented network description:
//   # comment
//   node <id> [source|dest]
//   edge <id> <tail> <head> [capacity]
//   adversary node-based z=<int>
//   adversary set <edge-id> [<edge-id> ...]
// Nodes must be declared before edges that use them, and edges before
// adversary sets that name them.  Errors carry 1-based line numbers.
LoadResult load_network(std::istream& in, const std::string& name);
LoadResult load_network_file(const std::string& path);
void save_network(std::ostream& out, const Network& net,
                  const AdversarySpec* adversary = nullptr);

// Topological node order with lexicographic tie-breaking; throws
// ConfigError naming a back edge when the graph has a cycle.
std::vector<std::string> topo_order(const Network& net);

// Copy of the network with the listed edges removed (nodes kept).
Network delete_edges(const Network& net, const std::vector<std::string>& ids);

// Max-flow value between two nodes (equivalently the min cut), computed
// with BFS augmenting paths.  Returns 0 when t is unreachable.
uint64_t min_cut(const Network& net, const std::string& s,
                 const std::string& t);

// Materialize the concrete adversary sets for a spec.  Node-based specs
// enumerate all subsets of internal nodes of size 0..z (the empty set is
// always included) ordered by size then lexicographically; z larger than
// the internal node count is clamped with a warning.  General specs are
// echoed with their edge lists sorted.
std::vector<AdversarySet> adversary_sets(
    const Network& net, const AdversarySpec& spec,
    std::vector<std::string>* warnings = nullptr);

// min over adversary sets A and destinations t of min_cut(source, t, G-A):
// the number of message rows the code can carry per generation.
uint64_t residual_rate(const Network& net, const AdversarySpec& spec,
                       std::vector<std::string>* warnings = nullptr);

// Rewrite a capacitated network as a unit-capacity multigraph (an edge of
// capacity c becomes parallel edges id.1 .. id.c) and translate the
// adversary spec onto it; node-based specs are materialized to general
// ones in the process.
std::pair<Network, AdversarySpec> expand_capacities(
    const Network& net, const AdversarySpec& spec,
    std::vector<std::string>* warnings = nullptr);

}  // namespace advnet::topo
