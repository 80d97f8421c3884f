#include "advnet/topology.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>

namespace advnet::topo {

namespace {

void insert_sorted(std::vector<std::string>& v, const std::string& s) {
  v.insert(std::upper_bound(v.begin(), v.end(), s), s);
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

}  // namespace

void Network::add_node(const std::string& id, Role role) {
  if (id.empty()) throw UsageError("node id must be non-empty");
  if (nodes_.count(id)) throw UsageError("duplicate node id: " + id);
  if (role == Role::Source) {
    if (!source_.empty())
      throw UsageError("network already has a source (" + source_ + ")");
    source_ = id;
  }
  if (role == Role::Dest) insert_sorted(dests_, id);
  nodes_.emplace(id, role);
}

void Network::add_edge(const std::string& id, const std::string& tail,
                       const std::string& head, uint64_t capacity) {
  if (id.empty()) throw UsageError("edge id must be non-empty");
  if (edge_index_.count(id)) throw UsageError("duplicate edge id: " + id);
  if (!nodes_.count(tail)) throw UsageError("unknown tail node: " + tail);
  if (!nodes_.count(head)) throw UsageError("unknown head node: " + head);
  if (tail == head) throw UsageError("self-loop on node " + tail);
  if (capacity == 0) throw UsageError("edge capacity must be positive");
  edge_index_.emplace(id, edges_.size());
  edges_.push_back(Edge{id, tail, head, capacity});
  insert_sorted(out_[tail], id);
  insert_sorted(in_[head], id);
}

void Network::validate() const {
  if (source_.empty()) throw ConfigError("network has no source node");
  if (dests_.empty()) throw ConfigError("network has no destination node");
  topo_order(*this);  // throws on cycles, naming a back edge
}

const std::string& Network::source() const {
  if (source_.empty()) throw UsageError("network has no source node");
  return source_;
}

std::vector<std::string> Network::node_ids() const {
  std::vector<std::string> out;
  out.reserve(nodes_.size());
  for (const auto& [id, role] : nodes_) out.push_back(id);
  return out;
}

std::vector<std::string> Network::internal_node_ids() const {
  std::vector<std::string> out;
  for (const auto& [id, role] : nodes_)
    if (role == Role::Internal) out.push_back(id);
  return out;
}

std::vector<std::string> Network::non_source_node_ids() const {
  std::vector<std::string> out;
  for (const auto& [id, role] : nodes_)
    if (role != Role::Source) out.push_back(id);
  return out;
}

Role Network::role(const std::string& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw UsageError("unknown node: " + id);
  return it->second;
}

const Edge& Network::edge(const std::string& id) const {
  auto it = edge_index_.find(id);
  if (it == edge_index_.end()) throw UsageError("unknown edge: " + id);
  return edges_[it->second];
}

const std::vector<std::string>& Network::out_edge_ids(
    const std::string& node) const {
  if (!nodes_.count(node)) throw UsageError("unknown node: " + node);
  static const std::vector<std::string> kEmpty;
  auto it = out_.find(node);
  return it == out_.end() ? kEmpty : it->second;
}

const std::vector<std::string>& Network::in_edge_ids(
    const std::string& node) const {
  if (!nodes_.count(node)) throw UsageError("unknown node: " + node);
  static const std::vector<std::string> kEmpty;
  auto it = in_.find(node);
  return it == in_.end() ? kEmpty : it->second;
}

size_t Network::max_degree() const {
  size_t best = 0;
  for (const auto& [id, role] : nodes_)
    best = std::max(best, out_edge_ids(id).size() + in_edge_ids(id).size());
  return best;
}

// ---------------------------------------------------------------------------

std::vector<std::string> topo_order(const Network& net) {
  std::map<std::string, size_t> indeg;
  for (const auto& id : net.node_ids()) indeg[id] = 0;
  for (const Edge& e : net.edges()) ++indeg[e.head];

  std::set<std::string> ready;
  for (const auto& [id, d] : indeg)
    if (d == 0) ready.insert(id);

  std::vector<std::string> order;
  order.reserve(indeg.size());
  while (!ready.empty()) {
    const std::string id = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(id);
    for (const auto& eid : net.out_edge_ids(id))
      if (--indeg[net.edge(eid).head] == 0) ready.insert(net.edge(eid).head);
  }
  if (order.size() == indeg.size()) return order;

  // A cycle remains among the nodes that never reached in-degree zero.
  // Every such node keeps at least one unplaced predecessor, so walking
  // backward must eventually revisit a node; the edge that closes the
  // walk lies on a cycle and is worth naming.
  std::set<std::string> placed(order.begin(), order.end());
  std::string cur;
  for (const auto& [id, d] : indeg)
    if (!placed.count(id)) {
      cur = id;
      break;
    }
  std::set<std::string> seen{cur};
  for (;;) {
    const Edge* back = nullptr;
    for (const auto& eid : net.in_edge_ids(cur)) {
      const Edge& e = net.edge(eid);
      if (!placed.count(e.tail)) {
        back = &e;
        break;
      }
    }
    if (seen.count(back->tail))
      throw ConfigError("network contains a cycle: back edge " + back->id +
                        " (" + back->tail + " -> " + back->head + ")");
    seen.insert(back->tail);
    cur = back->tail;
  }
}

Network delete_edges(const Network& net,
                     const std::vector<std::string>& ids) {
  std::set<std::string> gone;
  for (const auto& id : ids) {
    if (!net.has_edge(id))
      throw UsageError("delete_edges: unknown edge: " + id);
    gone.insert(id);
  }
  Network out;
  for (const auto& id : net.node_ids()) out.add_node(id, net.role(id));
  for (const Edge& e : net.edges())
    if (!gone.count(e.id)) out.add_edge(e.id, e.tail, e.head, e.capacity);
  out.set_name(net.name());
  return out;
}

uint64_t min_cut(const Network& net, const std::string& s,
                 const std::string& t) {
  if (!net.has_node(s)) throw UsageError("min_cut: unknown node: " + s);
  if (!net.has_node(t)) throw UsageError("min_cut: unknown node: " + t);
  if (s == t) throw UsageError("min_cut: source and sink coincide");

  const auto ids = net.node_ids();
  std::map<std::string, int> idx;
  for (size_t i = 0; i < ids.size(); ++i) idx[ids[i]] = static_cast<int>(i);

  struct Arc {
    int to;
    uint64_t cap;
    size_t rev;
  };
  std::vector<std::vector<Arc>> g(ids.size());
  for (const Edge& e : net.edges()) {
    const int u = idx[e.tail], v = idx[e.head];
    g[u].push_back({v, e.capacity, g[v].size()});
    g[v].push_back({u, 0, g[u].size() - 1});
  }

  const int src = idx[s], dst = idx[t];
  uint64_t flow = 0;
  for (;;) {
    // BFS for the shortest augmenting path
    std::vector<std::pair<int, int>> parent(ids.size(), {-1, -1});
    parent[src] = {src, -1};
    std::queue<int> q;
    q.push(src);
    while (!q.empty() && parent[dst].first < 0) {
      const int u = q.front();
      q.pop();
      for (size_t ai = 0; ai < g[u].size(); ++ai) {
        const Arc& a = g[u][ai];
        if (a.cap > 0 && parent[a.to].first < 0) {
          parent[a.to] = {u, static_cast<int>(ai)};
          q.push(a.to);
        }
      }
    }
    if (parent[dst].first < 0) break;

    uint64_t aug = UINT64_MAX;
    for (int v = dst; v != src;) {
      const auto [u, ai] = parent[v];
      aug = std::min(aug, g[u][ai].cap);
      v = u;
    }
    for (int v = dst; v != src;) {
      const auto [u, ai] = parent[v];
      g[u][ai].cap -= aug;
      g[g[u][ai].to][g[u][ai].rev].cap += aug;
      v = u;
    }
    flow += aug;
  }
  return flow;
}

// ---------------------------------------------------------------------------

std::vector<AdversarySet> adversary_sets(const Network& net,
                                         const AdversarySpec& spec,
                                         std::vector<std::string>* warnings) {
  std::vector<AdversarySet> out;
  if (spec.kind == AdversarySpec::Kind::General) {
    if (spec.sets.empty())
      throw UsageError("general adversary specification lists no sets");
    for (const auto& raw : spec.sets) {
      AdversarySet s;
      std::set<std::string> uniq;
      for (const auto& id : raw) {
        if (!net.has_edge(id))
          throw UsageError("adversary set names unknown edge: " + id);
        uniq.insert(id);
      }
      s.edges.assign(uniq.begin(), uniq.end());
      s.label = s.edges.empty() ? "none" : "edges:" + join(s.edges, "+");
      out.push_back(std::move(s));
    }
    return out;
  }

  // Node-based: all subsets of internal nodes of size 0..z, ordered by
  // size then lexicographically over the sorted node list.
  const std::vector<std::string> internal = net.internal_node_ids();
  uint32_t z = spec.z;
  if (z > internal.size()) {
    if (warnings)
      warnings->push_back("adversary strength z=" + std::to_string(z) +
                          " exceeds the " + std::to_string(internal.size()) +
                          " internal nodes; clamping");
    z = static_cast<uint32_t>(internal.size());
  }

  std::vector<size_t> pick;
  auto emit = [&]() {
    AdversarySet s;
    for (size_t i : pick) {
      s.nodes.push_back(internal[i]);
      for (const auto& eid : net.out_edge_ids(internal[i]))
        s.edges.push_back(eid);
    }
    std::sort(s.edges.begin(), s.edges.end());
    s.label = s.nodes.empty() ? "none" : "nodes:" + join(s.nodes, "+");
    out.push_back(std::move(s));
  };
  // size-j combinations in lexicographic index order
  for (uint32_t j = 0; j <= z; ++j) {
    pick.assign(j, 0);
    for (uint32_t i = 0; i < j; ++i) pick[i] = i;
    if (j == 0) {
      emit();
      continue;
    }
    for (;;) {
      emit();
      // advance the combination
      int i = static_cast<int>(j) - 1;
      while (i >= 0 && pick[i] == internal.size() - j + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (uint32_t k = i + 1; k < j; ++k) pick[k] = pick[k - 1] + 1;
    }
  }
  return out;
}

uint64_t residual_rate(const Network& net, const AdversarySpec& spec,
                       std::vector<std::string>* warnings) {
  const auto sets = adversary_sets(net, spec, warnings);
  uint64_t rate = UINT64_MAX;
  for (const AdversarySet& a : sets) {
    const Network residual = delete_edges(net, a.edges);
    for (const auto& t : net.destinations())
      rate = std::min(rate, min_cut(residual, net.source(), t));
  }
  return rate;
}

std::pair<Network, AdversarySpec> expand_capacities(
    const Network& net, const AdversarySpec& spec,
    std::vector<std::string>* warnings) {
  Network out;
  for (const auto& id : net.node_ids()) out.add_node(id, net.role(id));
  std::map<std::string, std::vector<std::string>> replacement;
  for (const Edge& e : net.edges()) {
    if (e.capacity == 1) {
      out.add_edge(e.id, e.tail, e.head, 1);
      replacement[e.id] = {e.id};
    } else {
      for (uint64_t k = 1; k <= e.capacity; ++k) {
        const std::string sub = e.id + "." + std::to_string(k);
        out.add_edge(sub, e.tail, e.head, 1);
        replacement[e.id].push_back(sub);
      }
    }
  }
  out.set_name(net.name());

  // Materialize node-based specs on the original graph, then carry every
  // set across edge by edge.
  AdversarySpec expanded;
  expanded.kind = AdversarySpec::Kind::General;
  for (const AdversarySet& a : adversary_sets(net, spec, warnings)) {
    std::vector<std::string> edges;
    for (const auto& id : a.edges)
      for (const auto& sub : replacement[id]) edges.push_back(sub);
    expanded.sets.push_back(std::move(edges));
  }
  return {std::move(out), std::move(expanded)};
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream ss(line);
  std::string t;
  while (ss >> t) {
    if (t[0] == '#') break;  // comment to end of line
    toks.push_back(t);
  }
  return toks;
}

uint64_t parse_capacity(const std::string& s, int line) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError(
        "capacity must be a positive integer (pre-scale rational "
        "capacities to integers): '" +
            s + "'",
        line);
  uint64_t v = 0;
  for (char c : s) {
    if (v > UINT64_MAX / 10) throw ParseError("capacity overflows", line);
    v = v * 10 + (c - '0');
  }
  if (v == 0) throw ParseError("capacity must be positive", line);
  return v;
}

}  // namespace

LoadResult load_network(std::istream& in, const std::string& name) {
  LoadResult result;
  result.net.set_name(name);
  std::string line;
  int line_no = 0;
  bool saw_node_based = false, saw_sets = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto toks = tokenize(line);
    if (toks.empty()) continue;
    try {
      if (toks[0] == "node") {
        if (toks.size() < 2 || toks.size() > 3)
          throw ParseError("expected: node <id> [source|dest]", line_no);
        Role role = Role::Internal;
        if (toks.size() == 3) {
          if (toks[2] == "source")
            role = Role::Source;
          else if (toks[2] == "dest")
            role = Role::Dest;
          else
            throw ParseError("unknown node role: " + toks[2], line_no);
        }
        result.net.add_node(toks[1], role);
      } else if (toks[0] == "edge") {
        if (toks.size() < 4 || toks.size() > 5)
          throw ParseError("expected: edge <id> <tail> <head> [capacity]",
                           line_no);
        const uint64_t cap =
            toks.size() == 5 ? parse_capacity(toks[4], line_no) : 1;
        result.net.add_edge(toks[1], toks[2], toks[3], cap);
      } else if (toks[0] == "adversary") {
        if (toks.size() >= 2 && toks[1] == "node-based") {
          if (saw_sets)
            throw ParseError("cannot mix node-based and set adversaries",
                             line_no);
          if (saw_node_based)
            throw ParseError("duplicate node-based adversary line", line_no);
          if (toks.size() != 3 || toks[2].rfind("z=", 0) != 0)
            throw ParseError("expected: adversary node-based z=<int>",
                             line_no);
          const std::string zs = toks[2].substr(2);
          if (zs.empty() ||
              zs.find_first_not_of("0123456789") != std::string::npos)
            throw ParseError("bad adversary strength: " + toks[2], line_no);
          AdversarySpec spec;
          spec.kind = AdversarySpec::Kind::NodeBased;
          spec.z = static_cast<uint32_t>(std::stoul(zs));
          result.adversary = spec;
          saw_node_based = true;
        } else if (toks.size() >= 2 && toks[1] == "set") {
          if (saw_node_based)
            throw ParseError("cannot mix node-based and set adversaries",
                             line_no);
          if (!saw_sets) {
            AdversarySpec spec;
            spec.kind = AdversarySpec::Kind::General;
            result.adversary = spec;
            saw_sets = true;
          }
          std::vector<std::string> ids(toks.begin() + 2, toks.end());
          for (const auto& id : ids)
            if (!result.net.has_edge(id))
              throw ParseError("adversary set names unknown edge: " + id,
                               line_no);
          result.adversary->sets.push_back(std::move(ids));
        } else {
          throw ParseError("expected: adversary node-based z=<int> | "
                           "adversary set <edge-ids>",
                           line_no);
        }
      } else {
        throw ParseError("unknown directive: " + toks[0], line_no);
      }
    } catch (const UsageError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  result.net.validate();
  return result;
}

LoadResult load_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open network file: " + path);
  return load_network(in, path);
}

void save_network(std::ostream& out, const Network& net,
                  const AdversarySpec* adversary) {
  for (const auto& id : net.node_ids()) {
    out << "node " << id;
    if (net.role(id) == Role::Source) out << " source";
    if (net.role(id) == Role::Dest) out << " dest";
    out << "\n";
  }
  for (const Edge& e : net.edges()) {
    out << "edge " << e.id << " " << e.tail << " " << e.head;
    if (e.capacity != 1) out << " " << e.capacity;
    out << "\n";
  }
  if (adversary) {
    if (adversary->kind == AdversarySpec::Kind::NodeBased) {
      out << "adversary node-based z=" << adversary->z << "\n";
    } else {
      for (const auto& s : adversary->sets) {
        out << "adversary set";
        for (const auto& id : s) out << " " << id;
        out << "\n";
      }
    }
  }
}

}  // namespace advnet::topo
