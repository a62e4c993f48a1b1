#pragma once

#include <compare>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spp {

// Node ids are non-negative integers; node 0 is the shared destination.
using NodeId = int;
inline constexpr NodeId kDestination = 0;

struct SppError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A route to the destination, or the null path (no route at all). A route
// lists its nodes from the owning node down to 0; the null path is the empty
// sequence. Ordering is lexicographic on the node sequence, which is the
// canonical path order used everywhere determinism matters.
struct Path {
  std::vector<NodeId> nodes;

  Path() = default;
  explicit Path(std::vector<NodeId> ns) : nodes(std::move(ns)) {}

  bool is_null() const { return nodes.empty(); }
  NodeId owner() const;     // first node; routes only
  NodeId next_hop() const;  // second node; routes of two or more nodes
  bool contains(NodeId v) const;
  bool is_simple() const;        // no repeated node
  Path prepend(NodeId v) const;  // the concatenation v . this, unchecked
  std::string to_string() const; // "eps" or "1-2-0"

  friend auto operator<=>(const Path&, const Path&) = default;
};

// Undirected graph over node ids. Edges are stored normalized (lo, hi);
// policy asymmetry lives entirely in the ranking functions.
struct Graph {
  std::vector<NodeId> nodes;                     // sorted, unique
  std::vector<std::pair<NodeId, NodeId>> edges;  // sorted, unique, lo < hi
  std::map<NodeId, std::vector<NodeId>> adjacency;

  static Graph make(std::vector<NodeId> nodes,
                    std::vector<std::pair<NodeId, NodeId>> edges);

  bool has_node(NodeId v) const;
  bool has_edge(NodeId u, NodeId v) const;
  const std::vector<NodeId>& neighbors(NodeId v) const;
  std::vector<NodeId> nonzero_nodes() const;  // ascending, destination excluded

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.nodes == b.nodes && a.edges == b.edges;
  }
};

// A node's strict preference list over its permitted routes, most preferred
// first. Routes absent from the list are filtered: ranked below the null
// path, which sits immediately below the last entry.
struct RankingFunction {
  NodeId owner = -1;
  std::vector<Path> ranked;

  std::optional<std::size_t> rank_of(const Path& p) const;  // 0 is best
  bool permits(const Path& p) const { return rank_of(p).has_value(); }

  friend bool operator==(const RankingFunction&, const RankingFunction&) = default;
};

// The full problem instance: a graph plus one ranking function per
// non-destination node. Immutable after make(); operations are pure.
struct SppInstance {
  Graph graph;
  std::map<NodeId, RankingFunction> rankings;

  static SppInstance make(Graph g, std::map<NodeId, RankingFunction> rankings);

  const RankingFunction& ranking(NodeId v) const;

  friend bool operator==(const SppInstance&, const SppInstance&) = default;
};

// Snapshot of every node's currently selected path, total over the graph's
// nodes. Node 0 always holds its trivial path [0]. Selections may be
// mutually inconsistent across nodes; only permitted-path closure is an
// invariant.
struct PathAssignment {
  std::map<NodeId, Path> selection;

  const Path& at(NodeId v) const;
  void set(NodeId v, Path p) { selection[v] = std::move(p); }

  friend auto operator<=>(const PathAssignment&, const PathAssignment&) = default;
};

// Assignment with every non-destination node on the null path.
PathAssignment all_epsilon(const SppInstance& instance);

// Checks totality, the fixed selection at node 0, and permitted-path
// closure. Throws SppError naming the offending node.
void validate_assignment(const SppInstance& instance, const PathAssignment& pi);

// Every simple path from `from` to node 0, in lexicographic order on the
// node sequence. Empty if 0 is unreachable from `from`.
std::vector<Path> enumerate_simple_paths(const Graph& graph, NodeId from);

// The candidate routes node v can currently adopt: vw.pi(w) for every
// neighbor w whose selection is non-null and does not already contain v.
// Sorted lexicographically; the null path is never a member. Candidates are
// not filtered by v's ranking.
std::vector<Path> choices(const SppInstance& instance, const PathAssignment& pi,
                          NodeId v);

// The highest-ranked permitted member of choices(); the null path when no
// candidate is permitted.
Path best(const SppInstance& instance, const PathAssignment& pi, NodeId v);

}  // namespace spp
