#include "spp/core.hpp"

#include <algorithm>
#include <set>

namespace spp {

NodeId Path::owner() const {
  if (is_null()) throw SppError("null path has no owner");
  return nodes.front();
}

NodeId Path::next_hop() const {
  if (nodes.size() < 2) throw SppError("path " + to_string() + " has no next hop");
  return nodes[1];
}

bool Path::contains(NodeId v) const {
  return std::find(nodes.begin(), nodes.end(), v) != nodes.end();
}

bool Path::is_simple() const {
  std::set<NodeId> seen(nodes.begin(), nodes.end());
  return seen.size() == nodes.size();
}

Path Path::prepend(NodeId v) const {
  std::vector<NodeId> out;
  out.reserve(nodes.size() + 1);
  out.push_back(v);
  out.insert(out.end(), nodes.begin(), nodes.end());
  return Path(std::move(out));
}

std::string Path::to_string() const {
  if (is_null()) return "eps";
  std::string out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i) out += '-';
    out += std::to_string(nodes[i]);
  }
  return out;
}

Graph Graph::make(std::vector<NodeId> nodes_in,
                  std::vector<std::pair<NodeId, NodeId>> edges_in) {
  Graph g;
  g.nodes = std::move(nodes_in);
  std::sort(g.nodes.begin(), g.nodes.end());
  g.nodes.erase(std::unique(g.nodes.begin(), g.nodes.end()), g.nodes.end());
  for (NodeId v : g.nodes) {
    if (v < 0) throw SppError("negative node id " + std::to_string(v));
  }
  if (!std::binary_search(g.nodes.begin(), g.nodes.end(), kDestination)) {
    throw SppError("graph must contain the destination node 0");
  }

  for (auto [u, v] : edges_in) {
    if (u == v) throw SppError("self-loop at node " + std::to_string(u));
    if (!std::binary_search(g.nodes.begin(), g.nodes.end(), u) ||
        !std::binary_search(g.nodes.begin(), g.nodes.end(), v)) {
      throw SppError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                     ") references a node not in the graph");
    }
    g.edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());

  for (NodeId v : g.nodes) g.adjacency[v];  // every node gets an entry
  for (auto [u, v] : g.edges) {
    g.adjacency[u].push_back(v);
    g.adjacency[v].push_back(u);
  }
  for (auto& [v, adj] : g.adjacency) std::sort(adj.begin(), adj.end());
  return g;
}

bool Graph::has_node(NodeId v) const {
  return std::binary_search(nodes.begin(), nodes.end(), v);
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  auto e = std::make_pair(std::min(u, v), std::max(u, v));
  return std::binary_search(edges.begin(), edges.end(), e);
}

const std::vector<NodeId>& Graph::neighbors(NodeId v) const {
  auto it = adjacency.find(v);
  if (it == adjacency.end()) throw SppError("unknown node id " + std::to_string(v));
  return it->second;
}

std::vector<NodeId> Graph::nonzero_nodes() const {
  std::vector<NodeId> out;
  out.reserve(nodes.size());
  for (NodeId v : nodes) {
    if (v != kDestination) out.push_back(v);
  }
  return out;
}

std::optional<std::size_t> RankingFunction::rank_of(const Path& p) const {
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (ranked[i] == p) return i;
  }
  return std::nullopt;
}

namespace {

void validate_route(const Graph& graph, NodeId owner, const Path& p,
                    const std::string& context) {
  if (p.is_null()) throw SppError(context + ": the null path cannot be listed");
  if (p.nodes.front() != owner) {
    throw SppError(context + ": path " + p.to_string() + " does not start at node " +
                   std::to_string(owner));
  }
  if (p.nodes.back() != kDestination) {
    throw SppError(context + ": path " + p.to_string() + " does not end at node 0");
  }
  if (!p.is_simple()) {
    throw SppError(context + ": path " + p.to_string() + " repeats a node");
  }
  for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
    if (!graph.has_edge(p.nodes[i], p.nodes[i + 1])) {
      throw SppError(context + ": path " + p.to_string() + " uses missing edge (" +
                     std::to_string(p.nodes[i]) + "," + std::to_string(p.nodes[i + 1]) +
                     ")");
    }
  }
}

}  // namespace

SppInstance SppInstance::make(Graph g, std::map<NodeId, RankingFunction> rankings) {
  SppInstance inst;
  inst.graph = std::move(g);
  inst.rankings = std::move(rankings);

  for (NodeId v : inst.graph.nonzero_nodes()) {
    if (!inst.rankings.count(v)) {
      throw SppError("node " + std::to_string(v) + " has no ranking function");
    }
  }
  for (auto& [v, rf] : inst.rankings) {
    if (v == kDestination) throw SppError("the destination node takes no ranking function");
    if (!inst.graph.has_node(v)) {
      throw SppError("ranking function for unknown node " + std::to_string(v));
    }
    if (rf.owner != v) {
      throw SppError("ranking function keyed at node " + std::to_string(v) +
                     " is owned by node " + std::to_string(rf.owner));
    }
    const std::string context = "ranking of node " + std::to_string(v);
    std::set<Path> seen;
    for (const Path& p : rf.ranked) {
      validate_route(inst.graph, v, p, context);
      if (!seen.insert(p).second) {
        throw SppError(context + ": duplicate path " + p.to_string());
      }
    }
  }
  return inst;
}

const RankingFunction& SppInstance::ranking(NodeId v) const {
  auto it = rankings.find(v);
  if (it == rankings.end()) {
    throw SppError("no ranking function for node " + std::to_string(v));
  }
  return it->second;
}

const Path& PathAssignment::at(NodeId v) const {
  auto it = selection.find(v);
  if (it == selection.end()) {
    throw SppError("assignment has no selection for node " + std::to_string(v));
  }
  return it->second;
}

PathAssignment all_epsilon(const SppInstance& instance) {
  PathAssignment pi;
  for (NodeId v : instance.graph.nodes) {
    pi.set(v, v == kDestination ? Path({kDestination}) : Path());
  }
  return pi;
}

void validate_assignment(const SppInstance& instance, const PathAssignment& pi) {
  for (NodeId v : instance.graph.nodes) {
    if (!pi.selection.count(v)) {
      throw SppError("assignment is missing node " + std::to_string(v));
    }
  }
  for (const auto& [v, p] : pi.selection) {
    if (!instance.graph.has_node(v)) {
      throw SppError("assignment names unknown node " + std::to_string(v));
    }
    if (v == kDestination) {
      if (p != Path({kDestination})) {
        throw SppError("node 0 must select its trivial path [0]");
      }
      continue;
    }
    if (!p.is_null() && !instance.ranking(v).permits(p)) {
      throw SppError("node " + std::to_string(v) + " selects non-permitted path " +
                     p.to_string());
    }
  }
}

std::vector<Path> enumerate_simple_paths(const Graph& graph, NodeId from) {
  if (!graph.has_node(from)) {
    throw SppError("unknown node id " + std::to_string(from));
  }
  std::vector<Path> out;
  std::vector<NodeId> cur{from};
  std::set<NodeId> on_path{from};
  // Neighbors are explored in ascending order, so completed paths come out
  // in lexicographic order without a final sort.
  auto dfs = [&](auto&& self, NodeId v) -> void {
    if (v == kDestination) {
      out.push_back(Path(cur));
      return;
    }
    for (NodeId w : graph.neighbors(v)) {
      if (on_path.count(w)) continue;
      cur.push_back(w);
      on_path.insert(w);
      self(self, w);
      cur.pop_back();
      on_path.erase(w);
    }
  };
  dfs(dfs, from);
  return out;
}

std::vector<Path> choices(const SppInstance& instance, const PathAssignment& pi,
                          NodeId v) {
  if (v == kDestination) throw SppError("the destination node has no choices");
  if (!instance.graph.has_node(v)) {
    throw SppError("unknown node id " + std::to_string(v));
  }
  std::vector<Path> out;
  for (NodeId w : instance.graph.neighbors(v)) {
    const Path& pw = pi.at(w);
    if (pw.is_null() || pw.contains(v)) continue;
    out.push_back(pw.prepend(v));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Path best(const SppInstance& instance, const PathAssignment& pi, NodeId v) {
  if (v == kDestination) throw SppError("the destination node is never activated");
  const RankingFunction& rf = instance.ranking(v);
  std::optional<std::size_t> best_rank;
  Path best_path;
  for (NodeId w : instance.graph.neighbors(v)) {
    const Path& pw = pi.at(w);
    if (pw.is_null() || pw.contains(v)) continue;
    Path cand = pw.prepend(v);
    auto r = rf.rank_of(cand);
    if (r && (!best_rank || *r < *best_rank)) {
      best_rank = r;
      best_path = std::move(cand);
    }
  }
  return best_path;  // null when nothing permitted is available
}

}  // namespace spp
