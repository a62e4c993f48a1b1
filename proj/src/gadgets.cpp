#include "spp/gadgets.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace spp {

SppInstance bad_gadget() {
  Graph g = Graph::make({0, 1, 2, 3},
                        {{1, 2}, {2, 3}, {3, 1}, {1, 0}, {2, 0}, {3, 0}});
  std::map<NodeId, RankingFunction> r;
  r[1] = RankingFunction{1, {Path({1, 2, 0}), Path({1, 0})}};
  r[2] = RankingFunction{2, {Path({2, 3, 0}), Path({2, 0})}};
  r[3] = RankingFunction{3, {Path({3, 1, 0}), Path({3, 0})}};
  return SppInstance::make(std::move(g), std::move(r));
}

SppInstance disagree_gadget() {
  Graph g = Graph::make({0, 1, 2}, {{1, 0}, {2, 0}, {1, 2}});
  std::map<NodeId, RankingFunction> r;
  r[1] = RankingFunction{1, {Path({1, 2, 0}), Path({1, 0})}};
  r[2] = RankingFunction{2, {Path({2, 1, 0}), Path({2, 0})}};
  return SppInstance::make(std::move(g), std::move(r));
}

namespace {

Path transport(const Path& p, const std::map<NodeId, NodeId>& iso) {
  std::vector<NodeId> nodes;
  nodes.reserve(p.nodes.size());
  for (NodeId v : p.nodes) nodes.push_back(iso.at(v));
  return Path(std::move(nodes));
}

}  // namespace

SppInstance compose_partial_deployment(const PartialDeployment& pd) {
  const Graph& host = pd.host.graph;
  const Graph& guest = pd.guest.graph;

  std::set<NodeId> region(pd.region.begin(), pd.region.end());
  if (region.size() != pd.region.size()) {
    throw SppError("deployment region repeats a node");
  }
  for (NodeId v : region) {
    if (!host.has_node(v)) {
      throw SppError("deployment region names unknown node " + std::to_string(v));
    }
  }
  if (!region.count(kDestination)) {
    throw SppError("deployment region must include the destination node 0");
  }

  if (pd.iso.size() != guest.nodes.size() || region.size() != guest.nodes.size()) {
    throw SppError("isomorphism must map the guest nodes onto the region");
  }
  std::set<NodeId> image;
  for (auto [gv, hv] : pd.iso) {
    if (!guest.has_node(gv)) {
      throw SppError("isomorphism maps unknown guest node " + std::to_string(gv));
    }
    if (!region.count(hv)) {
      throw SppError("isomorphism maps node " + std::to_string(gv) +
                     " outside the region");
    }
    image.insert(hv);
  }
  if (image != region) throw SppError("isomorphism is not onto the region");
  if (pd.iso.at(kDestination) != kDestination) {
    throw SppError("isomorphism must fix the destination node 0");
  }
  // The region must be an exact copy: edges correspond in both directions.
  for (NodeId u : guest.nodes) {
    for (NodeId v : guest.nodes) {
      if (u >= v) continue;
      if (guest.has_edge(u, v) != host.has_edge(pd.iso.at(u), pd.iso.at(v))) {
        throw SppError("isomorphism violation at guest edge (" + std::to_string(u) +
                       "," + std::to_string(v) + ")");
      }
    }
  }

  std::map<NodeId, NodeId> inverse;
  for (auto [gv, hv] : pd.iso) inverse[hv] = gv;

  std::map<NodeId, RankingFunction> rankings;
  for (NodeId v : host.nonzero_nodes()) {
    if (region.count(v)) {
      const RankingFunction& grf = pd.guest.ranking(inverse.at(v));
      RankingFunction rf;
      rf.owner = v;
      rf.ranked.reserve(grf.ranked.size());
      for (const Path& p : grf.ranked) rf.ranked.push_back(transport(p, pd.iso));
      rankings[v] = std::move(rf);
    } else {
      rankings[v] = pd.host.ranking(v);
    }
  }
  return SppInstance::make(host, std::move(rankings));
}

SppInstance TheoremOneOutput::deploy(const SppInstance& guest) const {
  if (guest.graph != n_graph) {
    throw SppError("deployment rankings must live on the construction's witness network");
  }
  return compose_partial_deployment(PartialDeployment{host, region, iso, guest});
}

TheoremOneOutput construct_theorem1(const SppInstance& inst_a,
                                    const SppInstance& inst_b,
                                    const AnalysisOptions& opts) {
  if (inst_a.graph != inst_b.graph) {
    throw SppError("theorem-1 inputs must share one graph");
  }
  const DistinctVerdict dv = safely_distinct(inst_a, inst_b, opts);
  if (!dv.distinct) {
    throw SppError(std::string("theorem-1 inputs are not safely distinct: ") +
                   to_string(dv.reason));
  }

  TheoremOneOutput out;
  out.n_graph = inst_a.graph;
  out.stable_a = *dv.stable_a;
  out.stable_b = *dv.stable_b;

  // The construction threads two concrete paths through w, so both stable
  // selections there must be real paths, not the null path.
  out.w = -1;
  for (NodeId v : out.n_graph.nonzero_nodes()) {
    const Path& pa = out.stable_a.at(v);
    const Path& pb = out.stable_b.at(v);
    if (pa != pb && !pa.is_null() && !pb.is_null()) {
      out.w = v;
      break;
    }
  }
  if (out.w < 0) {
    throw SppError(
        "no node differs with two non-null stable selections; the construction "
        "is undefined for this pair");
  }

  const NodeId offset = out.n_graph.nodes.back();  // max id; nodes are sorted
  out.iso[kDestination] = kDestination;
  for (NodeId v : out.n_graph.nonzero_nodes()) out.iso[v] = v + offset;
  out.w_prime = out.iso.at(out.w);
  out.x = 2 * offset + 1;
  out.a = 2 * offset + 2;
  out.b = 2 * offset + 3;
  out.c = 2 * offset + 4;

  out.region.push_back(kDestination);
  for (NodeId v : out.n_graph.nonzero_nodes()) out.region.push_back(out.iso.at(v));

  std::vector<NodeId> nodes = out.n_graph.nodes;
  for (NodeId v : out.n_graph.nonzero_nodes()) nodes.push_back(out.iso.at(v));
  nodes.insert(nodes.end(), {out.x, out.a, out.b, out.c});

  std::vector<std::pair<NodeId, NodeId>> edges = out.n_graph.edges;
  for (auto [u, v] : out.n_graph.edges) {
    edges.emplace_back(out.iso.at(u), out.iso.at(v));
  }
  edges.insert(edges.end(), {{out.x, out.w},
                             {out.x, out.w_prime},
                             {out.x, out.a},
                             {out.a, out.b},
                             {out.b, out.c},
                             {out.c, out.a},
                             {out.a, kDestination},
                             {out.b, kDestination},
                             {out.c, kDestination}});
  Graph g = Graph::make(std::move(nodes), std::move(edges));

  // All w->0 paths in N, reordered so the B-side stable selection leads and
  // the rest stay in canonical order.
  std::vector<Path> all_paths = enumerate_simple_paths(out.n_graph, out.w);
  const Path& p1 = out.stable_b.at(out.w);
  out.p_list.push_back(p1);
  for (const Path& p : all_paths) {
    if (p != p1) out.p_list.push_back(p);
  }
  const Path& pa = out.stable_a.at(out.w);
  const auto it = std::find(out.p_list.begin(), out.p_list.end(), pa);
  if (it == out.p_list.end()) {
    throw SppError("internal error: stable selection missing from the path list");
  }
  out.lambda_index = static_cast<std::size_t>(it - out.p_list.begin());

  out.p_prime_list.reserve(out.p_list.size());
  for (const Path& p : out.p_list) out.p_prime_list.push_back(transport(p, out.iso));

  std::map<NodeId, RankingFunction> rankings;
  for (NodeId v : out.n_graph.nonzero_nodes()) {
    rankings[v] = inst_a.ranking(v);                        // λ on N
    rankings[out.iso.at(v)] = RankingFunction{out.iso.at(v), {}};  // deployment slot
  }

  // x interleaves the copies, original copy first at each position, and
  // permits nothing else.
  RankingFunction rx;
  rx.owner = out.x;
  for (std::size_t i = 0; i < out.p_list.size(); ++i) {
    rx.ranked.push_back(out.p_list[i].prepend(out.x));
    rx.ranked.push_back(out.p_prime_list[i].prepend(out.x));
  }
  rankings[out.x] = std::move(rx);

  // The oscillator: a's escape route through x sits on top of its divergent
  // pair; b and c are plain divergent-triangle nodes.
  rankings[out.a] =
      RankingFunction{out.a,
                      {out.p_list[out.lambda_index].prepend(out.x).prepend(out.a),
                       Path({out.a, out.b, 0}), Path({out.a, 0})}};
  rankings[out.b] = RankingFunction{out.b, {Path({out.b, out.c, 0}), Path({out.b, 0})}};
  rankings[out.c] = RankingFunction{out.c, {Path({out.c, out.a, 0}), Path({out.c, 0})}};

  out.host = SppInstance::make(std::move(g), std::move(rankings));
  return out;
}

TheoremTwoOutput construct_theorem2(const Graph& n_graph,
                                    const std::map<NodeId, PartialRanking>& partials,
                                    const DecisionProcess& d,
                                    const DecisionProcess& d_prime,
                                    const AnalysisOptions& opts) {
  const SppInstance inst_a = apply_all(d, partials, n_graph);
  const SppInstance inst_b = apply_all(d_prime, partials, n_graph);

  TheoremTwoOutput out;
  out.base = construct_theorem1(inst_a, inst_b, opts);
  out.graph = out.base.host.graph;

  // Distinct descending classes pin a list exactly, so any decision process
  // reproduces it.
  auto forced = [](const RankingFunction& rf) {
    PartialRanking pr;
    pr.owner = rf.owner;
    const int n = static_cast<int>(rf.ranked.size());
    for (int i = 0; i < n; ++i) pr.class_of[rf.ranked[i]] = n - i;
    return pr;
  };

  for (NodeId v : out.base.n_graph.nonzero_nodes()) {
    out.partials[v] = forced(inst_a.ranking(v));  // d's totalization, pinned
    PartialRanking raw;                            // the copy stays undecided
    raw.owner = out.base.iso.at(v);
    for (const auto& [p, cls] : partials.at(v).class_of) {
      Path tp;
      tp.nodes.reserve(p.nodes.size());
      for (NodeId u : p.nodes) tp.nodes.push_back(out.base.iso.at(u));
      raw.class_of[tp] = cls;
    }
    out.partials[raw.owner] = std::move(raw);
  }
  for (NodeId v : {out.base.x, out.base.a, out.base.b, out.base.c}) {
    out.partials[v] = forced(out.base.host.ranking(v));
  }
  return out;
}

}  // namespace spp
