#pragma once

#include <map>
#include <vector>

#include "spp/analysis.hpp"
#include "spp/core.hpp"
#include "spp/decision.hpp"

namespace spp {

// The classic divergent triangle: nodes a=1, b=2, c=3 around destination 0,
// each preferring the route through its counterclockwise neighbor over its
// direct route. No stable state exists.
SppInstance bad_gadget();

// The classic bistable pair: nodes 1 and 2, each preferring the route through
// the other over its direct route. Two stable states exist.
SppInstance disagree_gadget();

// A guest network embedded in a host instance: host rankings everywhere
// except on the embedded region, which runs the guest's rankings transported
// through the isomorphism; any region-owned path leaving the region is
// filtered by omission.
struct PartialDeployment {
  SppInstance host;
  std::vector<NodeId> region;     // image nodes in the host, including 0
  std::map<NodeId, NodeId> iso;   // guest node -> host node; must fix 0
  SppInstance guest;
};

SppInstance compose_partial_deployment(const PartialDeployment& pd);

// The two-copies-plus-oscillator construction. The host instance carries the
// engineered rankings everywhere outside the deployment region (whose nodes
// filter everything until deploy() replaces them).
struct TheoremOneOutput {
  SppInstance host;      // (G, host rankings); region nodes rank nothing
  Graph n_graph;         // the witness network N
  std::vector<NodeId> region;    // the copy N', including 0
  std::map<NodeId, NodeId> iso;  // N node -> N' node
  NodeId w = -1;         // node whose stable selections differ
  NodeId w_prime = -1;
  NodeId x = -1;
  NodeId a = -1;
  NodeId b = -1;
  NodeId c = -1;
  std::vector<Path> p_list;        // all w->0 paths in N; p_list[0] is the
                                   // B-side stable selection
  std::vector<Path> p_prime_list;  // the same paths transported onto N'
  std::size_t lambda_index = 0;    // index in p_list of the A-side stable
                                   // selection; never 0
  PathAssignment stable_a;         // unique stable states of the inputs
  PathAssignment stable_b;

  // Composes the host with guest rankings on the region. The guest must be
  // an instance on n_graph.
  SppInstance deploy(const SppInstance& guest) const;
};

// Builds the instance that converges under a deployment of the first input's
// rankings and diverges under the second's. Requires the inputs to be safely
// distinct on their shared graph and to disagree at some node where both
// stable selections are real paths.
TheoremOneOutput construct_theorem1(const SppInstance& a, const SppInstance& b,
                                    const AnalysisOptions& = {});

struct TheoremTwoOutput {
  Graph graph;                                // G
  std::map<NodeId, PartialRanking> partials;  // one per non-destination node
  TheoremOneOutput base;
};

// Same construction driven by partial rankings: the emitted partials force
// the engineered rankings everywhere except on the copy, where they stay
// raw, so totalizing with d converges and totalizing with d_prime diverges.
TheoremTwoOutput construct_theorem2(const Graph& n_graph,
                                    const std::map<NodeId, PartialRanking>& partials,
                                    const DecisionProcess& d,
                                    const DecisionProcess& d_prime,
                                    const AnalysisOptions& = {});

}  // namespace spp
