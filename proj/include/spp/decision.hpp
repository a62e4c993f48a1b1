#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spp/core.hpp"

namespace spp {

enum class TieBreak {
  ShortestPathLength,
  LongestPathLength,
  LowestNextHopId,
  HighestNextHopId,
  LexMinNodeSequence,
  LexMaxNodeSequence,
};

const char* to_string(TieBreak);
std::optional<TieBreak> tiebreak_from_name(const std::string& name);

// Operator preferences with ties: higher class values are preferred, paths
// sharing a class are left for the decision process to order, and unmapped
// paths are filtered (below the null path).
struct PartialRanking {
  NodeId owner = -1;
  std::map<Path, int> class_of;
  friend bool operator==(const PartialRanking&, const PartialRanking&) = default;
};

// A tie-break chain applied within each preference class. The final criterion
// must be lex-min or lex-max over the node sequence so that any two distinct
// paths end up strictly ordered.
struct DecisionProcess {
  std::vector<TieBreak> chain;

  static DecisionProcess make(std::vector<TieBreak> chain);
  std::string name() const;  // "lowest-next-hop,lex-min"

  friend bool operator==(const DecisionProcess&, const DecisionProcess&) = default;
};

// Totalizes a partial ranking: classes descending, the tie-break chain within
// each class. Mapped paths stay, unmapped paths stay filtered, and any strict
// class preference is preserved in the output order.
RankingFunction apply(const DecisionProcess&, const PartialRanking&);

// Node-wise apply over one partial ranking per non-destination node, packaged
// as an instance on the given graph.
SppInstance apply_all(const DecisionProcess&,
                      const std::map<NodeId, PartialRanking>&, const Graph&);

// Representative processes exercised by the test suites.
std::vector<DecisionProcess> standard_catalog();

}  // namespace spp
