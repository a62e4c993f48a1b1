#include "spp/decision.hpp"

#include <algorithm>
#include <utility>

namespace spp {

const char* to_string(TieBreak t) {
  switch (t) {
    case TieBreak::ShortestPathLength: return "shortest-path";
    case TieBreak::LongestPathLength: return "longest-path";
    case TieBreak::LowestNextHopId: return "lowest-next-hop";
    case TieBreak::HighestNextHopId: return "highest-next-hop";
    case TieBreak::LexMinNodeSequence: return "lex-min";
    case TieBreak::LexMaxNodeSequence: return "lex-max";
  }
  return "unknown";
}

std::optional<TieBreak> tiebreak_from_name(const std::string& name) {
  static const std::pair<const char*, TieBreak> table[] = {
      {"shortest-path", TieBreak::ShortestPathLength},
      {"longest-path", TieBreak::LongestPathLength},
      {"lowest-next-hop", TieBreak::LowestNextHopId},
      {"highest-next-hop", TieBreak::HighestNextHopId},
      {"lex-min", TieBreak::LexMinNodeSequence},
      {"lex-max", TieBreak::LexMaxNodeSequence},
  };
  for (auto& [n, t] : table) {
    if (name == n) return t;
  }
  return std::nullopt;
}

DecisionProcess DecisionProcess::make(std::vector<TieBreak> chain) {
  if (chain.empty()) throw SppError("tie-break chain must not be empty");
  const TieBreak last = chain.back();
  if (last != TieBreak::LexMinNodeSequence && last != TieBreak::LexMaxNodeSequence) {
    throw SppError("tie-break chain must end with lex-min or lex-max");
  }
  return DecisionProcess{std::move(chain)};
}

std::string DecisionProcess::name() const {
  std::string out;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (i) out += ',';
    out += to_string(chain[i]);
  }
  return out;
}

namespace {

// -1: p before q, +1: q before p, 0: this criterion cannot tell.
int compare(TieBreak t, const Path& p, const Path& q) {
  switch (t) {
    case TieBreak::ShortestPathLength:
      if (p.nodes.size() != q.nodes.size()) {
        return p.nodes.size() < q.nodes.size() ? -1 : 1;
      }
      return 0;
    case TieBreak::LongestPathLength:
      if (p.nodes.size() != q.nodes.size()) {
        return p.nodes.size() > q.nodes.size() ? -1 : 1;
      }
      return 0;
    case TieBreak::LowestNextHopId:
      if (p.next_hop() != q.next_hop()) return p.next_hop() < q.next_hop() ? -1 : 1;
      return 0;
    case TieBreak::HighestNextHopId:
      if (p.next_hop() != q.next_hop()) return p.next_hop() > q.next_hop() ? -1 : 1;
      return 0;
    case TieBreak::LexMinNodeSequence:
      if (p.nodes != q.nodes) return p.nodes < q.nodes ? -1 : 1;
      return 0;
    case TieBreak::LexMaxNodeSequence:
      if (p.nodes != q.nodes) return p.nodes > q.nodes ? -1 : 1;
      return 0;
  }
  return 0;
}

}  // namespace

RankingFunction apply(const DecisionProcess& d, const PartialRanking& partial) {
  if (d.chain.empty()) throw SppError("tie-break chain must not be empty");
  for (const auto& [p, cls] : partial.class_of) {
    (void)cls;
    if (p.is_null()) throw SppError("partial ranking maps the null path");
    if (p.owner() != partial.owner) {
      throw SppError("partial ranking of node " + std::to_string(partial.owner) +
                     " maps path " + p.to_string() + " owned elsewhere");
    }
    if (p.nodes.back() != kDestination || !p.is_simple()) {
      throw SppError("partial ranking of node " + std::to_string(partial.owner) +
                     " maps invalid path " + p.to_string());
    }
  }

  auto before = [&](const Path& p, const Path& q) {
    const int cp = partial.class_of.at(p);
    const int cq = partial.class_of.at(q);
    if (cp != cq) return cp > cq;
    for (TieBreak t : d.chain) {
      if (int c = compare(t, p, q)) return c < 0;
    }
    return false;
  };

  RankingFunction rf;
  rf.owner = partial.owner;
  rf.ranked.reserve(partial.class_of.size());
  for (const auto& [p, cls] : partial.class_of) {
    (void)cls;
    rf.ranked.push_back(p);
  }
  std::sort(rf.ranked.begin(), rf.ranked.end(), before);

  // A lex-final chain orders any two distinct paths; this guards chains
  // constructed without DecisionProcess::make.
  for (std::size_t i = 0; i + 1 < rf.ranked.size(); ++i) {
    if (!before(rf.ranked[i], rf.ranked[i + 1])) {
      throw SppError("tie-break chain " + d.name() + " fails to order paths " +
                     rf.ranked[i].to_string() + " and " + rf.ranked[i + 1].to_string());
    }
  }
  return rf;
}

SppInstance apply_all(const DecisionProcess& d,
                      const std::map<NodeId, PartialRanking>& partials,
                      const Graph& graph) {
  for (NodeId v : graph.nonzero_nodes()) {
    if (!partials.count(v)) {
      throw SppError("node " + std::to_string(v) + " has no partial ranking");
    }
  }
  std::map<NodeId, RankingFunction> rankings;
  for (const auto& [v, partial] : partials) {
    if (!graph.has_node(v) || v == kDestination) {
      throw SppError("partial ranking for invalid node " + std::to_string(v));
    }
    if (partial.owner != v) {
      throw SppError("partial ranking keyed at node " + std::to_string(v) +
                     " is owned by node " + std::to_string(partial.owner));
    }
    rankings[v] = apply(d, partial);
  }
  return SppInstance::make(graph, std::move(rankings));
}

std::vector<DecisionProcess> standard_catalog() {
  using T = TieBreak;
  return {
      DecisionProcess::make({T::ShortestPathLength, T::LexMinNodeSequence}),
      DecisionProcess::make({T::ShortestPathLength, T::LowestNextHopId, T::LexMinNodeSequence}),
      DecisionProcess::make({T::LongestPathLength, T::LexMaxNodeSequence}),
      DecisionProcess::make({T::LowestNextHopId, T::LexMinNodeSequence}),
      DecisionProcess::make({T::HighestNextHopId, T::LexMaxNodeSequence}),
      DecisionProcess::make({T::LexMinNodeSequence}),
      DecisionProcess::make({T::LexMaxNodeSequence}),
      DecisionProcess::make({T::HighestNextHopId, T::ShortestPathLength, T::LexMinNodeSequence}),
  };
}

}  // namespace spp
