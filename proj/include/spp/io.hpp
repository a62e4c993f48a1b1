#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <json.hpp>

#include "spp/analysis.hpp"
#include "spp/core.hpp"
#include "spp/decision.hpp"
#include "spp/dynamics.hpp"
#include "spp/gadgets.hpp"

namespace spp::io {

using nlohmann::json;

struct ParseError : SppError {
  using SppError::SppError;
};

// A parsed instance file. Carries either total rankings or per-node partial
// rankings with their tie-break chains; exactly one of the two.
struct InstanceDocument {
  enum class Kind { Rankings, Partials };

  Kind kind = Kind::Rankings;
  Graph graph;
  std::map<NodeId, RankingFunction> rankings;
  std::map<NodeId, PartialRanking> partials;
  std::map<NodeId, DecisionProcess> tiebreaks;  // one per partial

  // Rankings directly, or each node's partial totalized by its own chain.
  SppInstance to_instance() const;
};

InstanceDocument parse_instance(const std::string& text,
                                const std::string& origin = "<input>");
InstanceDocument load_instance_file(const std::string& path);

std::string serialize_instance(const SppInstance&);
// Partials document with one shared tie-break chain on every node.
std::string serialize_partials(const Graph&,
                               const std::map<NodeId, PartialRanking>&,
                               const DecisionProcess& tiebreak);

json path_json(const Path&);
Path path_from_json(const json&, const std::string& context);
json assignment_json(const PathAssignment&);
// Missing non-destination nodes default to the null path.
PathAssignment assignment_from_json(const SppInstance&, const json&,
                                    const std::string& context);

json trace_summary_json(const Trace&);
json safety_json(const SafetyVerdict&);
json distinct_json(const DistinctVerdict&);
json manifest_json(const TheoremOneOutput&);

// One line per step: index, node, chosen path, changed|same; then an
// outcome line.
std::string trace_log(const Trace&);

// Graphviz text; each node is annotated with its top three ranked paths.
std::string to_dot(const SppInstance&);

// "round-robin" | "random" | "random:SEED" | "explicit:FILE". A bare
// "random" takes the supplied default seed; the explicit file holds
// whitespace-separated node ids.
Schedule parse_schedule(const std::string& spec, std::uint64_t default_seed);

}  // namespace spp::io
