#include "spp/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace spp::io {

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw ParseError(origin + ": " + what);
}

// nlohmann reports byte offsets; translate to line/column for the message.
std::pair<std::size_t, std::size_t> line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

NodeId node_from_key(const std::string& key, const std::string& origin,
                     const std::string& where) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(key, &used);
    if (used != key.size() || v < 0) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    fail(origin, where + ": key '" + key + "' is not a node id");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SppError("cannot open file " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

json path_json(const Path& p) { return json(p.nodes); }

Path path_from_json(const json& j, const std::string& context) {
  if (!j.is_array()) throw ParseError(context + ": a path must be a list of node ids");
  std::vector<NodeId> nodes;
  for (const auto& e : j) {
    if (!e.is_number_integer() || e.get<int>() < 0) {
      throw ParseError(context + ": a path holds non-negative node ids only");
    }
    nodes.push_back(e.get<NodeId>());
  }
  return Path(std::move(nodes));
}

json assignment_json(const PathAssignment& pi) {
  json out = json::object();
  for (const auto& [v, p] : pi.selection) out[std::to_string(v)] = path_json(p);
  return out;
}

PathAssignment assignment_from_json(const SppInstance& instance, const json& j,
                                    const std::string& context) {
  if (!j.is_object()) throw ParseError(context + ": an assignment must be an object");
  PathAssignment pi = all_epsilon(instance);
  for (const auto& [key, value] : j.items()) {
    const NodeId v = node_from_key(key, context, "assignment");
    if (!instance.graph.has_node(v)) {
      throw ParseError(context + ": assignment names unknown node " + key);
    }
    pi.set(v, path_from_json(value, context + ": node " + key));
  }
  validate_assignment(instance, pi);
  return pi;
}

InstanceDocument parse_instance(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_of(text, e.byte == 0 ? 0 : e.byte - 1);
    fail(origin, "parse error at line " + std::to_string(line) + ", column " +
                     std::to_string(col) + ": " + e.what());
  }
  if (!j.is_object()) fail(origin, "top level must be an object");

  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "nodes" && key != "edges" && key != "dest" && key != "rankings" &&
        key != "partials") {
      fail(origin, "unknown key '" + key + "'");
    }
  }
  if (!j.contains("nodes")) fail(origin, "missing key 'nodes'");
  if (!j.contains("edges")) fail(origin, "missing key 'edges'");
  if (!j.contains("dest")) fail(origin, "missing key 'dest'");
  if (!j["dest"].is_number_integer() || j["dest"].get<int>() != 0) {
    fail(origin, "'dest' must be the integer 0");
  }
  const bool has_rankings = j.contains("rankings");
  const bool has_partials = j.contains("partials");
  if (has_rankings == has_partials) {
    fail(origin, "exactly one of 'rankings' or 'partials' must be present");
  }

  std::vector<NodeId> nodes;
  if (!j["nodes"].is_array()) fail(origin, "'nodes' must be a list of node ids");
  for (const auto& e : j["nodes"]) {
    if (!e.is_number_integer() || e.get<int>() < 0) {
      fail(origin, "'nodes' holds non-negative integers only");
    }
    nodes.push_back(e.get<NodeId>());
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  if (!j["edges"].is_array()) fail(origin, "'edges' must be a list of node pairs");
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
        !e[1].is_number_integer()) {
      fail(origin, "'edges' entries must be two-element node lists");
    }
    edges.emplace_back(e[0].get<NodeId>(), e[1].get<NodeId>());
  }

  InstanceDocument doc;
  try {
    doc.graph = Graph::make(std::move(nodes), std::move(edges));
  } catch (const SppError& e) {
    fail(origin, e.what());
  }

  if (has_rankings) {
    doc.kind = InstanceDocument::Kind::Rankings;
    if (!j["rankings"].is_object()) fail(origin, "'rankings' must be an object");
    for (const auto& [key, lists] : j["rankings"].items()) {
      const NodeId v = node_from_key(key, origin, "rankings");
      if (!lists.is_array()) {
        fail(origin, "rankings." + key + " must be a list of paths");
      }
      RankingFunction rf;
      rf.owner = v;
      for (std::size_t i = 0; i < lists.size(); ++i) {
        rf.ranked.push_back(
            path_from_json(lists[i], origin + ": rankings." + key + "[" +
                                         std::to_string(i) + "]"));
      }
      doc.rankings[v] = std::move(rf);
    }
    try {
      (void)SppInstance::make(doc.graph, doc.rankings);
    } catch (const SppError& e) {
      fail(origin, e.what());
    }
  } else {
    doc.kind = InstanceDocument::Kind::Partials;
    if (!j["partials"].is_object()) fail(origin, "'partials' must be an object");
    for (const auto& [key, spec] : j["partials"].items()) {
      const NodeId v = node_from_key(key, origin, "partials");
      const std::string where = "partials." + key;
      if (!doc.graph.has_node(v) || v == kDestination) {
        fail(origin, where + ": not a non-destination node of the graph");
      }
      if (!spec.is_object() || !spec.contains("classes") || !spec.contains("tiebreak")) {
        fail(origin, where + " must hold 'classes' and 'tiebreak'");
      }
      PartialRanking pr;
      pr.owner = v;
      if (!spec["classes"].is_array()) {
        fail(origin, where + ".classes must be a list of {path, class} entries");
      }
      for (std::size_t i = 0; i < spec["classes"].size(); ++i) {
        const auto& entry = spec["classes"][i];
        const std::string ctx = where + ".classes[" + std::to_string(i) + "]";
        if (!entry.is_object() || !entry.contains("path") || !entry.contains("class") ||
            !entry["class"].is_number_integer()) {
          fail(origin, ctx + " must be {path: [ids], class: integer}");
        }
        Path p = path_from_json(entry["path"], origin + ": " + ctx);
        if (pr.class_of.count(p)) fail(origin, ctx + ": duplicate path " + p.to_string());
        pr.class_of[p] = entry["class"].get<int>();
      }
      std::vector<TieBreak> chain;
      if (!spec["tiebreak"].is_array()) {
        fail(origin, where + ".tiebreak must be a list of criterion names");
      }
      for (const auto& name : spec["tiebreak"]) {
        if (!name.is_string()) fail(origin, where + ".tiebreak holds strings only");
        auto t = tiebreak_from_name(name.get<std::string>());
        if (!t) {
          fail(origin, where + ".tiebreak: unknown criterion '" +
                           name.get<std::string>() + "'");
        }
        chain.push_back(*t);
      }
      try {
        doc.tiebreaks.emplace(v, DecisionProcess::make(std::move(chain)));
      } catch (const SppError& e) {
        fail(origin, where + ": " + e.what());
      }
      doc.partials[v] = std::move(pr);
    }
    try {
      (void)doc.to_instance();
    } catch (const SppError& e) {
      fail(origin, e.what());
    }
  }
  return doc;
}

InstanceDocument load_instance_file(const std::string& path) {
  return parse_instance(read_file(path), path);
}

SppInstance InstanceDocument::to_instance() const {
  if (kind == Kind::Rankings) return SppInstance::make(graph, rankings);
  std::map<NodeId, RankingFunction> out;
  for (const auto& [v, pr] : partials) out[v] = apply(tiebreaks.at(v), pr);
  return SppInstance::make(graph, std::move(out));
}

namespace {

json graph_json(const Graph& g) {
  json j;
  j["dest"] = 0;
  j["nodes"] = g.nodes;
  json edges = json::array();
  for (auto [u, v] : g.edges) edges.push_back(json::array({u, v}));
  j["edges"] = std::move(edges);
  return j;
}

}  // namespace

std::string serialize_instance(const SppInstance& instance) {
  json j = graph_json(instance.graph);
  json rankings = json::object();
  for (const auto& [v, rf] : instance.rankings) {
    json lists = json::array();
    for (const Path& p : rf.ranked) lists.push_back(path_json(p));
    rankings[std::to_string(v)] = std::move(lists);
  }
  j["rankings"] = std::move(rankings);
  return j.dump(2) + "\n";
}

std::string serialize_partials(const Graph& graph,
                               const std::map<NodeId, PartialRanking>& partials,
                               const DecisionProcess& tiebreak) {
  json j = graph_json(graph);
  json chain = json::array();
  for (TieBreak t : tiebreak.chain) chain.push_back(to_string(t));
  json out = json::object();
  for (const auto& [v, pr] : partials) {
    json classes = json::array();
    for (const auto& [p, cls] : pr.class_of) {
      classes.push_back(json{{"class", cls}, {"path", path_json(p)}});
    }
    out[std::to_string(v)] = json{{"classes", std::move(classes)}, {"tiebreak", chain}};
  }
  j["partials"] = std::move(out);
  return j.dump(2) + "\n";
}

json trace_summary_json(const Trace& trace) {
  json j;
  j["initial"] = assignment_json(trace.initial);
  j["steps"] = static_cast<std::int64_t>(trace.steps.size());
  if (const auto* c = std::get_if<Converged>(&trace.outcome)) {
    j["outcome"] = {{"kind", "converged"},
                    {"at_step", c->at_step},
                    {"final", assignment_json(c->final)}};
  } else if (const auto* cy = std::get_if<CycleDetected>(&trace.outcome)) {
    j["outcome"] = {{"kind", "cycle-detected"},
                    {"first_seen_step", cy->first_seen_step},
                    {"period", cy->period}};
  } else {
    j["outcome"] = {{"kind", "budget-exhausted"}};
  }
  return j;
}

json safety_json(const SafetyVerdict& v) {
  json j;
  j["safe"] = v.safe;
  j["stable_count"] = static_cast<std::int64_t>(v.stable_states.size());
  json states = json::array();
  for (const auto& s : v.stable_states) states.push_back(assignment_json(s));
  j["stable_states"] = std::move(states);
  if (v.witness) {
    json w = json::array();
    for (const auto& step : *v.witness) {
      w.push_back(json{{"activate", step.activated},
                       {"state", assignment_json(step.state)}});
    }
    j["witness"] = std::move(w);
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

json distinct_json(const DistinctVerdict& v) {
  json j;
  j["distinct"] = v.distinct;
  j["reason"] = to_string(v.reason);
  j["witness_node"] = v.witness_node ? json(*v.witness_node) : json(nullptr);
  j["stable_a"] = v.stable_a ? assignment_json(*v.stable_a) : json(nullptr);
  j["stable_b"] = v.stable_b ? assignment_json(*v.stable_b) : json(nullptr);
  return j;
}

json manifest_json(const TheoremOneOutput& t) {
  json j;
  j["w"] = t.w;
  j["w_prime"] = t.w_prime;
  j["x"] = t.x;
  j["a"] = t.a;
  j["b"] = t.b;
  j["c"] = t.c;
  json iso = json::object();
  for (auto [g, h] : t.iso) iso[std::to_string(g)] = h;
  j["iso"] = std::move(iso);
  j["region"] = t.region;
  json p = json::array(), pp = json::array();
  for (const Path& q : t.p_list) p.push_back(path_json(q));
  for (const Path& q : t.p_prime_list) pp.push_back(path_json(q));
  j["p_list"] = std::move(p);
  j["p_prime_list"] = std::move(pp);
  j["lambda_index"] = static_cast<std::int64_t>(t.lambda_index);
  j["stable_a"] = assignment_json(t.stable_a);
  j["stable_b"] = assignment_json(t.stable_b);
  return j;
}

std::string trace_log(const Trace& trace) {
  std::string out;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const TraceStep& s = trace.steps[i];
    out += std::to_string(i) + " " + std::to_string(s.activated) + " " +
           s.new_path.to_string() + " " + (s.changed ? "changed" : "same") + "\n";
  }
  if (const auto* c = std::get_if<Converged>(&trace.outcome)) {
    out += "outcome converged " + std::to_string(c->at_step) + "\n";
  } else if (const auto* cy = std::get_if<CycleDetected>(&trace.outcome)) {
    out += "outcome cycle-detected first-seen " + std::to_string(cy->first_seen_step) +
           " period " + std::to_string(cy->period) + "\n";
  } else {
    out += "outcome budget-exhausted\n";
  }
  return out;
}

std::string to_dot(const SppInstance& instance) {
  std::string out = "graph spp {\n";
  for (NodeId v : instance.graph.nodes) {
    std::string label = std::to_string(v);
    if (v != kDestination) {
      const RankingFunction& rf = instance.ranking(v);
      const std::size_t shown = std::min<std::size_t>(3, rf.ranked.size());
      for (std::size_t i = 0; i < shown; ++i) {
        label += "\\n" + std::to_string(i + 1) + ": " + rf.ranked[i].to_string();
      }
      if (rf.ranked.size() > shown) label += "\\n...";
    }
    out += "  n" + std::to_string(v) + " [label=\"" + label + "\"];\n";
  }
  for (auto [u, v] : instance.graph.edges) {
    out += "  n" + std::to_string(u) + " -- n" + std::to_string(v) + ";\n";
  }
  out += "}\n";
  return out;
}

Schedule parse_schedule(const std::string& spec, std::uint64_t default_seed) {
  if (spec == "round-robin") return RoundRobin{};
  if (spec == "random") return RandomFair{default_seed};
  if (spec.rfind("random:", 0) == 0) {
    const std::string seed = spec.substr(7);
    try {
      std::size_t used = 0;
      const std::uint64_t s = std::stoull(seed, &used);
      if (used != seed.size()) throw std::invalid_argument(seed);
      return RandomFair{s};
    } catch (const std::exception&) {
      throw SppError("schedule spec '" + spec + "': bad seed '" + seed + "'");
    }
  }
  if (spec.rfind("explicit:", 0) == 0) {
    const std::string path = spec.substr(9);
    std::istringstream in(read_file(path));
    ExplicitSchedule ex;
    NodeId v;
    while (in >> v) ex.order.push_back(v);
    if (!in.eof()) throw SppError("schedule file " + path + ": not a list of node ids");
    return ex;
  }
  throw SppError("unknown schedule spec '" + spec +
                 "' (expected round-robin, random[:SEED], or explicit:FILE)");
}

}  // namespace spp::io
