#include "spp/dynamics.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <utility>

namespace spp {

PathAssignment activate(const SppInstance& instance, const PathAssignment& pi,
                        NodeId v) {
  if (v == kDestination) throw SppError("cannot activate the destination node");
  PathAssignment out = pi;
  out.set(v, best(instance, pi, v));
  return out;
}

bool is_stable(const SppInstance& instance, const PathAssignment& pi) {
  for (NodeId v : instance.graph.nonzero_nodes()) {
    if (best(instance, pi, v) != pi.at(v)) return false;
  }
  return true;
}

std::int64_t default_max_steps(const SppInstance& instance) {
  std::size_t max_paths = 1;
  for (const auto& [v, rf] : instance.rankings) {
    max_paths = std::max(max_paths, rf.ranked.size());
  }
  return 100 * static_cast<std::int64_t>(instance.graph.nodes.size()) *
         static_cast<std::int64_t>(max_paths);
}

namespace {

// Rank-index fingerprint of an assignment (null path = list size), used as
// the cycle-detection key.
std::vector<int> digits_of(const SppInstance& instance,
                           const std::vector<NodeId>& order,
                           const PathAssignment& pi) {
  std::vector<int> d;
  d.reserve(order.size());
  for (NodeId v : order) {
    const Path& p = pi.at(v);
    const RankingFunction& rf = instance.ranking(v);
    d.push_back(p.is_null() ? static_cast<int>(rf.ranked.size())
                            : static_cast<int>(*rf.rank_of(p)));
  }
  return d;
}

// Fisher-Yates with an explicit draw so sequences are identical across
// standard libraries for a given seed.
void fair_shuffle(std::vector<NodeId>& xs, std::mt19937_64& rng) {
  for (std::size_t i = xs.size(); i > 1; --i) {
    std::swap(xs[i - 1], xs[rng() % i]);
  }
}

}  // namespace

Trace run(const SppInstance& instance, const PathAssignment& initial,
          const Schedule& schedule, std::int64_t max_steps) {
  if (max_steps < 1) throw SppError("max_steps must be at least 1");
  validate_assignment(instance, initial);

  const std::vector<NodeId> nodes = instance.graph.nonzero_nodes();
  Trace trace;
  trace.initial = initial;
  trace.outcome = BudgetExhausted{};
  if (nodes.empty()) {
    trace.outcome = Converged{0, initial};
    return trace;
  }

  if (const auto* ex = std::get_if<ExplicitSchedule>(&schedule)) {
    for (std::size_t i = 0; i < ex->order.size(); ++i) {
      NodeId v = ex->order[i];
      if (v == kDestination) {
        throw SppError("explicit schedule contains node 0 at position " +
                       std::to_string(i));
      }
      if (!instance.graph.has_node(v)) {
        throw SppError("explicit schedule names unknown node " + std::to_string(v) +
                       " at position " + std::to_string(i));
      }
    }
  }

  const bool round_robin = std::holds_alternative<RoundRobin>(schedule);
  const bool random_fair = std::holds_alternative<RandomFair>(schedule);
  std::mt19937_64 rng(random_fair ? std::get<RandomFair>(schedule).seed : 0);
  std::vector<NodeId> sweep = nodes;

  PathAssignment pi = initial;
  std::set<NodeId> quiet;  // nodes activated with no change since the last change
  std::map<std::pair<std::vector<int>, std::size_t>, std::int64_t> seen;

  for (std::int64_t step = 0; step < max_steps; ++step) {
    NodeId v;
    const std::size_t cursor = static_cast<std::size_t>(step) % nodes.size();
    if (round_robin) {
      v = nodes[cursor];
    } else if (random_fair) {
      if (cursor == 0) fair_shuffle(sweep, rng);
      v = sweep[cursor];
    } else {
      const auto& order = std::get<ExplicitSchedule>(schedule).order;
      if (static_cast<std::size_t>(step) >= order.size()) return trace;
      v = order[static_cast<std::size_t>(step)];
    }

    if (round_robin) {
      auto key = std::make_pair(digits_of(instance, nodes, pi), cursor);
      auto [it, inserted] = seen.try_emplace(std::move(key), step);
      if (!inserted) {
        trace.outcome = CycleDetected{it->second, step - it->second};
        return trace;
      }
    }

    Path nb = best(instance, pi, v);
    const bool changed = nb != pi.at(v);
    trace.steps.push_back(TraceStep{v, nb, changed});
    pi.set(v, std::move(nb));

    if (changed) {
      quiet.clear();
    } else {
      quiet.insert(v);
      if (quiet.size() == nodes.size()) {
        trace.outcome = Converged{step, pi};
        return trace;
      }
    }
  }
  return trace;
}

}  // namespace spp
