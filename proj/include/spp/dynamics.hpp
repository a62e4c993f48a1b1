#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "spp/core.hpp"

namespace spp {

// Activation schedules. RoundRobin and RandomFair are fair when extended
// indefinitely: every non-destination node appears infinitely often
// (RandomFair draws a fresh permutation of all nodes per sweep). Explicit
// replays a fixed finite order and carries no fairness guarantee; it exists
// for fixtures and replay.
struct RoundRobin {
  friend bool operator==(const RoundRobin&, const RoundRobin&) = default;
};
struct RandomFair {
  std::uint64_t seed = 0;
  friend bool operator==(const RandomFair&, const RandomFair&) = default;
};
struct ExplicitSchedule {
  std::vector<NodeId> order;  // must not contain node 0
  friend bool operator==(const ExplicitSchedule&, const ExplicitSchedule&) = default;
};
using Schedule = std::variant<RoundRobin, RandomFair, ExplicitSchedule>;

struct TraceStep {
  NodeId activated;
  Path new_path;
  bool changed;
  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct Converged {
  std::int64_t at_step;  // index of the step that completed the quiet sweep
  PathAssignment final;
  friend bool operator==(const Converged&, const Converged&) = default;
};
struct CycleDetected {
  std::int64_t first_seen_step;
  std::int64_t period;
  friend bool operator==(const CycleDetected&, const CycleDetected&) = default;
};
struct BudgetExhausted {
  friend bool operator==(const BudgetExhausted&, const BudgetExhausted&) = default;
};
using Outcome = std::variant<Converged, CycleDetected, BudgetExhausted>;

struct Trace {
  PathAssignment initial;
  std::vector<TraceStep> steps;
  Outcome outcome;
  friend bool operator==(const Trace&, const Trace&) = default;
};

// Recomputes node v's selection from its neighbors' current paths; every
// other selection is untouched.
PathAssignment activate(const SppInstance&, const PathAssignment&, NodeId v);

// True iff no activation would change any selection.
bool is_stable(const SppInstance&, const PathAssignment&);

// 100 * |V| * (longest permitted-path list); the default simulation budget.
std::int64_t default_max_steps(const SppInstance&);

// Runs activations along the schedule, starting from `initial` (which must
// satisfy permitted-path closure). Outcomes:
//   Converged      - a full quiescent sweep: every non-destination node was
//                    activated once with no change since the last change.
//   CycleDetected  - an (assignment, sweep cursor) pair recurred. Tracked
//                    for round-robin schedules only; random-fair runs report
//                    Converged or BudgetExhausted.
//   BudgetExhausted- max_steps spent, or an explicit schedule ran out.
Trace run(const SppInstance&, const PathAssignment& initial, const Schedule&,
          std::int64_t max_steps);

}  // namespace spp
