#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spp/core.hpp"

namespace spp {

// State-space bound exceeded; the message carries the computed size.
struct BoundExceededError : SppError {
  using SppError::SppError;
};

struct AnalysisOptions {
  std::uint64_t max_states = 1'000'000;
};

// The full activation state graph: one state per combination of permitted
// selections (each non-destination node holds one of its listed paths or the
// null path), one labeled transition per (state, node). States are encoded
// mixed-radix with nodes ascending and the first node most significant; the
// digit is the rank index, with the null path as the largest digit. Ascending
// state ids therefore give the canonical assignment order.
class TransitionSystem {
 public:
  static TransitionSystem build(const SppInstance&, const AnalysisOptions& = {});

  std::uint32_t num_states() const { return num_states_; }
  const std::vector<NodeId>& activation_nodes() const { return nodes_; }

  // State reached when nodes_[node_index] activates in `state`.
  std::uint32_t successor(std::uint32_t state, std::size_t node_index) const {
    return successors_[static_cast<std::size_t>(state) * nodes_.size() + node_index];
  }
  bool stable(std::uint32_t state) const;

  PathAssignment decode(std::uint32_t state) const;
  std::uint32_t encode(const PathAssignment&) const;

 private:
  std::vector<NodeId> nodes_;                // non-destination, ascending
  std::vector<std::uint32_t> radix_;         // per node: |ranked| + 1
  std::vector<std::uint64_t> stride_;
  std::uint32_t num_states_ = 0;
  std::vector<std::vector<Path>> domain_;    // per node: ranked paths then null
  std::vector<std::uint32_t> successors_;    // num_states_ * nodes_.size()
};

struct FairCycleStep {
  PathAssignment state;
  NodeId activated;
  friend bool operator==(const FairCycleStep&, const FairCycleStep&) = default;
};

struct SafetyVerdict {
  bool safe = false;
  std::vector<PathAssignment> stable_states;
  // Present iff unsafe: a closed activation sequence in which every
  // non-destination node is activated at least once and each step's
  // activation maps its state to the next (cyclically).
  std::optional<std::vector<FairCycleStep>> witness;
};

// Exactly the assignments at which every activation is a no-op, in canonical
// order.
std::vector<PathAssignment> enumerate_stable_states(const SppInstance&,
                                                    const AnalysisOptions& = {});

// Exact safety decision over all fair schedules and all initial assignments.
// The instance is unsafe iff some strongly connected component of the
// transition system, other than a singleton stable state, lets every
// non-destination node activate without leaving it; such a component carries
// an infinite fair execution that never stabilizes, and conversely any fair
// divergent execution eventually stays inside one. The witness tours the
// canonical such component.
SafetyVerdict is_safe(const SppInstance&, const AnalysisOptions& = {});

enum class DistinctReason {
  Distinct,
  UnsafeA,
  UnsafeB,
  MultipleStableStates,
  IdenticalOutcomes,
};
const char* to_string(DistinctReason);

struct DistinctVerdict {
  bool distinct = false;
  DistinctReason reason = DistinctReason::IdenticalOutcomes;
  std::optional<NodeId> witness_node;  // smallest node whose selections differ
  std::optional<PathAssignment> stable_a;
  std::optional<PathAssignment> stable_b;
};

// True iff both instances are safe, each has exactly one stable state, and
// those states differ. The instances must share one graph.
DistinctVerdict safely_distinct(const SppInstance&, const SppInstance&,
                                const AnalysisOptions& = {});

}  // namespace spp
