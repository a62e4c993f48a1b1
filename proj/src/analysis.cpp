#include "spp/analysis.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>

namespace spp {

namespace {

constexpr std::uint32_t kNoRank = std::numeric_limits<std::uint32_t>::max();
constexpr std::uint32_t kUndef = std::numeric_limits<std::uint32_t>::max();

std::string int128_to_string(unsigned __int128 x) {
  if (x == 0) return "0";
  std::string out;
  while (x > 0) {
    out += static_cast<char>('0' + static_cast<int>(x % 10));
    x /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

TransitionSystem TransitionSystem::build(const SppInstance& instance,
                                         const AnalysisOptions& opts) {
  TransitionSystem ts;
  ts.nodes_ = instance.graph.nonzero_nodes();
  const std::size_t n = ts.nodes_.size();
  if (n > 64) {
    throw BoundExceededError("more than 64 non-destination nodes (" +
                             std::to_string(n) + ") is beyond analysis scale");
  }

  std::map<NodeId, std::size_t> node_pos;
  for (std::size_t k = 0; k < n; ++k) node_pos[ts.nodes_[k]] = k;

  ts.radix_.resize(n);
  ts.domain_.resize(n);
  unsigned __int128 total = 1;
  for (std::size_t k = 0; k < n; ++k) {
    const RankingFunction& rf = instance.ranking(ts.nodes_[k]);
    ts.domain_[k] = rf.ranked;
    ts.domain_[k].push_back(Path());  // null path is the last digit
    ts.radix_[k] = static_cast<std::uint32_t>(ts.domain_[k].size());
    total *= ts.radix_[k];
  }
  // Hard cap keeps state ids in 32 bits regardless of the configured bound.
  const unsigned __int128 bound =
      std::min<unsigned __int128>(opts.max_states, 1u << 31);
  if (total > bound) {
    throw BoundExceededError("state space has " + int128_to_string(total) +
                             " states, exceeding the max-states bound of " +
                             int128_to_string(bound));
  }
  ts.num_states_ = static_cast<std::uint32_t>(total);

  ts.stride_.assign(n, 1);
  for (std::size_t k = n; k-- > 1;) {
    ts.stride_[k - 1] = ts.stride_[k] * ts.radix_[k];
  }

  // Per (node, neighbor, neighbor digit): the rank the propagated candidate
  // gets at the node, or kNoRank when the candidate is loopy or filtered.
  // Candidates depend only on the neighbor's digit, so activation becomes a
  // min over these tables.
  struct NeighborTable {
    bool is_destination;
    std::size_t pos;                  // neighbor's node index (non-destination)
    std::uint32_t destination_rank;   // rank of the direct path, if is_destination
    std::vector<std::uint32_t> by_digit;
  };
  std::vector<std::vector<NeighborTable>> tables(n);
  for (std::size_t k = 0; k < n; ++k) {
    const NodeId v = ts.nodes_[k];
    std::map<Path, std::uint32_t> rank;
    const RankingFunction& rf = instance.ranking(v);
    for (std::size_t i = 0; i < rf.ranked.size(); ++i) {
      rank[rf.ranked[i]] = static_cast<std::uint32_t>(i);
    }
    for (NodeId w : instance.graph.neighbors(v)) {
      NeighborTable t;
      if (w == kDestination) {
        t.is_destination = true;
        t.pos = 0;
        auto it = rank.find(Path({v, kDestination}));
        t.destination_rank = it == rank.end() ? kNoRank : it->second;
      } else {
        t.is_destination = false;
        t.pos = node_pos.at(w);
        t.destination_rank = kNoRank;
        t.by_digit.assign(ts.radix_[t.pos], kNoRank);
        for (std::uint32_t d = 0; d + 1 < ts.radix_[t.pos]; ++d) {
          const Path& pw = ts.domain_[t.pos][d];
          if (pw.contains(v)) continue;
          auto it = rank.find(pw.prepend(v));
          if (it != rank.end()) t.by_digit[d] = it->second;
        }
      }
      tables[k].push_back(std::move(t));
    }
  }

  ts.successors_.resize(static_cast<std::size_t>(ts.num_states_) * n);
  std::vector<std::uint32_t> digit(n);
  for (std::uint32_t s = 0; s < ts.num_states_; ++s) {
    for (std::size_t k = 0; k < n; ++k) {
      digit[k] = static_cast<std::uint32_t>((s / ts.stride_[k]) % ts.radix_[k]);
    }
    for (std::size_t k = 0; k < n; ++k) {
      std::uint32_t best = ts.radix_[k] - 1;  // null path
      for (const NeighborTable& t : tables[k]) {
        const std::uint32_t r =
            t.is_destination ? t.destination_rank : t.by_digit[digit[t.pos]];
        if (r < best) best = r;
      }
      const std::int64_t delta =
          (static_cast<std::int64_t>(best) - static_cast<std::int64_t>(digit[k])) *
          static_cast<std::int64_t>(ts.stride_[k]);
      ts.successors_[static_cast<std::size_t>(s) * n + k] =
          static_cast<std::uint32_t>(static_cast<std::int64_t>(s) + delta);
    }
  }
  return ts;
}

bool TransitionSystem::stable(std::uint32_t state) const {
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    if (successor(state, k) != state) return false;
  }
  return true;
}

PathAssignment TransitionSystem::decode(std::uint32_t state) const {
  PathAssignment pi;
  pi.set(kDestination, Path({kDestination}));
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const std::uint32_t d =
        static_cast<std::uint32_t>((state / stride_[k]) % radix_[k]);
    pi.set(nodes_[k], domain_[k][d]);
  }
  return pi;
}

std::uint32_t TransitionSystem::encode(const PathAssignment& pi) const {
  std::uint64_t s = 0;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const Path& p = pi.at(nodes_[k]);
    std::uint32_t d = radix_[k] - 1;
    if (!p.is_null()) {
      auto it = std::find(domain_[k].begin(), domain_[k].end(), p);
      if (it == domain_[k].end()) {
        throw SppError("node " + std::to_string(nodes_[k]) +
                       " selects non-permitted path " + p.to_string());
      }
      d = static_cast<std::uint32_t>(it - domain_[k].begin());
    }
    s += d * stride_[k];
  }
  return static_cast<std::uint32_t>(s);
}

namespace {

// Iterative Tarjan. Returns component ids (assigned in completion order) and
// the component count.
std::vector<std::uint32_t> strongly_connected_components(const TransitionSystem& ts,
                                                         std::uint32_t& comp_count) {
  const std::uint32_t n = ts.num_states();
  const std::size_t deg = ts.activation_nodes().size();
  std::vector<std::uint32_t> index(n, kUndef);
  std::vector<std::uint32_t> low(n, 0);
  std::vector<std::uint32_t> comp(n, kUndef);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  struct Frame {
    std::uint32_t state;
    std::uint32_t edge;
  };
  std::vector<Frame> call;
  std::uint32_t next_index = 0;
  comp_count = 0;

  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != kUndef) continue;
    call.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.edge < deg) {
        const std::uint32_t t = ts.successor(f.state, f.edge);
        ++f.edge;
        if (index[t] == kUndef) {
          index[t] = low[t] = next_index++;
          stack.push_back(t);
          on_stack[t] = true;
          call.push_back({t, 0});
        } else if (on_stack[t]) {
          low[f.state] = std::min(low[f.state], index[t]);
        }
      } else {
        const std::uint32_t v = f.state;
        call.pop_back();
        if (!call.empty()) {
          low[call.back().state] = std::min(low[call.back().state], low[v]);
        }
        if (low[v] == index[v]) {
          while (true) {
            const std::uint32_t w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp[w] = comp_count;
            if (w == v) break;
          }
          ++comp_count;
        }
      }
    }
  }
  return comp;
}

// Shortest activation walk between two states of one component, never
// leaving it. Successors are explored with node labels ascending, so the
// walk is canonical. Returns (state, node index) steps; the arrival state is
// not included.
std::vector<std::pair<std::uint32_t, std::size_t>> walk_within(
    const TransitionSystem& ts, const std::vector<std::uint32_t>& comp,
    std::uint32_t comp_id, std::uint32_t from, std::uint32_t to) {
  std::vector<std::pair<std::uint32_t, std::size_t>> steps;
  if (from == to) return steps;
  const std::size_t deg = ts.activation_nodes().size();
  std::unordered_map<std::uint32_t, std::pair<std::uint32_t, std::size_t>> prev;
  std::deque<std::uint32_t> queue{from};
  prev.emplace(from, std::make_pair(from, std::size_t{0}));
  while (!queue.empty()) {
    const std::uint32_t s = queue.front();
    queue.pop_front();
    for (std::size_t k = 0; k < deg; ++k) {
      const std::uint32_t t = ts.successor(s, k);
      if (comp[t] != comp_id || prev.count(t)) continue;
      prev.emplace(t, std::make_pair(s, k));
      if (t == to) {
        for (std::uint32_t cur = to; cur != from;) {
          auto [p, label] = prev.at(cur);
          steps.emplace_back(p, label);
          cur = p;
        }
        std::reverse(steps.begin(), steps.end());
        return steps;
      }
      queue.push_back(t);
    }
  }
  throw SppError("internal error: states not connected within their component");
}

}  // namespace

std::vector<PathAssignment> enumerate_stable_states(const SppInstance& instance,
                                                    const AnalysisOptions& opts) {
  const TransitionSystem ts = TransitionSystem::build(instance, opts);
  std::vector<PathAssignment> out;
  for (std::uint32_t s = 0; s < ts.num_states(); ++s) {
    if (ts.stable(s)) out.push_back(ts.decode(s));
  }
  return out;
}

SafetyVerdict is_safe(const SppInstance& instance, const AnalysisOptions& opts) {
  const TransitionSystem ts = TransitionSystem::build(instance, opts);
  const std::size_t deg = ts.activation_nodes().size();
  const std::uint32_t n = ts.num_states();

  SafetyVerdict verdict;
  for (std::uint32_t s = 0; s < n; ++s) {
    if (ts.stable(s)) verdict.stable_states.push_back(ts.decode(s));
  }

  std::uint32_t comp_count = 0;
  const std::vector<std::uint32_t> comp = strongly_connected_components(ts, comp_count);

  std::vector<std::uint32_t> comp_size(comp_count, 0);
  std::vector<std::uint32_t> comp_member(comp_count, kUndef);  // smallest member
  std::vector<std::uint64_t> fair_mask(comp_count, 0);
  for (std::uint32_t s = n; s-- > 0;) {
    const std::uint32_t c = comp[s];
    ++comp_size[c];
    comp_member[c] = s;
    for (std::size_t k = 0; k < deg; ++k) {
      if (comp[ts.successor(s, k)] == c) fair_mask[c] |= std::uint64_t{1} << k;
    }
  }

  const std::uint64_t full_mask =
      deg == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << deg) - 1;
  std::vector<bool> divergent(comp_count, false);
  for (std::uint32_t c = 0; c < comp_count; ++c) {
    const bool singleton_stable = comp_size[c] == 1 && ts.stable(comp_member[c]);
    divergent[c] = !singleton_stable && fair_mask[c] == full_mask;
  }

  // Canonical witness component: the one containing the smallest state id.
  std::uint32_t witness_state = kUndef;
  for (std::uint32_t s = 0; s < n && witness_state == kUndef; ++s) {
    if (divergent[comp[s]]) witness_state = s;
  }

  if (witness_state == kUndef) {
    verdict.safe = true;
    return verdict;
  }

  verdict.safe = false;
  const std::uint32_t c = comp[witness_state];
  std::vector<std::uint32_t> members;
  for (std::uint32_t s = witness_state; s < n; ++s) {
    if (comp[s] == c) members.push_back(s);
  }

  // Tour: for each node in turn, walk inside the component to the smallest
  // state whose activation of that node stays inside, take that activation,
  // then close the loop back to the start.
  std::vector<std::pair<std::uint32_t, std::size_t>> tour;
  const std::uint32_t start = members.front();
  std::uint32_t cur = start;
  for (std::size_t k = 0; k < deg; ++k) {
    std::uint32_t anchor = kUndef;
    for (std::uint32_t s : members) {
      if (comp[ts.successor(s, k)] == c) {
        anchor = s;
        break;
      }
    }
    auto walk = walk_within(ts, comp, c, cur, anchor);
    tour.insert(tour.end(), walk.begin(), walk.end());
    tour.emplace_back(anchor, k);
    cur = ts.successor(anchor, k);
  }
  auto closing = walk_within(ts, comp, c, cur, start);
  tour.insert(tour.end(), closing.begin(), closing.end());

  std::vector<FairCycleStep> witness;
  witness.reserve(tour.size());
  for (auto [s, k] : tour) {
    witness.push_back(FairCycleStep{ts.decode(s), ts.activation_nodes()[k]});
  }
  verdict.witness = std::move(witness);
  return verdict;
}

const char* to_string(DistinctReason r) {
  switch (r) {
    case DistinctReason::Distinct: return "distinct";
    case DistinctReason::UnsafeA: return "unsafe-A";
    case DistinctReason::UnsafeB: return "unsafe-B";
    case DistinctReason::MultipleStableStates: return "multiple-stable-states";
    case DistinctReason::IdenticalOutcomes: return "identical-outcomes";
  }
  return "unknown";
}

DistinctVerdict safely_distinct(const SppInstance& a, const SppInstance& b,
                                const AnalysisOptions& opts) {
  if (a.graph != b.graph) {
    throw SppError("safely-distinct requires both instances to share one graph");
  }
  DistinctVerdict v;
  const SafetyVerdict va = is_safe(a, opts);
  if (!va.safe) {
    v.reason = DistinctReason::UnsafeA;
    return v;
  }
  const SafetyVerdict vb = is_safe(b, opts);
  if (!vb.safe) {
    v.reason = DistinctReason::UnsafeB;
    return v;
  }
  if (va.stable_states.size() != 1 || vb.stable_states.size() != 1) {
    v.reason = DistinctReason::MultipleStableStates;
    return v;
  }
  v.stable_a = va.stable_states.front();
  v.stable_b = vb.stable_states.front();
  if (*v.stable_a == *v.stable_b) {
    v.reason = DistinctReason::IdenticalOutcomes;
    return v;
  }
  for (NodeId w : a.graph.nonzero_nodes()) {
    if (v.stable_a->at(w) != v.stable_b->at(w)) {
      v.witness_node = w;
      break;
    }
  }
  v.distinct = true;
  v.reason = DistinctReason::Distinct;
  return v;
}

}  // namespace spp
