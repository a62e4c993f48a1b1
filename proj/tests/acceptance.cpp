// Acceptance suite: one pass/fail line per criterion, all exact. Expects the
// CLI binary path as argv[1] for the command-line criteria.

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "spp/analysis.hpp"
#include "spp/decision.hpp"
#include "spp/dynamics.hpp"
#include "spp/gadgets.hpp"
#include "spp/io.hpp"

#include "testutil.hpp"

namespace fs = std::filesystem;
using namespace spp;
using spp::io::json;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& what) {
  if (!cond) throw Failure(what);
}

std::string g_cli;
fs::path g_work;

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  require(!g_cli.empty(), "CLI binary path not supplied");
  const std::string cmd = g_cli + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  require(pipe != nullptr, "popen failed for: " + cmd);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return RunResult{WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::uint64_t state_count(const SppInstance& inst) {
  std::uint64_t total = 1;
  for (const auto& [v, rf] : inst.rankings) total *= rf.ranked.size() + 1;
  return total;
}

// The stable assignment the convergent deployment must reach.
PathAssignment named_stable(const TheoremOneOutput& out) {
  PathAssignment pi;
  pi.set(kDestination, Path({kDestination}));
  for (NodeId v : out.n_graph.nonzero_nodes()) {
    const Path& p = out.stable_a.at(v);
    pi.set(v, p);
    std::vector<NodeId> moved;
    for (NodeId u : p.nodes) moved.push_back(out.iso.at(u));
    pi.set(out.iso.at(v), Path(std::move(moved)));
  }
  pi.set(out.x, out.p_list[out.lambda_index].prepend(out.x));
  pi.set(out.a, out.p_list[out.lambda_index].prepend(out.x).prepend(out.a));
  pi.set(out.b, Path({out.b, out.c, 0}));
  pi.set(out.c, Path({out.c, 0}));
  return pi;
}

// ---- criterion 1: divergent-triangle fixture, via the CLI ----------------

void criterion_bad_gadget() {
  const fs::path dir = g_work / "c1";
  fs::create_directories(dir);
  RunResult emitted = run_cli("gadget --name bad-gadget --out '" + dir.string() + "'");
  require(emitted.exit_code == 0, "gadget command failed");
  const std::string file = (dir / "bad-gadget.json").string();

  RunResult stable = run_cli("stable --instance '" + file + "' --format structured");
  require(stable.exit_code == 0, "stable command failed");
  const json stable_report = json::parse(stable.out);
  require(stable_report["stable_count"] == 0, "expected exactly 0 stable states");

  RunResult safety = run_cli("safety --instance '" + file + "' --format structured");
  require(safety.exit_code == 12, "expected the unsafe exit status");
  const json report = json::parse(safety.out);
  require(report["verdict"]["safe"] == false, "expected an unsafe verdict");

  // the reported witness must replay as a closed fair cycle
  const SppInstance gadget = bad_gadget();
  const json& w = report["verdict"]["witness"];
  require(w.is_array() && !w.empty(), "expected a fair-cycle witness");
  std::set<NodeId> activated;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const PathAssignment state =
        io::assignment_from_json(gadget, w[i]["state"], "witness");
    const NodeId v = w[i]["activate"].get<NodeId>();
    activated.insert(v);
    const PathAssignment next =
        io::assignment_from_json(gadget, w[(i + 1) % w.size()]["state"], "witness");
    require(activate(gadget, state, v) == next, "witness step does not replay");
  }
  require(activated == std::set<NodeId>{1, 2, 3}, "witness is not fair");
}

// ---- criteria 2/3: theorem-1 end-to-end and its symmetry -----------------

void check_theorem1(const SppInstance& conv, const SppInstance& div) {
  const DistinctVerdict dv = safely_distinct(conv, div);
  require(dv.distinct, "inputs must be safely distinct");

  const TheoremOneOutput out = construct_theorem1(conv, div);
  const SppInstance deployed_conv = out.deploy(conv);
  const SppInstance deployed_div = out.deploy(div);
  require(state_count(deployed_conv) <= 100000, "state space larger than expected");

  const SafetyVerdict safe_side = is_safe(deployed_conv);
  require(safe_side.safe, "convergent deployment must be safe");
  require(safe_side.stable_states.size() == 1,
          "convergent deployment must have exactly one stable state");
  require(safe_side.stable_states.front() == named_stable(out),
          "stable state differs from the named assignment");

  require(enumerate_stable_states(deployed_div).empty(),
          "divergent deployment must have zero stable states");
}

void criterion_theorem1() {
  check_theorem1(spptest::witness_lambda(), spptest::witness_lambda_prime());
}

void criterion_theorem1_symmetry() {
  check_theorem1(spptest::witness_lambda_prime(), spptest::witness_lambda());
}

// ---- criterion 4: theorem-2 document equals the deployments --------------

void criterion_theorem2() {
  const Graph n = spptest::witness_graph();
  const auto partials = spptest::witness_partials();
  const DecisionProcess d = spptest::d_lowest();
  const DecisionProcess dp = spptest::d_highest();

  const TheoremTwoOutput out = construct_theorem2(n, partials, d, dp);
  const SppInstance la = apply_all(d, partials, n);
  const SppInstance lb = apply_all(dp, partials, n);

  const SppInstance by_d = apply_all(d, out.partials, out.graph);
  const SppInstance by_dp = apply_all(dp, out.partials, out.graph);
  require(by_d == out.base.deploy(la),
          "totalizing by d must equal the convergent deployment list-for-list");
  require(by_dp == out.base.deploy(lb),
          "totalizing by d-prime must equal the divergent deployment list-for-list");

  const SafetyVerdict v = is_safe(by_d);
  require(v.safe && v.stable_states.size() == 1 &&
              v.stable_states.front() == named_stable(out.base),
          "d totalization must converge to the named assignment");
  require(enumerate_stable_states(by_dp).empty(),
          "d-prime totalization must have zero stable states");
}

// ---- criterion 5: full shortest-path deployments are always safe ---------

void criterion_shortest_path_safe() {
  const DecisionProcess shortest = DecisionProcess::make(
      {TieBreak::ShortestPathLength, TieBreak::LexMinNodeSequence});
  spptest::Rng rng(20260809);
  for (int trial = 0; trial < 200; ++trial) {
    const Graph g = spptest::random_connected_graph(rng, 7);
    std::map<NodeId, PartialRanking> partials;
    for (NodeId v : g.nonzero_nodes()) {
      PartialRanking pr;
      pr.owner = v;
      for (const Path& p : enumerate_simple_paths(g, v)) pr.class_of[p] = 1;
      partials[v] = std::move(pr);
    }
    const SppInstance inst = apply_all(shortest, partials, g);
    const SafetyVerdict v = is_safe(inst);
    require(v.safe, "shortest-path deployment diverged on trial " +
                        std::to_string(trial));
  }
}

// ---- criterion 6: strict total partials ignore the process ---------------

void criterion_expressiveness() {
  spptest::Rng rng(424242);
  const auto catalog = standard_catalog();
  int checked = 0;
  while (checked < 100) {
    const SppInstance base = spptest::random_instance(rng, 6);
    for (NodeId v : base.graph.nonzero_nodes()) {
      const auto& ranked = base.ranking(v).ranked;
      if (ranked.empty()) continue;
      PartialRanking pr;
      pr.owner = v;
      // distinct class per path: the operator pinned a total order
      std::vector<int> classes;
      for (std::size_t i = 0; i < ranked.size(); ++i) {
        classes.push_back(static_cast<int>(i) + 1);
      }
      rng.shuffle(classes);
      for (std::size_t i = 0; i < ranked.size(); ++i) {
        pr.class_of[ranked[i]] = classes[i];
      }
      const RankingFunction first = apply(catalog.front(), pr);
      for (const DecisionProcess& d : catalog) {
        require(apply(d, pr) == first,
                "decision processes disagree on a strict total partial");
      }
      ++checked;
      if (checked == 100) break;
    }
  }
}

// ---- criterion 7: simulation cross-validates the exact analysis ----------

void criterion_oracle_cross_validation() {
  std::vector<SppInstance> corpus = {bad_gadget(), disagree_gadget(),
                                     spptest::singleton_instance(),
                                     spptest::witness_lambda(),
                                     spptest::witness_lambda_prime()};
  const TheoremOneOutput t1 =
      construct_theorem1(spptest::witness_lambda(), spptest::witness_lambda_prime());
  corpus.push_back(t1.deploy(spptest::witness_lambda()));
  corpus.push_back(t1.deploy(spptest::witness_lambda_prime()));
  spptest::Rng rng(777);
  for (int i = 0; i < 3; ++i) corpus.push_back(spptest::random_instance(rng, 5));

  for (const SppInstance& inst : corpus) {
    require(state_count(inst) <= 10000, "corpus instance over the size cap");
    const SafetyVerdict verdict = is_safe(inst);
    const auto& stable = verdict.stable_states;
    const std::int64_t budget = default_max_steps(inst);
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      const PathAssignment initial = (seed % 2 == 0)
                                         ? all_epsilon(inst)
                                         : spptest::random_assignment(rng, inst);
      const Trace t = run(inst, initial, RandomFair{seed}, budget);
      if (const auto* c = std::get_if<Converged>(&t.outcome)) {
        require(std::count(stable.begin(), stable.end(), c->final) == 1,
                "a run converged outside the enumerated stable set");
      } else {
        require(!verdict.safe, "a run failed to converge on a safe instance");
      }
    }
  }
}

// ---- criterion 8: byte-identical CLI runs --------------------------------

void criterion_cli_determinism() {
  const fs::path dir = g_work / "c8";
  fs::create_directories(dir);
  const std::string bad = (dir / "bad.json").string();
  const std::string dis = (dir / "dis.json").string();
  const std::string wa = (dir / "wa.json").string();
  const std::string wb = (dir / "wb.json").string();
  const std::string wp = (dir / "wp.json").string();
  const std::string sched = (dir / "alt.sched").string();
  write_file(bad, io::serialize_instance(bad_gadget()));
  write_file(dis, io::serialize_instance(disagree_gadget()));
  write_file(wa, io::serialize_instance(spptest::witness_lambda()));
  write_file(wb, io::serialize_instance(spptest::witness_lambda_prime()));
  write_file(wp, io::serialize_partials(spptest::witness_graph(),
                                        spptest::witness_partials(),
                                        spptest::d_lowest()));
  write_file(sched, "1 2 1 2\n");
  const std::string init_ok = (dir / "init.json").string();
  const std::string init_bad = (dir / "init_bad.json").string();
  write_file(init_ok, R"({"1": [1, 0], "2": [2, 0]})");
  write_file(init_bad, R"({"1": [1, 0, 2]})");

  // a non-permitted initial assignment is an error
  require(run_cli("simulate --instance '" + dis + "' --initial '" + init_bad +
                  "' --schedule round-robin")
                  .exit_code == 2,
          "invalid initial assignment must exit 2");

  struct Command {
    std::string args;
    int expected_exit;  // -1: only require both runs to agree
    std::vector<std::string> files;
  };
  const std::vector<Command> commands = {
      {"gadget --name bad-gadget", 0, {}},
      {"gadget --name disagree --out '" + (dir / "g").string() + "'",
       0,
       {(dir / "g" / "disagree.json").string()}},
      {"stable --instance '" + bad + "' --format structured", 0, {}},
      {"safety --instance '" + bad + "' --format structured", 12, {}},
      {"safety --instance '" + bad + "' --format text", 12, {}},
      {"simulate --instance '" + bad + "' --schedule round-robin", 10, {}},
      {"simulate --instance '" + bad + "' --schedule random:3 --max-steps 50", 11, {}},
      {"simulate --instance '" + dis + "' --schedule explicit:" + sched, 0, {}},
      {"simulate --instance '" + dis + "' --schedule round-robin --initial '" +
           init_ok + "'",
       0,
       {}},
      {"simulate --instance '" + dis + "' --schedule random:42 --format structured",
       0,
       {}},
      {"distinct --instance '" + wa + "' --instance-b '" + wb +
           "' --format structured",
       0,
       {}},
      {"distinct --instance '" + wa + "' --instance-b '" + wa + "'", 13, {}},
      {"construct --mode theorem1 --instance '" + wa + "' --instance-b '" + wb +
           "' --out '" + (dir / "t1").string() + "' --format structured",
       0,
       {(dir / "t1" / "lambda_deployment.json").string(),
        (dir / "t1" / "lambda_prime_deployment.json").string(),
        (dir / "t1" / "manifest.json").string()}},
      {"construct --mode theorem2 --partials '" + wp +
           "' --d lowest-next-hop,lex-min --d-prime highest-next-hop,lex-min "
           "--out '" +
           (dir / "t2").string() + "' --format structured",
       0,
       {(dir / "t2" / "graph_partials.json").string(),
        (dir / "t2" / "d_instance.json").string(),
        (dir / "t2" / "d_prime_instance.json").string(),
        (dir / "t2" / "manifest.json").string()}},
      {"export-dot --instance '" + bad + "'", 0, {}},
  };

  for (const auto& cmd : commands) {
    const RunResult first = run_cli(cmd.args);
    std::vector<std::string> first_files;
    for (const auto& f : cmd.files) first_files.push_back(slurp(f));

    const RunResult second = run_cli(cmd.args);
    if (cmd.expected_exit >= 0) {
      require(first.exit_code == cmd.expected_exit,
              "unexpected exit " + std::to_string(first.exit_code) + " for: " +
                  cmd.args);
    }
    require(first.exit_code == second.exit_code, "exit codes differ for: " + cmd.args);
    require(first.out == second.out, "stdout differs for: " + cmd.args);
    for (std::size_t i = 0; i < cmd.files.size(); ++i) {
      require(slurp(cmd.files[i]) == first_files[i], "file differs: " + cmd.files[i]);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli = argv[1];
  g_work = fs::temp_directory_path() /
           ("spp_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(g_work);
  fs::create_directories(g_work);

  const std::vector<std::pair<std::string, std::function<void()>>> criteria = {
      {"1. bad-gadget-divergence (0 stable states, unsafe, replayable witness)",
       criterion_bad_gadget},
      {"2. theorem-1 end-to-end (safe unique named state vs zero stable states)",
       criterion_theorem1},
      {"3. theorem-1 symmetry (swapped roles flip the verdicts)",
       criterion_theorem1_symmetry},
      {"4. theorem-2 end-to-end (totalized documents equal the deployments)",
       criterion_theorem2},
      {"5. shortest-path full deployments are safe (200 random graphs)",
       criterion_shortest_path_safe},
      {"6. expressiveness preservation (100 strict total partials)",
       criterion_expressiveness},
      {"7. oracle cross-validation (1000 seeded fair runs per corpus instance)",
       criterion_oracle_cross_validation},
      {"8. CLI determinism (byte-identical repeated invocations)",
       criterion_cli_determinism},
  };

  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    try {
      fn();
      std::cout << "[PASS] " << name << "\n";
    } catch (const std::exception& e) {
      ++failed;
      std::cout << "[FAIL] " << name << ": " << e.what() << "\n";
    }
    std::cout.flush();
  }
  std::cout << (failed ? "ACCEPTANCE: FAILED (" + std::to_string(failed) + ")"
                       : "ACCEPTANCE: ALL CRITERIA PASSED")
            << "\n";
  return failed ? 1 : 0;
}
