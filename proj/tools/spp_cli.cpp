// Command-line surface: simulate activation dynamics, enumerate stable
// states, decide safety and safe-distinctness, build the theorem
// constructions, emit gadget fixtures, and export graphs.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spp/analysis.hpp"
#include "spp/decision.hpp"
#include "spp/dynamics.hpp"
#include "spp/gadgets.hpp"
#include "spp/io.hpp"

namespace fs = std::filesystem;
using spp::io::json;

namespace {

// Outcomes map to exit statuses so shell harnesses need no output parsing.
constexpr int kExitOk = 0;
constexpr int kExitCycle = 10;
constexpr int kExitBudget = 11;
constexpr int kExitUnsafe = 12;
constexpr int kExitNotDistinct = 13;
constexpr int kExitError = 2;

struct CommonOpts {
  std::string instance_file;
  std::string format = "text";
  std::uint64_t max_states = 1'000'000;
};

void emit(const json& report, const std::string& format, const std::string& text) {
  if (format == "structured") {
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw spp::SppError("cannot write file " + path.string());
  out << content;
}

std::string assignment_text(const spp::PathAssignment& pi) {
  std::string out;
  for (const auto& [v, p] : pi.selection) {
    out += "  " + std::to_string(v) + " -> " + p.to_string() + "\n";
  }
  return out;
}

spp::DecisionProcess chain_from_spec(const std::string& spec) {
  std::vector<spp::TieBreak> chain;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t comma = spec.find(',', start);
    const std::string name =
        spec.substr(start, comma == std::string::npos ? spec.size() - start
                                                      : comma - start);
    auto t = spp::tiebreak_from_name(name);
    if (!t) throw spp::SppError("unknown tie-break criterion '" + name + "'");
    chain.push_back(*t);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return spp::DecisionProcess::make(std::move(chain));
}

int cmd_simulate(const CommonOpts& common, const std::string& schedule_spec,
                 std::int64_t max_steps, std::uint64_t seed,
                 const std::string& initial_file) {
  const spp::SppInstance instance =
      spp::io::load_instance_file(common.instance_file).to_instance();
  const spp::Schedule schedule = spp::io::parse_schedule(schedule_spec, seed);
  spp::PathAssignment initial = spp::all_epsilon(instance);
  if (!initial_file.empty()) {
    std::ifstream in(initial_file);
    if (!in) throw spp::SppError("cannot open file " + initial_file);
    json j = json::parse(in, nullptr, true);
    initial = spp::io::assignment_from_json(instance, j, initial_file);
  }
  if (max_steps <= 0) max_steps = spp::default_max_steps(instance);

  const spp::Trace trace = spp::run(instance, initial, schedule, max_steps);

  json report;
  report["command"] = "simulate";
  report["instance"] = common.instance_file;
  report["schedule"] = schedule_spec;
  report["max_steps"] = max_steps;
  report["seed"] = seed;
  report["trace"] = spp::io::trace_summary_json(trace);
  emit(report, common.format, spp::io::trace_log(trace));

  if (std::holds_alternative<spp::Converged>(trace.outcome)) return kExitOk;
  if (std::holds_alternative<spp::CycleDetected>(trace.outcome)) return kExitCycle;
  return kExitBudget;
}

int cmd_stable(const CommonOpts& common) {
  const spp::SppInstance instance =
      spp::io::load_instance_file(common.instance_file).to_instance();
  const auto states =
      spp::enumerate_stable_states(instance, {.max_states = common.max_states});

  json report;
  report["command"] = "stable";
  report["instance"] = common.instance_file;
  report["stable_count"] = static_cast<std::int64_t>(states.size());
  json list = json::array();
  for (const auto& s : states) list.push_back(spp::io::assignment_json(s));
  report["stable_states"] = std::move(list);

  std::string text = "stable states: " + std::to_string(states.size()) + "\n";
  for (const auto& s : states) text += assignment_text(s) + "\n";
  emit(report, common.format, text);
  return kExitOk;
}

int cmd_safety(const CommonOpts& common) {
  const spp::SppInstance instance =
      spp::io::load_instance_file(common.instance_file).to_instance();
  const spp::SafetyVerdict verdict =
      spp::is_safe(instance, {.max_states = common.max_states});

  json report;
  report["command"] = "safety";
  report["instance"] = common.instance_file;
  report["verdict"] = spp::io::safety_json(verdict);

  std::string text = std::string("safety: ") + (verdict.safe ? "safe" : "unsafe") +
                     ", stable states: " +
                     std::to_string(verdict.stable_states.size()) + "\n";
  if (verdict.witness) {
    text += "fair cycle witness (" + std::to_string(verdict.witness->size()) +
            " steps):\n";
    for (const auto& step : *verdict.witness) {
      text += "  activate " + std::to_string(step.activated) + " at:\n" +
              assignment_text(step.state);
    }
  }
  emit(report, common.format, text);
  return verdict.safe ? kExitOk : kExitUnsafe;
}

int cmd_distinct(const CommonOpts& common, const std::string& other_file) {
  const spp::SppInstance a =
      spp::io::load_instance_file(common.instance_file).to_instance();
  const spp::SppInstance b = spp::io::load_instance_file(other_file).to_instance();
  const spp::DistinctVerdict verdict =
      spp::safely_distinct(a, b, {.max_states = common.max_states});

  json report;
  report["command"] = "distinct";
  report["instance_a"] = common.instance_file;
  report["instance_b"] = other_file;
  report["verdict"] = spp::io::distinct_json(verdict);

  std::string text = std::string("safely distinct: ") +
                     (verdict.distinct ? "yes" : "no") + " (" +
                     spp::to_string(verdict.reason) + ")\n";
  if (verdict.witness_node) {
    text += "witness node: " + std::to_string(*verdict.witness_node) + "\n";
  }
  emit(report, common.format, text);
  return verdict.distinct ? kExitOk : kExitNotDistinct;
}

int cmd_construct(const CommonOpts& common, const std::string& mode,
                  const std::string& other_file, const std::string& partials_file,
                  const std::string& d_spec, const std::string& d_prime_spec,
                  const std::string& out_dir) {
  const spp::AnalysisOptions opts{.max_states = common.max_states};
  fs::create_directories(out_dir);

  json report;
  report["command"] = "construct";
  report["mode"] = mode;
  report["out"] = out_dir;
  json files = json::array();

  if (mode == "theorem1") {
    if (common.instance_file.empty() || other_file.empty()) {
      throw spp::SppError("theorem1 needs --instance and --instance-b");
    }
    const spp::SppInstance a =
        spp::io::load_instance_file(common.instance_file).to_instance();
    const spp::SppInstance b = spp::io::load_instance_file(other_file).to_instance();
    const spp::TheoremOneOutput out = spp::construct_theorem1(a, b, opts);

    const fs::path da = fs::path(out_dir) / "lambda_deployment.json";
    const fs::path db = fs::path(out_dir) / "lambda_prime_deployment.json";
    const fs::path dm = fs::path(out_dir) / "manifest.json";
    write_file(da, spp::io::serialize_instance(out.deploy(a)));
    write_file(db, spp::io::serialize_instance(out.deploy(b)));
    write_file(dm, spp::io::manifest_json(out).dump(2) + "\n");
    files = {da.string(), db.string(), dm.string()};
    report["manifest"] = spp::io::manifest_json(out);
  } else if (mode == "theorem2") {
    if (partials_file.empty() || d_spec.empty() || d_prime_spec.empty()) {
      throw spp::SppError("theorem2 needs --partials, --d and --d-prime");
    }
    const spp::io::InstanceDocument doc = spp::io::load_instance_file(partials_file);
    if (doc.kind != spp::io::InstanceDocument::Kind::Partials) {
      throw spp::SppError(partials_file + ": theorem2 needs a partials document");
    }
    const spp::DecisionProcess d = chain_from_spec(d_spec);
    const spp::DecisionProcess d_prime = chain_from_spec(d_prime_spec);
    const spp::TheoremTwoOutput out =
        spp::construct_theorem2(doc.graph, doc.partials, d, d_prime, opts);

    const fs::path dp = fs::path(out_dir) / "graph_partials.json";
    const fs::path da = fs::path(out_dir) / "d_instance.json";
    const fs::path db = fs::path(out_dir) / "d_prime_instance.json";
    const fs::path dm = fs::path(out_dir) / "manifest.json";
    write_file(dp, spp::io::serialize_partials(out.graph, out.partials, d));
    write_file(da, spp::io::serialize_instance(
                       spp::apply_all(d, out.partials, out.graph)));
    write_file(db, spp::io::serialize_instance(
                       spp::apply_all(d_prime, out.partials, out.graph)));
    json manifest = spp::io::manifest_json(out.base);
    manifest["d"] = d.name();
    manifest["d_prime"] = d_prime.name();
    write_file(dm, manifest.dump(2) + "\n");
    files = {dp.string(), da.string(), db.string(), dm.string()};
    report["manifest"] = std::move(manifest);
  } else {
    throw spp::SppError("unknown construct mode '" + mode + "'");
  }

  report["files"] = files;
  std::string text = "wrote:\n";
  for (const auto& f : files) text += "  " + f.get<std::string>() + "\n";
  emit(report, common.format, text);
  return kExitOk;
}

int cmd_gadget(const std::string& name, const std::string& out_dir) {
  spp::SppInstance instance;
  if (name == "bad-gadget") {
    instance = spp::bad_gadget();
  } else if (name == "disagree") {
    instance = spp::disagree_gadget();
  } else {
    throw spp::SppError("unknown gadget '" + name + "' (bad-gadget or disagree)");
  }
  const std::string doc = spp::io::serialize_instance(instance);
  if (out_dir.empty()) {
    std::cout << doc;
  } else {
    fs::create_directories(out_dir);
    const fs::path path = fs::path(out_dir) / (name + ".json");
    write_file(path, doc);
    std::cout << path.string() << "\n";
  }
  return kExitOk;
}

int cmd_export_dot(const CommonOpts& common) {
  const spp::SppInstance instance =
      spp::io::load_instance_file(common.instance_file).to_instance();
  std::cout << spp::io::to_dot(instance);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stable paths laboratory: simulate, enumerate, decide, construct"};
  app.require_subcommand(1);

  CommonOpts common;
  std::string schedule_spec = "round-robin";
  std::int64_t max_steps = 0;  // 0 = instance default
  std::uint64_t seed = 0;
  std::string initial_file, other_file, partials_file;
  std::string mode, d_spec, d_prime_spec, out_dir, gadget_name;

  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", common.format, "Output format")
        ->check(CLI::IsMember({"text", "structured"}));
  };
  auto add_instance = [&](CLI::App* cmd) {
    cmd->add_option("--instance", common.instance_file, "Instance file")->required();
  };
  auto add_max_states = [&](CLI::App* cmd) {
    cmd->add_option("--max-states", common.max_states, "State-space bound");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "Run an activation schedule");
  add_instance(simulate);
  simulate->add_option("--schedule", schedule_spec,
                       "round-robin, random[:SEED], or explicit:FILE");
  simulate->add_option("--max-steps", max_steps,
                       "Step budget (default scales with the instance)");
  simulate->add_option("--seed", seed, "Seed for random schedules");
  simulate->add_option("--initial", initial_file, "Initial assignment file");
  add_format(simulate);

  CLI::App* stable = app.add_subcommand("stable", "Enumerate all stable states");
  add_instance(stable);
  add_max_states(stable);
  add_format(stable);

  CLI::App* safety = app.add_subcommand("safety", "Decide safety exhaustively");
  add_instance(safety);
  add_max_states(safety);
  add_format(safety);

  CLI::App* distinct = app.add_subcommand("distinct", "Decide safe-distinctness");
  add_instance(distinct);
  distinct->add_option("--instance-b", other_file, "Second instance file")->required();
  add_max_states(distinct);
  add_format(distinct);

  CLI::App* construct = app.add_subcommand("construct", "Build a theorem instance");
  construct->add_option("--mode", mode, "theorem1 or theorem2")->required();
  construct->add_option("--instance", common.instance_file, "First instance (theorem1)");
  construct->add_option("--instance-b", other_file, "Second instance (theorem1)");
  construct->add_option("--partials", partials_file, "Partials document (theorem2)");
  construct->add_option("--d", d_spec, "Tie-break chain, e.g. lowest-next-hop,lex-min");
  construct->add_option("--d-prime", d_prime_spec, "Second tie-break chain");
  construct->add_option("--out", out_dir, "Output directory")->required();
  add_max_states(construct);
  add_format(construct);

  CLI::App* gadget = app.add_subcommand("gadget", "Emit a classic fixture");
  gadget->add_option("--name", gadget_name, "bad-gadget or disagree")->required();
  gadget->add_option("--out", out_dir, "Directory to write into (default stdout)");

  CLI::App* export_dot = app.add_subcommand("export-dot", "Emit a graph description");
  add_instance(export_dot);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(simulate)) {
      return cmd_simulate(common, schedule_spec, max_steps, seed, initial_file);
    }
    if (app.got_subcommand(stable)) return cmd_stable(common);
    if (app.got_subcommand(safety)) return cmd_safety(common);
    if (app.got_subcommand(distinct)) return cmd_distinct(common, other_file);
    if (app.got_subcommand(construct)) {
      return cmd_construct(common, mode, other_file, partials_file, d_spec,
                           d_prime_spec, out_dir);
    }
    if (app.got_subcommand(gadget)) return cmd_gadget(gadget_name, out_dir);
    if (app.got_subcommand(export_dot)) return cmd_export_dot(common);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
