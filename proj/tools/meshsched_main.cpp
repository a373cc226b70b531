// meshsched: generate instances, run schedulers, sweep experiments and
// solve tiny instances exactly. Log level comes from SPDLOG_LEVEL.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/cfg/env.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "meshsched/baselines.hpp"
#include "meshsched/error.hpp"
#include "meshsched/harness.hpp"
#include "meshsched/oracle.hpp"
#include "meshsched/serialization.hpp"

namespace {

using meshsched::ExperimentConfig;
using nlohmann::json;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw meshsched::Error(meshsched::ErrorCode::Parse, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw meshsched::Error(meshsched::ErrorCode::Parse, path + ": " + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  if (path.empty()) return meshsched::default_experiment();
  return meshsched::experiment_from_json(read_json(path));
}

void emit(const json& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw meshsched::Error(meshsched::ErrorCode::Parse, "cannot write " + out_path);
  out << doc.dump(2) << '\n';
  spdlog::info("wrote {}", out_path);
}

// Instance for `run`/`gen-apps`: from a file when given, otherwise generated
// from the config's base settings (first sweep value) and the seed.
meshsched::Instance instance_for(const ExperimentConfig& cfg, std::uint64_t seed,
                                 const std::string& instance_path) {
  if (!instance_path.empty()) return meshsched::instance_from_json(read_json(instance_path));
  return meshsched::build_instance(cfg, cfg.values.front(), seed);
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("meshsched"));
  spdlog::cfg::load_env_levels();

  CLI::App app{"Mesh-network dependent-task scheduling simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 1;

  auto* gen_topo = app.add_subcommand("gen-topology", "Generate a random mesh topology as JSON");
  gen_topo->add_option("--config", config_path, "Experiment config JSON");
  gen_topo->add_option("--seed", seed, "Seed");
  gen_topo->add_option("--out", out_path, "Output file (default stdout)");

  std::string topology_path;
  auto* gen_apps =
      app.add_subcommand("gen-apps", "Generate applications (and topology) as an instance JSON");
  gen_apps->add_option("--config", config_path, "Experiment config JSON");
  gen_apps->add_option("--seed", seed, "Seed");
  gen_apps->add_option("--topology", topology_path,
                       "Use this topology; app nodes are sampled from it");
  gen_apps->add_option("--out", out_path, "Output file (default stdout)");

  std::string scheduler_name = "hmtsa";
  std::string instance_path;
  std::string trace_path;
  auto* run = app.add_subcommand("run", "Schedule one instance and print its metrics");
  run->add_option("--scheduler", scheduler_name, "hmtsa | cofe | daas | whole | ours1")
      ->check(CLI::IsMember({"hmtsa", "cofe", "daas", "whole", "ours1"}));
  run->add_option("--config", config_path, "Experiment config JSON");
  run->add_option("--seed", seed, "Seed");
  run->add_option("--instance", instance_path, "Instance JSON instead of generating one");
  run->add_option("--out", out_path, "Write the assignment JSON here");
  run->add_option("--trace", trace_path, "Write the per-round trace JSON here");

  std::string timing_path;
  std::string summary_path;
  unsigned threads = 0;
  auto* sweep = app.add_subcommand("sweep", "Run an experiment sweep and write the results CSV");
  sweep->add_option("--config", config_path, "Experiment config JSON")->required();
  sweep->add_option("--out", out_path, "Results CSV")->required();
  sweep->add_option("--timing", timing_path, "Optional wall-clock CSV");
  sweep->add_option("--summary", summary_path, "Optional per-group mean/CI CSV");
  sweep->add_option("--threads", threads, "Worker threads (0 = all cores)");

  auto* oracle = app.add_subcommand("oracle", "Exhaustively solve a tiny instance");
  oracle->add_option("--instance", instance_path, "Instance JSON")->required();
  oracle->add_option("--config", config_path, "Config JSON supplying cost parameters");

  CLI11_PARSE(app, argc, argv);

  try {
    const ExperimentConfig cfg = load_config(config_path);

    if (*gen_topo) {
      const auto net = meshsched::build_random_network(cfg.network, seed);
      emit(meshsched::topology_to_json(net), out_path);
    } else if (*gen_apps) {
      const meshsched::Instance inst =
          topology_path.empty()
              ? meshsched::build_instance(cfg, cfg.values.front(), seed)
              : meshsched::populate_instance(cfg, cfg.values.front(), seed,
                                             meshsched::topology_from_json(read_json(topology_path)));
      emit(meshsched::instance_to_json(inst), out_path);
    } else if (*run) {
      const auto kind = meshsched::parse_scheduler(scheduler_name);
      const meshsched::Instance inst = instance_for(cfg, seed, instance_path);
      const ExperimentConfig c = meshsched::apply_axis(cfg, cfg.values.front());
      spdlog::debug("scheduling {} apps on {} nodes with {}", inst.apps.size(),
                    inst.network.size(), scheduler_name);
      const auto result = meshsched::run_scheduler(*kind, inst.apps, inst.network, c.scheduler);
      const auto ev =
          meshsched::evaluate(result.assignment, inst.network, inst.apps, c.scheduler.cost);
      json doc = meshsched::metrics_to_json(ev.metrics);
      doc["scheduler"] = scheduler_name;
      doc["rounds"] = result.rounds;
      doc["candidate_evaluations"] = result.candidate_evaluations;
      std::cout << doc.dump(2) << '\n';
      if (!out_path.empty()) emit(meshsched::assignment_to_json(result.assignment), out_path);
      if (!trace_path.empty()) {
        json tr = json::array();
        for (const auto& r : result.trace) {
          tr.push_back({{"round", r.round},
                        {"selected", r.selected},
                        {"quotas", r.quotas},
                        {"placements", meshsched::assignment_to_json(r.placements)}});
        }
        emit(tr, trace_path);
      }
    } else if (*sweep) {
      const auto rows = meshsched::run_experiment(cfg, threads);
      std::ofstream out(out_path);
      if (!out) throw meshsched::Error(meshsched::ErrorCode::Parse, "cannot write " + out_path);
      meshsched::write_csv(out, rows);
      std::size_t failed = 0;
      for (const auto& r : rows) {
        if (!r.ok()) {
          ++failed;
          spdlog::warn("row {} {} seed {} failed: {}", r.sweep_value,
                       meshsched::to_string(r.scheduler), r.seed, r.error);
        }
      }
      spdlog::info("wrote {} rows ({} failed) to {}", rows.size(), failed, out_path);
      if (!timing_path.empty()) {
        std::ofstream t(timing_path);
        meshsched::write_timing_csv(t, rows);
      }
      if (!summary_path.empty()) {
        std::ofstream s(summary_path);
        const auto summary = meshsched::summarize(rows);
        meshsched::write_summary_csv(s, summary);
      }
    } else if (*oracle) {
      const meshsched::Instance inst = meshsched::instance_from_json(read_json(instance_path));
      const auto best = meshsched::oracle_optimum(inst.apps, inst.network, cfg.scheduler.cost);
      json doc = {{"best_avg_qoe_cost", best.best_qoe},
                  {"evaluations", best.evaluations},
                  {"assignment", meshsched::assignment_to_json(best.best)}};
      std::cout << doc.dump(2) << '\n';
    }
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
