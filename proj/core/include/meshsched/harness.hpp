#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "meshsched/baselines.hpp"
#include "meshsched/serialization.hpp"

namespace meshsched {

enum class SweepAxis { AppCount, NodeCount, SoftRatio, K, O };

std::string_view to_string(SweepAxis axis);
std::optional<SweepAxis> parse_axis(std::string_view name);

struct ExperimentConfig {
  NetworkConfig network{};
  AppConfig apps{};
  SchedulerParams scheduler{};
  std::vector<SchedulerKind> schedulers{std::begin(kAllSchedulers), std::end(kAllSchedulers)};
  std::uint64_t master_seed = 1;
  std::vector<std::uint64_t> seeds;
  SweepAxis axis = SweepAxis::AppCount;
  std::vector<double> values;
};

// Defaults: 20 seeds, app-count sweep {15..35}.
ExperimentConfig default_experiment();

// Throws Error{InvalidConfig}.
void validate(const ExperimentConfig& cfg);

ExperimentConfig experiment_from_json(const nlohmann::json& j);
nlohmann::json experiment_to_json(const ExperimentConfig& cfg);

// Copy of `cfg` with the sweep axis set to `value`.
ExperimentConfig apply_axis(const ExperimentConfig& cfg, double value);

// Network with cfg.apps.count app nodes sampled without replacement, plus
// one generated application per app node. Sub-seeds are derived from
// (master_seed, seed, sweep value, purpose); the sweep value is left out
// for axes that do not change the instance (k, o).
Instance build_instance(const ExperimentConfig& cfg, double sweep_value, std::uint64_t seed);

// Same app-node sampling and application generation on a given network.
Instance populate_instance(const ExperimentConfig& cfg, double sweep_value, std::uint64_t seed,
                           NetworkGraph network);

struct ResultRow {
  double sweep_value = 0.0;
  SchedulerKind scheduler = SchedulerKind::Hmtsa;
  std::uint64_t seed = 0;
  MetricsRecord metrics{};
  double wall_ms = 0.0;
  std::uint64_t candidate_evaluations = 0;
  std::size_t rounds = 0;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

// One row per (sweep value, scheduler, seed), sorted by that key. Instances
// run on `threads` workers (0 = hardware concurrency); failures become rows
// with `error` set.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, unsigned threads = 0);

inline constexpr std::string_view kCsvHeader =
    "sweep_value,scheduler,seed,avg_completion_s,deadline_ratio,accuracy_ratio,"
    "avg_latency_cost,avg_accuracy_cost,avg_qoe_cost";

void write_csv(std::ostream& os, std::span<const ResultRow> rows);
// Wall-clock and work counters, kept apart so the main CSV is reproducible.
void write_timing_csv(std::ostream& os, std::span<const ResultRow> rows);

struct SummaryRow {
  double sweep_value = 0.0;
  SchedulerKind scheduler = SchedulerKind::Hmtsa;
  std::size_t count = 0;
  MetricsRecord mean{};
  MetricsRecord half_width{};  // 95% normal-approximation interval
};

// Means over successful rows grouped by (sweep value, scheduler).
// Throws Error{EmptyInput}.
std::vector<SummaryRow> summarize(std::span<const ResultRow> rows);

void write_summary_csv(std::ostream& os, std::span<const SummaryRow> rows);

}  // namespace meshsched
