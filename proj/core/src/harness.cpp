#include "meshsched/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <thread>
#include <tuple>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "meshsched/error.hpp"
#include "meshsched/random.hpp"

namespace meshsched {

using nlohmann::json;

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::AppCount: return "app_count";
    case SweepAxis::NodeCount: return "node_count";
    case SweepAxis::SoftRatio: return "soft_ratio";
    case SweepAxis::K: return "k";
    case SweepAxis::O: return "o";
  }
  return "?";
}

std::optional<SweepAxis> parse_axis(std::string_view name) {
  for (SweepAxis a : {SweepAxis::AppCount, SweepAxis::NodeCount, SweepAxis::SoftRatio,
                      SweepAxis::K, SweepAxis::O}) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

ExperimentConfig default_experiment() {
  ExperimentConfig cfg;
  for (std::uint64_t s = 1; s <= 20; ++s) cfg.seeds.push_back(s);
  cfg.axis = SweepAxis::AppCount;
  cfg.values = {15, 20, 25, 30, 35};
  return cfg;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.values.empty()) throw Error(ErrorCode::InvalidConfig, "sweep values are empty");
  if (cfg.seeds.empty()) throw Error(ErrorCode::InvalidConfig, "seed list is empty");
  if (cfg.schedulers.empty()) throw Error(ErrorCode::InvalidConfig, "scheduler list is empty");
  if (std::set(cfg.seeds.begin(), cfg.seeds.end()).size() != cfg.seeds.size()) {
    throw Error(ErrorCode::InvalidConfig, "seeds must be distinct");
  }
  for (double v : cfg.values) {
    const ExperimentConfig c = apply_axis(cfg, v);
    validate(c.scheduler);
    if (c.apps.count < 1 || c.apps.count > c.network.node_count) {
      throw Error(ErrorCode::InvalidConfig, "app count must lie in [1, node_count]");
    }
    if (c.apps.hard_ratio < 0.0 || c.apps.hard_ratio > 1.0) {
      throw Error(ErrorCode::InvalidConfig, "soft ratio must lie in [0, 1]");
    }
  }
}

namespace {

Range range_from(const json& j, Range fallback) {
  if (j.is_null()) return fallback;
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 2) throw Error(ErrorCode::InvalidConfig, "ranges are [lo, hi] pairs");
  return {v[0], v[1]};
}

json range_to(const Range& r) { return json::array({r.lo, r.hi}); }

const json& opt(const json& j, const char* key) {
  static const json null_json;
  auto it = j.find(key);
  return it == j.end() ? null_json : *it;
}

}  // namespace

ExperimentConfig experiment_from_json(const json& j) {
  try {
    ExperimentConfig cfg = default_experiment();
    cfg.master_seed = j.value("master_seed", cfg.master_seed);
    if (j.contains("seeds")) {
      cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    } else if (j.contains("seed_count")) {
      cfg.seeds.clear();
      const auto n = j.at("seed_count").get<std::uint64_t>();
      for (std::uint64_t s = 1; s <= n; ++s) cfg.seeds.push_back(s);
    }

    if (const json& n = opt(j, "network"); !n.is_null()) {
      NetworkConfig& c = cfg.network;
      c.node_count = n.value("node_count", c.node_count);
      c.area_m = n.value("area_m", c.area_m);
      c.comm_range_m = n.value("comm_range_m", c.comm_range_m);
      c.cpu_range = range_from(opt(n, "cpu_range"), c.cpu_range);
      c.gpu_range = range_from(opt(n, "gpu_range"), c.gpu_range);
      c.io_range = range_from(opt(n, "io_range"), c.io_range);
      c.rate_range = range_from(opt(n, "rate_range"), c.rate_range);
      c.ber_set = n.value("ber_set", c.ber_set);
      c.max_attempts = n.value("max_attempts", c.max_attempts);
    }
    if (const json& a = opt(j, "apps"); !a.is_null()) {
      AppConfig& c = cfg.apps;
      c.count = a.value("count", c.count);
      c.hard_ratio = a.value("hard_ratio", c.hard_ratio);
      c.task_counts = a.value("task_counts", c.task_counts);
      c.branches = a.value("branches", c.branches);
      c.workload = range_from(opt(a, "workload"), c.workload);
      c.edge_mb = range_from(opt(a, "edge_mb"), c.edge_mb);
      c.deadline_s = range_from(opt(a, "deadline_s"), c.deadline_s);
      c.error_limits = a.value("error_limits", c.error_limits);
      c.latency_weight = range_from(opt(a, "latency_weight"), c.latency_weight);
      c.extra_edge_prob = a.value("extra_edge_prob", c.extra_edge_prob);
    }
    if (const json& c = opt(j, "cost"); !c.is_null()) {
      cfg.scheduler.cost = cost_params_from_json(c);
    }
    if (const json& s = opt(j, "scheduler"); !s.is_null()) {
      cfg.scheduler.k = s.value("k", cfg.scheduler.k);
      cfg.scheduler.o = s.value("o", cfg.scheduler.o);
    }
    if (j.contains("schedulers")) {
      cfg.schedulers.clear();
      for (const auto& name : j.at("schedulers").get<std::vector<std::string>>()) {
        const auto kind = parse_scheduler(name);
        if (!kind) throw Error(ErrorCode::InvalidConfig, "unknown scheduler '" + name + "'");
        cfg.schedulers.push_back(*kind);
      }
    }
    if (const json& s = opt(j, "sweep"); !s.is_null()) {
      const auto name = s.at("axis").get<std::string>();
      const auto axis = parse_axis(name);
      if (!axis) throw Error(ErrorCode::InvalidConfig, "unknown sweep axis '" + name + "'");
      cfg.axis = *axis;
      cfg.values = s.at("values").get<std::vector<double>>();
    }
    validate(cfg);
    return cfg;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("experiment config: ") + e.what());
  }
}

json experiment_to_json(const ExperimentConfig& cfg) {
  json schedulers = json::array();
  for (SchedulerKind k : cfg.schedulers) schedulers.push_back(std::string(to_string(k)));
  const NetworkConfig& n = cfg.network;
  const AppConfig& a = cfg.apps;
  return {
      {"master_seed", cfg.master_seed},
      {"seeds", cfg.seeds},
      {"network",
       {{"node_count", n.node_count},
        {"area_m", n.area_m},
        {"comm_range_m", n.comm_range_m},
        {"cpu_range", range_to(n.cpu_range)},
        {"gpu_range", range_to(n.gpu_range)},
        {"io_range", range_to(n.io_range)},
        {"rate_range", range_to(n.rate_range)},
        {"ber_set", n.ber_set},
        {"max_attempts", n.max_attempts}}},
      {"apps",
       {{"count", a.count},
        {"hard_ratio", a.hard_ratio},
        {"task_counts", a.task_counts},
        {"branches", a.branches},
        {"workload", range_to(a.workload)},
        {"edge_mb", range_to(a.edge_mb)},
        {"deadline_s", range_to(a.deadline_s)},
        {"error_limits", a.error_limits},
        {"latency_weight", range_to(a.latency_weight)},
        {"extra_edge_prob", a.extra_edge_prob}}},
      {"cost", cost_params_to_json(cfg.scheduler.cost)},
      {"scheduler", {{"k", cfg.scheduler.k}, {"o", cfg.scheduler.o}}},
      {"schedulers", std::move(schedulers)},
      {"sweep", {{"axis", std::string(to_string(cfg.axis))}, {"values", cfg.values}}},
  };
}

ExperimentConfig apply_axis(const ExperimentConfig& cfg, double value) {
  ExperimentConfig c = cfg;
  switch (cfg.axis) {
    case SweepAxis::AppCount: c.apps.count = static_cast<int>(std::lround(value)); break;
    case SweepAxis::NodeCount: c.network.node_count = static_cast<int>(std::lround(value)); break;
    case SweepAxis::SoftRatio: c.apps.hard_ratio = 1.0 - value; break;
    case SweepAxis::K: c.scheduler.k = value; break;
    case SweepAxis::O: c.scheduler.o = value; break;
  }
  return c;
}

namespace {

enum Purpose : std::uint64_t { kNetwork = 1, kAppNodes = 2, kApps = 3 };

std::uint64_t instance_tag(SweepAxis axis, double value) {
  if (axis == SweepAxis::K || axis == SweepAxis::O) return 0;
  return std::bit_cast<std::uint64_t>(value);
}

}  // namespace

Instance build_instance(const ExperimentConfig& cfg, double sweep_value, std::uint64_t seed) {
  const ExperimentConfig c = apply_axis(cfg, sweep_value);
  const std::uint64_t tag = instance_tag(cfg.axis, sweep_value);
  if (c.apps.count < 1 || c.apps.count > c.network.node_count) {
    throw Error(ErrorCode::InvalidConfig, "app count must lie in [1, node_count]");
  }
  return populate_instance(
      cfg, sweep_value, seed,
      build_random_network(c.network, derive_seed(cfg.master_seed, {seed, tag, kNetwork})));
}

Instance populate_instance(const ExperimentConfig& cfg, double sweep_value, std::uint64_t seed,
                           NetworkGraph network) {
  const ExperimentConfig c = apply_axis(cfg, sweep_value);
  const std::uint64_t tag = instance_tag(cfg.axis, sweep_value);
  if (c.apps.count < 1 || static_cast<std::size_t>(c.apps.count) > network.size()) {
    throw Error(ErrorCode::InvalidConfig, "app count must lie in [1, node_count]");
  }

  // Partial Fisher-Yates over node ids.
  std::vector<NodeId> ids(network.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<NodeId>(i);
  Rng pick(derive_seed(cfg.master_seed, {seed, tag, kAppNodes}));
  const auto count = static_cast<std::size_t>(c.apps.count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(pick.below(ids.size() - i));
    std::swap(ids[i], ids[j]);
  }
  ids.resize(count);
  std::sort(ids.begin(), ids.end());
  network.set_app_nodes(ids);

  std::vector<AppDag> apps;
  apps.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    apps.push_back(
        generate_app(c.apps, derive_seed(cfg.master_seed, {seed, tag, kApps, i}), ids[i]));
  }
  return Instance{std::move(network), std::move(apps)};
}

namespace {

std::vector<ResultRow> run_job(const ExperimentConfig& cfg, double value, std::uint64_t seed) {
  std::vector<ResultRow> rows;
  const ExperimentConfig c = apply_axis(cfg, value);
  std::optional<Instance> inst;
  std::string build_error;
  try {
    inst = build_instance(cfg, value, seed);
  } catch (const std::exception& e) {
    build_error = e.what();
  }
  for (SchedulerKind kind : cfg.schedulers) {
    ResultRow row;
    row.sweep_value = value;
    row.scheduler = kind;
    row.seed = seed;
    if (!inst) {
      row.error = build_error;
      rows.push_back(std::move(row));
      continue;
    }
    try {
      const auto t0 = std::chrono::steady_clock::now();
      ScheduleResult r = run_scheduler(kind, inst->apps, inst->network, c.scheduler);
      const auto t1 = std::chrono::steady_clock::now();
      row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      row.candidate_evaluations = r.candidate_evaluations;
      row.rounds = r.rounds;
      row.metrics = evaluate(r.assignment, inst->network, inst->apps, c.scheduler.cost).metrics;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::size_t scheduler_order(SchedulerKind k) { return static_cast<std::size_t>(k); }

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, unsigned threads) {
  validate(cfg);
  struct Job {
    double value;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (double v : cfg.values) {
    for (std::uint64_t s : cfg.seeds) jobs.push_back({v, s});
  }
  std::vector<std::vector<ResultRow>> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      results[i] = run_job(cfg, jobs[i].value, jobs[i].seed);
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  std::vector<ResultRow> rows;
  for (auto& r : results) std::move(r.begin(), r.end(), std::back_inserter(rows));
  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::make_tuple(a.sweep_value, scheduler_order(a.scheduler), a.seed) <
           std::make_tuple(b.sweep_value, scheduler_order(b.scheduler), b.seed);
  });
  return rows;
}

void write_csv(std::ostream& os, std::span<const ResultRow> rows) {
  os << kCsvHeader << '\n';
  for (const ResultRow& r : rows) {
    if (!r.ok()) {
      fmt::print(os, "{},{},{},nan,nan,nan,nan,nan,nan\n", r.sweep_value, to_string(r.scheduler),
                 r.seed);
      continue;
    }
    const MetricsRecord& m = r.metrics;
    fmt::print(os, "{},{},{},{},{},{},{},{},{}\n", r.sweep_value, to_string(r.scheduler), r.seed,
               m.avg_completion_s, m.deadline_ratio, m.accuracy_ratio, m.avg_latency_cost,
               m.avg_accuracy_cost, m.avg_qoe_cost);
  }
}

void write_timing_csv(std::ostream& os, std::span<const ResultRow> rows) {
  os << "sweep_value,scheduler,seed,wall_ms,candidate_evaluations,rounds,error\n";
  for (const ResultRow& r : rows) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    fmt::print(os, "{},{},{},{:.3f},{},{},{}\n", r.sweep_value, to_string(r.scheduler), r.seed,
               r.wall_ms, r.candidate_evaluations, r.rounds, err);
  }
}

std::vector<SummaryRow> summarize(std::span<const ResultRow> rows) {
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "no rows to summarize");
  using Key = std::pair<double, std::size_t>;
  std::map<Key, std::vector<const MetricsRecord*>> groups;
  for (const ResultRow& r : rows) {
    if (r.ok()) groups[{r.sweep_value, scheduler_order(r.scheduler)}].push_back(&r.metrics);
  }
  if (groups.empty()) throw Error(ErrorCode::EmptyInput, "every row failed");

  constexpr double kZ95 = 1.959963984540054;
  using Field = double MetricsRecord::*;
  constexpr Field kFields[] = {&MetricsRecord::avg_completion_s,  &MetricsRecord::deadline_ratio,
                               &MetricsRecord::accuracy_ratio,    &MetricsRecord::avg_latency_cost,
                               &MetricsRecord::avg_accuracy_cost, &MetricsRecord::avg_qoe_cost};
  std::vector<SummaryRow> out;
  for (const auto& [key, ms] : groups) {
    SummaryRow s;
    s.sweep_value = key.first;
    s.scheduler = kAllSchedulers[key.second];
    s.count = ms.size();
    const auto n = static_cast<double>(ms.size());
    for (Field f : kFields) {
      double sum = 0.0;
      for (const MetricsRecord* m : ms) sum += m->*f;
      const double mean = sum / n;
      double sq = 0.0;
      for (const MetricsRecord* m : ms) sq += (m->*f - mean) * (m->*f - mean);
      s.mean.*f = mean;
      s.half_width.*f = ms.size() > 1 ? kZ95 * std::sqrt(sq / (n - 1.0)) / std::sqrt(n) : 0.0;
    }
    out.push_back(s);
  }
  return out;
}

void write_summary_csv(std::ostream& os, std::span<const SummaryRow> rows) {
  os << "sweep_value,scheduler,n,avg_completion_s,avg_completion_s_ci,deadline_ratio,"
        "deadline_ratio_ci,accuracy_ratio,accuracy_ratio_ci,avg_latency_cost,"
        "avg_latency_cost_ci,avg_accuracy_cost,avg_accuracy_cost_ci,avg_qoe_cost,avg_qoe_cost_ci\n";
  for (const SummaryRow& s : rows) {
    const MetricsRecord& m = s.mean;
    const MetricsRecord& h = s.half_width;
    fmt::print(os, "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", s.sweep_value,
               to_string(s.scheduler), s.count, m.avg_completion_s, h.avg_completion_s,
               m.deadline_ratio, h.deadline_ratio, m.accuracy_ratio, h.accuracy_ratio,
               m.avg_latency_cost, h.avg_latency_cost, m.avg_accuracy_cost, h.avg_accuracy_cost,
               m.avg_qoe_cost, h.avg_qoe_cost);
  }
}

}  // namespace meshsched
