#include "meshsched/app_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <tuple>

#include "meshsched/error.hpp"
#include "meshsched/random.hpp"

namespace meshsched {

ResourceType TaskSpec::primary_type() const {
  for (ResourceType t : kAllResourceTypes) {
    if (type[index_of(t)] != 0) return t;
  }
  return ResourceType::Cpu;
}

AppDag::AppDag(NodeId owner, std::vector<TaskSpec> tasks, std::vector<DagEdge> edges,
               QosProfile qos)
    : owner_(owner), tasks_(std::move(tasks)), edges_(std::move(edges)), qos_(qos) {
  const auto n = static_cast<TaskIndex>(tasks_.size());
  preds_.resize(tasks_.size());
  succs_.resize(tasks_.size());
  for (const DagEdge& e : edges_) {
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n) {
      throw Error(ErrorCode::InvalidDag, "edge endpoint out of range");
    }
    succs_[static_cast<std::size_t>(e.from)].push_back({e.to, e.megabytes});
    preds_[static_cast<std::size_t>(e.to)].push_back({e.from, e.megabytes});
  }
}

namespace {

void check_range(const Range& r, const char* name, bool allow_zero = false) {
  if (r.hi < r.lo || r.lo < 0.0 || (!allow_zero && !(r.lo > 0.0))) {
    throw Error(ErrorCode::InvalidConfig, std::string("bad range: ") + name);
  }
}

void check_config(const AppConfig& cfg) {
  if (cfg.task_counts.empty() || cfg.branches.empty() || cfg.error_limits.empty()) {
    throw Error(ErrorCode::InvalidConfig, "task_counts, branches and error_limits must be nonempty");
  }
  for (int c : cfg.task_counts) {
    if (c < 1) throw Error(ErrorCode::InvalidConfig, "task count must be >= 1");
  }
  for (int b : cfg.branches) {
    if (b < 1) throw Error(ErrorCode::InvalidConfig, "branch must be >= 1");
  }
  for (double e : cfg.error_limits) {
    if (!(e > 0.0 && e < 1.0)) throw Error(ErrorCode::InvalidConfig, "error limit outside (0,1)");
  }
  check_range(cfg.workload, "workload");
  check_range(cfg.edge_mb, "edge_mb", true);
  check_range(cfg.deadline_s, "deadline_s");
  if (cfg.latency_weight.lo < 0.0 || cfg.latency_weight.hi > 1.0 ||
      cfg.latency_weight.hi < cfg.latency_weight.lo) {
    throw Error(ErrorCode::InvalidConfig, "latency_weight must lie in [0,1]");
  }
  if (cfg.hard_ratio < 0.0 || cfg.hard_ratio > 1.0 || cfg.extra_edge_prob < 0.0 ||
      cfg.extra_edge_prob > 1.0) {
    throw Error(ErrorCode::InvalidConfig, "probabilities must lie in [0,1]");
  }
}

}  // namespace

AppDag generate_app(const AppConfig& cfg, std::uint64_t seed, NodeId owner) {
  check_config(cfg);
  Rng rng(seed);
  const int count = rng.pick(cfg.task_counts);
  const int branch = rng.pick(cfg.branches);

  // Layer widths; each width <= branch keeps every layer coverable by the
  // previous one under the out-degree bound.
  std::vector<int> widths;
  for (int left = count; left > 0;) {
    const int w = std::min(left, 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(branch))));
    widths.push_back(w);
    left -= w;
  }
  const bool virtual_source = widths.front() > 1;
  const bool virtual_sink = widths.back() > 1;

  std::vector<std::vector<TaskIndex>> layers;
  TaskIndex next = virtual_source ? 1 : 0;
  for (int w : widths) {
    auto& layer = layers.emplace_back();
    for (int i = 0; i < w; ++i) layer.push_back(next++);
  }
  const TaskIndex total = next + (virtual_sink ? 1 : 0);

  std::vector<TaskSpec> tasks(static_cast<std::size_t>(total));
  for (TaskIndex j = 0; j < total; ++j) {
    TaskSpec& t = tasks[static_cast<std::size_t>(j)];
    t.index = j;
    const bool is_virtual = (virtual_source && j == 0) || (virtual_sink && j == total - 1);
    if (is_virtual) {
      t.is_virtual = true;
      t.type = mask_of(ResourceType::Cpu);
      continue;
    }
    const ResourceType type = rng.pick(kAllResourceTypes);
    t.type = mask_of(type);
    t.requirement[index_of(type)] = rng.uniform(cfg.workload.lo, cfg.workload.hi);
  }

  std::vector<DagEdge> edges;
  std::vector<int> out_degree(static_cast<std::size_t>(total), 0);
  auto connected = [&](TaskIndex a, TaskIndex b) {
    return std::any_of(edges.begin(), edges.end(),
                       [&](const DagEdge& e) { return e.from == a && e.to == b; });
  };
  auto add_edge = [&](TaskIndex a, TaskIndex b, double mb) {
    edges.push_back({a, b, mb});
    ++out_degree[static_cast<std::size_t>(a)];
  };
  auto draw_mb = [&] { return rng.uniform(cfg.edge_mb.lo, cfg.edge_mb.hi); };

  for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
    const auto& upper = layers[l];
    const auto& lower = layers[l + 1];
    for (TaskIndex v : lower) {
      std::vector<TaskIndex> open;
      for (TaskIndex u : upper) {
        if (out_degree[static_cast<std::size_t>(u)] < branch) open.push_back(u);
      }
      add_edge(rng.pick(open), v, draw_mb());
    }
    for (TaskIndex u : upper) {
      if (out_degree[static_cast<std::size_t>(u)] == 0) add_edge(u, rng.pick(lower), draw_mb());
    }
    for (TaskIndex u : upper) {
      for (TaskIndex v : lower) {
        if (out_degree[static_cast<std::size_t>(u)] >= branch || connected(u, v)) continue;
        if (rng.bernoulli(cfg.extra_edge_prob)) add_edge(u, v, draw_mb());
      }
    }
  }
  if (virtual_source) {
    for (TaskIndex v : layers.front()) add_edge(0, v, 0.0);
  }
  if (virtual_sink) {
    for (TaskIndex u : layers.back()) add_edge(u, total - 1, 0.0);
  }
  std::sort(edges.begin(), edges.end(), [](const DagEdge& a, const DagEdge& b) {
    return std::tie(a.from, a.to) < std::tie(b.from, b.to);
  });

  QosProfile qos;
  qos.deadline_s = rng.uniform(cfg.deadline_s.lo, cfg.deadline_s.hi);
  qos.error_limit = rng.pick(cfg.error_limits);
  qos.hard_deadline = rng.bernoulli(cfg.hard_ratio);
  qos.hard_accuracy = rng.bernoulli(cfg.hard_ratio);
  qos.weights.latency = rng.uniform(cfg.latency_weight.lo, cfg.latency_weight.hi);
  qos.weights.accuracy = 1.0 - qos.weights.latency;

  return AppDag(owner, std::move(tasks), std::move(edges), qos);
}

std::vector<TaskIndex> topological_order(const AppDag& dag) {
  const std::size_t n = dag.size();
  std::vector<std::size_t> in_degree(n);
  std::priority_queue<TaskIndex, std::vector<TaskIndex>, std::greater<>> ready;
  for (std::size_t j = 0; j < n; ++j) {
    in_degree[j] = dag.predecessors(static_cast<TaskIndex>(j)).size();
    if (in_degree[j] == 0) ready.push(static_cast<TaskIndex>(j));
  }
  std::vector<TaskIndex> order;
  order.reserve(n);
  while (!ready.empty()) {
    const TaskIndex j = ready.top();
    ready.pop();
    order.push_back(j);
    for (const Dependency& s : dag.successors(j)) {
      if (--in_degree[static_cast<std::size_t>(s.task)] == 0) ready.push(s.task);
    }
  }
  if (order.size() != n) throw Error(ErrorCode::CycleDetected, "application graph has a cycle");
  return order;
}

std::vector<std::size_t> topological_rank(const AppDag& dag) {
  const auto order = topological_order(dag);
  std::vector<std::size_t> rank(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[static_cast<std::size_t>(order[i])] = i;
  return rank;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::CycleDetected: return "CycleDetected";
    case ViolationKind::MultipleSources: return "MultipleSources";
    case ViolationKind::MultipleSinks: return "MultipleSinks";
    case ViolationKind::SourceNotFirst: return "SourceNotFirst";
    case ViolationKind::SinkNotLast: return "SinkNotLast";
    case ViolationKind::Unreachable: return "Unreachable";
    case ViolationKind::TypeNotOneHot: return "TypeNotOneHot";
    case ViolationKind::NonPositiveRequirement: return "NonPositiveRequirement";
    case ViolationKind::BadEdge: return "BadEdge";
    case ViolationKind::BadQos: return "BadQos";
  }
  return "Unknown";
}

namespace {

std::vector<bool> reach(const AppDag& dag, TaskIndex start, bool forward) {
  std::vector<bool> seen(dag.size(), false);
  std::vector<TaskIndex> stack{start};
  seen[static_cast<std::size_t>(start)] = true;
  while (!stack.empty()) {
    const TaskIndex j = stack.back();
    stack.pop_back();
    for (const Dependency& d : forward ? dag.successors(j) : dag.predecessors(j)) {
      if (!seen[static_cast<std::size_t>(d.task)]) {
        seen[static_cast<std::size_t>(d.task)] = true;
        stack.push_back(d.task);
      }
    }
  }
  return seen;
}

}  // namespace

std::vector<Violation> validate_dag(const AppDag& dag) {
  std::vector<Violation> out;
  if (dag.size() == 0) {
    out.push_back({ViolationKind::Unreachable, -1, "application has no tasks"});
    return out;
  }

  for (const DagEdge& e : dag.edges()) {
    if (e.from == e.to) out.push_back({ViolationKind::BadEdge, e.from, "self loop"});
    if (!(e.megabytes >= 0.0)) out.push_back({ViolationKind::BadEdge, e.from, "negative bytes"});
  }

  bool acyclic = true;
  try {
    (void)topological_order(dag);
  } catch (const Error&) {
    acyclic = false;
    out.push_back({ViolationKind::CycleDetected, -1, "graph contains a cycle"});
  }

  std::vector<TaskIndex> sources;
  std::vector<TaskIndex> sinks;
  for (std::size_t j = 0; j < dag.size(); ++j) {
    const auto t = static_cast<TaskIndex>(j);
    if (dag.predecessors(t).empty()) sources.push_back(t);
    if (dag.successors(t).empty()) sinks.push_back(t);
  }
  if (sources.size() > 1) out.push_back({ViolationKind::MultipleSources, sources[1], ""});
  if (sinks.size() > 1) out.push_back({ViolationKind::MultipleSinks, sinks[1], ""});
  if (!dag.predecessors(dag.source()).empty()) {
    out.push_back({ViolationKind::SourceNotFirst, dag.source(), "task 0 has predecessors"});
  }
  if (!dag.successors(dag.sink()).empty()) {
    out.push_back({ViolationKind::SinkNotLast, dag.sink(), "last task has successors"});
  }

  if (acyclic) {
    const auto from_source = reach(dag, dag.source(), true);
    const auto to_sink = reach(dag, dag.sink(), false);
    for (std::size_t j = 0; j < dag.size(); ++j) {
      if (!from_source[j] || !to_sink[j]) {
        out.push_back({ViolationKind::Unreachable, static_cast<TaskIndex>(j),
                       "task is not on a source-to-sink path"});
      }
    }
  }

  for (const TaskSpec& t : dag.tasks()) {
    if (!is_one_hot(t.type)) {
      out.push_back({ViolationKind::TypeNotOneHot, t.index, ""});
      continue;
    }
    const double active = t.requirement[index_of(t.primary_type())];
    if (t.is_virtual) {
      const bool all_zero = std::all_of(t.requirement.begin(), t.requirement.end(),
                                        [](double v) { return v == 0.0; });
      if (!all_zero) {
        out.push_back({ViolationKind::NonPositiveRequirement, t.index,
                       "virtual task must have zero requirement"});
      }
    } else if (!(active > 0.0)) {
      out.push_back({ViolationKind::NonPositiveRequirement, t.index, ""});
    }
  }

  const QosProfile& q = dag.qos();
  const double wsum = q.weights.latency + q.weights.accuracy;
  if (!(q.deadline_s > 0.0) || !(q.error_limit > 0.0 && q.error_limit < 1.0) ||
      q.weights.latency < 0.0 || q.weights.latency > 1.0 || q.weights.accuracy < 0.0 ||
      q.weights.accuracy > 1.0 || std::abs(wsum - 1.0) > 1e-9) {
    out.push_back({ViolationKind::BadQos, -1, "qos thresholds or weights out of range"});
  }
  return out;
}

}  // namespace meshsched
