#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "meshsched/net_model.hpp"
#include "meshsched/resources.hpp"

namespace meshsched {

using TaskIndex = std::int32_t;

struct TaskSpec {
  TaskIndex index = 0;
  TypeMask type = mask_of(ResourceType::Cpu);
  ResourceVector requirement{};
  // Zero-workload source/sink inserted by the generator.
  bool is_virtual = false;

  ResourceType primary_type() const;

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

struct DagEdge {
  TaskIndex from = 0;
  TaskIndex to = 0;
  double megabytes = 0.0;

  friend bool operator==(const DagEdge&, const DagEdge&) = default;
};

struct QosWeights {
  double latency = 0.5;
  double accuracy = 0.5;

  friend bool operator==(const QosWeights&, const QosWeights&) = default;
};

struct QosProfile {
  double deadline_s = 20.0;
  double error_limit = 1e-3;
  QosWeights weights{};
  bool hard_deadline = false;
  bool hard_accuracy = false;

  friend bool operator==(const QosProfile&, const QosProfile&) = default;
};

// Incoming or outgoing dependency of one task.
struct Dependency {
  TaskIndex task = 0;
  double megabytes = 0.0;
};

// DAG application. Task 0 is the source (always executed on the owner);
// the last task is the sink whose completion defines the application's QoE.
class AppDag {
 public:
  AppDag() = default;
  // Indexes adjacency. Only structural sanity (edge endpoints in range) is
  // enforced here; validate_dag() reports every other violation.
  AppDag(NodeId owner, std::vector<TaskSpec> tasks, std::vector<DagEdge> edges, QosProfile qos);

  NodeId owner() const { return owner_; }
  const QosProfile& qos() const { return qos_; }
  std::size_t size() const { return tasks_.size(); }
  std::span<const TaskSpec> tasks() const { return tasks_; }
  const TaskSpec& task(TaskIndex j) const { return tasks_[static_cast<std::size_t>(j)]; }
  std::span<const DagEdge> edges() const { return edges_; }
  std::span<const Dependency> predecessors(TaskIndex j) const {
    return preds_[static_cast<std::size_t>(j)];
  }
  std::span<const Dependency> successors(TaskIndex j) const {
    return succs_[static_cast<std::size_t>(j)];
  }
  TaskIndex source() const { return 0; }
  TaskIndex sink() const { return static_cast<TaskIndex>(tasks_.size()) - 1; }

  friend bool operator==(const AppDag& l, const AppDag& r) {
    return l.owner_ == r.owner_ && l.tasks_ == r.tasks_ && l.edges_ == r.edges_ &&
           l.qos_ == r.qos_;
  }

 private:
  NodeId owner_ = 0;
  std::vector<TaskSpec> tasks_;
  std::vector<DagEdge> edges_;
  QosProfile qos_;
  std::vector<std::vector<Dependency>> preds_;
  std::vector<std::vector<Dependency>> succs_;
};

struct AppConfig {
  int count = 30;
  double hard_ratio = 0.5;
  std::vector<int> task_counts{16, 17, 18, 19, 20};
  std::vector<int> branches{2, 3, 4, 5};
  Range workload{5.0, 10.0};  // Gcycles for cpu/gpu tasks, MB for io tasks
  Range edge_mb{0.1, 0.5};
  Range deadline_s{15.0, 20.0};
  std::vector<double> error_limits{1e-2, 1e-3, 1e-4};
  Range latency_weight{0.3, 0.7};
  // Chance of each optional extra edge between adjacent layers.
  double extra_edge_prob = 0.2;
};

AppDag generate_app(const AppConfig& cfg, std::uint64_t seed, NodeId owner);

// Kahn's algorithm; among ready tasks the lowest index goes first.
// Throws Error{CycleDetected}.
std::vector<TaskIndex> topological_order(const AppDag& dag);

// rank[j] = position of task j in topological_order(dag).
std::vector<std::size_t> topological_rank(const AppDag& dag);

enum class ViolationKind {
  CycleDetected,
  MultipleSources,
  MultipleSinks,
  SourceNotFirst,
  SinkNotLast,
  Unreachable,
  TypeNotOneHot,
  NonPositiveRequirement,
  BadEdge,
  BadQos,
};

struct Violation {
  ViolationKind kind;
  TaskIndex task = -1;
  std::string detail;
};

std::string_view to_string(ViolationKind kind);

// Empty result means the DAG is valid.
std::vector<Violation> validate_dag(const AppDag& dag);

}  // namespace meshsched
