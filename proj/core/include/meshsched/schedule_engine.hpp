#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "meshsched/app_model.hpp"
#include "meshsched/net_model.hpp"
#include "meshsched/qoe_model.hpp"

namespace meshsched {

using AppId = std::size_t;

struct Placement {
  AppId app = 0;
  TaskIndex task = 0;
  NodeId node = 0;

  friend bool operator==(const Placement&, const Placement&) = default;
};

// Placement sequence. Sequence order is also the FCFS order of every lane.
using Assignment = std::vector<Placement>;

struct TaskOutcome {
  NodeId node = 0;
  double start = 0.0;
  double finish = 0.0;
  double error = 0.0;

  friend bool operator==(const TaskOutcome&, const TaskOutcome&) = default;
};

struct TaskRef {
  AppId app = 0;
  TaskIndex task = 0;

  friend bool operator==(const TaskRef&, const TaskRef&) = default;
};

// One FCFS execution lane (one per node and resource type).
struct Lane {
  double available = 0.0;
  std::vector<TaskRef> queue;
};

// Partial schedule: placed tasks, their outcomes and the lane timelines.
// Holds references to the network and applications, which must outlive it.
class ScheduleState {
 public:
  ScheduleState(const NetworkGraph& network, std::span<const AppDag> apps);

  const NetworkGraph& network() const { return *network_; }
  std::span<const AppDag> apps() const { return apps_; }

  // Outcome of placing (app, task) on `node` now, without mutating anything.
  // Throws Error{PredecessorUnplaced} or Error{OwnerViolation}.
  TaskOutcome candidate(AppId app, TaskIndex task, NodeId node) const;

  // Same arithmetic as candidate(), then commits the placement.
  const TaskOutcome& place(AppId app, TaskIndex task, NodeId node);

  bool is_placed(AppId app, TaskIndex task) const {
    return outcomes_[app][static_cast<std::size_t>(task)].has_value();
  }
  const std::optional<TaskOutcome>& outcome(AppId app, TaskIndex task) const {
    return outcomes_[app][static_cast<std::size_t>(task)];
  }
  const Lane& lane(NodeId node, ResourceType type) const {
    return lanes_[static_cast<std::size_t>(node)][index_of(type)];
  }
  const Assignment& sequence() const { return sequence_; }
  std::size_t placed_count() const { return sequence_.size(); }
  std::size_t total_tasks() const { return total_tasks_; }
  bool complete() const { return sequence_.size() == total_tasks_; }

 private:
  const NetworkGraph* network_;
  std::span<const AppDag> apps_;
  std::vector<std::vector<std::optional<TaskOutcome>>> outcomes_;
  std::vector<std::array<Lane, kResourceTypes>> lanes_;
  Assignment sequence_;
  std::size_t total_tasks_ = 0;
};

struct AppResult {
  double completion_s = 0.0;
  double error = 0.0;
  double latency_cost = 0.0;
  double accuracy_cost = 0.0;
  double qoe_cost = 0.0;
};

struct MetricsRecord {
  double avg_completion_s = 0.0;
  double deadline_ratio = 1.0;
  double accuracy_ratio = 1.0;
  double avg_latency_cost = 0.0;
  double avg_accuracy_cost = 0.0;
  double avg_qoe_cost = 0.0;

  friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

struct Evaluation {
  std::vector<AppResult> apps;
  MetricsRecord metrics;
};

// QoE and metrics of a complete schedule, read off each application's sink.
Evaluation summarize_schedule(const ScheduleState& state, const CostParams& params);

// Replays `assignment` from an empty state. Throws Error{InvalidAssignment}
// for an empty application set or any invalid sequence.
Evaluation evaluate(const Assignment& assignment, const NetworkGraph& network,
                    std::span<const AppDag> apps, const CostParams& params);

// Replays `assignment` and returns the resulting state for inspection.
ScheduleState replay(const Assignment& assignment, const NetworkGraph& network,
                     std::span<const AppDag> apps);

}  // namespace meshsched
