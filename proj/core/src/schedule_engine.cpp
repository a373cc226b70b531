#include "meshsched/schedule_engine.hpp"

#include <algorithm>
#include <string>

#include "meshsched/error.hpp"

namespace meshsched {

ScheduleState::ScheduleState(const NetworkGraph& network, std::span<const AppDag> apps)
    : network_(&network), apps_(apps), lanes_(network.size()) {
  outcomes_.reserve(apps.size());
  for (const AppDag& app : apps) {
    outcomes_.emplace_back(app.size());
    total_tasks_ += app.size();
  }
  sequence_.reserve(total_tasks_);
}

TaskOutcome ScheduleState::candidate(AppId app, TaskIndex task, NodeId node) const {
  const AppDag& dag = apps_[app];
  const TaskSpec& spec = dag.task(task);
  double ready = 0.0;
  double clean = 1.0;
  if (task == dag.source()) {
    if (node != dag.owner()) {
      throw Error(ErrorCode::OwnerViolation,
                  "source task of app " + std::to_string(app) + " must run on its owner");
    }
  } else {
    for (const Dependency& p : dag.predecessors(task)) {
      const auto& prev = outcomes_[app][static_cast<std::size_t>(p.task)];
      if (!prev) {
        throw Error(ErrorCode::PredecessorUnplaced,
                    "app " + std::to_string(app) + " task " + std::to_string(task) +
                        " placed before predecessor " + std::to_string(p.task));
      }
      const Route& route = network_->route(prev->node, node);
      ready = std::max(ready, prev->finish + transmission_time(*network_, route, p.megabytes));
      clean *= (1.0 - prev->error) * (1.0 - path_ber(*network_, route));
    }
  }
  const Lane& l = lane(node, spec.primary_type());
  TaskOutcome out;
  out.node = node;
  out.start = std::max(l.available, ready);
  out.finish = out.start + execution_time(spec.type, spec.requirement, network_->node(node).capacity);
  out.error = 1.0 - clean;
  return out;
}

const TaskOutcome& ScheduleState::place(AppId app, TaskIndex task, NodeId node) {
  if (is_placed(app, task)) {
    throw Error(ErrorCode::InvalidAssignment, "task placed twice");
  }
  const TaskOutcome out = candidate(app, task, node);
  Lane& l = lanes_[static_cast<std::size_t>(node)][index_of(apps_[app].task(task).primary_type())];
  l.available = out.finish;
  l.queue.push_back({app, task});
  sequence_.push_back({app, task, node});
  auto& slot = outcomes_[app][static_cast<std::size_t>(task)];
  slot = out;
  return *slot;
}

Evaluation summarize_schedule(const ScheduleState& state, const CostParams& params) {
  const auto apps = state.apps();
  if (apps.empty()) throw Error(ErrorCode::InvalidAssignment, "no applications to evaluate");
  Evaluation ev;
  ev.apps.reserve(apps.size());
  std::size_t hard_d = 0;
  std::size_t met_d = 0;
  std::size_t hard_e = 0;
  std::size_t met_e = 0;
  MetricsRecord& m = ev.metrics;
  m = MetricsRecord{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  for (AppId a = 0; a < apps.size(); ++a) {
    const AppDag& dag = apps[a];
    const auto& sink = state.outcome(a, dag.sink());
    if (!sink) throw Error(ErrorCode::InvalidAssignment, "sink of app " + std::to_string(a) + " unplaced");
    const QosProfile& q = dag.qos();
    AppResult r;
    r.completion_s = sink->finish;
    r.error = sink->error;
    r.latency_cost = latency_cost(r.completion_s, q.deadline_s, q.hard_deadline, params);
    r.accuracy_cost = accuracy_cost(r.error, q.error_limit, q.hard_accuracy, params);
    r.qoe_cost = qoe_cost(q.weights, r.latency_cost, r.accuracy_cost);
    if (q.hard_deadline) {
      ++hard_d;
      if (r.completion_s <= q.deadline_s) ++met_d;
    }
    if (q.hard_accuracy) {
      ++hard_e;
      if (r.error <= q.error_limit) ++met_e;
    }
    m.avg_completion_s += r.completion_s;
    m.avg_latency_cost += r.latency_cost;
    m.avg_accuracy_cost += r.accuracy_cost;
    m.avg_qoe_cost += r.qoe_cost;
    ev.apps.push_back(r);
  }
  const auto n = static_cast<double>(apps.size());
  m.avg_completion_s /= n;
  m.avg_latency_cost /= n;
  m.avg_accuracy_cost /= n;
  m.avg_qoe_cost /= n;
  // Empty hard-constraint sets count as fully compliant.
  m.deadline_ratio = hard_d == 0 ? 1.0 : static_cast<double>(met_d) / static_cast<double>(hard_d);
  m.accuracy_ratio = hard_e == 0 ? 1.0 : static_cast<double>(met_e) / static_cast<double>(hard_e);
  return ev;
}

ScheduleState replay(const Assignment& assignment, const NetworkGraph& network,
                     std::span<const AppDag> apps) {
  if (apps.empty()) throw Error(ErrorCode::InvalidAssignment, "no applications to evaluate");
  ScheduleState state(network, apps);
  for (const Placement& p : assignment) {
    if (p.app >= apps.size() || p.task < 0 ||
        static_cast<std::size_t>(p.task) >= apps[p.app].size() || p.node < 0 ||
        static_cast<std::size_t>(p.node) >= network.size()) {
      throw Error(ErrorCode::InvalidAssignment, "placement refers to an unknown app, task or node");
    }
    try {
      state.place(p.app, p.task, p.node);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InvalidAssignment) throw;
      throw Error(ErrorCode::InvalidAssignment, e.what());
    }
  }
  if (!state.complete()) {
    throw Error(ErrorCode::InvalidAssignment, "assignment does not place every task");
  }
  return state;
}

Evaluation evaluate(const Assignment& assignment, const NetworkGraph& network,
                    std::span<const AppDag> apps, const CostParams& params) {
  return summarize_schedule(replay(assignment, network, apps), params);
}

}  // namespace meshsched
