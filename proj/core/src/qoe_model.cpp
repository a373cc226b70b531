#include "meshsched/qoe_model.hpp"

#include <algorithm>
#include <cmath>

namespace meshsched {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double latency_cost(double finish_s, double deadline_s, bool hard, const CostParams& params) {
  const double gap = finish_s - deadline_s;
  const double late = gap > 0.0 ? 1.0 : 0.0;
  return sigmoid(gap / params.beta_d_s) + late * (hard ? 1.0 : 0.0) * params.penalty_d;
}

double accuracy_cost(double error, double error_limit, bool hard, const CostParams& params) {
  const double gap = error - error_limit;
  const double over = gap > 0.0 ? 1.0 : 0.0;
  return sigmoid(gap / params.beta_e(error_limit)) + over * (hard ? 1.0 : 0.0) * params.penalty_e;
}

double qoe_cost(const QosWeights& w, double latency, double accuracy) {
  return w.latency * latency + w.accuracy * accuracy;
}

std::vector<double> bottom_level_time(const AppDag& dag, double avg_rate,
                                      const ResourceVector& avg_capacity) {
  std::vector<double> out(dag.size(), 0.0);
  const auto order = topological_order(dag);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const TaskIndex j = *it;
    if (j == dag.sink()) continue;
    double best = 0.0;
    for (const Dependency& s : dag.successors(j)) {
      const TaskSpec& next = dag.task(s.task);
      // A single-node network has no links and therefore no transfers.
      const double transfer = avg_rate > 0.0 ? s.megabytes / avg_rate : 0.0;
      const double v = out[static_cast<std::size_t>(s.task)] + transfer +
                       execution_time(next.type, next.requirement, avg_capacity);
      best = std::max(best, v);
    }
    out[static_cast<std::size_t>(j)] = best;
  }
  return out;
}

std::vector<double> downstream_error(const AppDag& dag, double avg_ber) {
  std::vector<double> out(dag.size(), 0.0);
  const auto order = topological_order(dag);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const TaskIndex j = *it;
    if (j == dag.sink()) continue;
    double clean = 1.0;
    for (const Dependency& s : dag.successors(j)) {
      clean *= (1.0 - out[static_cast<std::size_t>(s.task)]) * (1.0 - avg_ber);
    }
    out[static_cast<std::size_t>(j)] = 1.0 - clean;
  }
  return out;
}

double latency_priority(double bottom_time, double progress_time, double deadline_s,
                        const QosWeights& w, bool hard, const CostParams& params) {
  const double remaining = deadline_s - progress_time;
  const double gap = bottom_time - remaining;
  const double late = gap > 0.0 ? 1.0 : 0.0;
  return w.latency * sigmoid(gap / params.beta_d_s) +
         late * w.latency * (hard ? 1.0 : 0.0) * params.penalty_d;
}

double accuracy_priority(double progress_error, double downstream, double error_limit,
                         const QosWeights& w, bool hard, const CostParams& params) {
  const double estimated = 1.0 - (1.0 - progress_error) * (1.0 - downstream);
  const double gap = estimated - error_limit;
  const double over = gap > 0.0 ? 1.0 : 0.0;
  return w.accuracy * sigmoid(gap / params.beta_e(error_limit)) +
         over * w.accuracy * (hard ? 1.0 : 0.0) * params.penalty_e;
}

std::size_t task_quota(double o, std::size_t remaining, double priority, double total,
                       std::size_t selected_apps) {
  if (remaining == 0) return 0;
  double raw = 0.0;
  if (total > 0.0) {
    raw = std::floor(o * static_cast<double>(remaining) * priority / total);
  } else {
    raw = std::floor(o * static_cast<double>(remaining) /
                     static_cast<double>(std::max<std::size_t>(selected_apps, 1)));
  }
  if (!(raw >= 1.0)) return 1;
  if (raw >= static_cast<double>(remaining)) return remaining;
  return static_cast<std::size_t>(raw);
}

AppPriority initial_priority(const AppDag& dag, const NetworkAverages& averages,
                             const CostParams& params) {
  AppPriority p;
  p.bottom_time = bottom_level_time(dag, averages.rate, averages.capacity);
  p.downstream = downstream_error(dag, averages.ber);
  refresh_priority(p, dag, params);
  return p;
}

void refresh_priority(AppPriority& p, const AppDag& dag, const CostParams& params) {
  const QosProfile& q = dag.qos();
  p.latency.resize(dag.size());
  p.accuracy.resize(dag.size());
  for (std::size_t j = 0; j < dag.size(); ++j) {
    p.latency[j] = latency_priority(p.bottom_time[j], p.progress_time, q.deadline_s, q.weights,
                                    q.hard_deadline, params);
    p.accuracy[j] = accuracy_priority(p.progress_error, p.downstream[j], q.error_limit, q.weights,
                                      q.hard_accuracy, params);
  }
}

}  // namespace meshsched
