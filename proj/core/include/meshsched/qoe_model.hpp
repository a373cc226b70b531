#pragma once

#include <cstddef>
#include <vector>

#include "meshsched/app_model.hpp"
#include "meshsched/net_model.hpp"

namespace meshsched {

// Sigmoid scales and hard-threshold penalties shared by all applications.
// The accuracy scale is relative to each application's error limit:
// beta_e = beta_e_rel * e_n.
struct CostParams {
  double beta_d_s = 1.0;
  double beta_e_rel = 0.2;
  double penalty_d = 10.0;
  double penalty_e = 10.0;

  double beta_e(double error_limit) const { return beta_e_rel * error_limit; }
};

double sigmoid(double x);

// Latency degradation cost of finishing at `finish_s` against deadline `deadline_s`.
// The hard penalty applies only when finish_s - deadline_s > 0.
double latency_cost(double finish_s, double deadline_s, bool hard, const CostParams& params);

double accuracy_cost(double error, double error_limit, bool hard, const CostParams& params);

double qoe_cost(const QosWeights& w, double latency, double accuracy);

// Bottom-level time: longest estimated path (transfer at the average rate
// plus execution at the average capacity) from each task to the sink.
std::vector<double> bottom_level_time(const AppDag& dag, double avg_rate,
                                      const ResourceVector& avg_capacity);

// Estimated error a task's output accumulates on its way to the sink,
// assuming the average link BER on every dependency.
std::vector<double> downstream_error(const AppDag& dag, double avg_ber);

double latency_priority(double bottom_time, double progress_time, double deadline_s,
                        const QosWeights& w, bool hard, const CostParams& params);

double accuracy_priority(double progress_error, double downstream, double error_limit,
                         const QosWeights& w, bool hard, const CostParams& params);

// floor(o * remaining * priority / total), clamped to [1, remaining] so every
// selected application makes progress. Falls back to an even split when
// total is not positive.
std::size_t task_quota(double o, std::size_t remaining, double priority, double total,
                       std::size_t selected_apps = 1);

// Per-application priority bookkeeping: static estimates (bottom-level
// time, downstream error) plus progress-dependent priorities.
struct AppPriority {
  std::vector<double> bottom_time;
  std::vector<double> downstream;
  std::vector<double> latency;
  std::vector<double> accuracy;
  double progress_time = 0.0;   // max finish time of assigned tasks
  double progress_error = 0.0;  // max error of assigned tasks

  double combined(TaskIndex j) const {
    return latency[static_cast<std::size_t>(j)] + accuracy[static_cast<std::size_t>(j)];
  }
};

AppPriority initial_priority(const AppDag& dag, const NetworkAverages& averages,
                             const CostParams& params);

// Recomputes latency/accuracy priorities from the current progress values.
void refresh_priority(AppPriority& p, const AppDag& dag, const CostParams& params);

}  // namespace meshsched
