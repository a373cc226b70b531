#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "meshsched/app_model.hpp"
#include "meshsched/net_model.hpp"
#include "meshsched/qoe_model.hpp"
#include "meshsched/schedule_engine.hpp"

namespace meshsched {

struct SchedulerParams {
  double k = 0.25;  // share of active applications admitted per round
  double o = 1.0;   // share of an application's remaining tasks per round
  CostParams cost{};
};

void validate(const SchedulerParams& params);

struct AppQueueEntry {
  AppId app = 0;
  double priority = 0.0;
};

// Output of the initial ranking pass.
struct InitialRanking {
  std::vector<AppPriority> priorities;
  // Per application, all tasks by descending latency + accuracy priority;
  // ties go to the earlier topological position.
  std::vector<std::vector<TaskIndex>> pool;
  // Applications by descending source-task latency priority, then app id.
  std::vector<AppQueueEntry> app_queue;
};

InitialRanking initial_ranking(std::span<const AppDag> apps, const NetworkAverages& averages,
                               const CostParams& cost);

struct NodeChoice {
  NodeId node = 0;
  TaskOutcome outcome;
  double score = 0.0;
  std::size_t evaluations = 0;
};

// Estimated application-level QoE if `task` lands on `node`: the latency and
// accuracy priorities with the candidate's own finish time and error standing
// in for the application's progress.
double placement_score(const AppDag& dag, const AppPriority& prio, TaskIndex task,
                       const TaskOutcome& outcome, const CostParams& cost);

// Minimum placement_score over all nodes (owner only for the source task);
// ties go to the earlier finish, then the lower node id.
NodeChoice select_node(const ScheduleState& state, const AppPriority& prio, AppId app,
                       TaskIndex task, const CostParams& cost);

enum class RankingMode {
  // Applications ranked and tasks drawn by latency priority; the round's
  // task queue is then re-sorted by combined QoE priority.
  Hierarchical,
  // Both stages use the combined priority (the Ours1 baseline).
  Flat,
};

struct RoundTrace {
  std::size_t round = 0;
  std::vector<AppId> selected;
  std::vector<std::size_t> quotas;
  std::vector<Placement> placements;
};

// Multi-queue scheduler. Each run_round() admits the top applications,
// draws their task quotas, orders the round's tasks and places each on its
// best node; progress-dependent priorities are refreshed between rounds.
class HmtsaScheduler {
 public:
  HmtsaScheduler(const NetworkGraph& network, std::span<const AppDag> apps,
                 const SchedulerParams& params, RankingMode mode = RankingMode::Hierarchical);

  bool done() const { return app_queue_.empty(); }
  RoundTrace run_round();
  Assignment run();

  const ScheduleState& state() const { return state_; }
  std::span<const AppQueueEntry> app_queue() const { return app_queue_; }
  std::span<const TaskIndex> pool(AppId app) const { return pool_[app]; }
  const AppPriority& priority(AppId app) const { return priorities_[app]; }
  std::size_t rounds() const { return rounds_; }
  std::uint64_t candidate_evaluations() const { return evaluations_; }
  const std::vector<RoundTrace>& trace() const { return trace_; }

 private:
  double app_latency(AppId app) const;
  double app_rank_key(AppId app) const;
  std::vector<TaskIndex> take_top(AppId app, std::size_t count);
  void sort_app_queue();

  std::span<const AppDag> apps_;
  SchedulerParams params_;
  RankingMode mode_;
  ScheduleState state_;
  std::vector<AppPriority> priorities_;
  std::vector<std::vector<std::size_t>> rank_;
  std::vector<std::vector<TaskIndex>> pool_;
  std::vector<AppQueueEntry> app_queue_;
  std::size_t rounds_ = 0;
  std::uint64_t evaluations_ = 0;
  std::vector<RoundTrace> trace_;
};

struct ScheduleResult {
  Assignment assignment;
  std::size_t rounds = 0;
  std::uint64_t candidate_evaluations = 0;
  std::vector<RoundTrace> trace;
};

ScheduleResult schedule_hmtsa(std::span<const AppDag> apps, const NetworkGraph& network,
                              const SchedulerParams& params);

}  // namespace meshsched
