#include "meshsched/hmtsa.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "meshsched/error.hpp"

namespace meshsched {

void validate(const SchedulerParams& params) {
  if (!(params.k > 0.0 && params.k <= 1.0) || !(params.o > 0.0 && params.o <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "scheduler ratios k and o must lie in (0, 1]");
  }
  const CostParams& c = params.cost;
  if (!(c.beta_d_s > 0.0) || !(c.beta_e_rel > 0.0) || !(c.penalty_d > 0.0) ||
      !(c.penalty_e > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "cost parameters must be positive");
  }
}

namespace {

void sort_pool(std::vector<TaskIndex>& pool, const AppPriority& prio,
               const std::vector<std::size_t>& rank) {
  std::sort(pool.begin(), pool.end(), [&](TaskIndex a, TaskIndex b) {
    const double ka = prio.combined(a);
    const double kb = prio.combined(b);
    if (ka != kb) return ka > kb;
    return rank[static_cast<std::size_t>(a)] < rank[static_cast<std::size_t>(b)];
  });
}

void sort_queue(std::vector<AppQueueEntry>& queue) {
  std::sort(queue.begin(), queue.end(), [](const AppQueueEntry& a, const AppQueueEntry& b) {
    if (a.priority != b.priority) return a.priority > b.priority;
    return a.app < b.app;
  });
}

}  // namespace

InitialRanking initial_ranking(std::span<const AppDag> apps, const NetworkAverages& averages,
                               const CostParams& cost) {
  InitialRanking out;
  out.priorities.reserve(apps.size());
  out.pool.reserve(apps.size());
  for (AppId a = 0; a < apps.size(); ++a) {
    const AppDag& dag = apps[a];
    out.priorities.push_back(initial_priority(dag, averages, cost));
    const auto rank = topological_rank(dag);
    auto& pool = out.pool.emplace_back(dag.size());
    for (std::size_t j = 0; j < dag.size(); ++j) pool[j] = static_cast<TaskIndex>(j);
    sort_pool(pool, out.priorities.back(), rank);
    out.app_queue.push_back({a, out.priorities.back().latency[static_cast<std::size_t>(dag.source())]});
  }
  sort_queue(out.app_queue);
  return out;
}

double placement_score(const AppDag& dag, const AppPriority& prio, TaskIndex task,
                       const TaskOutcome& outcome, const CostParams& cost) {
  const QosProfile& q = dag.qos();
  const auto j = static_cast<std::size_t>(task);
  return latency_priority(prio.bottom_time[j], outcome.finish, q.deadline_s, q.weights,
                          q.hard_deadline, cost) +
         accuracy_priority(outcome.error, prio.downstream[j], q.error_limit, q.weights,
                           q.hard_accuracy, cost);
}

NodeChoice select_node(const ScheduleState& state, const AppPriority& prio, AppId app,
                       TaskIndex task, const CostParams& cost) {
  const AppDag& dag = state.apps()[app];
  NodeChoice best;
  bool have = false;
  auto consider = [&](NodeId m) {
    const TaskOutcome out = state.candidate(app, task, m);
    const double score = placement_score(dag, prio, task, out, cost);
    ++best.evaluations;
    const bool wins = !have || score < best.score ||
                      (score == best.score && out.finish < best.outcome.finish);
    if (wins) {
      best.node = m;
      best.outcome = out;
      best.score = score;
      have = true;
    }
  };
  if (task == dag.source()) {
    consider(dag.owner());
  } else {
    for (std::size_t m = 0; m < state.network().size(); ++m) consider(static_cast<NodeId>(m));
  }
  return best;
}

HmtsaScheduler::HmtsaScheduler(const NetworkGraph& network, std::span<const AppDag> apps,
                               const SchedulerParams& params, RankingMode mode)
    : apps_(apps), params_(params), mode_(mode), state_(network, apps) {
  validate(params_);
  if (apps.empty()) throw Error(ErrorCode::InvalidConfig, "scheduler needs at least one app");
  InitialRanking init = initial_ranking(apps, network.averages(), params_.cost);
  priorities_ = std::move(init.priorities);
  pool_ = std::move(init.pool);
  rank_.reserve(apps.size());
  for (const AppDag& dag : apps) rank_.push_back(topological_rank(dag));
  for (AppId a = 0; a < apps.size(); ++a) app_queue_.push_back({a, app_rank_key(a)});
  sort_queue(app_queue_);
}

double HmtsaScheduler::app_latency(AppId app) const {
  double best = 0.0;
  for (TaskIndex j : pool_[app]) best = std::max(best, priorities_[app].latency[static_cast<std::size_t>(j)]);
  return best;
}

double HmtsaScheduler::app_rank_key(AppId app) const {
  if (mode_ == RankingMode::Hierarchical) return app_latency(app);
  double best = 0.0;
  for (TaskIndex j : pool_[app]) best = std::max(best, priorities_[app].combined(j));
  return best;
}

std::vector<TaskIndex> HmtsaScheduler::take_top(AppId app, std::size_t count) {
  const AppPriority& prio = priorities_[app];
  const auto& rank = rank_[app];
  auto key = [&](TaskIndex j) {
    return mode_ == RankingMode::Hierarchical ? prio.latency[static_cast<std::size_t>(j)]
                                              : prio.combined(j);
  };
  std::vector<TaskIndex> order = pool_[app];
  std::stable_sort(order.begin(), order.end(), [&](TaskIndex a, TaskIndex b) {
    const double ka = key(a);
    const double kb = key(b);
    if (ka != kb) return ka > kb;
    return rank[static_cast<std::size_t>(a)] < rank[static_cast<std::size_t>(b)];
  });
  order.resize(std::min(count, order.size()));

  // Descending priority is monotone along edges, so the drawn prefix must
  // be closed under predecessors.
  const std::unordered_set<TaskIndex> drawn(order.begin(), order.end());
  for (TaskIndex j : order) {
    for (const Dependency& p : apps_[app].predecessors(j)) {
      if (!state_.is_placed(app, p.task) && !drawn.contains(p.task)) {
        throw std::logic_error("task draw of app " + std::to_string(app) +
                               " is not predecessor-closed");
      }
    }
  }
  auto& pool = pool_[app];
  std::erase_if(pool, [&](TaskIndex j) { return drawn.contains(j); });
  return order;
}

void HmtsaScheduler::sort_app_queue() {
  for (AppQueueEntry& e : app_queue_) e.priority = app_rank_key(e.app);
  sort_queue(app_queue_);
}

RoundTrace HmtsaScheduler::run_round() {
  if (done()) throw std::logic_error("run_round called on a finished schedule");
  RoundTrace tr;
  tr.round = rounds_;

  const std::size_t active = app_queue_.size();
  const auto scaled = static_cast<std::size_t>(std::floor(params_.k * static_cast<double>(active)));
  const std::size_t u = std::clamp<std::size_t>(scaled, 1, active);

  double latency_sum = 0.0;
  for (std::size_t i = 0; i < u; ++i) latency_sum += app_latency(app_queue_[i].app);

  struct Queued {
    AppId app;
    TaskIndex task;
    double key;
  };
  std::vector<Queued> round_queue;
  for (std::size_t i = 0; i < u; ++i) {
    const AppId a = app_queue_[i].app;
    const std::size_t quota =
        task_quota(params_.o, pool_[a].size(), app_latency(a), latency_sum, u);
    tr.selected.push_back(a);
    tr.quotas.push_back(quota);
    for (TaskIndex j : take_top(a, quota)) round_queue.push_back({a, j, priorities_[a].combined(j)});
  }
  std::stable_sort(round_queue.begin(), round_queue.end(),
                   [](const Queued& l, const Queued& r) { return l.key > r.key; });

  for (const Queued& q : round_queue) {
    const NodeChoice choice = select_node(state_, priorities_[q.app], q.app, q.task, params_.cost);
    evaluations_ += choice.evaluations;
    state_.place(q.app, q.task, choice.node);
    tr.placements.push_back({q.app, q.task, choice.node});
  }

  for (AppId a : tr.selected) {
    AppPriority& prio = priorities_[a];
    for (std::size_t j = 0; j < apps_[a].size(); ++j) {
      const auto& out = state_.outcome(a, static_cast<TaskIndex>(j));
      if (!out) continue;
      prio.progress_time = std::max(prio.progress_time, out->finish);
      prio.progress_error = std::max(prio.progress_error, out->error);
    }
    refresh_priority(prio, apps_[a], params_.cost);
    sort_pool(pool_[a], prio, rank_[a]);
  }
  std::erase_if(app_queue_, [&](const AppQueueEntry& e) { return pool_[e.app].empty(); });
  sort_app_queue();

  ++rounds_;
  trace_.push_back(tr);
  return tr;
}

Assignment HmtsaScheduler::run() {
  while (!done()) run_round();
  return state_.sequence();
}

ScheduleResult schedule_hmtsa(std::span<const AppDag> apps, const NetworkGraph& network,
                              const SchedulerParams& params) {
  HmtsaScheduler s(network, apps, params, RankingMode::Hierarchical);
  ScheduleResult r;
  r.assignment = s.run();
  r.rounds = s.rounds();
  r.candidate_evaluations = s.candidate_evaluations();
  r.trace = s.trace();
  return r;
}

}  // namespace meshsched
