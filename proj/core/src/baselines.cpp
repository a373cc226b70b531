#include "meshsched/baselines.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "meshsched/error.hpp"

namespace meshsched {

std::string_view to_string(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::Hmtsa: return "hmtsa";
    case SchedulerKind::Cofe: return "cofe";
    case SchedulerKind::Daas: return "daas";
    case SchedulerKind::Whole: return "whole";
    case SchedulerKind::Ours1: return "ours1";
  }
  return "?";
}

std::optional<SchedulerKind> parse_scheduler(std::string_view name) {
  for (SchedulerKind k : kAllSchedulers) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

namespace {

void check_inputs(std::span<const AppDag> apps, const SchedulerParams& params) {
  validate(params);
  if (apps.empty()) throw Error(ErrorCode::InvalidConfig, "scheduler needs at least one app");
}

std::vector<std::vector<std::size_t>> ranks_of(std::span<const AppDag> apps) {
  std::vector<std::vector<std::size_t>> out;
  out.reserve(apps.size());
  for (const AppDag& dag : apps) out.push_back(topological_rank(dag));
  return out;
}

}  // namespace

ScheduleResult cofe_schedule(std::span<const AppDag> apps, const NetworkGraph& network,
                             const SchedulerParams& params) {
  check_inputs(apps, params);
  const InitialRanking init = initial_ranking(apps, network.averages(), params.cost);
  const auto rank = ranks_of(apps);
  ScheduleState state(network, apps);
  ScheduleResult result;

  auto is_ready = [&](AppId a, TaskIndex j, double clock) {
    if (state.is_placed(a, j)) return false;
    for (const Dependency& p : apps[a].predecessors(j)) {
      const auto& out = state.outcome(a, p.task);
      if (!out || out->finish > clock) return false;
    }
    return true;
  };

  double clock = 0.0;
  while (!state.complete()) {
    std::vector<TaskRef> ready;
    for (AppId a = 0; a < apps.size(); ++a) {
      for (std::size_t j = 0; j < apps[a].size(); ++j) {
        if (is_ready(a, static_cast<TaskIndex>(j), clock)) ready.push_back({a, static_cast<TaskIndex>(j)});
      }
    }
    if (ready.empty()) {
      double next = std::numeric_limits<double>::infinity();
      for (const Placement& p : state.sequence()) {
        const double f = state.outcome(p.app, p.task)->finish;
        if (f > clock) next = std::min(next, f);
      }
      if (next == std::numeric_limits<double>::infinity()) {
        throw std::logic_error("event-driven scheduler stalled with unplaced tasks");
      }
      clock = next;
      continue;
    }
    std::sort(ready.begin(), ready.end(), [&](const TaskRef& l, const TaskRef& r) {
      const double dl = apps[l.app].qos().deadline_s;
      const double dr = apps[r.app].qos().deadline_s;
      if (dl != dr) return dl < dr;
      const double pl = init.priorities[l.app].combined(l.task);
      const double pr = init.priorities[r.app].combined(r.task);
      if (pl != pr) return pl > pr;
      if (l.app != r.app) return l.app < r.app;
      return rank[l.app][static_cast<std::size_t>(l.task)] <
             rank[r.app][static_cast<std::size_t>(r.task)];
    });
    for (const TaskRef& t : ready) {
      const NodeChoice c = select_node(state, init.priorities[t.app], t.app, t.task, params.cost);
      result.candidate_evaluations += c.evaluations;
      state.place(t.app, t.task, c.node);
    }
    ++result.rounds;
  }
  result.assignment = state.sequence();
  return result;
}

ScheduleResult daas_schedule(std::span<const AppDag> apps, const NetworkGraph& network,
                             const SchedulerParams& params) {
  check_inputs(apps, params);
  const InitialRanking init = initial_ranking(apps, network.averages(), params.cost);
  const auto rank = ranks_of(apps);
  std::vector<TaskRef> order;
  for (AppId a = 0; a < apps.size(); ++a) {
    for (std::size_t j = 0; j < apps[a].size(); ++j) order.push_back({a, static_cast<TaskIndex>(j)});
  }
  std::sort(order.begin(), order.end(), [&](const TaskRef& l, const TaskRef& r) {
    const double pl = init.priorities[l.app].combined(l.task);
    const double pr = init.priorities[r.app].combined(r.task);
    if (pl != pr) return pl > pr;
    if (l.app != r.app) return l.app < r.app;
    return rank[l.app][static_cast<std::size_t>(l.task)] <
           rank[r.app][static_cast<std::size_t>(r.task)];
  });

  ScheduleState state(network, apps);
  ScheduleResult result;
  for (const TaskRef& t : order) {
    const NodeChoice c = select_node(state, init.priorities[t.app], t.app, t.task, params.cost);
    result.candidate_evaluations += c.evaluations;
    state.place(t.app, t.task, c.node);
  }
  result.rounds = 1;
  result.assignment = state.sequence();
  return result;
}

ScheduleResult whole_schedule(std::span<const AppDag> apps, const NetworkGraph& network,
                              const SchedulerParams& params) {
  check_inputs(apps, params);
  const InitialRanking init = initial_ranking(apps, network.averages(), params.cost);
  ScheduleState state(network, apps);
  ScheduleResult result;

  for (const AppQueueEntry& entry : init.app_queue) {
    const AppDag& dag = apps[entry.app];
    NodeId target = dag.owner();
    if (dag.size() > 1) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t m = 0; m < network.size(); ++m) {
        const auto node = static_cast<NodeId>(m);
        ResourceVector busy{};
        std::array<bool, kResourceTypes> used{};
        for (const TaskSpec& t : dag.tasks()) {
          if (t.index == dag.source()) continue;
          const std::size_t k = index_of(t.primary_type());
          busy[k] += execution_time(t.type, t.requirement, network.node(node).capacity);
          used[k] = true;
        }
        double finish = 0.0;
        for (ResourceType type : kAllResourceTypes) {
          const std::size_t k = index_of(type);
          if (used[k]) finish = std::max(finish, state.lane(node, type).available + busy[k]);
        }
        ++result.candidate_evaluations;
        if (finish < best) {
          best = finish;
          target = node;
        }
      }
    }
    for (TaskIndex j : topological_order(dag)) {
      state.place(entry.app, j, j == dag.source() ? dag.owner() : target);
    }
  }
  result.rounds = 1;
  result.assignment = state.sequence();
  return result;
}

ScheduleResult ours1_schedule(std::span<const AppDag> apps, const NetworkGraph& network,
                              const SchedulerParams& params) {
  HmtsaScheduler s(network, apps, params, RankingMode::Flat);
  ScheduleResult r;
  r.assignment = s.run();
  r.rounds = s.rounds();
  r.candidate_evaluations = s.candidate_evaluations();
  r.trace = s.trace();
  return r;
}

ScheduleResult run_scheduler(SchedulerKind kind, std::span<const AppDag> apps,
                             const NetworkGraph& network, const SchedulerParams& params) {
  switch (kind) {
    case SchedulerKind::Hmtsa: return schedule_hmtsa(apps, network, params);
    case SchedulerKind::Cofe: return cofe_schedule(apps, network, params);
    case SchedulerKind::Daas: return daas_schedule(apps, network, params);
    case SchedulerKind::Whole: return whole_schedule(apps, network, params);
    case SchedulerKind::Ours1: return ours1_schedule(apps, network, params);
  }
  throw Error(ErrorCode::InvalidConfig, "unknown scheduler");
}

}  // namespace meshsched
