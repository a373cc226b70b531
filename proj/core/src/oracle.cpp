#include "meshsched/oracle.hpp"

#include <array>
#include <string>

#include "meshsched/error.hpp"

namespace meshsched {
namespace {

class Search {
 public:
  Search(std::span<const AppDag> apps, const CostParams& params, const OracleLimits& limits)
      : apps_(apps), params_(params), limits_(limits) {}

  void run(const ScheduleState& state) {
    if (state.complete()) {
      leaf(state);
      return;
    }
    const std::size_t nodes = state.network().size();
    for (AppId a = 0; a < apps_.size(); ++a) {
      const AppDag& dag = apps_[a];
      for (std::size_t jj = 0; jj < dag.size(); ++jj) {
        const auto j = static_cast<TaskIndex>(jj);
        if (!placeable(state, a, j)) continue;
        if (j == dag.source()) {
          descend(state, a, j, dag.owner());
        } else {
          for (std::size_t m = 0; m < nodes; ++m) descend(state, a, j, static_cast<NodeId>(m));
        }
      }
    }
  }

  OracleResult result;

 private:
  bool placeable(const ScheduleState& state, AppId a, TaskIndex j) const {
    if (state.is_placed(a, j)) return false;
    for (const Dependency& p : apps_[a].predecessors(j)) {
      if (!state.is_placed(a, p.task)) return false;
    }
    return true;
  }

  void descend(const ScheduleState& state, AppId a, TaskIndex j, NodeId m) {
    ScheduleState child = state;
    child.place(a, j, m);
    run(child);
  }

  void leaf(const ScheduleState& state) {
    if (result.evaluations >= limits_.max_evaluations) {
      throw Error(ErrorCode::BudgetExceeded,
                  "oracle enumeration exceeded " + std::to_string(limits_.max_evaluations) +
                      " evaluations");
    }
    ++result.evaluations;
    const double qoe = summarize_schedule(state, params_).metrics.avg_qoe_cost;
    if (result.evaluations == 1 || qoe < result.best_qoe) {
      result.best_qoe = qoe;
      result.best = state.sequence();
    }
  }

  std::span<const AppDag> apps_;
  const CostParams& params_;
  const OracleLimits& limits_;
};

}  // namespace

OracleResult oracle_optimum(std::span<const AppDag> apps, const NetworkGraph& network,
                            const CostParams& params, const OracleLimits& limits) {
  if (apps.empty()) throw Error(ErrorCode::InvalidAssignment, "no applications to evaluate");
  std::size_t total = 0;
  std::array<std::size_t, kResourceTypes> per_type{};
  for (const AppDag& dag : apps) {
    total += dag.size();
    for (const TaskSpec& t : dag.tasks()) ++per_type[index_of(t.primary_type())];
  }
  if (total > limits.max_total_tasks || network.size() > limits.max_nodes) {
    throw Error(ErrorCode::BudgetExceeded,
                "instance has " + std::to_string(total) + " tasks on " +
                    std::to_string(network.size()) + " nodes; limits are " +
                    std::to_string(limits.max_total_tasks) + " and " +
                    std::to_string(limits.max_nodes));
  }
  for (std::size_t w : per_type) {
    if (w > limits.max_lane_width) {
      throw Error(ErrorCode::BudgetExceeded, "a resource type has more than " +
                                                 std::to_string(limits.max_lane_width) +
                                                 " tasks");
    }
  }
  Search search(apps, params, limits);
  search.run(ScheduleState(network, apps));
  return std::move(search.result);
}

}  // namespace meshsched
