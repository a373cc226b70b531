#pragma once

#include <cstdint>
#include <span>

#include "meshsched/app_model.hpp"
#include "meshsched/net_model.hpp"
#include "meshsched/qoe_model.hpp"
#include "meshsched/schedule_engine.hpp"

namespace meshsched {

struct OracleLimits {
  std::size_t max_total_tasks = 8;
  std::size_t max_nodes = 4;
  // Most tasks of a single resource type, i.e. the widest possible lane.
  std::size_t max_lane_width = 5;
  std::uint64_t max_evaluations = 10'000'000;
};

struct OracleResult {
  Assignment best;
  double best_qoe = 0.0;
  std::uint64_t evaluations = 0;
};

// Exhaustive minimum of the average QoE cost: every node choice for every
// task (sources pinned to their owners) combined with every
// precedence-respecting global placement order. Candidates are enumerated
// depth-first (app, then task index, then node, ascending); the first
// minimum found wins. Throws Error{BudgetExceeded} when the instance is
// outside `limits` or the enumeration exceeds max_evaluations.
OracleResult oracle_optimum(std::span<const AppDag> apps, const NetworkGraph& network,
                            const CostParams& params, const OracleLimits& limits = {});

}  // namespace meshsched
