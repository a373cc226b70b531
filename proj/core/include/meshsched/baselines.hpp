#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "meshsched/hmtsa.hpp"

namespace meshsched {

enum class SchedulerKind { Hmtsa, Cofe, Daas, Whole, Ours1 };

inline constexpr SchedulerKind kAllSchedulers[] = {SchedulerKind::Hmtsa, SchedulerKind::Cofe,
                                                   SchedulerKind::Daas, SchedulerKind::Whole,
                                                   SchedulerKind::Ours1};

std::string_view to_string(SchedulerKind kind);
std::optional<SchedulerKind> parse_scheduler(std::string_view name);

// Event-driven list scheduling: tasks become schedulable when their
// predecessors complete on the simulated clock; ready tasks go by deadline,
// then combined priority, each to its best-scoring node.
ScheduleResult cofe_schedule(std::span<const AppDag> apps, const NetworkGraph& network,
                             const SchedulerParams& params);

// One global pass in initial combined-priority order; priorities are never
// refreshed.
ScheduleResult daas_schedule(std::span<const AppDag> apps, const NetworkGraph& network,
                             const SchedulerParams& params);

// Each application, in descending initial latency priority, goes entirely to
// the one node that would finish its work earliest given current lane load
// (the source task stays on the owner).
ScheduleResult whole_schedule(std::span<const AppDag> apps, const NetworkGraph& network,
                              const SchedulerParams& params);

// Multi-queue scheduler with the hierarchy collapsed onto combined priority.
ScheduleResult ours1_schedule(std::span<const AppDag> apps, const NetworkGraph& network,
                              const SchedulerParams& params);

ScheduleResult run_scheduler(SchedulerKind kind, std::span<const AppDag> apps,
                             const NetworkGraph& network, const SchedulerParams& params);

}  // namespace meshsched
