#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "builders.hpp"
#include "meshsched/baselines.hpp"
#include "meshsched/error.hpp"
#include "meshsched/random.hpp"
#include "meshsched/schedule_engine.hpp"

namespace meshsched {
namespace {

using testing::make_app;
using testing::make_chain;
using testing::make_network;
using testing::rel_close;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Parse;
}

TEST(ScheduleEngine, SourceOnOwnerExample) {
  const NetworkGraph g = make_network(2, {{0, 1, 10.0, 1e-4}}, {8, 8, 8});
  const std::vector<AppDag> apps{make_chain(1, {{ResourceType::Cpu, 8.0}})};
  ScheduleState s(g, apps);
  const TaskOutcome& o = s.place(0, 0, 1);
  EXPECT_EQ(o.start, 0.0);
  EXPECT_EQ(o.finish, 1.0);
  EXPECT_EQ(o.error, 0.0);
}

TEST(ScheduleEngine, CoLocatedSuccessorHasNoCommOrError) {
  const NetworkGraph g = make_network(2, {{0, 1, 10.0, 1e-4}});
  const std::vector<AppDag> apps{make_chain(0, {{}, {}}, 0.5)};
  ScheduleState s(g, apps);
  s.place(0, 0, 0);
  const TaskOutcome& o = s.place(0, 1, 0);
  EXPECT_EQ(o.start, 1.0);
  EXPECT_EQ(o.error, 0.0);
}

TEST(ScheduleEngine, ErrorPropagationFromTwoPredecessors) {
  // Source on 0 feeds 1 (on node 1) and 2 (on node 2) at zero error; the
  // sink on node 3 receives over links of BER 1e-4 and 2e-4.
  const NetworkGraph g = make_network(
      4, {{0, 1, 10.0, 0.0}, {0, 2, 10.0, 0.0}, {1, 3, 10.0, 1e-4}, {2, 3, 10.0, 2e-4}});
  const std::vector<AppDag> apps{
      make_app(0, {{}, {}, {}, {}}, {{0, 1, 0.1}, {0, 2, 0.1}, {1, 3, 0.1}, {2, 3, 0.1}})};
  ScheduleState s(g, apps);
  s.place(0, 0, 0);
  EXPECT_EQ(s.place(0, 1, 1).error, 0.0);
  EXPECT_EQ(s.place(0, 2, 2).error, 0.0);
  const TaskOutcome& sink = s.place(0, 3, 3);
  EXPECT_TRUE(rel_close(sink.error, 1.0 - (1.0 - 1e-4) * (1.0 - 2e-4)));
  EXPECT_NEAR(sink.error, 2.99980e-4, 1e-12);
  // Both middle tasks start after a 0.01 s transfer and finish at 2.01 s.
  EXPECT_TRUE(rel_close(sink.start, 2.02));
}

TEST(ScheduleEngine, CandidateMatchesPlaceAndDoesNotMutate) {
  const NetworkGraph g = make_network(3, {{0, 1, 10.0, 1e-5}, {1, 2, 5.0, 1e-6}});
  const std::vector<AppDag> apps{make_chain(0, {{}, {ResourceType::Gpu, 7.0}, {}})};
  ScheduleState s(g, apps);
  s.place(0, 0, 0);
  const TaskOutcome c = s.candidate(0, 1, 2);
  EXPECT_FALSE(s.is_placed(0, 1));
  EXPECT_EQ(s.lane(2, ResourceType::Gpu).available, 0.0);
  EXPECT_EQ(s.place(0, 1, 2), c);
}

TEST(ScheduleEngine, BusyLaneStartsNoEarlier) {
  const NetworkGraph g = make_network(2, {{0, 1, 10.0, 1e-5}});
  const std::vector<AppDag> apps{make_chain(0, {{}, {}}), make_chain(1, {{}, {}})};
  ScheduleState s(g, apps);
  s.place(0, 0, 0);
  const TaskOutcome idle = s.candidate(1, 0, 1);
  s.place(0, 1, 1);
  const TaskOutcome busy = s.candidate(1, 0, 1);
  EXPECT_GE(busy.start, idle.start);
  EXPECT_EQ(busy.start, s.outcome(0, 1)->finish);
}

TEST(ScheduleEngine, DifferentTypesRunConcurrently) {
  const NetworkGraph g = make_network(1, {});
  const std::vector<AppDag> apps{make_chain(0, {{ResourceType::Cpu, 10.0}}),
                                 make_chain(0, {{ResourceType::Gpu, 10.0}}),
                                 make_chain(0, {{ResourceType::Cpu, 10.0}})};
  ScheduleState s(g, apps);
  EXPECT_EQ(s.place(0, 0, 0).start, 0.0);
  EXPECT_EQ(s.place(1, 0, 0).start, 0.0);
  EXPECT_EQ(s.place(2, 0, 0).start, 1.0);
}

TEST(ScheduleEngine, BlockingLaneWaitsForQueuedTask) {
  // App 0's second task waits on a slow transfer; app 1's task queued
  // behind it on the same lane must wait too.
  const NetworkGraph g = make_network(2, {{0, 1, 0.1, 0.0}});
  const std::vector<AppDag> apps{make_chain(0, {{ResourceType::Gpu, 10.0}, {}}, 1.0),
                                 make_chain(1, {{}})};
  ScheduleState s(g, apps);
  s.place(0, 0, 0);
  const TaskOutcome& late = s.place(0, 1, 1);
  EXPECT_TRUE(rel_close(late.start, 11.0));
  EXPECT_TRUE(rel_close(s.place(1, 0, 1).start, late.finish));
}

TEST(ScheduleEngine, CandidateAcrossNodesMatchesFreshEvaluation) {
  const NetworkGraph g = testing::random_small_network(5, 3, 0.6);
  const std::vector<AppDag> apps{testing::random_small_app(1, 0, 4),
                                 testing::random_small_app(2, 1, 3)};
  ScheduleState s(g, apps);
  const Assignment prefix{{0, 0, 0}, {1, 0, 1}, {0, 1, 2}};
  for (const Placement& p : prefix) s.place(p.app, p.task, p.node);
  for (NodeId m = 0; m < 3; ++m) {
    Assignment a = prefix;
    a.push_back({1, 1, m});
    ScheduleState fresh(g, apps);
    for (const Placement& p : a) fresh.place(p.app, p.task, p.node);
    EXPECT_EQ(s.candidate(1, 1, m), *fresh.outcome(1, 1));
  }
}

TEST(ScheduleEngine, PlacementErrors) {
  const NetworkGraph g = make_network(2, {{0, 1, 10.0, 1e-5}});
  const std::vector<AppDag> apps{make_chain(0, {{}, {}})};
  ScheduleState s(g, apps);
  EXPECT_EQ(code_of([&] { s.candidate(0, 0, 1); }), ErrorCode::OwnerViolation);
  EXPECT_EQ(code_of([&] { s.place(0, 1, 1); }), ErrorCode::PredecessorUnplaced);
  s.place(0, 0, 0);
  EXPECT_EQ(code_of([&] { s.place(0, 0, 0); }), ErrorCode::InvalidAssignment);
}

TEST(ScheduleEngine, EvaluateChainExample) {
  const NetworkGraph g = make_network(1, {});
  const std::vector<AppDag> apps{make_chain(0, {{}, {}, {}}, 0.2, testing::soft_qos(20.0, 1e-3, 0.6))};
  const Evaluation ev = evaluate({{0, 0, 0}, {0, 1, 0}, {0, 2, 0}}, g, apps, CostParams{});
  EXPECT_EQ(ev.metrics.avg_completion_s, 3.0);
  EXPECT_EQ(ev.metrics.deadline_ratio, 1.0);
  EXPECT_EQ(ev.metrics.accuracy_ratio, 1.0);
  EXPECT_EQ(ev.apps[0].error, 0.0);
  EXPECT_LT(ev.apps[0].latency_cost, 0.5);
  EXPECT_LT(ev.apps[0].accuracy_cost, 0.5);
  EXPECT_LT(ev.metrics.avg_qoe_cost, 0.5);
  EXPECT_TRUE(rel_close(ev.metrics.avg_qoe_cost,
                        0.6 / (1 + std::exp(17.0)) + 0.4 / (1 + std::exp(5.0))));
}

TEST(ScheduleEngine, FinishingExactlyAtDeadlineIsCompliant) {
  const NetworkGraph g = make_network(1, {});
  QosProfile q = testing::soft_qos(2.0, 1e-3);
  q.hard_deadline = true;
  q.hard_accuracy = true;
  const std::vector<AppDag> apps{make_chain(0, {{}, {}}, 0.2, q)};
  const Evaluation ev = evaluate({{0, 0, 0}, {0, 1, 0}}, g, apps, CostParams{});
  EXPECT_EQ(ev.apps[0].completion_s, 2.0);
  EXPECT_EQ(ev.apps[0].latency_cost, 0.5);
  EXPECT_EQ(ev.metrics.deadline_ratio, 1.0);
  EXPECT_EQ(ev.metrics.accuracy_ratio, 1.0);
}

TEST(ScheduleEngine, EvaluateRejectsBadAssignments) {
  const NetworkGraph g = make_network(2, {{0, 1, 10.0, 1e-5}});
  const std::vector<AppDag> apps{make_chain(0, {{}, {}})};
  const std::vector<AppDag> none;
  EXPECT_EQ(code_of([&] { evaluate({}, g, none, CostParams{}); }), ErrorCode::InvalidAssignment);
  EXPECT_EQ(code_of([&] { evaluate({{0, 0, 0}}, g, apps, CostParams{}); }),
            ErrorCode::InvalidAssignment);
  EXPECT_EQ(code_of([&] { evaluate({{0, 1, 0}, {0, 0, 0}}, g, apps, CostParams{}); }),
            ErrorCode::InvalidAssignment);
  EXPECT_EQ(code_of([&] { evaluate({{0, 0, 1}, {0, 1, 0}}, g, apps, CostParams{}); }),
            ErrorCode::InvalidAssignment);
  EXPECT_EQ(code_of([&] { evaluate({{0, 0, 0}, {0, 1, 7}}, g, apps, CostParams{}); }),
            ErrorCode::InvalidAssignment);
  EXPECT_EQ(code_of([&] { evaluate({{0, 0, 0}, {0, 1, 0}, {0, 1, 0}}, g, apps, CostParams{}); }),
            ErrorCode::InvalidAssignment);
}

// Random feasible sequences: invariants hold, re-evaluation is
// bit-identical, and incremental placement matches batch replay.
TEST(ScheduleEngineProperty, RandomSequencesSatisfyInvariants) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const std::size_t nodes = 2 + seed % 5;
    const NetworkGraph g = testing::random_small_network(seed, nodes, 0.4);
    std::vector<AppDag> apps;
    for (std::size_t a = 0; a < 1 + seed % 3; ++a) {
      apps.push_back(testing::random_small_app(derive_seed(seed, {a}),
                                               static_cast<NodeId>(rng.below(nodes)),
                                               1 + rng.below(7), rng.bernoulli(0.5)));
    }
    ScheduleState s(g, apps);
    while (!s.complete()) {
      std::vector<TaskRef> ready;
      for (AppId a = 0; a < apps.size(); ++a) {
        for (std::size_t j = 0; j < apps[a].size(); ++j) {
          const auto t = static_cast<TaskIndex>(j);
          if (s.is_placed(a, t)) continue;
          bool ok = true;
          for (const Dependency& p : apps[a].predecessors(t)) ok = ok && s.is_placed(a, p.task);
          if (ok) ready.push_back({a, t});
        }
      }
      const TaskRef pick = rng.pick(ready);
      const NodeId m = pick.task == 0 ? apps[pick.app].owner()
                                      : static_cast<NodeId>(rng.below(nodes));
      const TaskOutcome c = s.candidate(pick.app, pick.task, m);
      Assignment extended = s.sequence();
      extended.push_back({pick.app, pick.task, m});
      ScheduleState batch(g, apps);
      for (const Placement& p : extended) batch.place(p.app, p.task, p.node);
      EXPECT_EQ(s.place(pick.app, pick.task, m), c);
      EXPECT_EQ(*batch.outcome(pick.app, pick.task), c);
    }
    const auto violations = testing::schedule_violations(s);
    EXPECT_TRUE(violations.empty()) << "seed " << seed << ": " << violations.front();
    const Evaluation a = evaluate(s.sequence(), g, apps, CostParams{});
    const Evaluation b = evaluate(s.sequence(), g, apps, CostParams{});
    EXPECT_EQ(a.metrics, b.metrics);
    EXPECT_EQ(a.metrics, summarize_schedule(s, CostParams{}).metrics);
    EXPECT_GE(a.metrics.deadline_ratio, 0.0);
    EXPECT_LE(a.metrics.deadline_ratio, 1.0);
    EXPECT_GE(a.metrics.accuracy_ratio, 0.0);
    EXPECT_LE(a.metrics.accuracy_ratio, 1.0);
  }
}

TEST(ScheduleEngineProperty, SingleNodeAppsHaveZeroError) {
  const NetworkGraph g = make_network(1, {});
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::vector<AppDag> apps{testing::random_small_app(seed, 0, 8)};
    const ScheduleResult r = run_scheduler(SchedulerKind::Hmtsa, apps, g, SchedulerParams{});
    const ScheduleState s = replay(r.assignment, g, apps);
    for (std::size_t j = 0; j < apps[0].size(); ++j) {
      EXPECT_EQ(s.outcome(0, static_cast<TaskIndex>(j))->error, 0.0);
    }
  }
}

}  // namespace
}  // namespace meshsched
