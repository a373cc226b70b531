#include <gtest/gtest.h>

#include <algorithm>

#include "builders.hpp"
#include "meshsched/app_model.hpp"
#include "meshsched/error.hpp"

namespace meshsched {
namespace {

using testing::make_app;

bool has_violation(const AppDag& dag, ViolationKind kind) {
  const auto v = validate_dag(dag);
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.kind == kind; });
}

TEST(AppModel, DefaultGenerationSizeAndValidity) {
  const AppDag dag = generate_app(AppConfig{}, 3, 0);
  EXPECT_GE(dag.size(), 16u);
  EXPECT_LE(dag.size(), 22u);
  EXPECT_TRUE(validate_dag(dag).empty());
  EXPECT_NO_THROW(topological_order(dag));
}

TEST(AppModel, SingleTaskIsSourceAndSink) {
  AppConfig cfg;
  cfg.task_counts = {1};
  const AppDag dag = generate_app(cfg, 5, 2);
  ASSERT_EQ(dag.size(), 1u);
  EXPECT_EQ(dag.source(), dag.sink());
  EXPECT_TRUE(dag.edges().empty());
  EXPECT_EQ(dag.owner(), 2);
  EXPECT_TRUE(validate_dag(dag).empty());
}

TEST(AppModel, GenerationIsDeterministic) {
  EXPECT_TRUE(generate_app(AppConfig{}, 9, 1) == generate_app(AppConfig{}, 9, 1));
  EXPECT_FALSE(generate_app(AppConfig{}, 9, 1) == generate_app(AppConfig{}, 10, 1));
}

TEST(AppModel, InvalidConfigRejected) {
  AppConfig cfg;
  cfg.task_counts.clear();
  EXPECT_THROW(generate_app(cfg, 1, 0), Error);
  cfg = AppConfig{};
  cfg.workload = {10.0, 5.0};
  EXPECT_THROW(generate_app(cfg, 1, 0), Error);
  cfg = AppConfig{};
  cfg.hard_ratio = 1.5;
  EXPECT_THROW(generate_app(cfg, 1, 0), Error);
}

TEST(AppModel, TopologicalOrderExamples) {
  const AppDag chain = make_app(0, {{}, {}, {}}, {{0, 1, 0.1}, {1, 2, 0.1}});
  EXPECT_EQ(topological_order(chain), (std::vector<TaskIndex>{0, 1, 2}));
  const AppDag diamond =
      make_app(0, {{}, {}, {}, {}}, {{0, 2, 0.1}, {0, 1, 0.1}, {1, 3, 0.1}, {2, 3, 0.1}});
  EXPECT_EQ(topological_order(diamond), (std::vector<TaskIndex>{0, 1, 2, 3}));
  EXPECT_EQ(topological_rank(diamond), (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(AppModel, CycleDetected) {
  const AppDag cyc = make_app(0, {{}, {}, {}}, {{0, 1, 0.1}, {1, 2, 0.1}, {2, 0, 0.1}});
  EXPECT_TRUE(has_violation(cyc, ViolationKind::CycleDetected));
  try {
    topological_order(cyc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CycleDetected);
  }
}

TEST(AppModel, ValidateReportsEachViolation) {
  const AppDag ok = make_app(0, {{}, {}, {}}, {{0, 1, 0.1}, {1, 2, 0.1}});
  EXPECT_TRUE(validate_dag(ok).empty());

  std::vector<TaskSpec> tasks(ok.tasks().begin(), ok.tasks().end());
  tasks[1].type = {1, 1, 0};
  const AppDag two_hot(0, tasks, {ok.edges().begin(), ok.edges().end()}, ok.qos());
  EXPECT_TRUE(has_violation(two_hot, ViolationKind::TypeNotOneHot));

  tasks = {ok.tasks().begin(), ok.tasks().end()};
  tasks[2].requirement = {0, 0, 0};
  const AppDag zero(0, tasks, {ok.edges().begin(), ok.edges().end()}, ok.qos());
  EXPECT_TRUE(has_violation(zero, ViolationKind::NonPositiveRequirement));

  const AppDag two_sinks = make_app(0, {{}, {}, {}}, {{0, 1, 0.1}, {0, 2, 0.1}});
  EXPECT_TRUE(has_violation(two_sinks, ViolationKind::MultipleSinks));

  const AppDag two_sources = make_app(0, {{}, {}, {}}, {{0, 2, 0.1}, {1, 2, 0.1}});
  EXPECT_TRUE(has_violation(two_sources, ViolationKind::MultipleSources));

  const AppDag source_late = make_app(0, {{}, {}, {}}, {{1, 0, 0.1}, {0, 2, 0.1}});
  EXPECT_TRUE(has_violation(source_late, ViolationKind::SourceNotFirst));

  const AppDag self_loop = make_app(0, {{}, {}}, {{0, 1, 0.1}, {1, 1, 0.1}});
  EXPECT_FALSE(validate_dag(self_loop).empty());

  QosProfile bad = ok.qos();
  bad.weights = {0.9, 0.9};
  const AppDag bad_qos = make_app(0, {{}, {}, {}}, {{0, 1, 0.1}, {1, 2, 0.1}}, bad);
  EXPECT_TRUE(has_violation(bad_qos, ViolationKind::BadQos));

  EXPECT_THROW(make_app(0, {{}, {}}, {{0, 5, 0.1}}), Error);
}

TEST(AppModelProperty, GeneratedDagsAreValid) {
  AppConfig cfg;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const AppDag dag = generate_app(cfg, seed, 0);
    ASSERT_TRUE(validate_dag(dag).empty()) << "seed " << seed;
    EXPECT_GE(dag.edges().size() + 1, dag.size());
    const auto order = topological_order(dag);
    const auto rank = topological_rank(dag);
    ASSERT_EQ(order.size(), dag.size());
    for (const DagEdge& e : dag.edges()) {
      EXPECT_LT(rank[static_cast<std::size_t>(e.from)], rank[static_cast<std::size_t>(e.to)]);
    }
    int real = 0;
    for (const TaskSpec& t : dag.tasks()) {
      EXPECT_TRUE(is_one_hot(t.type));
      if (t.is_virtual) {
        EXPECT_EQ(t.requirement, (ResourceVector{0, 0, 0}));
        for (const Dependency& d : dag.successors(t.index)) EXPECT_EQ(d.megabytes, 0.0);
        for (const Dependency& d : dag.predecessors(t.index)) EXPECT_EQ(d.megabytes, 0.0);
        continue;
      }
      ++real;
      const double w = t.requirement[index_of(t.primary_type())];
      EXPECT_GE(w, cfg.workload.lo);
      EXPECT_LT(w, cfg.workload.hi);
    }
    EXPECT_GE(real, 16);
    EXPECT_LE(real, 20);
    const QosProfile& q = dag.qos();
    EXPECT_GE(q.deadline_s, 15.0);
    EXPECT_LT(q.deadline_s, 20.0);
    EXPECT_NE(std::find(cfg.error_limits.begin(), cfg.error_limits.end(), q.error_limit),
              cfg.error_limits.end());
    EXPECT_DOUBLE_EQ(q.weights.latency + q.weights.accuracy, 1.0);
    for (const TaskSpec& t : dag.tasks()) {
      EXPECT_LE(dag.successors(t.index).size(), 5u);
    }
  }
}

TEST(AppModelProperty, HardRatioExtremes) {
  AppConfig cfg;
  cfg.hard_ratio = 1.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const QosProfile q = generate_app(cfg, s, 0).qos();
    EXPECT_TRUE(q.hard_deadline && q.hard_accuracy);
  }
  cfg.hard_ratio = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const QosProfile q = generate_app(cfg, s, 0).qos();
    EXPECT_FALSE(q.hard_deadline || q.hard_accuracy);
  }
}

}  // namespace
}  // namespace meshsched
