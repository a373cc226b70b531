#include <gtest/gtest.h>

#include "brute_force.hpp"
#include "builders.hpp"
#include "meshsched/error.hpp"
#include "meshsched/net_model.hpp"
#include "meshsched/random.hpp"

namespace meshsched {
namespace {

using testing::make_network;

TEST(Network, TransmissionTimeExamples) {
  const NetworkGraph g = make_network(3, {{0, 1, 10.0, 1e-4}, {1, 2, 20.0, 1e-6}});
  EXPECT_EQ(transmission_time(g, g.route(1, 1), 0.5), 0.0);
  EXPECT_DOUBLE_EQ(transmission_time(g, g.route(1, 2), 0.4), 0.02);
  EXPECT_NEAR(transmission_time(g, g.route(0, 2), 0.2), 0.03, 1e-12 * 0.03);
}

TEST(Network, PathBerExamples) {
  const NetworkGraph g = make_network(3, {{0, 1, 10.0, 1e-4}, {1, 2, 20.0, 1e-6}});
  EXPECT_EQ(path_ber(g, g.route(2, 2)), 0.0);
  EXPECT_EQ(path_ber(g, g.route(1, 2)), 1e-6);
  EXPECT_EQ(path_ber(g, g.route(0, 2)), 1e-4);
}

TEST(Network, TriangleRoutePrefersFastTwoHop) {
  // A=0, B=1, C=2
  const NetworkGraph g = make_network(3, {{0, 1, 20.0, 1e-5}, {1, 2, 20.0, 1e-5}, {0, 2, 5.0, 1e-7}});
  EXPECT_EQ(g.route(0, 2).nodes, (std::vector<NodeId>{0, 1, 2}));
  EXPECT_EQ(g.route(2, 0).nodes, (std::vector<NodeId>{2, 1, 0}));
}

TEST(Network, TieBreaksByHopsThenBerThenNodes) {
  // 0-3 direct at rate 5 ties with 0-1-3 / 0-2-3 at rate 10 on 1/rate.
  const NetworkGraph hops =
      make_network(4, {{0, 1, 10.0, 1e-7}, {1, 3, 10.0, 1e-7}, {0, 3, 5.0, 1e-4}, {2, 3, 1.0, 1e-7}});
  EXPECT_EQ(hops.route(0, 3).nodes, (std::vector<NodeId>{0, 3}));

  const NetworkGraph ber = make_network(
      4, {{0, 1, 10.0, 1e-4}, {1, 3, 10.0, 1e-7}, {0, 2, 10.0, 1e-6}, {2, 3, 10.0, 1e-7}});
  EXPECT_EQ(ber.route(0, 3).nodes, (std::vector<NodeId>{0, 2, 3}));

  const NetworkGraph lex = make_network(
      4, {{0, 2, 10.0, 1e-6}, {2, 3, 10.0, 1e-6}, {0, 1, 10.0, 1e-6}, {1, 3, 10.0, 1e-6}});
  EXPECT_EQ(lex.route(0, 3).nodes, (std::vector<NodeId>{0, 1, 3}));
}

TEST(Network, RandomNetworkDefaultsAreConnected) {
  NetworkConfig cfg;
  const NetworkGraph g = build_random_network(cfg, 7);
  EXPECT_EQ(g.size(), 40u);
  EXPECT_TRUE(is_connected(g.size(), g.links()));
  for (const Link& l : g.links()) {
    EXPECT_GE(l.rate, 1.0);
    EXPECT_LT(l.rate, 20.0);
    const double d = std::hypot(g.node(l.a).x - g.node(l.b).x, g.node(l.a).y - g.node(l.b).y);
    EXPECT_LE(d, cfg.comm_range_m);
  }
  for (const ComputeNode& n : g.nodes()) {
    for (double c : n.capacity) {
      EXPECT_GE(c, 5.0);
      EXPECT_LT(c, 10.0);
    }
  }
}

TEST(Network, TwoNodesInRangeGiveOneLink) {
  NetworkConfig cfg;
  cfg.node_count = 2;
  cfg.comm_range_m = 1500.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const NetworkGraph g = build_random_network(cfg, seed);
    ASSERT_EQ(g.links().size(), 1u);
    EXPECT_EQ(g.route(0, 1).hop_count(), 1u);
  }
}

TEST(Network, SameSeedSameGraph) {
  NetworkConfig cfg;
  EXPECT_TRUE(build_random_network(cfg, 11) == build_random_network(cfg, 11));
  EXPECT_FALSE(build_random_network(cfg, 11) == build_random_network(cfg, 12));
}

TEST(Network, ConnectivityFailureAfterRetries) {
  NetworkConfig cfg;
  cfg.comm_range_m = 1.0;
  cfg.max_attempts = 3;
  try {
    build_random_network(cfg, 1);
    FAIL() << "expected ConnectivityFailure";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConnectivityFailure);
  }
}

TEST(Network, InvalidConfigRejected) {
  NetworkConfig cfg;
  cfg.ber_set.clear();
  EXPECT_THROW(build_random_network(cfg, 1), Error);
  cfg = NetworkConfig{};
  cfg.rate_range = {0.0, 1.0};
  EXPECT_THROW(build_random_network(cfg, 1), Error);
  cfg = NetworkConfig{};
  cfg.node_count = 1;
  EXPECT_THROW(build_random_network(cfg, 1), Error);
}

TEST(Network, DisconnectedGraphRejected) {
  try {
    make_network(3, {{0, 1, 1.0, 0.0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConnectivityFailure);
  }
}

TEST(Network, AveragesAreArithmeticMeans) {
  const NetworkGraph g = testing::make_network({{4, 6, 8}, {6, 8, 10}},
                                               {{0, 1, 10.0, 1e-4}});
  EXPECT_EQ(g.averages().rate, 10.0);
  EXPECT_EQ(g.averages().ber, 1e-4);
  EXPECT_EQ(g.averages().capacity, (ResourceVector{5, 7, 9}));
}

// Routes match exhaustive simple-path enumeration, including graphs with
// many exact ties (integer rates, shared BER values).
TEST(NetworkProperty, RoutesMatchBruteForce) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const std::size_t n = 3 + seed % 6;
    const NetworkGraph g = testing::random_small_network(seed, n, 0.5);
    for (NodeId a = 0; a < static_cast<NodeId>(n); ++a) {
      for (NodeId b = 0; b < static_cast<NodeId>(n); ++b) {
        if (a == b) {
          EXPECT_TRUE(g.route(a, b).empty());
          continue;
        }
        const auto lo = std::min(a, b);
        const auto hi = std::max(a, b);
        auto expect = testing::brute_force_route(g, lo, hi);
        if (a > b) std::reverse(expect.begin(), expect.end());
        ASSERT_EQ(g.route(a, b).nodes, expect) << "seed " << seed << " " << a << "->" << b;
      }
    }
  }
}

TEST(NetworkProperty, SymmetryLinearityAndBerBound) {
  NetworkConfig cfg;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const NetworkGraph g = build_random_network(cfg, seed);
    const double max_ber = *std::max_element(cfg.ber_set.begin(), cfg.ber_set.end());
    for (NodeId a = 0; a < 40; ++a) {
      for (NodeId b = 0; b < 40; ++b) {
        const Route& r = g.route(a, b);
        const Route& back = g.route(b, a);
        EXPECT_EQ(transmission_time(g, r, 0.3), transmission_time(g, back, 0.3));
        EXPECT_EQ(path_ber(g, r), path_ber(g, back));
        EXPECT_DOUBLE_EQ(transmission_time(g, r, 0.6), 2.0 * transmission_time(g, r, 0.3));
        double worst = 0.0;
        for (std::size_t li : r.links) worst = std::max(worst, g.link(li).ber);
        EXPECT_EQ(path_ber(g, r), worst);
        EXPECT_LE(path_ber(g, r), max_ber);
        if (!r.empty()) {
          EXPECT_EQ(r.nodes.front(), a);
          EXPECT_EQ(r.nodes.back(), b);
          for (std::size_t h = 0; h < r.links.size(); ++h) {
            const Link& l = g.link(r.links[h]);
            EXPECT_TRUE((l.a == r.nodes[h] && l.b == r.nodes[h + 1]) ||
                        (l.b == r.nodes[h] && l.a == r.nodes[h + 1]));
          }
        }
      }
    }
  }
}

}  // namespace
}  // namespace meshsched
