#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "meshsched/resources.hpp"

namespace meshsched {

using NodeId = std::int32_t;

struct ComputeNode {
  NodeId id = 0;
  double x = 0.0;  // meters
  double y = 0.0;  // meters
  ResourceVector capacity{};
  bool is_app_node = false;

  friend bool operator==(const ComputeNode&, const ComputeNode&) = default;
};

struct Link {
  NodeId a = 0;
  NodeId b = 0;
  double rate = 0.0;  // MB/s
  double ber = 0.0;

  NodeId other(NodeId n) const { return n == a ? b : a; }

  friend bool operator==(const Link&, const Link&) = default;
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct NetworkConfig {
  int node_count = 40;
  double area_m = 1000.0;  // side of the square deployment area
  double comm_range_m = 500.0;
  Range cpu_range{5.0, 10.0};
  Range gpu_range{5.0, 10.0};
  Range io_range{5.0, 10.0};
  Range rate_range{1.0, 20.0};
  std::vector<double> ber_set{1e-4, 1e-5, 1e-6, 1e-7};
  int max_attempts = 100;
};

// Fixed multi-hop path. `nodes` holds the visited nodes (source first),
// `links` the indices into NetworkGraph::links() in travel order.
struct Route {
  std::vector<NodeId> nodes;
  std::vector<std::size_t> links;
  double ber = 0.0;  // max over hops, 0 when empty

  bool empty() const { return links.empty(); }
  std::size_t hop_count() const { return links.size(); }
};

struct NetworkAverages {
  double rate = 0.0;  // c-bar, MB/s
  ResourceVector capacity{};
  double ber = 0.0;  // e-bar
};

// Immutable mesh topology with a complete static route table.
class NetworkGraph {
 public:
  // Builds adjacency, checks connectivity, computes routes and averages.
  // Throws Error{ConnectivityFailure} when the graph is disconnected.
  NetworkGraph(std::vector<ComputeNode> nodes, std::vector<Link> links);

  std::size_t size() const { return nodes_.size(); }
  std::span<const ComputeNode> nodes() const { return nodes_; }
  const ComputeNode& node(NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
  std::span<const Link> links() const { return links_; }
  const Link& link(std::size_t idx) const { return links_[idx]; }

  // (neighbor, link index) pairs, sorted by neighbor id.
  std::span<const std::pair<NodeId, std::size_t>> neighbors(NodeId id) const {
    return adjacency_[static_cast<std::size_t>(id)];
  }

  const Route& route(NodeId from, NodeId to) const {
    return routes_[static_cast<std::size_t>(from) * nodes_.size() + static_cast<std::size_t>(to)];
  }

  const NetworkAverages& averages() const { return averages_; }

  std::vector<NodeId> app_nodes() const;
  void set_app_nodes(std::span<const NodeId> ids);

  friend bool operator==(const NetworkGraph& l, const NetworkGraph& r) {
    return l.nodes_ == r.nodes_ && l.links_ == r.links_;
  }

 private:
  std::vector<ComputeNode> nodes_;
  std::vector<Link> links_;
  std::vector<std::vector<std::pair<NodeId, std::size_t>>> adjacency_;
  std::vector<Route> routes_;
  NetworkAverages averages_;
};

NetworkGraph build_random_network(const NetworkConfig& cfg, std::uint64_t seed);

bool is_connected(std::size_t node_count, std::span<const Link> links);

// Route table (row-major, from * N + to). Each route minimizes the sum of
// 1/rate over its hops; ties go to fewer hops, then lower path BER, then the
// lexicographically smaller node sequence. route(m', m) is the reverse of
// route(m, m') for m < m'.
std::vector<Route> compute_routes(std::size_t node_count, std::span<const Link> links);

// Sum over hops of bytes / rate; zero for an empty route. Hops are summed
// in a direction-independent order so both directions agree exactly.
double transmission_time(const NetworkGraph& graph, const Route& route, double megabytes);

double path_ber(const NetworkGraph& graph, const Route& route);

}  // namespace meshsched
