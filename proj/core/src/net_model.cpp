#include "meshsched/net_model.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>
#include <string>

#include "meshsched/error.hpp"
#include "meshsched/random.hpp"

namespace meshsched {
namespace {

struct Label {
  double time = 0.0;  // sum of 1/rate, accumulated source-first
  std::size_t hops = 0;
  double ber = 0.0;
  std::vector<NodeId> nodes;
  std::vector<std::size_t> links;
};

bool better(const Label& l, const Label& r) {
  if (l.time != r.time) return l.time < r.time;
  if (l.hops != r.hops) return l.hops < r.hops;
  if (l.ber != r.ber) return l.ber < r.ber;
  return l.nodes < r.nodes;
}

std::vector<std::vector<std::pair<NodeId, std::size_t>>> build_adjacency(
    std::size_t node_count, std::span<const Link> links) {
  std::vector<std::vector<std::pair<NodeId, std::size_t>>> adj(node_count);
  for (std::size_t i = 0; i < links.size(); ++i) {
    const Link& l = links[i];
    if (l.a < 0 || l.b < 0 || static_cast<std::size_t>(l.a) >= node_count ||
        static_cast<std::size_t>(l.b) >= node_count || l.a == l.b) {
      throw Error(ErrorCode::InvalidConfig,
                  "link " + std::to_string(i) + " has invalid endpoints");
    }
    if (!(l.rate > 0.0) || l.ber < 0.0 || l.ber >= 1.0) {
      throw Error(ErrorCode::InvalidConfig,
                  "link " + std::to_string(i) + " needs rate > 0 and ber in [0,1)");
    }
    adj[static_cast<std::size_t>(l.a)].emplace_back(l.b, i);
    adj[static_cast<std::size_t>(l.b)].emplace_back(l.a, i);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

// (time, hops, ber) do not all compose monotonically with the node-sequence
// tie-break, so one label per node is not enough: every node keeps the
// labels not dominated on (time, hops, ber). A dominated label can never
// extend into a better route. Labels leave the queue in `better` order, so
// the first one settled at a node is its route.
bool dominates(const Label& l, const Label& r) {
  return l.time <= r.time && l.hops <= r.hops && l.ber <= r.ber;
}

std::vector<std::optional<Label>> routes_from(
    NodeId source, std::span<const Link> links,
    const std::vector<std::vector<std::pair<NodeId, std::size_t>>>& adj) {
  const std::size_t n = adj.size();
  std::vector<std::optional<Label>> best(n);
  std::vector<std::vector<Label>> settled(n);
  auto worse = [](const Label& l, const Label& r) { return better(r, l); };
  std::priority_queue<Label, std::vector<Label>, decltype(worse)> queue(worse);
  queue.push(Label{0.0, 0, 0.0, {source}, {}});

  auto dominated = [&](const Label& cand, std::size_t v) {
    return std::any_of(settled[v].begin(), settled[v].end(),
                       [&](const Label& s) { return dominates(s, cand); });
  };

  while (!queue.empty()) {
    Label cur = queue.top();
    queue.pop();
    const auto v = static_cast<std::size_t>(cur.nodes.back());
    if (dominated(cur, v)) continue;
    if (!best[v]) best[v] = cur;
    for (auto [next, li] : adj[v]) {
      const auto nv = static_cast<std::size_t>(next);
      if (std::find(cur.nodes.begin(), cur.nodes.end(), next) != cur.nodes.end()) continue;
      Label cand = cur;
      cand.time += 1.0 / links[li].rate;
      cand.hops += 1;
      cand.ber = std::max(cand.ber, links[li].ber);
      cand.nodes.push_back(next);
      cand.links.push_back(li);
      if (!dominated(cand, nv)) queue.push(std::move(cand));
    }
    settled[v].push_back(std::move(cur));
  }
  return best;
}

}  // namespace

bool is_connected(std::size_t node_count, std::span<const Link> links) {
  if (node_count == 0) return false;
  std::vector<std::vector<std::size_t>> adj(node_count);
  for (const Link& l : links) {
    adj[static_cast<std::size_t>(l.a)].push_back(static_cast<std::size_t>(l.b));
    adj[static_cast<std::size_t>(l.b)].push_back(static_cast<std::size_t>(l.a));
  }
  std::vector<bool> seen(node_count, false);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t count = 1;
  while (!frontier.empty()) {
    std::size_t v = frontier.front();
    frontier.pop();
    for (std::size_t w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        frontier.push(w);
      }
    }
  }
  return count == node_count;
}

std::vector<Route> compute_routes(std::size_t node_count, std::span<const Link> links) {
  const auto adj = build_adjacency(node_count, links);
  std::vector<Route> table(node_count * node_count);
  for (std::size_t s = 0; s < node_count; ++s) {
    table[s * node_count + s].nodes = {static_cast<NodeId>(s)};
    if (s + 1 == node_count) break;
    auto labels = routes_from(static_cast<NodeId>(s), links, adj);
    for (std::size_t t = s + 1; t < node_count; ++t) {
      if (!labels[t]) {
        throw Error(ErrorCode::Unreachable,
                    "no route from " + std::to_string(s) + " to " + std::to_string(t));
      }
      Route fwd{std::move(labels[t]->nodes), std::move(labels[t]->links), labels[t]->ber};
      Route back{{fwd.nodes.rbegin(), fwd.nodes.rend()},
                 {fwd.links.rbegin(), fwd.links.rend()},
                 fwd.ber};
      table[s * node_count + t] = std::move(fwd);
      table[t * node_count + s] = std::move(back);
    }
  }
  return table;
}

NetworkGraph::NetworkGraph(std::vector<ComputeNode> nodes, std::vector<Link> links)
    : nodes_(std::move(nodes)), links_(std::move(links)) {
  if (nodes_.empty()) throw Error(ErrorCode::InvalidConfig, "network has no nodes");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].id != static_cast<NodeId>(i)) {
      throw Error(ErrorCode::InvalidConfig, "node ids must be 0..N-1 in order");
    }
    for (double c : nodes_[i].capacity) {
      if (!(c > 0.0)) throw Error(ErrorCode::InvalidConfig, "node capacity must be > 0");
    }
  }
  adjacency_ = build_adjacency(nodes_.size(), links_);
  if (!is_connected(nodes_.size(), links_)) {
    throw Error(ErrorCode::ConnectivityFailure, "network graph is not connected");
  }
  routes_ = compute_routes(nodes_.size(), links_);

  for (const ComputeNode& n : nodes_) {
    for (std::size_t k = 0; k < kResourceTypes; ++k) averages_.capacity[k] += n.capacity[k];
  }
  for (double& c : averages_.capacity) c /= static_cast<double>(nodes_.size());
  if (!links_.empty()) {
    for (const Link& l : links_) {
      averages_.rate += l.rate;
      averages_.ber += l.ber;
    }
    averages_.rate /= static_cast<double>(links_.size());
    averages_.ber /= static_cast<double>(links_.size());
  }
}

std::vector<NodeId> NetworkGraph::app_nodes() const {
  std::vector<NodeId> out;
  for (const ComputeNode& n : nodes_) {
    if (n.is_app_node) out.push_back(n.id);
  }
  return out;
}

void NetworkGraph::set_app_nodes(std::span<const NodeId> ids) {
  for (ComputeNode& n : nodes_) n.is_app_node = false;
  for (NodeId id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size()) {
      throw Error(ErrorCode::InvalidConfig, "app node id out of range");
    }
    nodes_[static_cast<std::size_t>(id)].is_app_node = true;
  }
}

NetworkGraph build_random_network(const NetworkConfig& cfg, std::uint64_t seed) {
  auto bad_range = [](const Range& r) { return !(r.lo > 0.0) || r.hi < r.lo; };
  if (cfg.node_count < 2) throw Error(ErrorCode::InvalidConfig, "node_count must be >= 2");
  if (!(cfg.area_m > 0.0) || !(cfg.comm_range_m > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "area and comm range must be positive");
  }
  if (bad_range(cfg.cpu_range) || bad_range(cfg.gpu_range) || bad_range(cfg.io_range) ||
      bad_range(cfg.rate_range)) {
    throw Error(ErrorCode::InvalidConfig, "capacity and rate ranges must be positive");
  }
  if (cfg.ber_set.empty()) throw Error(ErrorCode::InvalidConfig, "ber_set is empty");
  for (double b : cfg.ber_set) {
    if (b < 0.0 || b >= 1.0) throw Error(ErrorCode::InvalidConfig, "ber outside [0,1)");
  }
  if (cfg.max_attempts < 1) throw Error(ErrorCode::InvalidConfig, "max_attempts must be >= 1");

  const auto n = static_cast<std::size_t>(cfg.node_count);
  for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(attempt)}));
    std::vector<ComputeNode> nodes(n);
    for (std::size_t i = 0; i < n; ++i) {
      nodes[i].id = static_cast<NodeId>(i);
      nodes[i].x = rng.uniform(0.0, cfg.area_m);
      nodes[i].y = rng.uniform(0.0, cfg.area_m);
    }
    for (auto& node : nodes) {
      node.capacity = {rng.uniform(cfg.cpu_range.lo, cfg.cpu_range.hi),
                       rng.uniform(cfg.gpu_range.lo, cfg.gpu_range.hi),
                       rng.uniform(cfg.io_range.lo, cfg.io_range.hi)};
    }
    std::vector<Link> links;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dist = std::hypot(nodes[i].x - nodes[j].x, nodes[i].y - nodes[j].y);
        if (dist > cfg.comm_range_m) continue;
        const double rate = rng.uniform(cfg.rate_range.lo, cfg.rate_range.hi);
        const double ber = rng.pick(cfg.ber_set);
        links.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j), rate, ber});
      }
    }
    if (is_connected(n, links)) return NetworkGraph(std::move(nodes), std::move(links));
  }
  throw Error(ErrorCode::ConnectivityFailure,
              "no connected placement after " + std::to_string(cfg.max_attempts) + " attempts");
}

double transmission_time(const NetworkGraph& graph, const Route& route, double megabytes) {
  if (route.empty()) return 0.0;
  double total = 0.0;
  auto add = [&](std::size_t li) { total += megabytes / graph.link(li).rate; };
  if (route.nodes.front() <= route.nodes.back()) {
    std::for_each(route.links.begin(), route.links.end(), add);
  } else {
    std::for_each(route.links.rbegin(), route.links.rend(), add);
  }
  return total;
}

double path_ber(const NetworkGraph& graph, const Route& route) {
  double worst = 0.0;
  for (std::size_t li : route.links) worst = std::max(worst, graph.link(li).ber);
  return worst;
}

}  // namespace meshsched
