#include "meshsched/serialization.hpp"

#include <string>

#include "meshsched/error.hpp"

namespace meshsched {

using nlohmann::json;

namespace {

// Wraps nlohmann's exceptions so callers only see meshsched::Error.
template <class F>
auto parsing(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string(what) + ": " + e.what());
  }
}

}  // namespace

json topology_to_json(const NetworkGraph& g) {
  json nodes = json::array();
  for (const ComputeNode& n : g.nodes()) {
    nodes.push_back({{"id", n.id},
                     {"x", n.x},
                     {"y", n.y},
                     {"f_cpu", n.capacity[0]},
                     {"f_gpu", n.capacity[1]},
                     {"io", n.capacity[2]},
                     {"is_app_node", n.is_app_node}});
  }
  json links = json::array();
  for (const Link& l : g.links()) {
    links.push_back({{"a", l.a}, {"b", l.b}, {"rate_mbps", l.rate}, {"ber", l.ber}});
  }
  return {{"nodes", std::move(nodes)}, {"links", std::move(links)}};
}

NetworkGraph topology_from_json(const json& j) {
  return parsing("topology", [&] {
    std::vector<ComputeNode> nodes;
    for (const json& n : j.at("nodes")) {
      ComputeNode c;
      c.id = n.at("id").get<NodeId>();
      c.x = n.at("x").get<double>();
      c.y = n.at("y").get<double>();
      c.capacity = {n.at("f_cpu").get<double>(), n.at("f_gpu").get<double>(),
                    n.at("io").get<double>()};
      c.is_app_node = n.value("is_app_node", false);
      nodes.push_back(c);
    }
    std::vector<Link> links;
    for (const json& l : j.at("links")) {
      links.push_back({l.at("a").get<NodeId>(), l.at("b").get<NodeId>(),
                       l.at("rate_mbps").get<double>(), l.at("ber").get<double>()});
    }
    return NetworkGraph(std::move(nodes), std::move(links));
  });
}

json app_to_json(const AppDag& app) {
  const QosProfile& q = app.qos();
  json tasks = json::array();
  for (const TaskSpec& t : app.tasks()) {
    json entry = {{"j", t.index},
                  {"type", std::string(to_string(t.primary_type()))},
                  {"req", {t.requirement[0], t.requirement[1], t.requirement[2]}}};
    if (t.is_virtual) entry["virtual"] = true;
    tasks.push_back(std::move(entry));
  }
  json edges = json::array();
  for (const DagEdge& e : app.edges()) {
    edges.push_back({{"from", e.from}, {"to", e.to}, {"mb", e.megabytes}});
  }
  return {{"owner", app.owner()},
          {"qos",
           {{"d", q.deadline_s},
            {"e", q.error_limit},
            {"wd", q.weights.latency},
            {"we", q.weights.accuracy},
            {"hd", q.hard_deadline ? 1 : 0},
            {"he", q.hard_accuracy ? 1 : 0}}},
          {"tasks", std::move(tasks)},
          {"edges", std::move(edges)}};
}

AppDag app_from_json(const json& j) {
  return parsing("app", [&] {
    const json& qj = j.at("qos");
    QosProfile q;
    q.deadline_s = qj.at("d").get<double>();
    q.error_limit = qj.at("e").get<double>();
    q.weights.latency = qj.at("wd").get<double>();
    q.weights.accuracy = qj.at("we").get<double>();
    q.hard_deadline = qj.at("hd").get<int>() != 0;
    q.hard_accuracy = qj.at("he").get<int>() != 0;

    std::vector<TaskSpec> tasks;
    for (const json& tj : j.at("tasks")) {
      TaskSpec t;
      t.index = tj.at("j").get<TaskIndex>();
      const auto name = tj.at("type").get<std::string>();
      const auto type = parse_resource_type(name);
      if (!type) throw Error(ErrorCode::Parse, "unknown task type '" + name + "'");
      t.type = mask_of(*type);
      const auto req = tj.at("req").get<std::vector<double>>();
      if (req.size() != kResourceTypes) throw Error(ErrorCode::Parse, "req must have 3 entries");
      t.requirement = {req[0], req[1], req[2]};
      t.is_virtual = tj.value("virtual", false);
      if (static_cast<std::size_t>(t.index) != tasks.size()) {
        throw Error(ErrorCode::Parse, "task indices must be 0..J in order");
      }
      tasks.push_back(t);
    }
    std::vector<DagEdge> edges;
    for (const json& ej : j.at("edges")) {
      edges.push_back({ej.at("from").get<TaskIndex>(), ej.at("to").get<TaskIndex>(),
                       ej.at("mb").get<double>()});
    }
    return AppDag(j.at("owner").get<NodeId>(), std::move(tasks), std::move(edges), q);
  });
}

json apps_to_json(std::span<const AppDag> apps) {
  json out = json::array();
  for (const AppDag& a : apps) out.push_back(app_to_json(a));
  return out;
}

std::vector<AppDag> apps_from_json(const json& j) {
  std::vector<AppDag> out;
  for (const json& a : j) out.push_back(app_from_json(a));
  return out;
}

json instance_to_json(const Instance& inst) {
  return {{"topology", topology_to_json(inst.network)}, {"apps", apps_to_json(inst.apps)}};
}

Instance instance_from_json(const json& j) {
  return parsing("instance", [&] {
    return Instance{topology_from_json(j.at("topology")), apps_from_json(j.at("apps"))};
  });
}

json assignment_to_json(const Assignment& a) {
  json out = json::array();
  for (const Placement& p : a) out.push_back({{"app", p.app}, {"task", p.task}, {"node", p.node}});
  return out;
}

Assignment assignment_from_json(const json& j) {
  return parsing("assignment", [&] {
    Assignment out;
    for (const json& p : j) {
      out.push_back({p.at("app").get<AppId>(), p.at("task").get<TaskIndex>(),
                     p.at("node").get<NodeId>()});
    }
    return out;
  });
}

json metrics_to_json(const MetricsRecord& m) {
  return {{"avg_completion_s", m.avg_completion_s},
          {"deadline_ratio", m.deadline_ratio},
          {"accuracy_ratio", m.accuracy_ratio},
          {"avg_latency_cost", m.avg_latency_cost},
          {"avg_accuracy_cost", m.avg_accuracy_cost},
          {"avg_qoe_cost", m.avg_qoe_cost}};
}

MetricsRecord metrics_from_json(const json& j) {
  return parsing("metrics", [&] {
    return MetricsRecord{j.at("avg_completion_s").get<double>(),
                         j.at("deadline_ratio").get<double>(),
                         j.at("accuracy_ratio").get<double>(),
                         j.at("avg_latency_cost").get<double>(),
                         j.at("avg_accuracy_cost").get<double>(),
                         j.at("avg_qoe_cost").get<double>()};
  });
}

json cost_params_to_json(const CostParams& p) {
  return {{"beta_d_s", p.beta_d_s},
          {"beta_e_rel", p.beta_e_rel},
          {"penalty_d", p.penalty_d},
          {"penalty_e", p.penalty_e}};
}

CostParams cost_params_from_json(const json& j) {
  return parsing("cost", [&] {
    CostParams p;
    p.beta_d_s = j.value("beta_d_s", p.beta_d_s);
    p.beta_e_rel = j.value("beta_e_rel", p.beta_e_rel);
    p.penalty_d = j.value("penalty_d", p.penalty_d);
    p.penalty_e = j.value("penalty_e", p.penalty_e);
    return p;
  });
}

}  // namespace meshsched
