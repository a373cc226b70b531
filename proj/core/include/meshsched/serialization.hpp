#pragma once

#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "meshsched/app_model.hpp"
#include "meshsched/net_model.hpp"
#include "meshsched/qoe_model.hpp"
#include "meshsched/schedule_engine.hpp"

namespace meshsched {

// A network plus the applications issued by its app nodes.
struct Instance {
  NetworkGraph network;
  std::vector<AppDag> apps;
};

// Topology: {nodes:[{id,x,y,f_cpu,f_gpu,io,is_app_node}], links:[{a,b,rate_mbps,ber}]}.
// Routes are recomputed on load.
nlohmann::json topology_to_json(const NetworkGraph& g);
NetworkGraph topology_from_json(const nlohmann::json& j);

// {owner, qos:{d,e,wd,we,hd,he}, tasks:[{j,type,req,virtual}], edges:[{from,to,mb}]}
nlohmann::json app_to_json(const AppDag& app);
AppDag app_from_json(const nlohmann::json& j);

nlohmann::json apps_to_json(std::span<const AppDag> apps);
std::vector<AppDag> apps_from_json(const nlohmann::json& j);

// {topology, apps}
nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);

// [{app, task, node}, ...]
nlohmann::json assignment_to_json(const Assignment& a);
Assignment assignment_from_json(const nlohmann::json& j);

nlohmann::json metrics_to_json(const MetricsRecord& m);
MetricsRecord metrics_from_json(const nlohmann::json& j);

// {beta_d_s, beta_e_rel, penalty_d, penalty_e}; missing keys keep defaults.
nlohmann::json cost_params_to_json(const CostParams& p);
CostParams cost_params_from_json(const nlohmann::json& j);

}  // namespace meshsched
