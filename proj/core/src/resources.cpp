#include "meshsched/resources.hpp"

#include <cmath>

namespace meshsched {

std::string_view to_string(ResourceType t) {
  switch (t) {
    case ResourceType::Cpu: return "cpu";
    case ResourceType::Gpu: return "gpu";
    case ResourceType::Io: return "io";
  }
  return "?";
}

std::optional<ResourceType> parse_resource_type(std::string_view s) {
  for (ResourceType t : kAllResourceTypes) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

bool is_one_hot(const TypeMask& q) {
  int ones = 0;
  for (auto v : q) {
    if (v > 1) return false;
    ones += v;
  }
  return ones == 1;
}

double execution_time(const TypeMask& q, const ResourceVector& requirement,
                      const ResourceVector& capacity) {
  double need = 0.0;
  double have = 0.0;
  for (std::size_t i = 0; i < kResourceTypes; ++i) {
    need += q[i] * requirement[i];
    have += q[i] * capacity[i];
  }
  if (need == 0.0) return 0.0;
  return std::abs(need / have);
}

}  // namespace meshsched
