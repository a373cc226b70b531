#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace meshsched {

enum class ResourceType : std::uint8_t { Cpu = 0, Gpu = 1, Io = 2 };

inline constexpr std::size_t kResourceTypes = 3;
inline constexpr std::array<ResourceType, kResourceTypes> kAllResourceTypes = {
    ResourceType::Cpu, ResourceType::Gpu, ResourceType::Io};

constexpr std::size_t index_of(ResourceType t) { return static_cast<std::size_t>(t); }

std::string_view to_string(ResourceType t);
std::optional<ResourceType> parse_resource_type(std::string_view s);

// (cpu Gcycles/s, gpu Gcycles/s, io MB/s) for nodes; (cpu Gcycles, gpu Gcycles,
// io MB) for task requirements.
using ResourceVector = std::array<double, kResourceTypes>;

// One-hot task type indicator q.
using TypeMask = std::array<std::uint8_t, kResourceTypes>;

constexpr TypeMask mask_of(ResourceType t) {
  TypeMask m{0, 0, 0};
  m[index_of(t)] = 1;
  return m;
}

bool is_one_hot(const TypeMask& q);

// |q.r / q.F|: execution seconds of a requirement r on capacity F.
double execution_time(const TypeMask& q, const ResourceVector& requirement,
                      const ResourceVector& capacity);

}  // namespace meshsched
