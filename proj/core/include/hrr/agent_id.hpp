#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace hrr {

enum class AgentId : int { R1A, R1B, R1C, R1D, R2A, R2B, R2C, R2D, R3A, R3B, R3C, R3D };

inline constexpr int kAgentCount = 12;

inline constexpr std::array<AgentId, kAgentCount> kAllAgents{
    AgentId::R1A, AgentId::R1B, AgentId::R1C, AgentId::R1D, AgentId::R2A, AgentId::R2B,
    AgentId::R2C, AgentId::R2D, AgentId::R3A, AgentId::R3B, AgentId::R3C, AgentId::R3D};

constexpr int index_of(AgentId id) { return static_cast<int>(id); }

std::string_view to_string(AgentId id);
std::optional<AgentId> agent_from_string(std::string_view name);

constexpr bool is_emission(AgentId id) { return index_of(id) <= index_of(AgentId::R1D); }

}  // namespace hrr
